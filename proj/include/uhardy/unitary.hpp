#pragma once

// Dense complex unitary matrices, exact Haar sampling on U(m), the Livsic
// projection u = [[z,a],[b,t]] -> z - a(1+t)^{-1}b between neighboring levels,
// identity-padding embeddings, the two-sided group action, and the
// first-column coordinate monomials that generate the boundary basis.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "uhardy/common.hpp"
#include "uhardy/partitions.hpp"

namespace uhardy {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}
}  // namespace detail

// (seed, stream) identifies a reproducible draw sequence; derived substreams
// are treated as statistically independent.
struct RandomStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  RandomStream substream(std::uint64_t tag) const {
    return {seed, detail::splitmix64(stream ^ detail::splitmix64(tag))};
  }
};

// Deterministic Gaussian/uniform source. Box-Muller is spelled out (rather
// than std::normal_distribution) so the draw sequence is pinned by the
// standardized mt19937_64 stream, not by a library's distribution internals.
class GaussianSource {
 public:
  explicit GaussianSource(RandomStream rs) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(rs.seed), static_cast<std::uint32_t>(rs.seed >> 32),
        static_cast<std::uint32_t>(rs.stream), static_cast<std::uint32_t>(rs.stream >> 32)};
    eng_.seed(seq);
  }

  double uniform01() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  double uniform_open01() {  // (0, 1]
    return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
  }
  // standard complex normal: E z = 0, E|z|^2 = 1
  cplx complex_normal() {
    const double r = std::sqrt(-std::log(uniform_open01()));
    const double a = 2.0 * std::numbers::pi * uniform01();
    return {r * std::cos(a), r * std::sin(a)};
  }

 private:
  std::mt19937_64 eng_;
};

class UnitaryMatrix {
 public:
  // Factory outputs (sampler, projections, products of unitaries) are unitary
  // by construction and pass `trust`; external inputs get the defect check.
  enum class Check { enforce, trust };

  explicit UnitaryMatrix(Eigen::MatrixXcd entries, Check check = Check::enforce)
      : m_(std::move(entries)) {
    if (m_.rows() < 1 || m_.rows() != m_.cols())
      throw std::invalid_argument("UnitaryMatrix: square matrix of dimension >= 1 required");
    if (check == Check::enforce && unitarity_defect() > 1e-10)
      throw std::invalid_argument("UnitaryMatrix: input fails the unitarity check");
  }

  static UnitaryMatrix identity(int m) {
    return UnitaryMatrix(Eigen::MatrixXcd::Identity(m, m), Check::trust);
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& entries() const { return m_; }

  double unitarity_defect() const {  // max |(U*U - I)_ij|
    Eigen::MatrixXcd d = m_.adjoint() * m_;
    d -= Eigen::MatrixXcd::Identity(m_.rows(), m_.cols());
    return d.cwiseAbs().maxCoeff();
  }

 private:
  Eigen::MatrixXcd m_;
};

// A projective-limit element modeled by its stabilized sequence: projections
// below `level`, the stored matrix at `level`, identity padding above.
class GroupElement {
 public:
  explicit GroupElement(UnitaryMatrix u) : mat_(std::move(u)) {}

  int level() const { return mat_.dim(); }
  const UnitaryMatrix& matrix() const { return mat_; }
  const Eigen::MatrixXcd& entries() const { return mat_.entries(); }

 private:
  UnitaryMatrix mat_;
};

// Streaming Haar sampler: complex Ginibre -> Householder QR -> right-multiply
// Q by diag(r_kk/|r_kk|). The phase fix selects the unique factorization with
// positive-real R diagonal, which makes the law exactly Haar; plain QR is not.
class HaarSampler {
 public:
  HaarSampler(int m, RandomStream rs) : m_(m), src_(rs), g_(m, m), q_(m, m), qr_(m, m) {
    if (m < 1 || m > 256) throw capacity_error("HaarSampler: m outside 1..256");
  }

  const Eigen::MatrixXcd& next() {
    for (int j = 0; j < m_; ++j)
      for (int i = 0; i < m_; ++i) g_(i, j) = src_.complex_normal();
    qr_.compute(g_);
    q_ = qr_.householderQ();
    const auto& r = qr_.matrixQR();
    for (int k = 0; k < m_; ++k) {
      const double a = std::abs(r(k, k));
      q_.col(k) *= (a == 0.0) ? cplx(1.0) : r(k, k) / a;
    }
    return q_;
  }

 private:
  int m_;
  GaussianSource src_;
  Eigen::MatrixXcd g_, q_;
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr_;
};

inline UnitaryMatrix haar_sample(int m, RandomStream rng) {
  HaarSampler s(m, rng);
  return UnitaryMatrix(s.next(), UnitaryMatrix::Check::trust);
}

// One level down: u = [[z,a],[b,t]] -> z - a(1+t)^{-1}b, with the t = -1
// branch returning z. The output is unitary wherever |1+t| is not tiny; the
// branch set has Haar measure zero.
inline UnitaryMatrix livsic_project(const UnitaryMatrix& u) {
  const int m = u.dim();
  if (m < 2) throw std::domain_error("livsic_project: no predecessor of U(1)");
  const auto& e = u.entries();
  const cplx t = e(m - 1, m - 1);
  Eigen::MatrixXcd z = e.topLeftCorner(m - 1, m - 1);
  if (std::abs(1.0 + t) <= 1e-12)
    return UnitaryMatrix(std::move(z), UnitaryMatrix::Check::trust);
  z -= e.topRightCorner(m - 1, 1) * (1.0 / (1.0 + t)) * e.bottomLeftCorner(1, m - 1);
  return UnitaryMatrix(std::move(z), UnitaryMatrix::Check::trust);
}

inline UnitaryMatrix livsic_chain(UnitaryMatrix u, int k) {
  if (k < 1 || k > u.dim()) throw std::invalid_argument("livsic_chain: need 1 <= k <= dim");
  while (u.dim() > k) u = livsic_project(u);
  return u;
}

inline UnitaryMatrix embed(const UnitaryMatrix& u, int k) {
  if (k < u.dim()) throw std::invalid_argument("embed: target dimension below dim");
  if (k == u.dim()) return u;
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Identity(k, k);
  e.topLeftCorner(u.dim(), u.dim()) = u.entries();
  return UnitaryMatrix(std::move(e), UnitaryMatrix::Check::trust);
}

// u.g = w^{-1} u v lifted to L = max(level(u), dim(g)); w^{-1} = w*.
inline GroupElement right_action(const GroupElement& u, const UnitaryMatrix& v,
                                 const UnitaryMatrix& w) {
  if (v.dim() != w.dim())
    throw std::invalid_argument("right_action: v and w must have equal dimension");
  const int level = std::max(u.level(), v.dim());
  Eigen::MatrixXcd r = embed(w, level).entries().adjoint() *
                       embed(u.matrix(), level).entries() * embed(v, level).entries();
  return GroupElement(UnitaryMatrix(std::move(r), UnitaryMatrix::Check::trust));
}

// First column of the level matrix; components beyond level(u) are zero in
// the stabilized sequence, so the returned vector is complete.
inline std::vector<cplx> zeta(const GroupElement& u) {
  const auto& e = u.entries();
  std::vector<cplx> col(u.level());
  for (int i = 0; i < u.level(); ++i) col[i] = e(i, 0);
  return col;
}

// prod_k (u_{iota_k,1})^{lambda_k}; indices beyond level(u) read as zero
// entries, so any such factor annihilates the product. Empty key -> 1.
inline cplx epsilon_basis(const GroupElement& u, const BasisKey& key) {
  const auto& e = u.entries();
  cplx prod = 1.0;
  for (int i = 0; i < key.length(); ++i) {
    const int idx = key.indices()[i];
    if (idx > u.level()) return 0.0;
    const cplx z = e(idx - 1, 0);
    for (int p = 0; p < key.exponents()[i]; ++p) prod *= z;
  }
  return prod;
}

}  // namespace uhardy
