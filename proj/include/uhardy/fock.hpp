#pragma once

// Truncated symmetric Fock space over a separable coefficient space E:
// sparse graded coefficient vectors in the monomial-key coordinate system,
// the weighted inner product (basis norms lambda!/n!), coherent states,
// Hilbert-Schmidt polynomial evaluation, and the polarization expansion of
// symmetric tensors.
//
// Inner-product convention used throughout: linear in the LEFT slot,
// conjugate-linear in the right slot, so that x_hat_k = <x|e_k>. Every
// conjugation below derives from this one choice.

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "uhardy/common.hpp"
#include "uhardy/partitions.hpp"

namespace uhardy {

// Finitely supported coefficient vector x = sum_k e_k x_hat_k with positive
// integer indices. Exact zeros are erased so support() is honest.
class EVector {
 public:
  EVector() = default;
  explicit EVector(const std::map<int, cplx>& coeffs) {
    for (const auto& [k, v] : coeffs) set(k, v);
  }

  static EVector basis(int k) {
    EVector x;
    x.set(k, 1.0);
    return x;
  }

  void set(int k, cplx v) {
    if (k < 1) throw std::invalid_argument("EVector: indices start at 1");
    if (v == cplx(0.0))
      c_.erase(k);
    else
      c_[k] = v;
  }
  cplx coeff(int k) const {
    auto it = c_.find(k);
    return it == c_.end() ? cplx(0.0) : it->second;
  }
  const std::map<int, cplx>& coefficients() const { return c_; }
  int max_index() const { return c_.empty() ? 0 : c_.rbegin()->first; }

  double norm2() const {
    double s = 0;
    for (const auto& [k, v] : c_) s += std::norm(v);
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  EVector& operator+=(const EVector& o) {
    for (const auto& [k, v] : o.c_) set(k, coeff(k) + v);
    return *this;
  }
  EVector& operator-=(const EVector& o) {
    for (const auto& [k, v] : o.c_) set(k, coeff(k) - v);
    return *this;
  }
  EVector& operator*=(cplx a) {
    if (a == cplx(0.0)) {
      c_.clear();
      return *this;
    }
    for (auto& [k, v] : c_) v *= a;
    return *this;
  }

 private:
  std::map<int, cplx> c_;
};

inline EVector operator+(EVector a, const EVector& b) { return a += b; }
inline EVector operator-(EVector a, const EVector& b) { return a -= b; }
inline EVector operator*(cplx a, EVector x) { return x *= a; }

// Graded sparse vector psi = sum_kappa psi_hat_kappa e^{sym lambda}_iota with
// explicit truncation state (max_degree, max_dim). Keys are canonical, within
// truncation, and never stored with an exact-zero coefficient.
class FockVector {
 public:
  FockVector(int max_degree, int max_dim) : max_degree_(max_degree), max_dim_(max_dim) {
    if (max_degree < 0) throw std::invalid_argument("FockVector: max_degree < 0");
    if (max_dim < 1) throw std::invalid_argument("FockVector: max_dim < 1");
  }

  int max_degree() const { return max_degree_; }
  int max_dim() const { return max_dim_; }
  const std::map<BasisKey, cplx>& coefficients() const { return c_; }

  void set(const BasisKey& key, cplx v) {
    check_key(key);
    if (v == cplx(0.0))
      c_.erase(key);
    else
      c_[key] = v;
  }
  void add(const BasisKey& key, cplx v) { set(key, coeff(key) + v); }
  cplx coeff(const BasisKey& key) const {
    auto it = c_.find(key);
    return it == c_.end() ? cplx(0.0) : it->second;
  }

  // restriction to keys with |lambda| = n
  FockVector component(int n) const {
    FockVector out(max_degree_, max_dim_);
    for (const auto& [k, v] : c_)
      if (k.degree() == n) out.c_.emplace(k, v);
    return out;
  }

  // truncation state takes unions under linear combination
  FockVector& operator+=(const FockVector& o) {
    merge_state(o);
    for (const auto& [k, v] : o.c_) set(k, coeff(k) + v);
    return *this;
  }
  FockVector& operator-=(const FockVector& o) {
    merge_state(o);
    for (const auto& [k, v] : o.c_) set(k, coeff(k) - v);
    return *this;
  }
  FockVector& operator*=(cplx a) {
    if (a == cplx(0.0)) {
      c_.clear();
      return *this;
    }
    for (auto& [k, v] : c_) v *= a;
    return *this;
  }

 private:
  void check_key(const BasisKey& key) const {
    if (key.degree() > max_degree_)
      throw std::invalid_argument("FockVector: key degree exceeds max_degree");
    if (key.max_index() > max_dim_)
      throw std::invalid_argument("FockVector: key index exceeds max_dim");
  }
  void merge_state(const FockVector& o) {
    max_degree_ = std::max(max_degree_, o.max_degree_);
    max_dim_ = std::max(max_dim_, o.max_dim_);
  }

  int max_degree_;
  int max_dim_;
  std::map<BasisKey, cplx> c_;
};

inline FockVector operator+(FockVector a, const FockVector& b) { return a += b; }
inline FockVector operator-(FockVector a, const FockVector& b) { return a -= b; }
inline FockVector operator*(cplx a, FockVector x) { return x *= a; }

// <psi|phi> = sum_kappa psi_hat conj(phi_hat) * (lambda!/n!); left-linear.
inline cplx fock_inner(const FockVector& psi, const FockVector& phi) {
  const auto& a = psi.coefficients();
  const auto& b = phi.coefficients();
  cplx s = 0.0;
  if (a.size() <= b.size()) {
    for (const auto& [k, v] : a) {
      auto it = b.find(k);
      if (it != b.end()) s += v * std::conj(it->second) * to_double(fock_weight(k.partition()));
    }
  } else {
    for (const auto& [k, v] : b) {
      auto it = a.find(k);
      if (it != a.end()) s += it->second * std::conj(v) * to_double(fock_weight(k.partition()));
    }
  }
  return s;
}

inline double fock_norm(const FockVector& psi) {
  return std::sqrt(std::abs(fock_inner(psi, psi).real()));
}

// x_hat^lambda_iota = <x^{tensor n}|e^{sym lambda}_iota> = prod x_hat_{iota_k}^{lambda_k}
inline cplx monomial(const EVector& x, const BasisKey& key) {
  cplx prod = 1.0;
  for (int i = 0; i < key.length(); ++i) {
    const cplx z = x.coeff(key.indices()[i]);
    for (int p = 0; p < key.exponents()[i]; ++p) prod *= z;
  }
  return prod;
}

namespace detail {

// n!/lambda! for the multinomial expansion of a diagonal tensor power
inline double multinomial_over(const BasisKey& key) {
  BigInt denom = 1;
  for (int e : key.exponents()) denom *= factorial(e);
  return to_double(Rational(factorial(key.degree()), denom));
}

// All canonical keys with degree in [1, n_max] (or exactly n_max when `exact`)
// supported on the given ascending index list.
template <typename Fn>
void for_each_supported_key(const std::vector<int>& support, int n_max, bool exact, Fn&& fn) {
  std::vector<std::pair<int, int>> pairs;
  auto rec = [&](auto&& self, std::size_t pos, int budget) -> void {
    if (!pairs.empty() && (!exact || budget == 0)) fn(BasisKey::from_pairs(pairs));
    if (budget == 0) return;
    for (std::size_t p = pos; p < support.size(); ++p) {
      for (int e = 1; e <= budget; ++e) {
        pairs.emplace_back(support[p], e);
        self(self, p + 1, budget - e);
        pairs.pop_back();
      }
    }
  };
  rec(rec, 0, n_max);
}

inline std::vector<int> support_indices(const EVector& x) {
  std::vector<int> s;
  s.reserve(x.coefficients().size());
  for (const auto& [k, v] : x.coefficients()) s.push_back(k);
  return s;
}

}  // namespace detail

// (1-x)^{-tensor 1} truncated at degree N: coefficient at kappa is
// (n!/lambda!) * x_hat^kappa, i.e. the monomial divided by the basis norm.
// Only keys supported on supp(x) appear; all others carry coefficient zero.
inline FockVector coherent_state(const EVector& x, int N, int d) {
  if (N < 0) throw std::invalid_argument("coherent_state: N < 0");
  if (d < 1) throw std::invalid_argument("coherent_state: d < 1");
  if (x.max_index() > d)
    throw std::invalid_argument("coherent_state: support of x exceeds d");
  if (x.norm() >= 1.0) throw std::domain_error("coherent_state: ||x|| >= 1, series diverges");
  const std::vector<int> sup = detail::support_indices(x);
  // key count is C(N + |supp|, |supp|); keep the expansion bounded
  if (to_double(binomial(N + static_cast<int>(sup.size()), static_cast<int>(sup.size()))) > 4e6)
    throw capacity_error("coherent_state: truncation too large");
  FockVector out(N, d);
  out.set(BasisKey(), 1.0);
  detail::for_each_supported_key(sup, N, /*exact=*/false, [&](const BasisKey& key) {
    out.set(key, monomial(x, key) * detail::multinomial_over(key));
  });
  return out;
}

// psi*(x) = <(1-x)^{-tensor 1}|psi> = sum conj(psi_hat_kappa) x_hat^kappa.
// The conjugate comes from psi sitting in the right (conjugate-linear) slot.
inline cplx evaluate_hs(const FockVector& psi, const EVector& x) {
  cplx s = 0.0;
  for (const auto& [k, v] : psi.coefficients()) s += std::conj(v) * monomial(x, k);
  return s;
}

// z_1 sym ... sym z_n via the 2^n-term polarization sum
//   (1/(2^n n!)) sum_theta theta_1...theta_n (sum_k theta_k z_k)^{tensor n},
// each diagonal power expanded by the multinomial rule. Coefficient algebra:
// (n!/lambda!)/(2^n n!) = 1/(2^n lambda!).
inline FockVector symmetrize_polarization(const std::vector<EVector>& z, int d) {
  const int n = static_cast<int>(z.size());
  if (n > 8) throw capacity_error("symmetrize_polarization: more than 8 factors");
  if (d < 1) throw std::invalid_argument("symmetrize_polarization: d < 1");
  for (const EVector& zi : z)
    if (zi.max_index() > d)
      throw std::invalid_argument("symmetrize_polarization: factor support exceeds d");

  FockVector out(n, d);
  if (n == 0) {
    out.set(BasisKey(), 1.0);
    return out;
  }
  const double scale = 1.0 / std::ldexp(1.0, n);  // 1/2^n
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    EVector xt;
    double sign = 1.0;
    for (int k = 0; k < n; ++k) {
      const double theta = (mask >> k & 1u) ? -1.0 : 1.0;
      sign *= theta;
      xt += theta * z[static_cast<std::size_t>(k)];
    }
    detail::for_each_supported_key(
        detail::support_indices(xt), n, /*exact=*/true, [&](const BasisKey& key) {
          BigInt lf = 1;
          for (int e : key.exponents()) lf *= factorial(e);
          out.add(key, sign * scale * monomial(xt, key) / to_double(lf));
        });
  }
  return out;
}

}  // namespace uhardy
