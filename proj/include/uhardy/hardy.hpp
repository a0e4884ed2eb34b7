#pragma once

// The Hardy-space coefficient model: functions are finitely supported Fourier
// coefficient vectors over the monomial system with DECLARED squared norms
// hardy_weight(lambda) = (l-1)! lambda! / (l-1+n)!. The antilinear
// isomorphism j_map/j_star intertwines this model with the Fock side, extend
// realizes the analytic extension to the open unit ball, radial_transform is
// the coefficient dilation, and three reproducing-kernel forms are evaluated
// exactly as printed so their mutual discrepancies can be tabulated.

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "uhardy/fock.hpp"
#include "uhardy/partitions.hpp"
#include "uhardy/unitary.hpp"

namespace uhardy {

// Sparse Fourier coefficients f_hat_kappa with truncation state; same layout
// as FockVector but a distinct type so the two coefficient spaces (different
// norms, different serialization tag) cannot be cross-assigned.
class HardyFunction {
 public:
  HardyFunction(int max_degree, int max_dim) : max_degree_(max_degree), max_dim_(max_dim) {
    if (max_degree < 0) throw std::invalid_argument("HardyFunction: max_degree < 0");
    if (max_dim < 1) throw std::invalid_argument("HardyFunction: max_dim < 1");
  }

  int max_degree() const { return max_degree_; }
  int max_dim() const { return max_dim_; }
  const std::map<BasisKey, cplx>& coefficients() const { return c_; }

  void set(const BasisKey& key, cplx v) {
    if (key.degree() > max_degree_)
      throw std::invalid_argument("HardyFunction: key degree exceeds max_degree");
    if (key.max_index() > max_dim_)
      throw std::invalid_argument("HardyFunction: key index exceeds max_dim");
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

  HardyFunction component(int n) const {
    HardyFunction out(max_degree_, max_dim_);
    for (const auto& [k, v] : c_)
      if (k.degree() == n) out.c_.emplace(k, v);
    return out;
  }

  HardyFunction& operator+=(const HardyFunction& o) {
    max_degree_ = std::max(max_degree_, o.max_degree_);
    max_dim_ = std::max(max_dim_, o.max_dim_);
    for (const auto& [k, v] : o.c_) set(k, coeff(k) + v);
    return *this;
  }
  HardyFunction& operator-=(const HardyFunction& o) {
    max_degree_ = std::max(max_degree_, o.max_degree_);
    max_dim_ = std::max(max_dim_, o.max_dim_);
    for (const auto& [k, v] : o.c_) set(k, coeff(k) - v);
    return *this;
  }
  HardyFunction& operator*=(cplx a) {
    if (a == cplx(0.0)) {
      c_.clear();
      return *this;
    }
    for (auto& [k, v] : c_) v *= a;
    return *this;
  }

 private:
  int max_degree_;
  int max_dim_;
  std::map<BasisKey, cplx> c_;
};

inline HardyFunction operator+(HardyFunction a, const HardyFunction& b) { return a += b; }
inline HardyFunction operator-(HardyFunction a, const HardyFunction& b) { return a -= b; }
inline HardyFunction operator*(cplx a, HardyFunction f) { return f *= a; }

// <f|g> = sum f_hat conj(g_hat) hardy_weight(lambda); left-linear.
inline cplx hardy_inner(const HardyFunction& f, const HardyFunction& g) {
  const auto& a = f.coefficients();
  const auto& b = g.coefficients();
  cplx s = 0.0;
  if (a.size() <= b.size()) {
    for (const auto& [k, v] : a) {
      auto it = b.find(k);
      if (it != b.end()) s += v * std::conj(it->second) * to_double(hardy_weight(k.partition()));
    }
  } else {
    for (const auto& [k, v] : b) {
      auto it = a.find(k);
      if (it != a.end()) s += it->second * std::conj(v) * to_double(hardy_weight(k.partition()));
    }
  }
  return s;
}

inline double hardy_norm(const HardyFunction& f) {
  return std::sqrt(std::abs(hardy_inner(f, f).real()));
}

namespace detail {
// ||e_sym_kappa|| / ||eps_kappa|| — the factor that maps unit basis vectors
// to unit basis vectors across the two coefficient models
inline double basis_norm_ratio(const BasisKey& key) {
  return std::sqrt(to_double(jstar_ratio(key.partition())));
}
}  // namespace detail

// Antilinear isometry: unit Fock basis vector -> unit model basis vector,
// extended conjugate-linearly. Coefficientwise
//   f_hat_kappa = conj(psi_hat_kappa) * sqrt(jstar_ratio(lambda)).
// The square root is forced by the unit-vector basis rule together with the
// isometry <Jpsi|Jphi> = conj(<psi|phi>); the weight ratio itself would map
// unit vectors to vectors of squared norm jstar_ratio.
inline HardyFunction j_map(const FockVector& psi) {
  HardyFunction f(psi.max_degree(), psi.max_dim());
  for (const auto& [k, v] : psi.coefficients())
    f.set(k, std::conj(v) * detail::basis_norm_ratio(k));
  return f;
}

// Inverse (and adjoint) of j_map: psi_hat = conj(f_hat) / sqrt(jstar_ratio).
inline FockVector j_star(const HardyFunction& f) {
  FockVector psi(f.max_degree(), f.max_dim());
  for (const auto& [k, v] : f.coefficients())
    psi.set(k, std::conj(v) / detail::basis_norm_ratio(k));
  return psi;
}

// Analytic extension to the open ball: f~(x) = <(1-x)^{-tensor 1}|j_star f>.
inline cplx extend(const HardyFunction& f, const EVector& x) {
  if (x.norm() >= 1.0) throw std::domain_error("extend: ||x|| >= 1");
  return evaluate_hs(j_star(f), x);
}

// Degree-n Taylor coefficient of alpha -> f~(alpha x) at 0; n-homogeneous
// polynomials are entire, so x is unrestricted.
inline cplx taylor_coeff(const HardyFunction& f, int n, const EVector& x) {
  if (n < 0) throw std::invalid_argument("taylor_coeff: n < 0");
  return evaluate_hs(j_star(f.component(n)), x);
}

// Coefficient dilation f_hat_kappa -> r^{|lambda|} f_hat_kappa, so that the
// extension of the result is sum_n r^n f~_n(x).
inline HardyFunction radial_transform(const HardyFunction& f, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw std::domain_error("radial_transform: r outside [0,1)");
  HardyFunction out(f.max_degree(), f.max_dim());
  for (const auto& [k, v] : f.coefficients()) out.set(k, std::pow(r, k.degree()) * v);
  return out;
}

// ---------------------------------------------------------------------------
// Reproducing kernels

enum class KernelForm { fock_sum, binomial_sum, product };

inline std::string kernel_form_name(KernelForm form) {
  switch (form) {
    case KernelForm::fock_sum: return "fock-sum";
    case KernelForm::binomial_sum: return "binomial-sum";
    case KernelForm::product: return "product";
  }
  return "?";
}

struct KernelValue {
  cplx value;
  int q;  // min(level(u), level(v))
  KernelForm form;
};

// <zeta(v)|zeta(u)> = sum_k zeta_k(v) conj(zeta_k(u)); left-linear.
inline cplx zeta_inner(const GroupElement& v, const GroupElement& u) {
  const int q = std::min(v.level(), u.level());
  cplx s = 0.0;
  for (int k = 0; k < q; ++k) s += v.entries()(k, 0) * std::conj(u.entries()(k, 0));
  return s;
}

inline cplx ipow(cplx base, int e) {
  cplx r = 1.0;
  for (; e > 0; e >>= 1) {
    if (e & 1) r *= base;
    base *= base;
  }
  return r;
}

// Degree-n kernel as the multinomial-weight coefficient sum
//   sum_{|lambda|=n, iota <= d} (n!/lambda!) eps_kappa(v) conj(eps_kappa(u)),
// whose exact value is <zeta(v)|zeta(u)>^n by the multinomial theorem.
inline KernelValue kernel_hn_fock(const GroupElement& u, const GroupElement& v, int n) {
  if (n < 0) throw std::invalid_argument("kernel_hn_fock: n < 0");
  if (n > 12) throw capacity_error("kernel_hn_fock: n > 12");
  const int d = std::max(u.level(), v.level());
  cplx s = 0.0;
  for (const BasisKey& key : enumerate_basis_keys(n, d))
    s += detail::multinomial_over(key) * epsilon_basis(v, key) * std::conj(epsilon_basis(u, key));
  return {s, std::min(u.level(), v.level()), KernelForm::fock_sum};
}

// Degree-n kernel in the printed binomial form
//   c^n * sum_{m=1}^{q} C(n+m-1, n),  c = <zeta(v)|zeta(u)>.
// At n = 0 this gives q, not 1; the discrepancy is documented, not patched.
inline KernelValue kernel_hn_binomial(const GroupElement& u, const GroupElement& v, int n) {
  if (n < 0) throw std::invalid_argument("kernel_hn_binomial: n < 0");
  if (n > 30) throw capacity_error("kernel_hn_binomial: n > 30");
  const int q = std::min(u.level(), v.level());
  BigInt factor = 0;
  for (int m = 1; m <= q; ++m) factor += binomial(n + m - 1, n);
  return {ipow(zeta_inner(v, u), n) * to_double(factor), q, KernelForm::binomial_sum};
}

// Full kernel in product form: (1 - z c)^{-q(q+1)/2}.
inline KernelValue kernel_product(cplx z, const GroupElement& u, const GroupElement& v) {
  if (std::abs(z) >= 1.0) throw std::domain_error("kernel_product: |z| >= 1");
  const int q = std::min(u.level(), v.level());
  const cplx w = 1.0 - z * zeta_inner(v, u);
  return {1.0 / ipow(w, q * (q + 1) / 2), q, KernelForm::product};
}

// Per-degree comparison of the three kernel forms. The product form
// contributes its nth series coefficient C(n+Q-1, n) c^n with Q = q(q+1)/2.
// The fock-sum column is enumerable only for n <= 12 (has_fock). All three
// agree only at q = 1; the q >= 2 discrepancies (e.g. 4c^2 vs 6c^2 at
// q = n = 2, and q vs 1 at n = 0) are reported, never asserted away.
struct KernelCompareRow {
  int n = 0;
  bool has_fock = false;
  cplx fock_sum;
  cplx binomial_sum;
  cplx product_coeff;
  double gap_fock_binomial = 0;
  double gap_binomial_product = 0;
  double gap_fock_product = 0;
};

struct KernelCompareReport {
  int q = 0;
  cplx c;
  cplx z;
  bool asserted_equal = false;  // forms must agree iff q == 1
  std::vector<KernelCompareRow> rows;
};

inline KernelCompareReport kernel_compare(const GroupElement& u, const GroupElement& v, int n_max,
                                          cplx z) {
  if (n_max < 0) throw std::invalid_argument("kernel_compare: n_max < 0");
  if (n_max > 20) throw capacity_error("kernel_compare: n_max > 20");
  KernelCompareReport rep;
  rep.q = std::min(u.level(), v.level());
  rep.c = zeta_inner(v, u);
  rep.z = z;
  if (std::abs(z * rep.c) >= 1.0) throw std::domain_error("kernel_compare: |z c| >= 1");
  rep.asserted_equal = (rep.q == 1);
  const int big_q = rep.q * (rep.q + 1) / 2;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int n = 0; n <= n_max; ++n) {
    KernelCompareRow row;
    row.n = n;
    row.binomial_sum = kernel_hn_binomial(u, v, n).value;
    row.product_coeff = to_double(binomial(n + big_q - 1, n)) * ipow(rep.c, n);
    row.gap_binomial_product = std::abs(row.binomial_sum - row.product_coeff);
    row.has_fock = (n <= 12);
    if (row.has_fock) {
      row.fock_sum = kernel_hn_fock(u, v, n).value;
      row.gap_fock_binomial = std::abs(row.fock_sum - row.binomial_sum);
      row.gap_fock_product = std::abs(row.fock_sum - row.product_coeff);
    } else {
      row.fock_sum = cplx(nan, nan);
      row.gap_fock_binomial = nan;
      row.gap_fock_product = nan;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace uhardy
