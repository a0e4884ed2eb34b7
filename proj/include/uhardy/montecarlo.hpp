#pragma once

// Statistical verification engine. Integrals over the projective-limit group
// reduce to Haar integrals at a finite cylinder level; the engine samples
// that level with fixed-size shards, each on its own derived stream, and
// folds shard partials in shard order — estimates are bit-identical for any
// worker count. Checks compare against closed-form moments at 4 standard
// errors with fixed seeds.

#include <algorithm>
#include <functional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "uhardy/fock.hpp"
#include "uhardy/hardy.hpp"
#include "uhardy/partitions.hpp"
#include "uhardy/unitary.hpp"

namespace uhardy {

struct MCEstimate {
  cplx mean;
  double std_error = 0;  // sample standard deviation / sqrt(n)
  long long n_samples = 0;
  std::uint64_t seed = 0;
  int level = 0;
};

struct CheckResult {
  std::string name;
  MCEstimate estimate;
  cplx expected;
  std::string expected_provenance;
  double sigma_distance = 0;
  bool pass = false;
  bool asserted = true;  // diagnostic rows are recorded but never gate a run
};

namespace detail {

// One-pass Welford moments in extended precision; merge is Chan's formula.
// m2 accumulates sum |x - mean|^2 over both components.
struct WelfordAcc {
  long double mean_re = 0, mean_im = 0, m2 = 0;
  long long n = 0;

  void add(cplx x) {
    ++n;
    const long double dre = x.real() - mean_re;
    const long double dim = x.imag() - mean_im;
    mean_re += dre / n;
    mean_im += dim / n;
    m2 += dre * (x.real() - mean_re) + dim * (x.imag() - mean_im);
  }

  void merge(const WelfordAcc& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const long double dre = o.mean_re - mean_re;
    const long double dim = o.mean_im - mean_im;
    const long long total = n + o.n;
    m2 += o.m2 + (dre * dre + dim * dim) *
                     (static_cast<long double>(n) / total * static_cast<long double>(o.n));
    mean_re += dre * o.n / total;
    mean_im += dim * o.n / total;
    n = total;
  }

  cplx mean() const { return {static_cast<double>(mean_re), static_cast<double>(mean_im)}; }
  double std_error() const {
    if (n <= 1) return 0.0;
    return static_cast<double>(std::sqrt(m2 / (n - 1) / n));
  }
};

constexpr long long kShardSize = 8192;

// Runs `body(shard_index, count)` over all shards across `workers` threads;
// shard partials land in slots owned by shard index, so the subsequent
// in-order fold is independent of the thread schedule.
template <typename Body>
void run_sharded(long long n_samples, int workers, Body&& body) {
  const long long shards = (n_samples + kShardSize - 1) / kShardSize;
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (workers > shards) workers = static_cast<int>(shards);
  auto work = [&](int w) {
    for (long long s = w; s < shards; s += workers) {
      const long long count = std::min(kShardSize, n_samples - s * kShardSize);
      body(s, count);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }
}

// Exact-integrand rows have stderr at the float-noise scale; sigma uses a
// floor so last-bit rounding cannot masquerade as a multi-sigma failure.
// A 4-sigma pass therefore also admits |diff| <= 1e-12 * max(1, |expected|).
inline double sigma_with_floor(cplx mean, cplx expected, double std_error) {
  const double floor = 2.5e-13 * std::max(1.0, std::abs(expected));
  return std::abs(mean - expected) / std::max(std_error, floor);
}

}  // namespace detail

inline CheckResult make_check(std::string name, MCEstimate est, cplx expected,
                              std::string provenance, bool asserted = true) {
  CheckResult r;
  r.name = std::move(name);
  r.estimate = est;
  r.expected = expected;
  r.expected_provenance = std::move(provenance);
  r.sigma_distance = detail::sigma_with_floor(est.mean, expected, est.std_error);
  r.pass = r.sigma_distance <= 4.0;
  r.asserted = asserted;
  return r;
}

// Empirical mean of a cylindrical integrand over level-`level` draws.
// Deterministic: shard i draws from rng.substream(i); partials fold in shard
// order regardless of `workers`.
inline MCEstimate mc_integrate(const std::function<cplx(const GroupElement&)>& integrand,
                               int level, long long n_samples, RandomStream rng,
                               int workers = 0) {
  if (n_samples <= 0) throw std::invalid_argument("mc_integrate: n_samples must be positive");
  const long long shards = (n_samples + detail::kShardSize - 1) / detail::kShardSize;
  std::vector<detail::WelfordAcc> accs(shards);
  detail::run_sharded(n_samples, workers, [&](long long s, long long count) {
    HaarSampler sampler(level, rng.substream(static_cast<std::uint64_t>(s)));
    detail::WelfordAcc acc;
    for (long long i = 0; i < count; ++i) {
      GroupElement u(UnitaryMatrix(sampler.next(), UnitaryMatrix::Check::trust));
      acc.add(integrand(u));
    }
    accs[s] = acc;
  });
  detail::WelfordAcc total;
  for (const detail::WelfordAcc& acc : accs) total.merge(acc);
  return {total.mean(), total.std_error(), n_samples, rng.seed, level};
}

// Panel variant: evaluates several integrands on one shared draw stream.
// Uses the same substream schedule as mc_integrate, so a one-element panel
// is bit-identical to the single-integrand call.
inline std::vector<MCEstimate> mc_integrate_panel(
    const std::vector<std::function<cplx(const GroupElement&)>>& integrands, int level,
    long long n_samples, RandomStream rng, int workers = 0) {
  if (integrands.empty()) throw std::invalid_argument("mc_integrate_panel: empty panel");
  if (n_samples <= 0)
    throw std::invalid_argument("mc_integrate_panel: n_samples must be positive");
  const std::size_t k = integrands.size();
  const long long shards = (n_samples + detail::kShardSize - 1) / detail::kShardSize;
  std::vector<std::vector<detail::WelfordAcc>> accs(shards);
  detail::run_sharded(n_samples, workers, [&](long long s, long long count) {
    HaarSampler sampler(level, rng.substream(static_cast<std::uint64_t>(s)));
    std::vector<detail::WelfordAcc> acc(k);
    for (long long i = 0; i < count; ++i) {
      GroupElement u(UnitaryMatrix(sampler.next(), UnitaryMatrix::Check::trust));
      for (std::size_t j = 0; j < k; ++j) acc[j].add(integrands[j](u));
    }
    accs[s] = std::move(acc);
  });
  std::vector<MCEstimate> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    detail::WelfordAcc total;
    for (long long s = 0; s < shards; ++s) total.merge(accs[s][j]);
    out.push_back({total.mean(), total.std_error(), n_samples, rng.seed, level});
  }
  return out;
}

// alpha_(n,m) = n!(m-1)!/(n+m-1)! — the Schur-averaging constant.
inline Rational schur_alpha(int n, int m) {
  if (n < 0 || m < 1) throw std::invalid_argument("schur_alpha: need n >= 0, m >= 1");
  return Rational(factorial(n) * factorial(m - 1), factorial(n + m - 1));
}

namespace detail {
inline int homogeneous_degree(const FockVector& v, const char* who) {
  int deg = -1;
  for (const auto& [k, c] : v.coefficients()) {
    if (deg == -1) deg = k.degree();
    if (k.degree() != deg)
      throw std::invalid_argument(std::string(who) + ": inhomogeneous coefficient vector");
  }
  return deg;  // -1 when empty
}
}  // namespace detail

// E_v[ f_phi(v e_1) conj(f_psi(v e_1)) ] over Haar v in U(m); equals
// alpha_(n,m) <psi|phi> by the classical moment formula.
inline MCEstimate schur_average(const FockVector& psi, const FockVector& phi, int m,
                                long long n_samples, RandomStream rng, int workers = 0) {
  const int dpsi = detail::homogeneous_degree(psi, "schur_average");
  const int dphi = detail::homogeneous_degree(phi, "schur_average");
  if (dpsi != -1 && dphi != -1 && dpsi != dphi)
    throw std::invalid_argument("schur_average: psi and phi have different degrees");
  auto max_support = [](const FockVector& v) {
    int mi = 0;
    for (const auto& [k, c] : v.coefficients()) mi = std::max(mi, k.max_index());
    return mi;
  };
  if (max_support(psi) > m || max_support(phi) > m)
    throw std::invalid_argument("schur_average: support exceeds sampling dimension");
  return mc_integrate(
      [&](const GroupElement& v) {
        EVector x;
        for (int k = 0; k < v.level(); ++k) x.set(k + 1, v.entries()(k, 0));
        return evaluate_hs(phi, x) * std::conj(evaluate_hs(psi, x));
      },
      m, n_samples, rng, workers);
}

// Moment-panel comparison between livsic-projected U(m) draws and direct
// U(m-1) draws. Each row is a two-sample difference with pooled stderr.
inline std::vector<CheckResult> pushforward_check(int m, long long n_samples, RandomStream rng,
                                                  int workers = 0) {
  if (m < 2) throw std::invalid_argument("pushforward_check: m < 2");
  if (m > 16) throw capacity_error("pushforward_check: m > 16");
  if (n_samples <= 0) throw std::invalid_argument("pushforward_check: n_samples must be positive");
  const int k = m - 1;
  const int n_moments = k >= 2 ? 4 : 3;
  const long long shards = (n_samples + detail::kShardSize - 1) / detail::kShardSize;
  std::vector<std::vector<detail::WelfordAcc>> proj(shards), direct(shards);
  detail::run_sharded(n_samples, workers, [&](long long s, long long count) {
    HaarSampler top(m, rng.substream(2 * static_cast<std::uint64_t>(s)));
    HaarSampler low(k, rng.substream(2 * static_cast<std::uint64_t>(s) + 1));
    std::vector<detail::WelfordAcc> pa(n_moments), da(n_moments);
    auto panel = [&](const Eigen::MatrixXcd& e, std::vector<detail::WelfordAcc>& acc) {
      const cplx a = e(0, 0);
      acc[0].add(std::norm(a));
      acc[1].add(std::norm(a) * std::norm(a));
      if (k >= 2) acc[2].add(a * std::conj(e(1, 0)));
      cplx tr = 0.0;
      for (int i = 0; i < k; ++i) tr += e(i, i);
      acc[n_moments - 1].add(std::norm(tr));
    };
    for (long long i = 0; i < count; ++i) {
      panel(livsic_project(UnitaryMatrix(top.next(), UnitaryMatrix::Check::trust)).entries(), pa);
      panel(low.next(), da);
    }
    proj[s] = std::move(pa);
    direct[s] = std::move(da);
  });
  std::vector<std::string> names = {"E|u11|^2", "E|u11|^4"};
  if (k >= 2) names.push_back("E(u11 conj(u21))");
  names.push_back("E|tr|^2");
  std::vector<CheckResult> out;
  for (int mom = 0; mom < n_moments; ++mom) {
    detail::WelfordAcc p, d;
    for (long long s = 0; s < shards; ++s) {
      p.merge(proj[s][mom]);
      d.merge(direct[s][mom]);
    }
    const double pooled = std::sqrt(p.std_error() * p.std_error() + d.std_error() * d.std_error());
    MCEstimate est{p.mean() - d.mean(), pooled, n_samples, rng.seed, m};
    out.push_back(make_check("pushforward m=" + std::to_string(m) + " " + names[mom], est,
                             cplx(0.0), "two-sample"));
  }
  return out;
}

struct OrthogonalityEntry {
  BasisKey row, col;
  bool diagonal = false;
  CheckResult check;
  // diagonal diagnostics: both candidate squared norms and which one the
  // estimate agrees with at 4 sigma
  double declared_norm = 0;
  double level_norm = 0;
  bool matches_declared = false;
  bool matches_level = false;
};

struct OrthogonalityReport {
  int level = 0;
  std::vector<BasisKey> keys;
  std::vector<OrthogonalityEntry> entries;  // upper triangle, row index <= col index
};

// Gram matrix G_{kk'} = E[eps_k conj(eps_k')] over level-`level` draws for
// all canonical keys with degree <= n_max, indices <= d. Off-diagonals are
// asserted zero; diagonals are diagnostic rows carrying both the declared
// norm (l-1)! lambda!/(l-1+n)! and the level-dependent moment
// lambda!(level-1)!/(n+level-1)!.
inline OrthogonalityReport orthogonality_matrix(int n_max, int d, int level, long long n_samples,
                                                RandomStream rng, int workers = 0) {
  if (n_max < 0 || d < 1) throw std::invalid_argument("orthogonality_matrix: bad key bounds");
  if (level < d) throw std::invalid_argument("orthogonality_matrix: level < d");
  if (n_samples <= 0)
    throw std::invalid_argument("orthogonality_matrix: n_samples must be positive");
  std::vector<BasisKey> keys;
  for (int n = 0; n <= n_max; ++n)
    for (BasisKey& k : enumerate_basis_keys(n, d)) keys.push_back(std::move(k));
  const std::size_t nk = keys.size();
  if (nk > 200) throw capacity_error("orthogonality_matrix: more than 200 keys");

  const std::size_t n_pairs = nk * (nk + 1) / 2;
  const long long shards = (n_samples + detail::kShardSize - 1) / detail::kShardSize;
  std::vector<std::vector<detail::WelfordAcc>> partials(shards);
  detail::run_sharded(n_samples, workers, [&](long long s, long long count) {
    HaarSampler sampler(level, rng.substream(static_cast<std::uint64_t>(s)));
    std::vector<detail::WelfordAcc> acc(n_pairs);
    std::vector<cplx> vals(nk);
    for (long long i = 0; i < count; ++i) {
      GroupElement u(UnitaryMatrix(sampler.next(), UnitaryMatrix::Check::trust));
      for (std::size_t a = 0; a < nk; ++a) vals[a] = epsilon_basis(u, keys[a]);
      std::size_t p = 0;
      for (std::size_t a = 0; a < nk; ++a)
        for (std::size_t b = a; b < nk; ++b) acc[p++].add(vals[a] * std::conj(vals[b]));
    }
    partials[s] = std::move(acc);
  });
  std::vector<detail::WelfordAcc> total(n_pairs);
  for (long long s = 0; s < shards; ++s)
    for (std::size_t p = 0; p < n_pairs; ++p) total[p].merge(partials[s][p]);

  OrthogonalityReport rep;
  rep.level = level;
  rep.keys = keys;
  std::size_t p = 0;
  for (std::size_t a = 0; a < nk; ++a)
    for (std::size_t b = a; b < nk; ++b, ++p) {
      OrthogonalityEntry e;
      e.row = keys[a];
      e.col = keys[b];
      e.diagonal = (a == b);
      MCEstimate est{total[p].mean(), total[p].std_error(), n_samples, rng.seed, level};
      const std::string name = "gram[" + std::to_string(a) + "," + std::to_string(b) + "]";
      if (!e.diagonal) {
        e.check = make_check(name, est, cplx(0.0), "phase-symmetry");
      } else {
        const Partition lam = keys[a].partition();
        const int n = lam.weight();
        e.declared_norm = to_double(hardy_weight(lam));
        e.level_norm = to_double(Rational(partition_factorial(lam) * factorial(level - 1),
                                          factorial(n + level - 1)));
        e.check = make_check(name, est, cplx(e.declared_norm), "declared-norm",
                             /*asserted=*/false);
        e.matches_declared = e.check.pass;
        e.matches_level =
            detail::sigma_with_floor(est.mean, cplx(e.level_norm), est.std_error) <= 4.0;
      }
      rep.entries.push_back(std::move(e));
    }
  return rep;
}

namespace detail {
inline CheckResult two_sample_check(std::string name, const WelfordAcc& a, const WelfordAcc& b,
                                    long long n_samples, std::uint64_t seed, int level) {
  const double pooled = std::sqrt(a.std_error() * a.std_error() + b.std_error() * b.std_error());
  MCEstimate est{a.mean() - b.mean(), pooled, n_samples, seed, level};
  return make_check(std::move(name), est, cplx(0.0), "two-sample");
}
}  // namespace detail

// E|eps_key|^2 on raw draws vs the same draws moved by u.g = w^* u v; the
// paired streams make the g = (I, I) difference exactly zero.
inline CheckResult invariance_check(const BasisKey& key, const UnitaryMatrix& v,
                                    const UnitaryMatrix& w, int level, long long n_samples,
                                    RandomStream rng, int workers = 0) {
  if (v.dim() != w.dim()) throw std::invalid_argument("invariance_check: dim(v) != dim(w)");
  if (level < v.dim() || level < key.max_index())
    throw std::invalid_argument("invariance_check: level below action dim or key indices");
  if (n_samples <= 0) throw std::invalid_argument("invariance_check: n_samples must be positive");
  const long long shards = (n_samples + detail::kShardSize - 1) / detail::kShardSize;
  std::vector<detail::WelfordAcc> raws(shards), moveds(shards);
  detail::run_sharded(n_samples, workers, [&](long long s, long long count) {
    HaarSampler sampler(level, rng.substream(static_cast<std::uint64_t>(s)));
    detail::WelfordAcc raw, moved;
    for (long long i = 0; i < count; ++i) {
      GroupElement u(UnitaryMatrix(sampler.next(), UnitaryMatrix::Check::trust));
      raw.add(std::norm(epsilon_basis(u, key)));
      moved.add(std::norm(epsilon_basis(right_action(u, v, w), key)));
    }
    raws[s] = raw;
    moveds[s] = moved;
  });
  detail::WelfordAcc raw, moved;
  for (long long s = 0; s < shards; ++s) {
    raw.merge(raws[s]);
    moved.merge(moveds[s]);
  }
  return detail::two_sample_check("invariance |eps|^2", raw, moved, n_samples, rng.seed, level);
}

// Phase form: the transformed draw is exp(i theta) u with theta uniform on
// (-pi, pi], theta-stream derived per shard alongside the matrix stream.
inline CheckResult phase_invariance_check(const BasisKey& key, int level, long long n_samples,
                                          RandomStream rng, int workers = 0) {
  if (level < key.max_index())
    throw std::invalid_argument("phase_invariance_check: level below key indices");
  if (n_samples <= 0)
    throw std::invalid_argument("phase_invariance_check: n_samples must be positive");
  const long long shards = (n_samples + detail::kShardSize - 1) / detail::kShardSize;
  std::vector<detail::WelfordAcc> raws(shards), moveds(shards);
  detail::run_sharded(n_samples, workers, [&](long long s, long long count) {
    HaarSampler sampler(level, rng.substream(2 * static_cast<std::uint64_t>(s)));
    GaussianSource phases(rng.substream(2 * static_cast<std::uint64_t>(s) + 1));
    detail::WelfordAcc raw, moved;
    for (long long i = 0; i < count; ++i) {
      const Eigen::MatrixXcd& e = sampler.next();
      const double theta = (2.0 * phases.uniform01() - 1.0) * std::numbers::pi;
      GroupElement u(UnitaryMatrix(e, UnitaryMatrix::Check::trust));
      GroupElement rotated(
          UnitaryMatrix(std::exp(cplx(0.0, theta)) * e, UnitaryMatrix::Check::trust));
      raw.add(std::norm(epsilon_basis(u, key)));
      moved.add(std::norm(epsilon_basis(rotated, key)));
    }
    raws[s] = raw;
    moveds[s] = moved;
  });
  detail::WelfordAcc raw, moved;
  for (long long s = 0; s < shards; ++s) {
    raw.merge(raws[s]);
    moved.merge(moveds[s]);
  }
  return detail::two_sample_check("phase invariance |eps|^2", raw, moved, n_samples, rng.seed,
                                  level);
}

// MC probe of the reproducing property: estimates the integral of
// hn(v, u) eps_key(u) over level-`level` draws of u against eps_key(v).
// Asserted only in the q = 1 configuration — sampling at level 1, where the
// integrand is the constant eps_key(v) — and for vacuum-key rows whose
// integrand is identically 1. At level M >= 2 the integral carries the
// moment factor n!(M-1)!/(n+M-1)!, so those rows are recorded experiments.
inline CheckResult reproducing_check(const GroupElement& v, const BasisKey& key, KernelForm form,
                                     int level, long long n_samples, RandomStream rng,
                                     int workers = 0) {
  if (key.max_index() > level)
    throw std::invalid_argument("reproducing_check: level below key indices");
  const int n = key.degree();
  const int q = std::min(level, v.level());
  const int big_q = q * (q + 1) / 2;
  std::function<cplx(const GroupElement&)> hn;
  switch (form) {
    case KernelForm::fock_sum:
      hn = [&v, n](const GroupElement& u) { return kernel_hn_fock(u, v, n).value; };
      break;
    case KernelForm::binomial_sum:
      hn = [&v, n](const GroupElement& u) { return kernel_hn_binomial(u, v, n).value; };
      break;
    case KernelForm::product: {
      const double coeff = to_double(binomial(n + big_q - 1, n));
      hn = [&v, n, coeff](const GroupElement& u) { return coeff * ipow(zeta_inner(v, u), n); };
      break;
    }
  }
  MCEstimate est = mc_integrate(
      [&](const GroupElement& u) { return hn(u) * epsilon_basis(u, key); }, level, n_samples,
      rng, workers);
  const cplx target = epsilon_basis(v, key);
  const bool asserted = (level == 1) || (n == 0 && form != KernelForm::binomial_sum);
  return make_check("reproducing " + kernel_form_name(form) + " n=" + std::to_string(n) +
                        " q=" + std::to_string(q),
                    est, target, asserted ? "closed-form" : "diagnostic", asserted);
}

}  // namespace uhardy
