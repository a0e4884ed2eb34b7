// Command-line entry point. Subcommands: verify (suite runner), sample
// (Haar draws), kernel-compare (three-form table), mc (single moment row),
// transform (radial-transform evaluator on a coefficient file).
//
// Exit codes: 0 success / all asserted checks pass; 1 an asserted check
// failed; 2 usage, domain, or capacity error; 3 I/O failure.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uhardy/verify.hpp"

using namespace uhardy;

namespace {

std::uint64_t default_seed() {
  const char* env = std::getenv("UHARDY_SEED");
  if (!env) return 42;
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(env, &pos);
    if (pos != std::string(env).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("UHARDY_SEED must be an unsigned integer, got: " +
                                std::string(env));
  }
}

std::vector<double> parse_doubles(const std::string& text, char sep, const std::string& field) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(sep, start), text.size());
    const std::string piece = text.substr(start, end - start);
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(piece, &pos));
      if (pos != piece.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::invalid_argument(field + ": cannot parse number \"" + piece + "\"");
    }
    start = end + 1;
  }
  return out;
}

cplx parse_complex(const std::string& text, const std::string& field) {
  const std::vector<double> parts = parse_doubles(text, ',', field);
  if (parts.size() == 1) return {parts[0], 0.0};
  if (parts.size() == 2) return {parts[0], parts[1]};
  throw std::invalid_argument(field + ": expected re or re,im");
}

// vector components separated by commas; each component re or re:im
EVector parse_vector(const std::string& text, const std::string& field) {
  EVector x;
  std::size_t start = 0;
  int index = 1;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string piece = text.substr(start, end - start);
    const std::vector<double> parts = parse_doubles(piece, ':', field);
    if (parts.size() == 1)
      x.set(index, cplx(parts[0], 0.0));
    else if (parts.size() == 2)
      x.set(index, cplx(parts[0], parts[1]));
    else
      throw std::invalid_argument(field + ": component must be re or re:im");
    ++index;
    start = end + 1;
  }
  return x;
}

std::vector<int> parse_ints(const std::string& text, const std::string& field) {
  std::vector<int> out;
  for (double v : parse_doubles(text, ',', field)) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw std::invalid_argument(field + ": expected integers");
    out.push_back(i);
  }
  return out;
}

void emit_report(Report& rep, double wall_ms, const SuiteConfig& cfg) {
  rep.wall_ms = wall_ms;
  const std::string text =
      cfg.format == "csv" ? report_to_csv_string(rep) : report_to_json_string(rep);
  if (cfg.out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(cfg.out_path, text);
    long long failures = 0;
    for (const CheckResult& r : rep.results)
      if (r.asserted && !r.pass) ++failures;
    std::cout << "wrote " << cfg.out_path << ": rows=" << rep.results.size()
              << " asserted_failures=" << failures << "\n";
  }
}

int cmd_verify(const std::string& suite, const SuiteConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  Report rep = run_suite(suite, cfg);
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  emit_report(rep, wall_ms, cfg);
  return all_asserted_pass(rep.results) ? 0 : 1;
}

int cmd_sample(int m, int count, std::uint64_t seed) {
  if (m < 1 || m > 64) throw capacity_error("sample: m outside 1..64");
  if (count < 1 || count > 10000) throw capacity_error("sample: count outside 1..10000");
  HaarSampler sampler(m, RandomStream{seed, 0});
  json draws = json::array();
  for (int i = 0; i < count; ++i) draws.push_back(matrix_to_json(sampler.next()));
  std::cout << draws.dump(2) << "\n";
  return 0;
}

int cmd_kernel_compare(int q, int nmax, cplx z, std::uint64_t seed) {
  if (q < 1 || q > 8) throw capacity_error("kernel-compare: q outside 1..8");
  if (std::abs(z) >= 1.0) throw std::domain_error("kernel-compare: |z| must be < 1");
  RandomStream rs{seed, 0};
  GroupElement u(haar_sample(q, rs.substream(1)));
  GroupElement v(haar_sample(q, rs.substream(2)));
  KernelCompareReport rep = kernel_compare(u, v, nmax, z);
  std::cout << "q=" << rep.q << " c=" << rep.c << " z=" << rep.z
            << " asserted_equal=" << (rep.asserted_equal ? "true" : "false") << "\n";
  std::cout << "n  fock_sum  binomial_sum  product_coeff  gap_fb  gap_bp  gap_fp\n";
  auto num = [](double x) { return json(x).dump(); };
  for (const KernelCompareRow& row : rep.rows) {
    std::cout << row.n << "  ";
    if (row.has_fock)
      std::cout << row.fock_sum;
    else
      std::cout << "(n>12)";
    std::cout << "  " << row.binomial_sum << "  " << row.product_coeff << "  ";
    if (row.has_fock)
      std::cout << num(row.gap_fock_binomial);
    else
      std::cout << "-";
    std::cout << "  " << num(row.gap_binomial_product) << "  ";
    if (row.has_fock)
      std::cout << num(row.gap_fock_product);
    else
      std::cout << "-";
    std::cout << "\n";
  }
  return 0;  // diagnostic command: discrepancies are reported, never fatal
}

int cmd_mc(const std::string& lambda_text, const std::string& iota_text, SuiteConfig cfg) {
  const std::vector<int> lambda = parse_ints(lambda_text, "lambda");
  const std::vector<int> iota = parse_ints(iota_text, "iota");
  if (lambda.size() != iota.size())
    throw std::invalid_argument("mc: lambda and iota must have equal length");
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < lambda.size(); ++i) pairs.emplace_back(iota[i], lambda[i]);
  const BasisKey key = BasisKey::from_pairs(std::move(pairs));

  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.suite = "mc";
  rep.seed = cfg.seed;
  rep.config = config_json(cfg);
  rep.results.push_back(
      single_moment_check(key, cfg.level, cfg.samples, RandomStream{cfg.seed, 0}));
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  emit_report(rep, wall_ms, cfg);
  return all_asserted_pass(rep.results) ? 0 : 1;
}

int cmd_transform(const std::string& input, double r, const std::string& x_text) {
  if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("r: must lie in [0, 1]");
  const EVector x = parse_vector(x_text, "x");
  if (x.norm() >= 1.0) throw std::domain_error("x: norm must be < 1");
  const json doc = parse_json_text(read_text_file(input), "input");
  const HardyFunction f = hardy_from_json(doc);

  const cplx ft = extend(f, x);
  const HardyFunction cf = (r == 1.0) ? f : radial_transform(f, r);  // r = 1: identity
  const cplx cv = extend(cf, x);
  const double norm_f = hardy_norm(f);
  const double norm_cf = hardy_norm(cf);
  HardyFunction diff = cf;
  diff -= f;
  const double gap = std::sqrt(std::real(hardy_inner(diff, diff)));

  json out{{"r", r},
           {"f_tilde", json::array({ft.real(), ft.imag()})},
           {"cr_value", json::array({cv.real(), cv.imag()})},
           {"norm_f", norm_f},
           {"norm_cr_f", norm_cf},
           {"boundary_gap", gap}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    const std::uint64_t env_seed = default_seed();

    CLI::App app{"Haar-unitary Fock/Hardy verification toolkit"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "run a verification suite and write a report");
    std::string suite = "all";
    SuiteConfig vcfg;
    vcfg.seed = env_seed;
    verify->add_option("--suite", suite, "one of: exact haar schur pushforward orthogonality "
                                         "invariance kernels transforms all");
    verify->add_option("--seed", vcfg.seed, "random seed (default: UHARDY_SEED or 42)");
    verify->add_option("--samples", vcfg.samples, "samples per statistical row");
    verify->add_option("--level", vcfg.level, "base sampling level M (suites also run M+2)");
    verify->add_option("--degree", vcfg.degree, "truncation degree for transform rows");
    verify->add_option("--dim", vcfg.dim, "coordinate dimension for transform rows");
    verify->add_option("--out", vcfg.out_path, "report file path (default: stdout)");
    verify->add_option("--format", vcfg.format, "json or csv");

    // sample
    auto* sample = app.add_subcommand("sample", "emit Haar draws as matrix JSON");
    int sm = 2, scount = 1;
    std::uint64_t sseed = env_seed;
    sample->add_option("--m", sm, "matrix dimension (1..64)");
    sample->add_option("--count", scount, "number of draws (1..10000)");
    sample->add_option("--seed", sseed, "random seed");

    // kernel-compare
    auto* kc = app.add_subcommand("kernel-compare", "tabulate the three kernel forms");
    int kq = 1, knmax = 6;
    std::string kz = "0.5,0";
    std::uint64_t kseed = env_seed;
    kc->add_option("--q", kq, "level for the Haar pair (1..8)");
    kc->add_option("--nmax", knmax, "highest homogeneity order (<= 20)");
    kc->add_option("--z", kz, "series point as re,im with |z| < 1");
    kc->add_option("--seed", kseed, "random seed");

    // mc
    auto* mc = app.add_subcommand("mc", "estimate E|eps^lambda_iota|^2 at a level");
    std::string mlambda = "1", miota = "1";
    SuiteConfig mcfg;
    mcfg.seed = env_seed;
    mc->add_option("--lambda", mlambda, "exponents, comma-separated");
    mc->add_option("--iota", miota, "indices, comma-separated (same length as lambda)");
    mc->add_option("--level", mcfg.level, "sampling level");
    mc->add_option("--samples", mcfg.samples, "sample count");
    mc->add_option("--seed", mcfg.seed, "random seed");
    mc->add_option("--out", mcfg.out_path, "report file path (default: stdout)");
    mc->add_option("--format", mcfg.format, "json or csv");

    // transform
    auto* tr = app.add_subcommand("transform", "evaluate the radial transform of a coefficient file");
    std::string tinput, tx = "0";
    double trr = 1.0;
    tr->add_option("--input", tinput, "coefficient file (space: hardy)")->required();
    tr->add_option("--r", trr, "radial parameter in [0, 1]; r = 1 is the identity");
    tr->add_option("--x", tx, "evaluation point: components comma-separated, each re or re:im");

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return 2;
    }

    if (*verify) return cmd_verify(suite, vcfg);
    if (*sample) return cmd_sample(sm, scount, sseed);
    if (*kc) return cmd_kernel_compare(kq, knmax, parse_complex(kz, "z"), kseed);
    if (*mc) return cmd_mc(mlambda, miota, mcfg);
    if (*tr) return cmd_transform(tinput, trr, tx);
    return 2;
  } catch (const capacity_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "I/O or internal error: " << e.what() << "\n";
    return 3;
  }
}
