#pragma once

// On-disk formats. Matrices are JSON arrays-of-arrays of [re, im] pairs,
// row-major. Coefficient files are a JSON object {"space": "fock"|"hardy",
// "coefficients": [{"lambda": [...], "iota": [...], "re": x, "im": y}, ...]}
// with keys canonicalized on load and duplicates rejected; the space tag
// prevents cross-loading between the two models. Check tables serialize to
// JSON and CSV with identical columns; everything below the header is a pure
// function of (seed, config), so report bodies are byte-identical across
// runs. Doubles are printed via the JSON shortest-round-trip writer in both
// formats.

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "uhardy/fock.hpp"
#include "uhardy/hardy.hpp"
#include "uhardy/montecarlo.hpp"

namespace uhardy {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- files ----

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw std::runtime_error("read failure: " + path);
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failure: " + path);
}

// Parse errors are reported as invalid_argument so callers can distinguish
// malformed input (usage error) from I/O failure.
inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(what + ": " + e.what());
  }
}

// ------------------------------------------------------------- matrices ----

inline json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Eigen::MatrixXcd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix: expected a nonempty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  Eigen::MatrixXcd m;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.empty())
      throw std::invalid_argument("matrix: row " + std::to_string(r) + " is not a nonempty array");
    if (r == 0) {
      cols = row.size();
      m.resize(rows, cols);
    } else if (row.size() != cols) {
      throw std::invalid_argument("matrix: ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw std::invalid_argument("matrix: entry (" + std::to_string(r) + "," +
                                    std::to_string(c) + ") is not an [re, im] pair");
      m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

// ---------------------------------------------------------- coefficients ----

inline json key_to_json(const BasisKey& key) {
  json lambda = json::array(), iota = json::array();
  for (int e : key.exponents()) lambda.push_back(e);
  for (int i : key.indices()) iota.push_back(i);
  return json{{"lambda", std::move(lambda)}, {"iota", std::move(iota)}};
}

inline BasisKey key_from_json(const json& j) {
  if (!j.is_object() || !j.contains("lambda") || !j.contains("iota"))
    throw std::invalid_argument("key: expected an object with \"lambda\" and \"iota\"");
  const json& lambda = j["lambda"];
  const json& iota = j["iota"];
  if (!lambda.is_array() || !iota.is_array() || lambda.size() != iota.size())
    throw std::invalid_argument("key: \"lambda\" and \"iota\" must be arrays of equal length");
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(lambda.size());
  for (std::size_t t = 0; t < lambda.size(); ++t) {
    if (!lambda[t].is_number_integer() || !iota[t].is_number_integer())
      throw std::invalid_argument("key: \"lambda\" and \"iota\" entries must be integers");
    pairs.emplace_back(iota[t].get<int>(), lambda[t].get<int>());
  }
  return BasisKey::from_pairs(std::move(pairs));  // canonicalizes; validates positivity
}

namespace detail {

inline std::vector<std::pair<BasisKey, cplx>> coefficient_entries(const json& j,
                                                                  const std::string& space) {
  if (!j.is_object()) throw std::invalid_argument("coefficient file: expected a JSON object");
  if (!j.contains("space") || !j["space"].is_string())
    throw std::invalid_argument("coefficient file: missing \"space\" tag");
  if (j["space"].get<std::string>() != space)
    throw std::invalid_argument("coefficient file: space is \"" + j["space"].get<std::string>() +
                                "\", expected \"" + space + "\"");
  if (!j.contains("coefficients") || !j["coefficients"].is_array())
    throw std::invalid_argument("coefficient file: missing \"coefficients\" list");
  std::vector<std::pair<BasisKey, cplx>> entries;
  for (const json& e : j["coefficients"]) {
    BasisKey key = key_from_json(e);
    if (!e.contains("re") || !e.contains("im") || !e["re"].is_number() || !e["im"].is_number())
      throw std::invalid_argument("coefficient file: entry is missing numeric \"re\"/\"im\"");
    for (const auto& [k, v] : entries)
      if (k == key) throw std::invalid_argument("coefficient file: duplicate key");
    entries.emplace_back(std::move(key), cplx(e["re"].get<double>(), e["im"].get<double>()));
  }
  return entries;
}

template <typename Vec>
json coefficients_to_json(const Vec& v, const char* space) {
  json list = json::array();
  for (const auto& [k, c] : v.coefficients()) {
    json e = key_to_json(k);
    e["re"] = c.real();
    e["im"] = c.imag();
    list.push_back(std::move(e));
  }
  return json{{"space", space}, {"coefficients", std::move(list)}};
}

}  // namespace detail

inline json fock_to_json(const FockVector& v) { return detail::coefficients_to_json(v, "fock"); }
inline json hardy_to_json(const HardyFunction& f) {
  return detail::coefficients_to_json(f, "hardy");
}

inline FockVector fock_from_json(const json& j) {
  auto entries = detail::coefficient_entries(j, "fock");
  int degree = 0, dim = 1;
  for (const auto& [k, c] : entries) {
    degree = std::max(degree, k.degree());
    dim = std::max(dim, k.max_index());
  }
  FockVector v(degree, dim);
  for (const auto& [k, c] : entries) v.set(k, c);
  return v;
}

inline HardyFunction hardy_from_json(const json& j) {
  auto entries = detail::coefficient_entries(j, "hardy");
  int degree = 0, dim = 1;
  for (const auto& [k, c] : entries) {
    degree = std::max(degree, k.degree());
    dim = std::max(dim, k.max_index());
  }
  HardyFunction f(degree, dim);
  for (const auto& [k, c] : entries) f.set(k, c);
  return f;
}

// -------------------------------------------------------------- reports ----

struct Report {
  std::string artifact = "uhardy";
  std::string version = version_string;
  std::string suite;
  std::uint64_t seed = 0;
  json config = json::object();
  double wall_ms = 0;
  std::vector<CheckResult> results;
  json diagnostics;  // null unless the run produced diagnostic sub-reports
};

inline json check_row_json(const CheckResult& c) {
  return json{{"name", c.name},
              {"expected", json::array({c.expected.real(), c.expected.imag()})},
              {"expected_provenance", c.expected_provenance},
              {"mean_re", c.estimate.mean.real()},
              {"mean_im", c.estimate.mean.imag()},
              {"stderr", c.estimate.std_error},
              {"sigma_distance", c.sigma_distance},
              {"n_samples", c.estimate.n_samples},
              {"level", c.estimate.level},
              {"seed", c.estimate.seed},
              {"pass", c.pass},
              {"asserted", c.asserted}};
}

// The body is everything determined by (seed, config): the results table and
// any diagnostics. Wall clock lives in the header only.
inline json report_body_json(const Report& r) {
  json rows = json::array();
  for (const CheckResult& c : r.results) rows.push_back(check_row_json(c));
  json body{{"results", std::move(rows)}};
  if (!r.diagnostics.is_null()) body["diagnostics"] = r.diagnostics;
  return body;
}

inline std::string report_to_json_string(const Report& r) {
  json header{{"artifact", r.artifact}, {"version", r.version}, {"suite", r.suite},
              {"seed", r.seed},         {"config", r.config},   {"wall_ms", r.wall_ms}};
  json doc{{"header", std::move(header)}};
  json body = report_body_json(r);
  for (auto& [k, v] : body.items()) doc[k] = std::move(v);
  return doc.dump(2) + "\n";
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline std::string csv_double(double x) { return json(x).dump(); }

}  // namespace detail

inline std::string report_to_csv_string(const Report& r) {
  std::ostringstream out;
  out << "# artifact=" << r.artifact << " version=" << r.version << " suite=" << r.suite
      << " seed=" << r.seed << " config=" << r.config.dump() << " wall_ms=" << r.wall_ms << "\n";
  out << "name,expected,expected_provenance,mean_re,mean_im,stderr,sigma_distance,"
         "n_samples,level,seed,pass,asserted\n";
  for (const CheckResult& c : r.results) {
    const std::string expected = "[" + detail::csv_double(c.expected.real()) + "," +
                                 detail::csv_double(c.expected.imag()) + "]";
    out << detail::csv_escape(c.name) << ',' << detail::csv_escape(expected) << ','
        << detail::csv_escape(c.expected_provenance) << ','
        << detail::csv_double(c.estimate.mean.real()) << ','
        << detail::csv_double(c.estimate.mean.imag()) << ','
        << detail::csv_double(c.estimate.std_error) << ','
        << detail::csv_double(c.sigma_distance) << ',' << c.estimate.n_samples << ','
        << c.estimate.level << ',' << c.estimate.seed << ',' << (c.pass ? "true" : "false")
        << ',' << (c.asserted ? "true" : "false") << "\n";
  }
  return out.str();
}

// CSV body = everything below the "#" header line.
inline std::string csv_body(const std::string& csv) {
  const std::size_t nl = csv.find('\n');
  return nl == std::string::npos ? std::string() : csv.substr(nl + 1);
}

// ---------------------------------------------------- diagnostic reports ----

inline json cplx_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json kernel_compare_to_json(const KernelCompareReport& rep) {
  json rows = json::array();
  for (const KernelCompareRow& row : rep.rows) {
    json r{{"n", row.n}, {"has_fock", row.has_fock}};
    if (row.has_fock) r["fock_sum"] = cplx_to_json(row.fock_sum);
    r["binomial_sum"] = cplx_to_json(row.binomial_sum);
    r["product_coeff"] = cplx_to_json(row.product_coeff);
    if (row.has_fock) {
      r["gap_fock_binomial"] = row.gap_fock_binomial;
      r["gap_fock_product"] = row.gap_fock_product;
    }
    r["gap_binomial_product"] = row.gap_binomial_product;
    rows.push_back(std::move(r));
  }
  return json{{"q", rep.q},
              {"c", cplx_to_json(rep.c)},
              {"z", cplx_to_json(rep.z)},
              {"asserted_equal", rep.asserted_equal},
              {"rows", std::move(rows)}};
}

inline json orthogonality_to_json(const OrthogonalityReport& rep) {
  json keys = json::array();
  for (const BasisKey& k : rep.keys) keys.push_back(key_to_json(k));
  json entries = json::array();
  for (const OrthogonalityEntry& e : rep.entries) {
    json row{{"row", key_to_json(e.row)},
             {"col", key_to_json(e.col)},
             {"diagonal", e.diagonal},
             {"check", check_row_json(e.check)}};
    if (e.diagonal) {
      row["declared_norm"] = e.declared_norm;
      row["level_norm"] = e.level_norm;
      row["matches_declared"] = e.matches_declared;
      row["matches_level"] = e.matches_level;
    }
    entries.push_back(std::move(row));
  }
  return json{{"level", rep.level}, {"keys", std::move(keys)}, {"entries", std::move(entries)}};
}

}  // namespace uhardy
