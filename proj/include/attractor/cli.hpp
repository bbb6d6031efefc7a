#ifndef ATTRACTOR_CLI_HPP
#define ATTRACTOR_CLI_HPP

// Command implementations behind the attractor-kit executable. Each command
// renders its whole output to a string; `run` validates, renders and writes
// the file atomically, mapping failures onto exit codes.

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "attractor/borel.hpp"
#include "attractor/ce.hpp"
#include "attractor/dispersion.hpp"
#include "attractor/error.hpp"
#include "attractor/spectral.hpp"
#include "attractor/weight.hpp"

namespace attractor::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCompute = 3;

enum class Command { CeCoeffs, Dispersion, Folds, Borel };
enum class Format { Csv, Json };
enum class BorelSource { CE, Source };

inline std::string_view to_string(Command c) {
  switch (c) {
    case Command::CeCoeffs: return "ce-coeffs";
    case Command::Dispersion: return "dispersion";
    case Command::Folds: return "folds";
    case Command::Borel: return "borel";
  }
  return "unknown";
}

/// Raised for invalid configurations (exit code 2).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCode::InvalidArgument, "cli", what) {}
};

struct RunConfig {
  Command command = Command::CeCoeffs;
  long n_max = 30;
  long pade_L = 14;
  long pade_M = 14;
  double k_min = 0.0;
  double k_max = 1.2;
  double k_step = 0.01;
  std::string weight_spec = "gaussian";
  std::vector<long> orders{1, 2, 20, 50};
  BorelSource borel_source = BorelSource::CE;
  Format format = Format::Csv;
  std::string output_path;  ///< empty: standard output
};

/// gaussian | bounded-uniform | bounded-custom=FILE, FILE holding one exact
/// rational per line (mu_2, mu_4, ...). Blank lines and '#' comments are skipped.
inline WeightModel parse_weight(const std::string& spec) {
  if (spec == "gaussian") return WeightModel::gaussian();
  if (spec == "bounded-uniform") return WeightModel::bounded_uniform();
  const std::string prefix = "bounded-custom=";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string path = spec.substr(prefix.size());
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read moment file '" + path + "'");
    std::vector<Rational> moments;
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        moments.push_back(Rational::parse(line));
      } catch (const Error& e) {
        throw ConfigError(std::string("moment file: ") + e.what());
      }
    }
    try {
      return WeightModel::bounded_custom(std::move(moments));
    } catch (const Error& e) {
      throw ConfigError(std::string("moment file: ") + e.what());
    }
  }
  throw ConfigError("unknown weight '" + spec + "'");
}

inline std::vector<double> k_grid(const RunConfig& cfg) {
  std::vector<double> grid;
  const auto steps = static_cast<long>(std::floor((cfg.k_max - cfg.k_min) / cfg.k_step + 1e-9));
  for (long i = 0; i <= steps; ++i) grid.push_back(cfg.k_min + static_cast<double>(i) * cfg.k_step);
  return grid;
}

/// Checks every parameter the selected command consumes against the module
/// preconditions; throws ConfigError.
inline void validate(const RunConfig& cfg) {
  parse_weight(cfg.weight_spec);
  if (cfg.n_max < 1 || cfg.n_max > 200) throw ConfigError("--n-max must lie in [1, 200]");
  auto check_pade = [&] {
    if (cfg.pade_L < 0 || cfg.pade_M < 0) throw ConfigError("--pade orders must be non-negative");
    if (cfg.pade_L + cfg.pade_M > cfg.n_max)
      throw ConfigError("--pade L M needs L + M <= --n-max (" + std::to_string(cfg.pade_L + cfg.pade_M) + " > " +
                        std::to_string(cfg.n_max) + ")");
  };
  switch (cfg.command) {
    case Command::CeCoeffs: break;
    case Command::Borel: check_pade(); break;
    case Command::Dispersion:
      check_pade();
      if (!(cfg.k_step > 0.0)) throw ConfigError("--k-step must be positive");
      if (!(cfg.k_min >= 0.0) || !(cfg.k_max <= 1.2 + 1e-12) || !(cfg.k_min <= cfg.k_max))
        throw ConfigError("k grid must satisfy 0 <= k-min <= k-max <= 1.2");
      if (k_grid(cfg).size() > 100000) throw ConfigError("k grid has more than 100000 points");
      [[fallthrough]];
    case Command::Folds:
      if (cfg.orders.empty()) throw ConfigError("--orders needs at least one value");
      for (long n : cfg.orders)
        if (n < 1 || n > 200) throw ConfigError("truncation order " + std::to_string(n) + " outside [1, 200]");
      break;
  }
}

namespace detail {

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

template <typename... Fields>
std::string csv_row(const Fields&... fields) {
  std::string row;
  bool first = true;
  ((row += (first ? "" : ","), row += csv_field(fields), first = false), ...);
  return row + "\n";
}

inline std::string csv_join(const std::vector<std::string>& fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) row += (i ? "," : "") + csv_field(fields[i]);
  return row + "\n";
}

using json = nlohmann::ordered_json;

inline json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
inline json json_optional(const std::optional<double>& v) { return v ? json_number(*v) : json(nullptr); }

inline json config_json(const RunConfig& cfg) {
  json c;
  c["command"] = std::string(to_string(cfg.command));
  c["weight"] = cfg.weight_spec;
  c["n_max"] = cfg.n_max;
  if (cfg.command == Command::Borel || cfg.command == Command::Dispersion) c["pade"] = {cfg.pade_L, cfg.pade_M};
  if (cfg.command == Command::Dispersion) c["k_grid"] = {{"k_min", cfg.k_min}, {"k_max", cfg.k_max}, {"k_step", cfg.k_step}};
  if (cfg.command == Command::Dispersion || cfg.command == Command::Folds) c["orders"] = cfg.orders;
  if (cfg.command == Command::Borel) c["series"] = cfg.borel_source == BorelSource::CE ? "ce" : "source";
  return c;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

inline std::string render_ce_coeffs(const RunConfig& cfg) {
  using namespace detail;
  const auto w = parse_weight(cfg.weight_spec);
  const auto c = ce_coefficients(w, static_cast<std::size_t>(cfg.n_max));
  std::vector<double> ratios;
  if (c.size() >= 2) ratios = ratio_sequence(c);
  auto ratio = [&](std::size_t n) -> std::optional<double> {
    if (n - 1 < ratios.size()) return ratios[n - 1];
    return std::nullopt;
  };
  auto scaled = [&](std::size_t n) -> std::optional<double> {
    if (auto r = ratio(n)) return *r / (2.0 * static_cast<double>(n + 1));
    return std::nullopt;
  };
  if (cfg.format == Format::Csv) {
    std::string out = csv_row(std::string("n"), std::string("a_2n"), std::string("abs_log10"), std::string("r_n"),
                              std::string("r_n_over_2np1"));
    for (std::size_t n = 1; n <= c.size(); ++n)
      out += csv_row(std::to_string(n), c.a(n).to_string(), format_double(c.a(n).log10_abs()), format_optional(ratio(n)),
                     format_optional(scaled(n)));
    return out;
  }
  json j;
  j["config"] = config_json(cfg);
  json rows = json::array();
  for (std::size_t n = 1; n <= c.size(); ++n)
    rows.push_back({{"n", n},
                    {"a_2n", c.a(n).to_string()},
                    {"abs_log10", json_number(c.a(n).log10_abs())},
                    {"r_n", json_optional(ratio(n))},
                    {"r_n_over_2np1", json_optional(scaled(n))}});
  j["coefficients"] = rows;
  if (c.size() >= 8) {
    const auto est = radius_estimate(c);
    j["radius_estimate"] = {{"radius", est.radius},
                            {"intercept", est.intercept},
                            {"slope", est.slope},
                            {"points_used", est.points_used},
                            {"verdict", est.verdict == RadiusVerdict::Finite ? "finite" : "zero-consistent"}};
  } else {
    j["radius_estimate"] = nullptr;
  }
  return dump(j);
}

inline CompareOptions compare_options(const RunConfig& cfg) {
  CompareOptions opt;
  opt.weight = parse_weight(cfg.weight_spec);
  opt.n_max = static_cast<std::size_t>(cfg.n_max);
  opt.pade_L = static_cast<std::size_t>(cfg.pade_L);
  opt.pade_M = static_cast<std::size_t>(cfg.pade_M);
  opt.branch_orders.assign(cfg.orders.begin(), cfg.orders.end());
  return opt;
}

inline std::string render_dispersion(const RunConfig& cfg) {
  using namespace detail;
  const auto table = compare_methods(k_grid(cfg), compare_options(cfg));
  std::vector<const MethodColumn*> order;
  std::vector<const MethodColumn*> branch_cols;
  for (const auto& col : table.columns) {
    order.push_back(&col);
    if (col.method == DispersionMethod::Branch) branch_cols.push_back(&col);
  }
  if (cfg.format == Format::Csv) {
    std::vector<std::string> header{"k"};
    for (const auto* col : order) header.push_back("omega_" + col->name);
    for (const auto* col : branch_cols) header.push_back("physical_" + col->name.substr(std::string("branch_").size()));
    std::string out = csv_join(header);
    for (std::size_t i = 0; i < table.k.size(); ++i) {
      std::vector<std::string> row{format_double(table.k[i])};
      for (const auto* col : order) row.push_back(format_optional(col->omega[i]));
      for (const auto* col : branch_cols) row.push_back(col->omega[i] ? "1" : "0");
      out += csv_join(row);
    }
    return out;
  }
  json j;
  j["config"] = config_json(cfg);
  j["k"] = table.k;
  json cols = json::array();
  for (const auto* col : order) {
    json omega = json::array(), dev = json::array(), errs = json::object();
    for (std::size_t i = 0; i < table.k.size(); ++i) {
      omega.push_back(json_optional(col->omega[i]));
      dev.push_back(json_optional(col->deviation[i]));
      if (!col->errors[i].empty()) errs[format_double(table.k[i])] = col->errors[i];
    }
    cols.push_back({{"name", col->name}, {"method", std::string(to_string(col->method))}, {"omega", omega}, {"deviation", dev}, {"errors", errs}});
  }
  j["columns"] = cols;
  json branches = json::array();
  for (const auto& b : table.branches) {
    json samples = json::array();
    for (const auto& s : b.samples) samples.push_back({s.k, s.omega, s.physical ? 1 : 0});
    json fold = nullptr;
    if (b.fold) fold = {{"k_c", b.fold->k_c}, {"omega_c", b.fold->omega_c}, {"residual", b.fold->residual}};
    branches.push_back({{"n", b.n}, {"fold", fold}, {"samples", samples}});
  }
  j["branches"] = branches;
  if (table.resummed) {
    const auto& p = table.resummed->approximant();
    json poles = json::array();
    for (const auto& z : p.poles) poles.push_back({z.real(), z.imag()});
    j["resummation"] = {{"pade", {p.L, p.M}},
                        {"quadrature", table.resummed->scheme()},
                        {"check_coefficient_mismatch", json_number(table.resummed->check_mismatch())},
                        {"poles", poles}};
  } else {
    j["resummation"] = nullptr;
  }
  return dump(j);
}

// Reference fold estimates the computed values are compared against.
inline const std::map<long, double>& published_fold_estimates() {
  static const std::map<long, double> values{{1, 0.47}, {2, 0.58}, {20, 0.94}, {50, 1.03}};
  return values;
}

inline std::string fold_note(long n, double k_c) {
  std::string note;
  if (n == 1) note = "closed-form fold k_c = 1/2 from the discriminant of omega^2 + omega + k^2; ";
  const auto& pub = published_fold_estimates();
  if (auto it = pub.find(n); it != pub.end()) {
    const double diff = k_c - it->second;
    char buf[160];
    if (std::fabs(diff) <= 0.02)
      std::snprintf(buf, sizeof buf, "within 0.02 of published estimate %.2f", it->second);
    else
      std::snprintf(buf, sizeof buf, "discrepancy: published estimate %.2f differs by %+.4f", it->second, -diff);
    note += buf;
  }
  return note;
}

struct FoldRow {
  long n;
  std::optional<FoldPoint> fold;
  std::string note;
};

inline std::vector<FoldRow> compute_folds(const RunConfig& cfg) {
  std::vector<FoldRow> rows;
  for (long n : cfg.orders) {
    try {
      const auto fp = find_fold(static_cast<int>(n));
      rows.push_back({n, fp, fold_note(n, fp.k_c)});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoFoldFound) throw;
      rows.push_back({n, std::nullopt, e.what()});
    }
  }
  return rows;
}

inline std::string render_folds(const RunConfig& cfg) {
  using namespace detail;
  const auto rows = compute_folds(cfg);
  if (cfg.format == Format::Csv) {
    std::string out = csv_row(std::string("n"), std::string("k_c"), std::string("omega_c"), std::string("residual"), std::string("note"));
    for (const auto& r : rows) {
      if (r.fold)
        out += csv_row(std::to_string(r.n), format_double(r.fold->k_c), format_double(r.fold->omega_c), format_double(r.fold->residual), r.note);
      else
        out += csv_row(std::to_string(r.n), std::string(), std::string(), std::string(), r.note);
    }
    return out;
  }
  json j;
  j["config"] = config_json(cfg);
  json folds = json::array();
  for (const auto& r : rows) {
    json row{{"n", r.n}};
    row["k_c"] = r.fold ? json(r.fold->k_c) : json(nullptr);
    row["omega_c"] = r.fold ? json(r.fold->omega_c) : json(nullptr);
    row["residual"] = r.fold ? json(r.fold->residual) : json(nullptr);
    row["note"] = r.note;
    folds.push_back(row);
  }
  j["folds"] = folds;
  return dump(j);
}

inline std::string summability_flag(const PadeApproximant& p) {
  bool all_left = true, on_axis = false;
  for (const auto& z : p.poles) {
    if (z.real() >= 0.0) all_left = false;
    if (z.real() >= 0.0 && std::fabs(z.imag()) < 1e-8) on_axis = true;
  }
  if (all_left) return "strict";
  return on_axis ? "obstructed" : "unobstructed";
}

inline std::string render_borel(const RunConfig& cfg) {
  using namespace detail;
  const auto w = parse_weight(cfg.weight_spec);
  const auto n_max = static_cast<std::size_t>(cfg.n_max);
  const BorelSeries borel = cfg.borel_source == BorelSource::CE ? borel_transform(ce_coefficients(w, n_max))
                                                                 : borel_transform(build_source_series(w, n_max));
  const auto L = static_cast<std::size_t>(cfg.pade_L), M = static_cast<std::size_t>(cfg.pade_M);
  const auto approx = pade(std::span<const Rational>(borel.coeffs.data(), L + M + 1), L, M);
  const double offset = approx.nearest_pole_distance({-0.5, 0.0});
  const std::string flag = summability_flag(approx);

  if (cfg.format == Format::Csv) {
    std::string out = csv_row(std::string("record"), std::string("index"), std::string("exact"), std::string("re"), std::string("im"),
                              std::string("note"));
    for (std::size_t n = 1; n < borel.coeffs.size(); ++n)
      out += csv_row(std::string("borel_coefficient"), std::to_string(n), borel.coeffs[n].to_string(), format_double(borel.coeffs[n].to_double()),
                     std::string(), std::string());
    for (std::size_t i = 0; i < approx.poles.size(); ++i)
      out += csv_row(std::string("pole"), std::to_string(i + 1), std::string(), format_double(approx.poles[i].real()),
                     format_double(approx.poles[i].imag()), std::string());
    out += csv_row(std::string("nearest_pole_offset"), std::string(), std::string(), format_double(offset), std::string(),
                   std::string("distance of the nearest pole from sigma = -1/2"));
    out += csv_row(std::string("summability"), std::string(), std::string(), std::string(), std::string(), flag);
    return out;
  }
  json j;
  j["config"] = config_json(cfg);
  json coeffs = json::array();
  for (std::size_t n = 1; n < borel.coeffs.size(); ++n) coeffs.push_back({{"n", n}, {"exact", borel.coeffs[n].to_string()}});
  j["borel_coefficients"] = coeffs;
  json poles = json::array();
  for (const auto& z : approx.poles) poles.push_back({{"re", z.real()}, {"im", z.imag()}});
  j["pade"] = {{"L", L}, {"M", M}, {"numerator", approx.numerator}, {"denominator", approx.denominator}, {"poles", poles}};
  j["nearest_pole_offset"] = json_number(offset);
  j["summability"] = flag;
  return dump(j);
}

inline std::string render(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::CeCoeffs: return render_ce_coeffs(cfg);
    case Command::Dispersion: return render_dispersion(cfg);
    case Command::Folds: return render_folds(cfg);
    case Command::Borel: return render_borel(cfg);
  }
  return {};
}

/// Writes `content` to a sibling temporary and renames it into place.
inline void write_atomically(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cli", "cannot open '" + tmp.string() + "' for writing");
    out << content;
    if (!out.flush()) throw Error(ErrorCode::InvalidArgument, "cli", "write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, target);
}

/// Validate, render, write. Returns the process exit code.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    validate(cfg);
  } catch (const Error& e) {
    err << "attractor-kit: invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  }
  std::string content;
  try {
    content = render(cfg);
  } catch (const Error& e) {
    err << "attractor-kit: computation failed in module " << e.module() << ": " << e.what() << "\n";
    return kExitCompute;
  }
  try {
    if (cfg.output_path.empty())
      out << content;
    else
      write_atomically(cfg.output_path, content);
  } catch (const std::exception& e) {
    err << "attractor-kit: " << e.what() << "\n";
    return kExitCompute;
  }
  return kExitOk;
}

}  // namespace attractor::cli

#endif  // ATTRACTOR_CLI_HPP
