#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "bohr/asympt.hpp"
#include "bohr/bohrcheck.hpp"
#include "bohr/errors.hpp"
#include "bohr/solver.hpp"
#include "bohr/toeplitz.hpp"
#include "cache.hpp"

namespace bohr::cli {
namespace {

using nlohmann::json;

enum class Format { json, csv };

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string num(double v) { return fmt::format("{:.17g}", v); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

int parse_int(const std::string& s) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw UsageError("not an integer: '" + s + "'");
  return v;
}

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> ns;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string::npos ? text.size() : comma;
    ns.push_back(parse_int(text.substr(start, end - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return ns;
}

// "lo..hi" -> 2^lo, 2^{lo+1}, ..., 2^hi
std::vector<int> parse_pow2(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    throw UsageError("--n-pow2 expects lo..hi, got '" + text + "'");
  }
  const int lo = parse_int(text.substr(0, dots));
  const int hi = parse_int(text.substr(dots + 2));
  if (lo < 0 || hi < lo || hi > 30) {
    throw UsageError("--n-pow2 needs 0 <= lo <= hi <= 30, got '" + text + "'");
  }
  std::vector<int> ns;
  for (int e = lo; e <= hi; ++e) ns.push_back(1 << e);
  return ns;
}

struct DegreeSelection {
  std::string list;
  std::string pow2;

  std::vector<int> resolve(int min_n) const {
    if (list.empty() == pow2.empty()) {
      throw UsageError("give exactly one of --n-list or --n-pow2");
    }
    auto ns = list.empty() ? parse_pow2(pow2) : parse_n_list(list);
    for (int n : ns) {
      if (n < min_n) {
        throw UsageError("degree " + std::to_string(n) + " is below " +
                         std::to_string(min_n));
      }
    }
    std::stable_sort(ns.begin(), ns.end());
    return ns;
  }
};

std::optional<Method> parse_method(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "direct") return Method::direct;
  if (s == "spectral") return Method::spectral;
  if (s == "both") return Method::both;
  throw UsageError("unknown method '" + s + "'");
}

void check_method_for(int n, std::optional<Method> m) {
  if (m == Method::spectral && n < spectral::kMinSpectralDegree) {
    throw UsageError("--method spectral needs n >= 7 (got " +
                     std::to_string(n) + "); use --method direct");
  }
}

void check_tol(double tol) {
  if (!(tol > 0.0)) throw UsageError("--tol must be > 0");
}

// Radii for each degree, reusing and extending the cache when one is given.
std::vector<double> compute_radii(const std::vector<int>& ns, double tol,
                                  std::optional<Method> method,
                                  const std::string& cache_path) {
  std::optional<ResultCache> cache;
  if (!cache_path.empty()) cache.emplace(cache_path);
  std::vector<double> radii;
  radii.reserve(ns.size());
  for (int n : ns) {
    if (cache) {
      if (auto hit = cache->lookup(n, tol)) {
        radii.push_back(*hit);
        continue;
      }
    }
    const auto res = radius(n, {tol, method});
    const double value = reported_radius(res);
    if (cache) cache->append(n, value, tol);
    radii.push_back(value);
  }
  return radii;
}

json bracket_json(const RootBracket& b) {
  return {{"lo", b.lo}, {"hi", b.hi}, {"sign_lo", b.sign_lo}, {"sign_hi", b.sign_hi}};
}

int cmd_radius(int n, const std::string& method_text, double tol, Format fmt_out,
               std::ostream& out) {
  if (n < 1) throw UsageError("--n must be >= 1");
  check_tol(tol);
  const auto method = parse_method(method_text);
  check_method_for(n, method);

  const auto res = radius(n, {tol, method});
  const double value = reported_radius(res);
  if (fmt_out == Format::csv) {
    out << "n,radius,method,iterations\n";
    out << n << ',' << num(value) << ',' << to_string(res.method) << ','
        << res.iterations << '\n';
    return kOk;
  }
  json j = {{"n", n},
            {"radius", value},
            {"method", to_string(res.method)},
            {"no_root", !res.has_root()},
            {"iterations", res.iterations},
            {"tol", tol}};
  if (res.has_root()) {
    j["residual_sign"] = res.residual.sign;
    j["residual_log10"] = finite_or_null(res.residual.log10_abs());
  }
  if (res.bracket_used) j["bracket"] = bracket_json(*res.bracket_used);
  if (res.x_root) j["x_root"] = *res.x_root;
  if (!res.note.empty()) j["note"] = res.note;
  out << j.dump() << '\n';
  return kOk;
}

int cmd_det(int n, double r, bool dense_check, Format fmt_out, std::ostream& out,
            std::ostream& err) {
  if (n < 0) throw UsageError("--n must be >= 0");
  if (!(r >= 0.0 && r < 1.0)) throw UsageError("--r must lie in [0, 1)");
  if (dense_check && n > kDenseMaxDegree) {
    throw UsageError("--dense-check supports n <= " + std::to_string(kDenseMaxDegree));
  }
  const auto d = delta({n, r});
  std::optional<double> dense;
  bool agree = true;
  if (dense_check) {
    dense = dense_det(build_matrix({n, r}));
    agree = std::abs(*dense - d.value()) <= 1e-9 * std::max(1.0, std::abs(*dense));
  }

  if (fmt_out == Format::csv) {
    out << "n,r,det,sign,log_abs" << (dense ? ",dense" : "") << '\n';
    out << n << ',' << num(r) << ',' << num(d.value()) << ',' << d.sign << ','
        << (std::isfinite(d.log_mag) ? num(d.log_mag) : std::string{})
        << (dense ? "," + num(*dense) : std::string{}) << '\n';
  } else {
    json j = {{"n", n},
              {"r", r},
              {"det", d.value()},
              {"sign", d.sign},
              {"log_abs", finite_or_null(d.log_mag)},
              {"rescaled", !d.raw.has_value()}};
    if (dense) {
      j["dense"] = *dense;
      j["dense_agrees"] = agree;
    }
    out << j.dump() << '\n';
  }
  if (!agree) {
    err << "det: recurrence and dense determinant disagree\n";
    return kComputationFailure;
  }
  return kOk;
}

int cmd_table(const DegreeSelection& sel, const std::string& method_text,
              double tol, const std::string& cache_path, Format fmt_out,
              std::ostream& out) {
  check_tol(tol);
  const auto ns = sel.resolve(1);
  const auto method = parse_method(method_text);
  for (int n : ns) check_method_for(n, method);

  const auto radii = compute_radii(ns, tol, method, cache_path);
  if (fmt_out == Format::csv) {
    out << "n,radius\n";
    for (std::size_t i = 0; i < ns.size(); ++i) {
      out << ns[i] << ',' << num(radii[i]) << '\n';
    }
    return kOk;
  }
  json rows = json::array();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    rows.push_back({{"n", ns[i]}, {"radius", radii[i]}});
  }
  out << json{{"rows", rows}}.dump() << '\n';
  return kOk;
}

int cmd_asym(const DegreeSelection& sel, double tol, bool with_richardson,
             int order, const std::string& cache_path, Format fmt_out,
             std::ostream& out) {
  check_tol(tol);
  const auto ns = sel.resolve(2);
  if (with_richardson) {
    if (order != 1 && order != 2) throw UsageError("--order must be 1 or 2");
    if (ns.size() < static_cast<std::size_t>(order) + 1) {
      throw UsageError("--richardson needs at least order + 1 degrees");
    }
    for (std::size_t i = 1; i < ns.size(); ++i) {
      if (ns[i] != 2 * ns[i - 1]) {
        throw UsageError("--richardson needs degrees that double at each step");
      }
    }
  }

  const auto radii = compute_radii(ns, tol, std::nullopt, cache_path);
  std::vector<asympt::AsymRow> rows;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    rows.push_back(asympt::asym_row_from_radius(ns[i], radii[i]));
  }
  std::optional<asympt::ExtrapolationResult> extrapolated;
  if (with_richardson) extrapolated = asympt::richardson(rows, order);

  if (fmt_out == Format::csv) {
    out << "n,radius,c,deviation,eps\n";
    for (const auto& row : rows) {
      out << row.n << ',' << num(row.radius) << ',' << num(row.c) << ','
          << num(row.deviation) << ',' << (row.eps ? num(*row.eps) : std::string{})
          << '\n';
    }
    if (extrapolated) {
      out << "# richardson order=" << extrapolated->order_assumed
          << " estimate=" << num(extrapolated->estimate)
          << " limit=" << num(asympt::kLimitConstant) << '\n';
    }
    return kOk;
  }
  json jrows = json::array();
  for (const auto& row : rows) {
    jrows.push_back({{"n", row.n},
                     {"radius", row.radius},
                     {"c", row.c},
                     {"deviation", row.deviation},
                     {"eps", row.eps ? json(*row.eps) : json(nullptr)}});
  }
  json j = {{"rows", jrows}, {"limit", asympt::kLimitConstant}};
  if (extrapolated) {
    j["richardson"] = {{"order", extrapolated->order_assumed},
                       {"estimate", extrapolated->estimate}};
  }
  out << j.dump() << '\n';
  return kOk;
}

json witness_json(const check::BohrWitness& w) {
  json coeffs = json::array();
  for (const auto& c : w.poly.coeffs()) coeffs.push_back({c.real(), c.imag()});
  return {{"coeffs", coeffs},
          {"r", w.r},
          {"majorant", w.majorant},
          {"supnorm", w.supnorm},
          {"gap", w.gap}};
}

struct VerifyArgs {
  int n = 0;
  double r = -1.0;
  int restarts = 200;
  int samples = 0;
  std::uint64_t seed = 0;
  std::string mode = "auto";
  bool empirical = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  if (a.n < 1) throw UsageError("--n must be >= 1");
  if (a.restarts < 1) throw UsageError("--restarts must be >= 1");
  if (a.samples != 0 && a.samples < check::min_samples(a.n)) {
    throw UsageError("--samples must be >= 4(n+1) = " +
                     std::to_string(check::min_samples(a.n)));
  }
  check::CoefficientMode mode = check::CoefficientMode::automatic;
  if (a.mode == "real") {
    mode = check::CoefficientMode::real;
  } else if (a.mode == "complex") {
    mode = check::CoefficientMode::complex;
  } else if (a.mode != "auto") {
    throw UsageError("--mode must be real, complex or auto");
  }

  if (a.empirical) {
    if (a.n < 2) throw UsageError("--empirical needs n >= 2");
    const auto interval = check::empirical_radius(a.n, a.restarts, a.seed);
    const double solved = reported_radius(radius(a.n));
    json j = {{"n", a.n},
              {"restarts", a.restarts},
              {"seed", a.seed},
              {"radius", solved},
              {"lo", interval.lo},
              {"hi", interval.hi ? json(*interval.hi) : json(nullptr)},
              {"conclusive", interval.conclusive()}};
    out << j.dump() << '\n';
    return kOk;
  }

  if (!(a.r > 0.0 && a.r < 1.0)) throw UsageError("--r must lie in (0, 1)");
  check::SearchOptions opts;
  opts.restarts = a.restarts;
  opts.samples = a.samples;
  opts.seed = a.seed;
  opts.mode = mode;
  const auto witness = check::search_violation(a.n, a.r, opts);
  const double solved = reported_radius(radius(a.n));
  json j = {{"n", a.n},
            {"r", a.r},
            {"radius", solved},
            {"mode", check::to_string(mode)},
            {"restarts", a.restarts},
            {"seed", a.seed},
            {"violation", witness.has_value()},
            {"witness", witness ? witness_json(*witness) : json(nullptr)}};
  out << j.dump() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Bohr radius of degree-n polynomials", "bohr"};
  app.require_subcommand(1);

  const std::map<std::string, Format> formats{{"json", Format::json},
                                              {"csv", Format::csv}};

  int n = 0;
  double r = 0.0;
  double tol = kDefaultTolerance;
  std::string method;
  std::string cache_path;
  bool dense_check = false;
  bool with_richardson = false;
  int order = 1;
  DegreeSelection sel;
  VerifyArgs verify_args;
  Format format_json_default = Format::json;
  Format format_csv_default = Format::csv;

  auto* radius_cmd = app.add_subcommand("radius", "Bohr radius R_n for one degree");
  radius_cmd->add_option("--n", n, "degree")->required();
  radius_cmd->add_option("--method", method, "direct | spectral | both");
  radius_cmd->add_option("--tol", tol, "bisection tolerance");
  radius_cmd->add_option("--format", format_json_default, "json | csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* det_cmd = app.add_subcommand("det", "Toeplitz determinant Delta_n(r)");
  det_cmd->add_option("--n", n, "degree")->required();
  det_cmd->add_option("--r", r, "radius in [0,1)")->required();
  det_cmd->add_flag("--dense-check", dense_check,
                    "compare against dense elimination (n <= 64)");
  det_cmd->add_option("--format", format_json_default, "json | csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* table_cmd = app.add_subcommand("table", "R_n for a list of degrees");
  table_cmd->add_option("--n-list", sel.list, "comma-separated degrees");
  table_cmd->add_option("--n-pow2", sel.pow2, "lo..hi: degrees 2^lo .. 2^hi");
  table_cmd->add_option("--method", method, "direct | spectral | both");
  table_cmd->add_option("--tol", tol, "bisection tolerance");
  table_cmd->add_option("--cache", cache_path, "results cache file");
  table_cmd->add_option("--format", format_csv_default, "csv | json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* asym_cmd = app.add_subcommand("asym", "convergence of n^2 (R_n - 1/3)");
  asym_cmd->add_option("--n-pow2", sel.pow2, "lo..hi: degrees 2^lo .. 2^hi");
  asym_cmd->add_option("--n-list", sel.list, "comma-separated degrees");
  asym_cmd->add_option("--tol", tol, "bisection tolerance");
  asym_cmd->add_flag("--richardson", with_richardson, "Richardson extrapolation");
  asym_cmd->add_option("--order", order, "Richardson order (1 or 2)");
  asym_cmd->add_option("--cache", cache_path, "results cache file");
  asym_cmd->add_option("--format", format_csv_default, "csv | json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* verify_cmd =
      app.add_subcommand("verify", "search for Bohr-inequality violations");
  verify_cmd->add_option("--n", verify_args.n, "degree")->required();
  verify_cmd->add_option("--r", verify_args.r, "radius in (0,1)");
  verify_cmd->add_option("--restarts", verify_args.restarts, "random restarts");
  verify_cmd->add_option("--samples", verify_args.samples,
                         "sup-norm grid size (>= 4(n+1))");
  verify_cmd->add_option("--seed", verify_args.seed, "random seed");
  verify_cmd->add_option("--mode", verify_args.mode, "real | complex | auto");
  verify_cmd->add_flag("--empirical", verify_args.empirical,
                       "bisect for the empirical radius instead");

  std::vector<const char*> argv{"bohr"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (radius_cmd->parsed()) {
      return cmd_radius(n, method, tol, format_json_default, out);
    }
    if (det_cmd->parsed()) {
      return cmd_det(n, r, dense_check, format_json_default, out, err);
    }
    if (table_cmd->parsed()) {
      return cmd_table(sel, method, tol, cache_path, format_csv_default, out);
    }
    if (asym_cmd->parsed()) {
      return cmd_asym(sel, tol, with_richardson, order, cache_path,
                      format_csv_default, out);
    }
    if (verify_cmd->parsed()) {
      return cmd_verify(verify_args, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const CrossCheckError& e) {
    err << "error: " << e.what()
        << fmt::format(" (direct {:.17g}, spectral {:.17g})", e.direct, e.spectral)
        << '\n';
    return kComputationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputationFailure;
  }
  err << "error: no subcommand\n";
  return kUsageError;
}

}  // namespace bohr::cli
