#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "snowline/dimension.hpp"
#include "snowline/modulus.hpp"
#include "snowline/tangents.hpp"

namespace snowline {

inline constexpr const char* kVersion = "0.1.0";

enum class RunStatus : int {
  ok = 0,
  config_error = 2,
  invariant_violation = 3,
  solver_failure = 4,
};

namespace detail {

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
inline std::string fmt(long x) { return std::to_string(x); }
inline std::string fmt(int x) { return std::to_string(x); }
inline std::string fmt(std::uint64_t x) { return std::to_string(x); }
inline std::string fmt(bool x) { return x ? "1" : "0"; }
inline std::string fmt(const char* x) { return x; }
inline std::string fmt(const std::string& x) { return x; }

class Csv {
 public:
  template <typename... T>
  void row(const T&... cols) {
    bool first = true;
    ((out_ += (first ? "" : ","), out_ += fmt(cols), first = false), ...);
    out_ += '\n';
  }
  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// deterministic uniform double in [0,1) from the raw engine stream
inline double u01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

}  // namespace detail

struct ExperimentConfig {
  std::string kind;
  bool default_params = true;
  int n_max = 64;
  std::vector<double> alpha_seq, c_seq, s_seq;  // explicit mode
  int dimension = 2;
  std::uint64_t seed = 0;
  nlohmann::json knobs;
  std::filesystem::path out_dir = "out";

  static ExperimentConfig from_file(const std::filesystem::path& path, const std::string& kind,
                                    const std::filesystem::path& out,
                                    std::optional<std::uint64_t> seed_override,
                                    std::optional<int> n_max_override);

  ConstructionParams build_params() const {
    if (default_params) return ConstructionParams::defaults(n_max);
    return ConstructionParams::explicit_sequences(alpha_seq, c_seq, s_seq);
  }
};

inline ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path,
                                                    const std::string& kind,
                                                    const std::filesystem::path& out,
                                                    std::optional<std::uint64_t> seed_override,
                                                    std::optional<int> n_max_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config: parse failure: " + std::string(e.what()));
  }
  ExperimentConfig cfg;
  cfg.kind = kind;
  if (j.contains("kind") && j["kind"].get<std::string>() != kind)
    throw std::runtime_error("config: kind mismatch (config says " +
                             j["kind"].get<std::string>() + ")");
  if (!j.contains("params")) throw std::runtime_error("config: missing params");
  const auto& params = j["params"];
  if (params.is_string()) {
    const std::string spec = params.get<std::string>();
    int depth = 0;
    if (std::sscanf(spec.c_str(), "default(%d)", &depth) != 1 || depth < 1)
      throw std::runtime_error("config: params string must be default(<n_max>)");
    cfg.default_params = true;
    cfg.n_max = depth;
  } else if (params.is_object()) {
    cfg.default_params = false;
    cfg.alpha_seq = params.at("alpha").get<std::vector<double>>();
    cfg.c_seq = params.at("c").get<std::vector<double>>();
    cfg.s_seq = params.at("s").get<std::vector<double>>();
    cfg.n_max = static_cast<int>(cfg.alpha_seq.size());
  } else {
    throw std::runtime_error("config: params must be a string recipe or an object");
  }
  if (n_max_override) {
    if (!cfg.default_params)
      throw std::runtime_error("config: --n-max only applies to the default recipe");
    cfg.n_max = *n_max_override;
  }
  cfg.dimension = j.value("dimension", 2);
  if (cfg.dimension < 2) throw std::runtime_error("config: dimension must be >= 2");
  cfg.seed = j.value("seed", std::uint64_t{0});
  if (seed_override) cfg.seed = *seed_override;
  if (!j.contains("knobs") || !j["knobs"].is_object())
    throw std::runtime_error("config: missing knobs object");
  cfg.knobs = j["knobs"];
  cfg.out_dir = out;
  return cfg;
}

namespace detail {

struct KindResult {
  std::string csv;
  bool all_pass = true;
  bool solver_trouble = false;
  std::string failing_check;

  void contract(bool ok, const std::string& name) {
    if (!ok && all_pass) {
      all_pass = false;
      failing_check = name;
    }
  }
};

template <typename T>
T knob(const nlohmann::json& knobs, const char* name) {
  if (!knobs.contains(name))
    throw std::runtime_error(std::string("config: missing knob ") + name);
  try {
    return knobs.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::runtime_error(std::string("config: bad knob ") + name);
  }
}

// {"t": [lo, hi], "v": [[lo, hi], ...]}
inline BoxContinuum parse_box(const nlohmann::json& j) {
  try {
    BoxContinuum box;
    const auto t = j.at("t").get<std::vector<double>>();
    if (t.size() != 2) throw std::runtime_error("config: box t-range needs two numbers");
    box.t_range = {t[0], t[1]};
    for (const auto& v : j.at("v")) {
      const auto r = v.get<std::vector<double>>();
      if (r.size() != 2) throw std::runtime_error("config: box v-range needs two numbers");
      box.v_ranges.push_back({r[0], r[1]});
    }
    return box;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config: bad box: " + std::string(e.what()));
  }
}

// ---------------------------------------------------------------- verify
inline KindResult run_verify_lemmas(const ExperimentConfig& cfg, const LineMetricSpace& line) {
  const long samples = knob<long>(cfg.knobs, "samples");
  if (samples < 1) throw std::runtime_error("config: samples must be >= 1");
  std::mt19937_64 rng(cfg.seed);
  KindResult res;
  Csv csv;
  csv.row("check", "samples", "statistic", "threshold", "pass", "seed");

  auto emit = [&](const std::string& name, long ns, double stat, double thr, bool ok) {
    csv.row(name, ns, stat, thr, ok, cfg.seed);
    res.contract(ok, name);
  };

  // profile inequalities on random (alpha, c, a, b, t, x)
  double min_submult = 0.0, min_l22 = 0.0, max_l22_gap = 0.0;
  double max_branch_ulps = 0.0, max_roundtrip = 0.0, min_snowflake = 0.0;
  for (long i = 0; i < samples; ++i) {
    const double alpha = 0.02 + 0.96 * u01(rng);
    const double c = 0.01 + 0.99 * u01(rng);
    SnowflakeProfile prof(alpha, c);
    const double a = u01(rng), b = u01(rng);
    min_submult = std::min(min_submult, prof.submultiplicativity_defect(a, b));
    const double x = u01(rng), t = x * u01(rng);
    const auto [lhs, rhs] = prof.concavity_defect_bound(t, x);
    min_l22 = std::min(min_l22, lhs);
    max_l22_gap = std::max(max_l22_gap, lhs - rhs);
    if (c < 1.0) {
      const double lin = prof.slope() * c;
      const double shift = c * (1.0 - alpha);
      const double pow_branch = std::pow((c - shift) / (1.0 - shift), alpha);
      const double big = std::max(lin, pow_branch);
      const double ulp = std::nextafter(big, std::numeric_limits<double>::infinity()) - big;
      max_branch_ulps = std::max(max_branch_ulps, std::abs(lin - pow_branch) / ulp);
    }
    const double y = u01(rng);
    max_roundtrip = std::max(max_roundtrip, std::abs(prof.phi(prof.phi_inverse(y)) - y));
    min_snowflake = std::min(min_snowflake, prof.phi(x) - x);
  }
  emit("submultiplicativity_min_defect", samples, min_submult, -1e-12,
       min_submult >= -1e-12);
  emit("concavity_defect_min", samples, min_l22, -1e-12, min_l22 >= -1e-12);
  emit("concavity_defect_minus_bound_max", samples, max_l22_gap, 1e-12, max_l22_gap <= 1e-12);
  emit("profile_branch_continuity_ulps", samples, max_branch_ulps, 4.0,
       max_branch_ulps <= 4.0);
  emit("profile_roundtrip_max", samples, max_roundtrip, 1e-12, max_roundtrip <= 1e-12);
  emit("snowflake_comparison_min", samples, min_snowflake, -1e-12, min_snowflake >= -1e-12);

  // line metric axioms and near-additivity on random triples in [-2, 2]
  auto draw_point = [&](std::mt19937_64& r) {
    if (u01(r) < 0.5) return -2.0 + 4.0 * u01(r);
    const int n = 1 + static_cast<int>(u01(r) * std::min(40, line.n_max()));
    return line.a(n) + u01(r) * (line.b(n) - line.a(n));
  };
  double max_sym = 0.0, min_tri = 0.0, max_case_gap = 0.0, min_l41 = 0.0, max_l41_gap = 0.0;
  double max_l41_strong_gap = -std::numeric_limits<double>::infinity();
  double min_dom = 0.0, min_radial = 0.0;
  for (long i = 0; i < samples; ++i) {
    double x = draw_point(rng), y = draw_point(rng), z = draw_point(rng);
    max_sym = std::max(max_sym, std::abs(line.delta(x, y) - line.delta(y, x)));
    max_case_gap = std::max(max_case_gap, std::abs(line.delta(x, y) - line.delta_by_cases(x, y)));
    if (x > y) std::swap(x, y);
    if (y > z) std::swap(y, z);
    if (x > y) std::swap(x, y);
    const double defect = line.delta(x, y) + line.delta(y, z) - line.delta(x, z);
    min_tri = std::min(min_tri, defect);
    min_l41 = std::min(min_l41, defect);
    std::optional<int> first;
    for (int n = 1; n <= line.n_max() && !first; ++n)
      if (line.locate(x).n == n || line.locate(y).n == n || line.locate(z).n == n) first = n;
    if (!first) {
      max_l41_gap = std::max(max_l41_gap, defect);
    } else {
      const double factor =
          two_minus_two_pow_alpha(line.params().row(*first).one_minus_alpha);
      max_l41_gap =
          std::max(max_l41_gap, defect - factor * std::min(line.s(*first), line.delta(x, z)));
      max_l41_strong_gap = std::max(
          max_l41_strong_gap, defect - factor * std::min(line.s(*first), line.delta(x, y)));
    }
    min_dom = std::min(min_dom, line.delta(x, y) - (y - x));
    const double p = x, u = std::min(y, z), w = std::max(y, z);
    min_radial = std::min(min_radial, line.delta(p, w) - line.delta(p, u));
  }
  emit("metric_symmetry_max", samples, max_sym, 0.0, max_sym == 0.0);
  emit("metric_triangle_min_defect", samples, min_tri, -1e-12, min_tri >= -1e-12);
  emit("five_case_agreement_max", samples, max_case_gap, 1e-12, max_case_gap <= 1e-12);
  emit("near_additivity_defect_min", samples, min_l41, -1e-12, min_l41 >= -1e-12);
  emit("near_additivity_defect_minus_bound_max", samples, max_l41_gap, 1e-12, max_l41_gap <= 1e-12);
  // exploratory only: the stricter min{s_N, delta(x,y)} variant
  csv.row("near_additivity_strict_form_gap_info", samples, max_l41_strong_gap, "", true, cfg.seed);
  emit("domination_min", samples, min_dom, -1e-12, min_dom >= -1e-12);
  emit("radial_monotone_min", samples, min_radial, -1e-12, min_radial >= -1e-12);

  const double phi_c_gap = covering_phi_c_inequality_gap(line);
  emit("covering_phi_c_log_gap", line.n_max(), phi_c_gap, 1e-9, phi_c_gap <= 1e-9);

  bool contractible = true;
  for (int k = 0; k < 8; ++k) {
    const double p = draw_point(rng);
    const double r = 0.001 + 0.2 * u01(rng);
    contractible = contractible && radial_contractibility_check(line, p, r, 24);
  }
  emit("radial_contractibility", 8, contractible ? 1.0 : 0.0, 1.0, contractible);

  res.csv = csv.str();
  return res;
}

// ---------------------------------------------------------------- tangents
inline KindResult run_tangents(const ExperimentConfig& cfg, const LineMetricSpace& line) {
  const int n_from = knob<int>(cfg.knobs, "n_from");
  const int n_to = knob<int>(cfg.knobs, "n_to");
  const double R = knob<double>(cfg.knobs, "R");
  const int count = knob<int>(cfg.knobs, "count");
  if (n_from < 1 || n_to < n_from || n_to > line.n_max())
    throw std::runtime_error("config: bad tangent n range");

  std::vector<int> ns;
  std::vector<double> centers, lambdas;
  for (int n = n_from; n <= n_to; ++n) {
    ns.push_back(n);
    centers.push_back(0.5 * (line.a(n) + line.b(n)));
    lambdas.push_back(1.0 / line.s(n));
  }
  // "space": "line" (default when absent) or "product"
  std::vector<TangentRow> rows;
  if (cfg.knobs.value("space", std::string("line")) == "product") {
    ProductSpace ps(line, cfg.dimension);
    rows = tangent_convergence_experiment(ps, ns, centers, lambdas, R, count);
  } else {
    rows = tangent_convergence_experiment(line, ns, centers, lambdas, R, count);
  }

  KindResult res;
  Csv csv;
  csv.row("n", "lambda", "N", "predicted_eps", "measured_eps", "mesh", "pass");
  for (const TangentRow& row : rows) {
    const bool ok = row.measured_eps <= row.predicted_eps + 2.0 * row.mesh + 1e-12;
    csv.row(row.n, row.lambda, row.first_interval, row.predicted_eps, row.measured_eps,
            row.mesh, ok);
    res.contract(ok, "tangent_eps_bound at n=" + std::to_string(row.n));
  }
  if (!rows.empty()) {
    const bool shrinks = rows.back().measured_eps < 0.01 * R;
    res.contract(shrinks, "tangent_eps_final_below_1pct");
  }
  res.csv = csv.str();
  return res;
}

// ---------------------------------------------------------------- covering
inline KindResult run_covering(const ExperimentConfig& cfg, const LineMetricSpace& line) {
  const int n_from = knob<int>(cfg.knobs, "n_from");
  const int n_to = knob<int>(cfg.knobs, "n_to");
  const auto eps_grid = knob<std::vector<double>>(cfg.knobs, "eps");
  const auto r_fractions = knob<std::vector<double>>(cfg.knobs, "r_fractions");
  const auto beta_grid = knob<std::vector<double>>(cfg.knobs, "beta_grid");
  const auto flat_eps = knob<std::vector<double>>(cfg.knobs, "flat_eps");
  const auto doubling_scales = knob<std::vector<double>>(cfg.knobs, "doubling_scales");
  const int doubling_centers = knob<int>(cfg.knobs, "doubling_centers");
  if (n_from < 1 || n_to < n_from || n_to > line.n_max())
    throw std::runtime_error("config: bad covering n range");

  KindResult res;
  Csv csv;
  csv.row("check", "n", "beta", "r", "eps", "count", "bound", "violation", "pass");

  for (int n = n_from; n <= n_to; ++n)
    for (double eps : eps_grid)
      for (double fr : r_fractions) {
        const CoveringReport rep = covering_number_interval(line, n, fr * line.s(n), eps);
        const double violation = static_cast<double>(rep.count) / rep.bound;
        const bool ok = violation <= 1.0;
        csv.row("interval_cover", n, 0.0, rep.r, rep.eps, rep.count, rep.bound, violation, ok);
        res.contract(ok, "interval_cover at n=" + std::to_string(n));
      }

  std::vector<int> interval_ns;
  for (int n = n_from; n <= n_to; ++n) interval_ns.push_back(n);
  const auto assouad =
      assouad_dimension_estimate(line, beta_grid, interval_ns, r_fractions, eps_grid, flat_eps);
  double below_dim_worst = 0.0;
  bool any_below_dim = false;
  for (const AssouadRow& row : assouad) {
    const bool expects_bound = row.beta > 1.0;
    const bool ok = !expects_bound || row.violation <= 1.0;
    csv.row("assouad", row.n, row.beta, row.r, row.eps, row.count, row.bound, row.violation, ok);
    res.contract(ok, "assouad bound at beta=" + fmt(row.beta));
    if (row.beta < 1.0) {
      any_below_dim = true;
      below_dim_worst = std::max(below_dim_worst, row.violation);
    }
  }
  if (any_below_dim) {
    const bool brackets = below_dim_worst > 1.0;
    csv.row("assouad_bracket_below_dim", 0, 0.0, 0.0, 0.0, 0L, 1.0, below_dim_worst, brackets);
    res.contract(brackets, "assouad_bracket_below_dim");
  }

  for (double R : doubling_scales) {
    const long flat = doubling_constant_estimate(line, Interval{1.5, 2.5}, {R}, doubling_centers);
    csv.row("doubling_flat", 0, 0.0, R, 0.0, flat, 0.0, 0.0, true);
  }
  const int nmid = std::min(4, line.n_max());
  const long snow = doubling_constant_estimate(
      line, Interval{line.a(nmid), line.b(nmid)}, {line.s(nmid) / 2.0}, doubling_centers);
  csv.row("doubling_interval", nmid, 0.0, line.s(nmid) / 2.0, 0.0, snow, 0.0, 0.0, true);

  // optional product-space doubling probe on a configured box
  if (cfg.knobs.contains("product_doubling")) {
    const auto& pd = cfg.knobs.at("product_doubling");
    BoxContinuum region = parse_box(pd.at("box"));
    const auto scales = pd.at("scales").get<std::vector<double>>();
    const int centers = pd.at("centers").get<int>();
    ProductSpace ps(line, region.dim());
    for (double R : scales) {
      const long count = doubling_constant_estimate(ps, region, {R}, centers);
      csv.row("doubling_product", 0, 0.0, R, 0.0, count, 0.0, 0.0, true);
    }
  }

  res.csv = csv.str();
  return res;
}

// ---------------------------------------------------------------- modulus
inline KindResult run_modulus(const ExperimentConfig& cfg, const LineMetricSpace& line) {
  const int n_from = knob<int>(cfg.knobs, "n_from");
  const int n_to = knob<int>(cfg.knobs, "n_to");
  const int resolution = knob<int>(cfg.knobs, "resolution");
  const double p_knob = knob<double>(cfg.knobs, "p");
  const int max_iters = knob<int>(cfg.knobs, "max_iters");
  const double tol = knob<double>(cfg.knobs, "tol");
  const double control_side = knob<double>(cfg.knobs, "control_side");
  const bool dump = knob<bool>(cfg.knobs, "dump_densities");
  if (n_from < 1 || n_to < n_from || n_to > line.n_max())
    throw std::runtime_error("config: bad modulus n range");

  ProductSpace space(line, cfg.dimension);
  const double p = p_knob > 0.0 ? p_knob : static_cast<double>(cfg.dimension);
  std::vector<int> ns;
  for (int n = n_from; n <= n_to; ++n) ns.push_back(n);

  std::vector<GridDiscretization> grids;
  const auto rows =
      modulus_divergence_experiment(space, ns, resolution, p, max_iters, tol, dump ? &grids : nullptr);

  KindResult res;
  Csv csv;
  csv.row("n", "delta_ratio", "analytic_lower", "solved_value", "duality_gap", "resolution",
          "kind", "pass");
  const double expected_ratio =
      cfg.dimension == 2 ? 1.0 : 1.0 / std::sqrt(static_cast<double>(cfg.dimension) - 1.0);
  double prev_lower = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ModulusRow& row = rows[i];
    bool ok = row.converged;
    if (!row.converged) res.solver_trouble = true;
    ok = ok && std::abs(row.delta_ratio - expected_ratio) <=
                   (cfg.dimension == 2 ? 0.0 : 1e-12);
    ok = ok && row.solved_value >= 0.9 * row.analytic_lower &&
         row.solved_value <= 1.1 * row.analytic_lower;
    ok = ok && row.analytic_lower > prev_lower;
    prev_lower = row.analytic_lower;
    csv.row(row.n, row.delta_ratio, row.analytic_lower, row.solved_value, row.duality_gap,
            row.resolution, "interval", ok);
    res.contract(ok, "modulus row n=" + std::to_string(row.n));
    if (dump && i < grids.size())
      write_density_dump(grids[i],
                         (cfg.out_dir / ("density_n" + std::to_string(row.n) + ".bin")).string());
  }
  const ModulusRow control =
      modulus_flat_control_row(space, control_side, resolution, p, max_iters, tol);
  const bool control_ok =
      control.converged && std::abs(control.solved_value - 1.0) <= 0.1;
  if (!control.converged) res.solver_trouble = true;
  csv.row(control.n, control.delta_ratio, control.analytic_lower, control.solved_value,
          control.duality_gap, control.resolution, "flat_control", control_ok);
  res.contract(control_ok, "modulus flat control");

  res.csv = csv.str();
  return res;
}

// ---------------------------------------------------------------- sphere
inline KindResult run_sphere_metric(const ExperimentConfig& cfg, const LineMetricSpace& line) {
  const long samples = knob<long>(cfg.knobs, "samples");
  if (samples < 1) throw std::runtime_error("config: samples must be >= 1");
  ProductSpace space(line, cfg.dimension);
  std::mt19937_64 rng(cfg.seed);
  const int d = cfg.dimension;

  auto draw_ball_point = [&]() {
    std::vector<double> z(static_cast<std::size_t>(d));
    while (true) {
      double n2 = 0.0;
      for (double& zi : z) {
        zi = -1.0 + 2.0 * u01(rng);
        n2 += zi * zi;
      }
      if (n2 < 0.998) return z;  // keep clear of the boundary blow-up
    }
  };

  double max_defect = 0.0, max_value = 0.0, min_value = 0.0;
  for (long i = 0; i < samples; ++i) {
    const auto x = draw_ball_point(), y = draw_ball_point(), z = draw_ball_point();
    const double dxy = space.compactified_metric(x, y);
    const double dyz = space.compactified_metric(y, z);
    const double dxz = space.compactified_metric(x, z);
    max_defect = std::max(max_defect, dxz - dxy - dyz);
    max_value = std::max({max_value, dxy, dyz, dxz});
    min_value = std::min({min_value, dxy, dyz, dxz});
  }

  KindResult res;
  Csv csv;
  csv.row("check", "samples", "statistic", "threshold", "pass", "seed");
  const bool tri_ok = max_defect <= 1e-12;
  csv.row("sphere_triangle_max_defect", samples, max_defect, 1e-12, tri_ok, cfg.seed);
  res.contract(tri_ok, "sphere_triangle_max_defect");
  const bool hi_ok = max_value < 1.0;
  csv.row("sphere_value_max", samples, max_value, 1.0, hi_ok, cfg.seed);
  res.contract(hi_ok, "sphere_value_max");
  const bool lo_ok = min_value >= 0.0;
  csv.row("sphere_value_min", samples, min_value, 0.0, lo_ok, cfg.seed);
  res.contract(lo_ok, "sphere_value_min");

  // optional pinned point pairs from the config
  if (cfg.knobs.contains("pairs")) {
    long idx = 0;
    for (const auto& pair : cfg.knobs.at("pairs")) {
      const auto x = pair.at(0).get<std::vector<double>>();
      const auto y = pair.at(1).get<std::vector<double>>();
      const double value = space.compactified_metric(x, y);
      const bool ok = value >= 0.0 && value < 1.0;
      csv.row("sphere_pair_" + std::to_string(idx++), 1L, value, 1.0, ok, cfg.seed);
      res.contract(ok, "sphere pinned pair");
    }
  }
  res.csv = csv.str();
  return res;
}

}  // namespace detail

struct RunResult {
  RunStatus status = RunStatus::ok;
  std::string message;
  std::filesystem::path csv_path;
  std::filesystem::path manifest_path;
};

/// Dispatches a configured experiment, writes <out>/<kind>.csv and a
/// manifest with a content digest, and maps contract failures to exit
/// statuses.
inline RunResult run_experiment(const ExperimentConfig& cfg) {
  RunResult out;
  detail::KindResult kind_res;
  LineMetricSpace line(cfg.build_params());

  if (cfg.kind == "verify-lemmas")
    kind_res = detail::run_verify_lemmas(cfg, line);
  else if (cfg.kind == "tangents")
    kind_res = detail::run_tangents(cfg, line);
  else if (cfg.kind == "covering")
    kind_res = detail::run_covering(cfg, line);
  else if (cfg.kind == "modulus")
    kind_res = detail::run_modulus(cfg, line);
  else if (cfg.kind == "sphere-metric")
    kind_res = detail::run_sphere_metric(cfg, line);
  else
    throw std::runtime_error("config: unknown kind " + cfg.kind);

  std::filesystem::create_directories(cfg.out_dir);
  std::string csv_name = cfg.kind + ".csv";
  for (char& ch : csv_name)
    if (ch == '-') ch = '_';
  out.csv_path = cfg.out_dir / csv_name;
  {
    std::ofstream f(out.csv_path, std::ios::binary);
    f << kind_res.csv;
  }

  nlohmann::json manifest;
  manifest["artifact"] = "snowline";
  manifest["version"] = kVersion;
  manifest["kind"] = cfg.kind;
  manifest["seed"] = cfg.seed;
  manifest["dimension"] = cfg.dimension;
  manifest["n_max"] = cfg.n_max;
  manifest["params"] = cfg.default_params ? ("default(" + std::to_string(cfg.n_max) + ")")
                                          : std::string("explicit");
  if (cfg.default_params) manifest["truncation_tail_bound"] = line.truncation_tail_bound();
  manifest["knobs"] = cfg.knobs;
  char digest[20];
  std::snprintf(digest, sizeof digest, "%016" PRIx64, detail::fnv1a64(kind_res.csv));
  manifest["csv"] = {{"file", csv_name}, {"fnv1a64", std::string(digest)}};
  manifest["all_contracts_held"] = kind_res.all_pass;
  if (!kind_res.all_pass) manifest["failing_check"] = kind_res.failing_check;
  out.manifest_path = cfg.out_dir / "manifest.json";
  {
    std::ofstream f(out.manifest_path, std::ios::binary);
    f << manifest.dump(2) << '\n';
  }

  if (kind_res.solver_trouble) {
    out.status = RunStatus::solver_failure;
    out.message = "solver failed to converge: " + kind_res.failing_check;
  } else if (!kind_res.all_pass) {
    out.status = RunStatus::invariant_violation;
    out.message = "contract failed: " + kind_res.failing_check;
  }
  return out;
}

}  // namespace snowline
