#include "hrt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "hrt/error.hpp"
#include "hrt/estimators.hpp"
#include "hrt/minmax.hpp"
#include "hrt/oracles.hpp"
#include "hrt/random_stream.hpp"

namespace hrt {
namespace {

using nlohmann::json;

#ifndef HRT_VERSION
#define HRT_VERSION "0.0.0"
#endif

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ConfigError(fmt::format("config field '{}': {}", path, what));
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) field_error(path.empty() ? key : path + "." + key, "unknown key");
  }
}

double get_real(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = obj.at(key);
  if (!v.is_number()) field_error(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) field_error(path, "expected a finite number");
  return d;
}

std::uint64_t get_count(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    field_error(path, "expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

Distribution parse_component(const json& c, const std::string& path) {
  if (!c.is_object()) field_error(path, "expected an object");
  if (!c.contains("family") || !c.at("family").is_string()) field_error(path + ".family", "expected a string");
  const std::string family = c.at("family").get<std::string>();
  try {
    if (family == "weibull") {
      check_keys(c, path, {"family", "shape", "scale", "count"});
      for (const char* key : {"shape", "scale"}) {
        if (!c.contains(key)) field_error(path + "." + key, "missing");
      }
      return Distribution::weibull(get_real(c, "shape", path + ".shape"), get_real(c, "scale", path + ".scale"));
    }
    if (family == "lognormal") {
      check_keys(c, path, {"family", "mu", "sigma", "mu_dB", "sigma_dB", "count"});
      const bool has_db = c.contains("mu_dB") || c.contains("sigma_dB");
      const bool has_nat = c.contains("mu") || c.contains("sigma");
      if (has_db) {
        for (const char* key : {"mu_dB", "sigma_dB"}) {
          if (!c.contains(key)) field_error(path + "." + key, "missing");
        }
        auto params = LognormalParams::from_db(get_real(c, "mu_dB", path + ".mu_dB"),
                                               get_real(c, "sigma_dB", path + ".sigma_dB"));
        // dB form takes precedence; a natural-domain form given alongside must agree with it.
        if (c.contains("mu") && std::abs(get_real(c, "mu", path + ".mu") - params.mu) > 1e-12 * (1.0 + std::abs(params.mu))) {
          field_error(path + ".mu", "inconsistent with mu_dB");
        }
        if (c.contains("sigma") &&
            std::abs(get_real(c, "sigma", path + ".sigma") - params.sigma) > 1e-12 * (1.0 + params.sigma)) {
          field_error(path + ".sigma", "inconsistent with sigma_dB");
        }
        return Distribution(params);
      }
      if (has_nat) {
        for (const char* key : {"mu", "sigma"}) {
          if (!c.contains(key)) field_error(path + "." + key, "missing");
        }
        return Distribution::lognormal(get_real(c, "mu", path + ".mu"), get_real(c, "sigma", path + ".sigma"));
      }
      field_error(path, "lognormal needs mu/sigma or mu_dB/sigma_dB");
    }
  } catch (const DomainError& e) {
    field_error(path, e.what());
  }
  field_error(path + ".family", fmt::format("unknown family '{}' (expected weibull or lognormal)", family));
}

std::vector<double> parse_theta_grid(const json& g) {
  std::vector<double> grid;
  if (g.is_array()) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g[i].is_number()) field_error(fmt::format("theta_grid[{}]", i), "expected a number");
      grid.push_back(g[i].get<double>());
    }
  } else if (g.is_object()) {
    check_keys(g, "theta_grid", {"start", "stop", "step"});
    for (const char* key : {"start", "stop", "step"}) {
      if (!g.contains(key)) field_error(std::string("theta_grid.") + key, "missing");
    }
    const double start = get_real(g, "start", "theta_grid.start");
    const double stop = get_real(g, "stop", "theta_grid.stop");
    const double step = get_real(g, "step", "theta_grid.step");
    if (!(step > 0.0)) field_error("theta_grid.step", "must be positive");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) grid.push_back(start + step * static_cast<double>(i));
  } else {
    field_error("theta_grid", "expected a list or {start, stop, step}");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] < 1.0)) field_error(fmt::format("theta_grid[{}]", i), "must lie in [0, 1)");
  }
  return grid;
}

std::string real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.12e}", v);
}

std::string csv_preamble(const ExperimentConfig& config, const std::string& command) {
  return fmt::format("# hrtsim {} command={} config_hash={:016x} seed={}\n", HRT_VERSION, command,
                     config.config_hash, config.seed);
}

double theta_for(const ExperimentConfig& config, const MinmaxSolution& sol) {
  return config.theta_override ? *config.theta_override : sol.theta_star;
}

EstimatorOptions estimator_options(const ExperimentConfig& config, const RunOptions& options) {
  EstimatorOptions eo;
  eo.workers = options.workers;
  eo.confidence.confidence_constant = config.confidence_constant;
  return eo;
}

std::uint64_t is_seed(const ExperimentConfig& config, std::size_t t) { return derive_seed(config.seed, 2 * t); }
std::uint64_t naive_seed(const ExperimentConfig& config, std::size_t t) {
  return derive_seed(config.seed, 2 * t + 1);
}

void require_naive_scale(const ExperimentConfig& config, const RunOptions& options) {
  if (config.samples_naive > kNaiveSampleCap && !options.allow_large) {
    throw ConfigError(fmt::format("samples_naive = {} exceeds {}; pass --allow-large to run it", config.samples_naive,
                                  kNaiveSampleCap));
  }
}

std::string clamp_warning(const Threshold& t, const MinmaxSolution& sol) {
  return fmt::format("warning: threshold {} dB: objective A = {:.6g} <= N, theta clamped to 0 (naive sampling)\n",
                     t.db, sol.objective_A);
}

}  // namespace

SumProblem ExperimentConfig::problem(const Threshold& t) const {
  return SumProblem(components, t.linear);
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError(fmt::format("config parse error at line {}, column {}: {}", line, column, e.what()));
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  ExperimentConfig cfg;
  cfg.config_hash = fnv1a(text);
  check_keys(doc, "",
             {"components", "thresholds_dB", "thresholds_linear", "samples_is", "samples_naive", "seed",
              "theta_override", "confidence_constant", "theta_grid", "output_dir"});

  if (!doc.contains("components") || !doc["components"].is_array() || doc["components"].empty()) {
    field_error("components", "expected a nonempty list");
  }
  const auto& comps = doc["components"];
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string path = fmt::format("components[{}]", i);
    const Distribution d = parse_component(comps[i], path);
    std::uint64_t count = 1;
    if (comps[i].contains("count")) {
      count = get_count(comps[i], "count", path + ".count");
      if (count == 0) field_error(path + ".count", "must be at least 1");
    }
    for (std::uint64_t k = 0; k < count; ++k) cfg.components.push_back(d);
  }

  const bool has_db = doc.contains("thresholds_dB");
  const bool has_lin = doc.contains("thresholds_linear");
  if (has_db == has_lin) throw ConfigError("config needs exactly one of thresholds_dB or thresholds_linear");
  const std::string tkey = has_db ? "thresholds_dB" : "thresholds_linear";
  const auto& ts = doc[tkey];
  if (!ts.is_array() || ts.empty()) field_error(tkey, "expected a nonempty list");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::string path = fmt::format("{}[{}]", tkey, i);
    if (!ts[i].is_number()) field_error(path, "expected a number");
    const double v = ts[i].get<double>();
    if (has_db) {
      const double lin = db_to_linear(v);
      if (!std::isfinite(v) || !(lin > 0.0) || !std::isfinite(lin)) field_error(path, "threshold out of range");
      cfg.thresholds.push_back({lin, v});
    } else {
      if (!(v > 0.0) || !std::isfinite(v)) field_error(path, "linear threshold must be positive");
      cfg.thresholds.push_back({v, linear_to_db(v)});
    }
  }

  if (doc.contains("samples_is")) cfg.samples_is = get_count(doc, "samples_is", "samples_is");
  if (doc.contains("samples_naive")) cfg.samples_naive = get_count(doc, "samples_naive", "samples_naive");
  if (cfg.samples_is == 0) field_error("samples_is", "must be positive");
  if (cfg.samples_naive == 0) field_error("samples_naive", "must be positive");
  if (doc.contains("seed")) cfg.seed = get_count(doc, "seed", "seed");
  if (doc.contains("theta_override") && !doc["theta_override"].is_null()) {
    const double th = get_real(doc, "theta_override", "theta_override");
    if (!(th >= 0.0 && th < 1.0)) field_error("theta_override", "must lie in [0, 1)");
    cfg.theta_override = th;
  }
  if (doc.contains("confidence_constant")) {
    cfg.confidence_constant = get_real(doc, "confidence_constant", "confidence_constant");
    if (!(cfg.confidence_constant > 0.0)) field_error("confidence_constant", "must be positive");
  }
  if (doc.contains("theta_grid")) cfg.theta_grid = parse_theta_grid(doc["theta_grid"]);
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) field_error("output_dir", "expected a string");
    cfg.output_dir = doc["output_dir"].get<std::string>();
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

CommandOutput cmd_solve(const ExperimentConfig& config, const RunOptions&) {
  CommandOutput out;
  json report = json::array();
  const std::size_t n = config.components.size();
  const bool identical = std::all_of(config.components.begin(), config.components.end(), [&](const Distribution& d) {
    return d.describe() == config.components.front().describe();
  });

  for (const auto& t : config.thresholds) {
    const SumProblem problem = config.problem(t);
    const MinmaxSolution sol = solve_pprime(problem);
    json row{{"gamma", t.linear},
             {"gamma_dB", t.db},
             {"x_star", sol.x_star},
             {"objective_A", sol.objective_A},
             {"dominant_index", sol.dominant_index + 1},
             {"dominant_index_closed_rule", dominant_index(problem) + 1},
             {"theta_star", sol.theta_star},
             {"second_moment_bound", sol.second_moment_bound},
             {"clamped", sol.clamped}};
    if (identical) {
      const double hazard = config.components.front().hazard_function(t.linear);
      if (hazard > 0.0) row["iid_theta_reference"] = iid_theta_reference(hazard, n);
    }
    report.push_back(row);
    out.summary += fmt::format("gamma = {} dB: A = {:.10g}, theta* = {:.10g}, i0 = {}, bound = {:.6e}{}\n", t.db,
                               sol.objective_A, sol.theta_star, sol.dominant_index + 1, sol.second_moment_bound,
                               sol.clamped ? " (clamped)" : "");
    if (sol.clamped) out.diagnostics += clamp_warning(t, sol);
  }
  json doc{{"tool", "hrtsim"},
           {"version", HRT_VERSION},
           {"command", "solve"},
           {"config_hash", fmt::format("{:016x}", config.config_hash)},
           {"solutions", report}};
  out.files.push_back({"solve.json", doc.dump(2) + "\n"});
  return out;
}

CommandOutput cmd_ccdf(const ExperimentConfig& config, const RunOptions& options) {
  require_naive_scale(config, options);
  CommandOutput out;
  std::string csv = csv_preamble(config, "ccdf") + "gamma_dB,alpha_naive,alpha_is,se_naive,se_is\n";
  const auto eo = estimator_options(config, options);
  for (std::size_t i = 0; i < config.thresholds.size(); ++i) {
    const auto& t = config.thresholds[i];
    const SumProblem problem = config.problem(t);
    const MinmaxSolution sol = solve_pprime(problem);
    if (sol.clamped && !config.theta_override) out.diagnostics += clamp_warning(t, sol);
    const auto is = is_estimate(problem, theta_for(config, sol), config.samples_is, is_seed(config, i), eo);
    const auto mc = naive_mc(problem, config.samples_naive, naive_seed(config, i), eo);
    csv += fmt::format("{},{},{},{},{}\n", real(t.db), real(mc.alpha_hat), real(is.alpha_hat),
                       real(mc.standard_error), real(is.standard_error));
    out.summary += fmt::format("{:>8.3f} dB  naive {:.4e}  IS {:.4e} (se {:.2e})\n", t.db, mc.alpha_hat,
                               is.alpha_hat, is.standard_error);
  }
  out.files.push_back({"ccdf.csv", csv});
  return out;
}

CommandOutput cmd_freq_table(const ExperimentConfig& config, const RunOptions& options) {
  require_naive_scale(config, options);
  CommandOutput out;
  std::string csv = csv_preamble(config, "freq-table") + "gamma_dB,alpha_is,freq_is,freq_naive\n";
  const auto eo = estimator_options(config, options);
  for (std::size_t i = 0; i < config.thresholds.size(); ++i) {
    const auto& t = config.thresholds[i];
    const SumProblem problem = config.problem(t);
    const MinmaxSolution sol = solve_pprime(problem);
    if (sol.clamped && !config.theta_override) out.diagnostics += clamp_warning(t, sol);
    const auto is = is_estimate(problem, theta_for(config, sol), config.samples_is, is_seed(config, i), eo);
    const auto mc = naive_mc(problem, config.samples_naive, naive_seed(config, i), eo);
    csv += fmt::format("{},{},{},{}\n", real(t.db), real(is.alpha_hat), is.hit_frequency, mc.hit_frequency);
    out.summary += fmt::format("{:>8.3f} dB  alpha_IS {:.3e}  IS freq {:>8}  MC freq {:>8}\n", t.db, is.alpha_hat,
                               is.hit_frequency, mc.hit_frequency);
  }
  out.files.push_back({"freq_table.csv", csv});
  return out;
}

CommandOutput cmd_efficiency(const ExperimentConfig& config, const RunOptions& options) {
  CommandOutput out;
  std::string csv = csv_preamble(config, "efficiency") + "gamma_dB,rel_err_naive,rel_err_is,k\n";
  const auto eo = estimator_options(config, options);
  const ConfidenceConfig cc{config.confidence_constant};
  for (std::size_t i = 0; i < config.thresholds.size(); ++i) {
    const auto& t = config.thresholds[i];
    const SumProblem problem = config.problem(t);
    const MinmaxSolution sol = solve_pprime(problem);
    if (sol.clamped && !config.theta_override) out.diagnostics += clamp_warning(t, sol);
    const auto is = is_estimate(problem, theta_for(config, sol), config.samples_is, is_seed(config, i), eo);
    if (!(is.alpha_hat > 0.0 && is.alpha_hat < 1.0)) {
      out.diagnostics += fmt::format("skipping threshold {} dB: IS estimate {} leaves the metrics undefined\n", t.db,
                                     is.alpha_hat);
      continue;
    }
    const double eps_mc = relative_error_naive(is.alpha_hat, config.samples_naive, cc);
    const double eps_is = relative_error_is(is, cc);
    const double k = efficiency_indicator(is.alpha_hat, is.variance_T);
    csv += fmt::format("{},{},{},{}\n", real(t.db), real(eps_mc), real(eps_is), real(k));
    out.summary += fmt::format("{:>8.3f} dB  eps_MC {:.4e}  eps_IS {:.4e}  k {:.4e}\n", t.db, eps_mc, eps_is, k);
  }
  out.files.push_back({"efficiency.csv", csv});
  return out;
}

CommandOutput cmd_theta_sweep(const ExperimentConfig& config, const RunOptions& options) {
  if (config.theta_grid.empty()) throw ConfigError("config field 'theta_grid': required by theta-sweep");
  CommandOutput out;
  const auto eo = estimator_options(config, options);
  for (std::size_t i = 0; i < config.thresholds.size(); ++i) {
    const auto& t = config.thresholds[i];
    const auto sweep = theta_sensitivity_sweep(config.problem(t), config.theta_grid, config.samples_is,
                                               derive_seed(config.seed, i), eo);
    std::string csv = csv_preamble(config, "theta-sweep");
    csv += fmt::format("# gamma_dB={} theta_star={} objective_A={}\n", real(t.db), real(sweep.solution.theta_star),
                       real(sweep.solution.objective_A));
    csv += "theta,second_moment_empirical,second_moment_bound,std_error\n";
    // Zero-hit rows have no second-moment estimate and do not compete for the argmin.
    std::optional<double> argmin;
    double best = 0.0;
    for (const auto& row : sweep.rows) {
      csv += fmt::format("{},{},{},{}\n", real(row.theta), real(row.second_moment_empirical),
                         real(row.second_moment_bound), real(row.std_error));
      if (row.second_moment_empirical > 0.0 && (!argmin || row.second_moment_empirical < best)) {
        argmin = row.theta;
        best = row.second_moment_empirical;
      }
    }
    out.files.push_back({fmt::format("theta_sweep_{}.csv", i), csv});
    out.summary += fmt::format("{:>8.3f} dB  theta* {:.6f}  empirical argmin {}\n", t.db, sweep.solution.theta_star,
                               argmin ? fmt::format("{:.6f}", *argmin) : std::string("none (no hits)"));
  }
  return out;
}

CommandOutput cmd_validate(const ExperimentConfig& config, const RunOptions& options) {
  require_naive_scale(config, options);
  const std::size_t n = config.components.size();
  if (n > 2) throw ConfigError("validate supports at most two components (quadrature oracle)");
  CommandOutput out;
  std::string csv = csv_preamble(config, "validate") +
                    "gamma_dB,oracle,alpha_is,se_is,is_pass,alpha_naive,se_naive,naive_pass\n";
  const auto eo = estimator_options(config, options);
  for (std::size_t i = 0; i < config.thresholds.size(); ++i) {
    const auto& t = config.thresholds[i];
    const SumProblem problem = config.problem(t);
    double oracle = 0.0;
    try {
      oracle = n == 1 ? exact_tail_single(config.components[0], t.linear)
                      : tail_convolution_2(config.components[0], config.components[1], t.linear).value;
    } catch (const OracleFailure& e) {
      out.exit_code = 2;
      out.summary += fmt::format("{:>8.3f} dB  FAIL oracle: {}\n", t.db, e.what());
      continue;
    }
    const MinmaxSolution sol = solve_pprime(problem);
    const auto is = is_estimate(problem, theta_for(config, sol), config.samples_is, is_seed(config, i), eo);
    const auto mc = naive_mc(problem, config.samples_naive, naive_seed(config, i), eo);

    const double floor = 1e-12 * oracle;
    const bool is_pass = std::abs(is.alpha_hat - oracle) <= 3.0 * is.standard_error + floor;
    const double se_naive = std::sqrt(oracle * (1.0 - oracle) / static_cast<double>(config.samples_naive));
    const bool naive_pass = std::abs(mc.alpha_hat - oracle) <= 3.0 * se_naive + floor;
    if (!is_pass || !naive_pass) out.exit_code = 2;

    csv += fmt::format("{},{},{},{},{},{},{},{}\n", real(t.db), real(oracle), real(is.alpha_hat),
                       real(is.standard_error), is_pass ? 1 : 0, real(mc.alpha_hat), real(se_naive),
                       naive_pass ? 1 : 0);
    out.summary += fmt::format("{:>8.3f} dB  oracle {:.6e}  IS {:.6e} +- {:.2e} [{}]  naive {:.6e} [{}]\n", t.db,
                               oracle, is.alpha_hat, is.standard_error, is_pass ? "pass" : "FAIL", mc.alpha_hat,
                               naive_pass ? "pass" : "FAIL");
  }
  out.files.push_back({"validate.csv", csv});
  return out;
}

void write_outputs(const CommandOutput& output, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& f : output.files) {
    const auto path = std::filesystem::path(dir) / f.name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
    os << f.content;
  }
}

}  // namespace hrt
