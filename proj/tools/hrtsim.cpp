// hrtsim: batch runner for hazard-rate-twisting tail estimation experiments.

#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hrt/error.hpp"
#include "hrt/experiments.hpp"

namespace {

using Command = std::function<hrt::CommandOutput(const hrt::ExperimentConfig&, const hrt::RunOptions&)>;

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rare-event tail probabilities of sums of subexponential variables by hazard rate twisting"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  bool allow_large = false;
  unsigned workers = 0;

  const std::map<std::string, std::pair<std::string, Command>> commands{
      {"solve", {"Minmax twisting parameter per threshold (JSON report)", hrt::cmd_solve}},
      {"ccdf", {"CCDF curve: naive and IS estimates per threshold", hrt::cmd_ccdf}},
      {"freq-table", {"Frequency of occurrence of the rare set", hrt::cmd_freq_table}},
      {"efficiency", {"Relative errors and efficiency indicator", hrt::cmd_efficiency}},
      {"theta-sweep", {"Empirical second moment and its bound over a theta grid", hrt::cmd_theta_sweep}},
      {"validate", {"Compare estimators with the quadrature/closed-form oracle", hrt::cmd_validate}},
  };

  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "Experiment JSON file")->required();
    sub->add_option("--seed", seed, "Override the config seed");
    sub->add_option("--output", output_dir, "Output directory (overrides output_dir)");
    sub->add_flag("--allow-large", allow_large, "Permit naive sample counts above 1e6");
    sub->add_option("--workers", workers, "Sampling threads (0: all cores)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    hrt::ExperimentConfig config = hrt::load_config(config_path);
    if (seed) config.seed = *seed;
    const hrt::RunOptions options{workers, allow_large};
    const hrt::CommandOutput out = commands.at(name).second(config, options);
    hrt::write_outputs(out, output_dir ? *output_dir : config.output_dir);
    std::cerr << out.diagnostics;
    std::cout << out.summary;
    return out.exit_code;
  } catch (const hrt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
