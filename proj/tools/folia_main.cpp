#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "folia/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

void apply_overrides(folia::Scenario& sc, const std::string& levels,
                     const std::string& scheme, std::int64_t seed) {
  if (!levels.empty()) {
    std::vector<int> schedule;
    std::size_t pos = 0;
    while (pos < levels.size()) {
      std::size_t comma = levels.find(',', pos);
      if (comma == std::string::npos) comma = levels.size();
      schedule.push_back(std::stoi(levels.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    sc.schedule = schedule;
  }
  if (scheme == "uniform") sc.scheme = folia::PartitionScheme::uniform;
  if (scheme == "geometric") sc.scheme = folia::PartitionScheme::geometric;
  if (seed >= 0) sc.seed = static_cast<std::uint64_t>(seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Descent trajectories of convex foliations via catching-up projections"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir, levels, scheme;
  std::int64_t seed = -1;

  CLI::App* run = app.add_subcommand("run", "Run a scenario and emit trajectory + metrics");
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--levels", levels, "Override the partition schedule, e.g. 8,16,32");
  run->add_option("--scheme", scheme, "Partition scheme: uniform | geometric")
      ->check(CLI::IsMember({"", "uniform", "geometric"}));

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario without running");
  validate->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    folia::Scenario sc = folia::Scenario::load(scenario_path);
    if (run->parsed()) {
      apply_overrides(sc, levels, scheme, seed);
      folia::RunOutput out = folia::run_scenario(sc, out_dir);
      std::cout << "scenario " << out.scenario_hash << ": "
                << out.refinement.records.back().steps << " steps, length "
                << folia::format_double(out.finest.total_length)
                << (out.refinement.converged ? ", converged" : ", not converged")
                << "\n"
                << "wrote " << out.trajectory_path << "\n"
                << "wrote " << out.metrics_path << "\n";
      return kExitOk;
    }
    folia::ValidationOutcome outcome = folia::validate_scenario(sc);
    for (const auto& check : outcome.checks)
      std::cout << (check.passed ? "pass" : "FAIL") << "  " << check.name << ": "
                << check.detail << "\n";
    return outcome.ok ? kExitOk : kExitValidation;
  } catch (const folia::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << " (residual " << e.residual
              << ")\n";
    return kExitNumerical;
  } catch (const folia::validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const folia::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
