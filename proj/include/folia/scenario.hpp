#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "folia/analysis.hpp"
#include "folia/catching_up.hpp"
#include "folia/foliation.hpp"
#include "folia/types.hpp"

namespace folia {

struct ScenarioTolerances {
  std::optional<double> eps_proj;
  std::optional<double> eps_conv;
  std::optional<double> h_fd;
};

struct Scenario {
  int dimension = 0;
  std::string foliation_type;    // "sublevel" | "parametric"
  std::string function;          // sublevel: registered function name
  std::string parametric_kind;   // parametric: family kind
  nlohmann::json params;         // function / family parameters
  Vec x0;
  std::optional<Vec> witness;    // sublevel: certifies [f <= a] nonempty
  double t_min = 0.0, t_max = 0.0;
  std::vector<int> schedule;
  PartitionScheme scheme = PartitionScheme::uniform;
  std::uint64_t seed = 1;
  int samples = 1024;            // trajectory table rows
  bool reference = false;        // compare against the normalized-flow oracle
  ScenarioTolerances tol;

  static Scenario from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  static Scenario load(const std::string& path);
};

std::shared_ptr<ConvexFoliation> build_foliation(const Scenario& sc,
                                                 bool check_nesting = true);

struct RunOutput {
  PolygonalTrajectory finest;
  RefinementReport refinement;
  AnalysisReport analysis;
  std::string scenario_hash;
  std::string trajectory_path;
  std::string metrics_path;
};

/// Full pipeline: build and validate the foliation, run the refinement
/// schedule, analyze the finest trajectory, emit trajectory.csv and
/// metrics.json into out_dir. Deterministic given (scenario, seed).
RunOutput run_scenario(const Scenario& sc, const std::string& out_dir);

struct ValidationCheck {
  std::string name;
  bool passed;
  std::string detail;
};

struct ValidationOutcome {
  bool ok = true;
  std::vector<ValidationCheck> checks;
};

/// Runs the foliation invariant checks without computing a trajectory.
ValidationOutcome validate_scenario(const Scenario& sc);

std::uint64_t fnv1a64(const std::string& data);
std::string format_double(double v);  // 17 significant digits

}  // namespace folia
