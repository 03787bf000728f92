#include "folia/scenario.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace folia {

namespace {

using nlohmann::json;

Vec vec_from_json(const json& j, const char* field) {
  if (!j.is_array() || j.empty())
    throw validation_error(std::string("scenario field '") + field +
                           "' must be a nonempty array of numbers");
  std::vector<double> v;
  for (const auto& e : j) {
    if (!e.is_number())
      throw validation_error(std::string("scenario field '") + field +
                             "' must contain numbers only");
    v.push_back(e.get<double>());
  }
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json vec_to_json(const Vec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

const json& require_field(const json& j, const char* field) {
  if (!j.contains(field))
    throw validation_error(std::string("scenario field '") + field + "' missing");
  return j.at(field);
}

}  // namespace

Scenario Scenario::from_json(const json& j) {
  Scenario sc;
  sc.dimension = require_field(j, "dimension").get<int>();
  if (sc.dimension < 1)
    throw validation_error("scenario field 'dimension' must be >= 1");

  const json& fol = require_field(j, "foliation");
  sc.foliation_type = require_field(fol, "type").get<std::string>();
  if (sc.foliation_type == "sublevel") {
    sc.function = require_field(fol, "function").get<std::string>();
  } else if (sc.foliation_type == "parametric") {
    sc.parametric_kind = require_field(fol, "kind").get<std::string>();
  } else {
    throw validation_error("scenario foliation type must be 'sublevel' or 'parametric'");
  }
  sc.params = fol.value("params", json::object());
  if (fol.contains("witness")) sc.witness = vec_from_json(fol.at("witness"), "witness");

  sc.x0 = vec_from_json(require_field(j, "x0"), "x0");
  require_dim(sc.x0, sc.dimension, "scenario x0");
  require_finite(sc.x0, "scenario x0");

  const json& tr = require_field(j, "t_range");
  if (!tr.is_array() || tr.size() != 2)
    throw validation_error("scenario field 't_range' must be [a, b]");
  sc.t_min = tr[0].get<double>();
  sc.t_max = tr[1].get<double>();
  if (!(sc.t_min < sc.t_max))
    throw validation_error("scenario field 't_range' is degenerate (needs a < b)");

  sc.schedule = require_field(j, "schedule").get<std::vector<int>>();
  if (sc.schedule.empty())
    throw validation_error("scenario field 'schedule' must be nonempty");

  std::string scheme = j.value("scheme", std::string("uniform"));
  if (scheme == "uniform")
    sc.scheme = PartitionScheme::uniform;
  else if (scheme == "geometric")
    sc.scheme = PartitionScheme::geometric;
  else
    throw validation_error("scenario field 'scheme' must be 'uniform' or 'geometric'");

  sc.seed = j.value("seed", std::uint64_t{1});
  sc.samples = j.value("samples", 1024);
  if (sc.samples < 2)
    throw validation_error("scenario field 'samples' must be >= 2");
  sc.reference = j.value("reference", false);

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (t.contains("eps_proj")) sc.tol.eps_proj = t.at("eps_proj").get<double>();
    if (t.contains("eps_conv")) sc.tol.eps_conv = t.at("eps_conv").get<double>();
    if (t.contains("h_fd")) sc.tol.h_fd = t.at("h_fd").get<double>();
  }
  return sc;
}

json Scenario::to_json() const {
  json fol;
  fol["type"] = foliation_type;
  if (foliation_type == "sublevel") fol["function"] = function;
  if (foliation_type == "parametric") fol["kind"] = parametric_kind;
  fol["params"] = params;
  if (witness) fol["witness"] = vec_to_json(*witness);

  json j;
  j["dimension"] = dimension;
  j["foliation"] = fol;
  j["x0"] = vec_to_json(x0);
  j["t_range"] = {t_min, t_max};
  j["schedule"] = schedule;
  j["scheme"] = scheme == PartitionScheme::uniform ? "uniform" : "geometric";
  j["seed"] = seed;
  j["samples"] = samples;
  j["reference"] = reference;
  json t = json::object();
  if (tol.eps_proj) t["eps_proj"] = *tol.eps_proj;
  if (tol.eps_conv) t["eps_conv"] = *tol.eps_conv;
  if (tol.h_fd) t["h_fd"] = *tol.h_fd;
  if (!t.empty()) j["tolerances"] = t;
  return j;
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open scenario file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw validation_error(std::string("scenario parse error: ") + e.what());
  }
  return from_json(j);
}

std::shared_ptr<ConvexFoliation> build_foliation(const Scenario& sc,
                                                 bool check_nesting) {
  if (sc.foliation_type == "sublevel") {
    FunctionSpec f = make_function(sc.function, sc.params, sc.dimension);
    if (!sc.witness)
      throw input_error("sublevel scenario: witness for [f <= a] missing");
    return make_sublevel_foliation(std::move(f), sc.t_min, sc.t_max, *sc.witness,
                                   sc.seed);
  }
  return make_parametric_foliation(sc.parametric_kind, sc.params, sc.t_min,
                                   sc.t_max, sc.dimension, check_nesting);
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void write_trajectory_csv(const std::string& path, const PolygonalTrajectory& traj,
                          const ConvexFoliation& fol, int samples) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw input_error("cannot open output file: " + path);
  const Eigen::Index d = fol.dim();
  out << "s";
  for (Eigen::Index i = 0; i < d; ++i) out << ",x_" << (i + 1);
  out << ",level_t,step_index\n";

  UnitSpeedCurve curve(traj.vertices);
  const double L = curve.length();
  for (int k = 0; k < samples; ++k) {
    double s = samples > 1 ? L * k / (samples - 1) : 0.0;
    Vec p = curve.eval(s);
    // Step index against the original (possibly repeated-vertex) marks.
    std::size_t idx = 0;
    while (idx + 1 < traj.arclengths.size() && traj.arclengths[idx + 1] <= s) ++idx;
    double level = fol.index_of(p);
    out << format_double(s);
    for (Eigen::Index i = 0; i < d; ++i) out << ',' << format_double(p[i]);
    out << ',' << format_double(level) << ',' << idx << '\n';
  }
}

json refinement_to_json(const RefinementReport& rep) {
  json j;
  json steps = json::array(), mesh = json::array(), vertices = json::array(),
       lengths = json::array(), sup = json::array();
  for (const auto& r : rep.records) {
    steps.push_back(r.steps);
    mesh.push_back(r.mesh);
    vertices.push_back(r.vertex_count);
    lengths.push_back(r.total_length);
    if (std::isnan(r.sup_distance))
      sup.push_back(nullptr);
    else
      sup.push_back(r.sup_distance);
  }
  j["schedule"] = steps;
  j["mesh"] = mesh;
  j["vertex_count"] = vertices;
  j["total_length"] = lengths;
  j["sup_distance"] = sup;
  j["converged"] = rep.converged;
  j["eps_conv"] = rep.eps_conv;
  j["extension_length"] = rep.extension_length;
  return j;
}

}  // namespace

RunOutput run_scenario(const Scenario& sc, const std::string& out_dir) {
  auto fol = build_foliation(sc, /*check_nesting=*/true);
  if (!fol->set_at(fol->t_max())->contains(sc.x0))
    throw validation_error("scenario x0 is not a member of S_b");

  RefineConfig rcfg;
  rcfg.scheme = sc.scheme;
  if (sc.tol.eps_conv) rcfg.eps_conv = *sc.tol.eps_conv;
  auto [finest, refinement] = refine(*fol, sc.x0, sc.schedule, rcfg);

  AnalysisReport analysis;
  const double h_fd = sc.tol.h_fd.value_or(1e-5);
  if (finest.total_length > 0.0) {
    UnitSpeedCurve curve = arclength_parametrize(finest);
    analysis.self_contracted_max_violation =
        check_self_contracted(curve, 1000, sc.seed);
    analysis.length_diameter_ratio = length_diameter_ratio(curve);
    InclusionResult inc = inclusion_residual(curve, *fol, 256, h_fd);
    analysis.inclusion_residual_max = inc.max_residual;
    analysis.inclusion_samples = inc.evaluated;
    analysis.inclusion_skipped = inc.skipped;
    if (fol->smooth_boundaries()) {
      analysis.tangent_gap_coarse = tangent_continuity(curve, 1e-2);
      analysis.tangent_gap_fine = tangent_continuity(curve, 1e-3);
    }
    if (sc.reference) {
      if (sc.foliation_type != "sublevel") {
        analysis.reference_note = "reference flow requires a sublevel foliation";
      } else {
        FunctionSpec f = make_function(sc.function, sc.params, sc.dimension);
        if (!f.gradient) {
          analysis.reference_note = "function has no gradient evaluator";
        } else {
          ReferenceFlowResult ref = reference_flow(
              f, sc.x0, sc.t_min, std::max(finest.extension_length, 1.0));
          analysis.reference_sup_distance = sup_distance(curve, ref.curve);
          analysis.reference_note =
              ref.gradient_floor_hit ? "gradient floor reached; partial reference" : "ok";
        }
      }
    } else {
      analysis.reference_note = "reference comparison disabled";
    }
  } else {
    analysis.reference_note = "degenerate trajectory (x0 already in S_a)";
  }

  std::filesystem::create_directories(out_dir);
  RunOutput out;
  out.finest = finest;
  out.refinement = refinement;
  out.analysis = analysis;

  std::string scenario_dump = sc.to_json().dump();
  char hashbuf[32];
  std::snprintf(hashbuf, sizeof(hashbuf), "%016" PRIx64, fnv1a64(scenario_dump));
  out.scenario_hash = hashbuf;

  out.trajectory_path = out_dir + "/trajectory.csv";
  write_trajectory_csv(out.trajectory_path, finest, *fol, sc.samples);

  json metrics = refinement_to_json(refinement);
  metrics["scenario_hash"] = out.scenario_hash;
  metrics["seed"] = sc.seed;
  metrics["eps_proj"] = sc.tol.eps_proj.value_or(kProjTol);
  metrics["h_fd"] = h_fd;
  metrics["k_cap"] = rcfg.catching_up.k_cap;
  metrics["dist_to_target"] = finest.dist_to_target;
  metrics["self_contracted_max_violation"] = analysis.self_contracted_max_violation;
  metrics["length_diameter_ratio"] = analysis.length_diameter_ratio;
  metrics["inclusion_residual_max"] = analysis.inclusion_residual_max;
  metrics["inclusion_samples"] = analysis.inclusion_samples;
  metrics["inclusion_skipped"] = analysis.inclusion_skipped;
  metrics["tangent_gap_coarse"] =
      analysis.tangent_gap_coarse ? json(*analysis.tangent_gap_coarse) : json(nullptr);
  metrics["tangent_gap_fine"] =
      analysis.tangent_gap_fine ? json(*analysis.tangent_gap_fine) : json(nullptr);
  metrics["reference_sup_distance"] = analysis.reference_sup_distance
                                          ? json(*analysis.reference_sup_distance)
                                          : json(nullptr);
  metrics["reference_note"] = analysis.reference_note;

  out.metrics_path = out_dir + "/metrics.json";
  std::ofstream mj(out.metrics_path, std::ios::binary | std::ios::trunc);
  if (!mj) throw input_error("cannot open output file: " + out.metrics_path);
  mj << metrics.dump(2) << '\n';
  return out;
}

ValidationOutcome validate_scenario(const Scenario& sc) {
  ValidationOutcome out;
  auto add = [&out](std::string name, bool ok, std::string detail) {
    out.checks.push_back({std::move(name), ok, std::move(detail)});
    out.ok = out.ok && out.checks.back().passed;
  };

  std::shared_ptr<ConvexFoliation> fol;
  if (sc.foliation_type == "sublevel") {
    try {
      FunctionSpec f = make_function(sc.function, sc.params, sc.dimension);
      if (!sc.witness) throw input_error("witness for [f <= a] missing");
      if (f.value(*sc.witness) > sc.t_min + kMembershipTol)
        throw input_error("witness does not certify [f <= a] nonempty");
      add("witness", true, "f(witness) <= a");
      try {
        check_quasiconvexity(f, 1000, sc.seed);
        add("quasiconvexity", true, "1000 midpoint pairs");
      } catch (const validation_error& e) {
        std::ostringstream os;
        os << e.what();
        if (e.witness_a.size() > 0) {
          os << "; pair p=(";
          for (Eigen::Index i = 0; i < e.witness_a.size(); ++i)
            os << (i ? "," : "") << e.witness_a[i];
          os << ") q=(";
          for (Eigen::Index i = 0; i < e.witness_b.size(); ++i)
            os << (i ? "," : "") << e.witness_b[i];
          os << ")";
        }
        add("quasiconvexity", false, os.str());
        return out;
      }
      fol = std::make_shared<SublevelFoliation>(std::move(f), sc.t_min, sc.t_max,
                                                *sc.witness);
    } catch (const std::exception& e) {
      add("construction", false, e.what());
      return out;
    }
  } else {
    try {
      fol = make_parametric_foliation(sc.parametric_kind, sc.params, sc.t_min,
                                      sc.t_max, sc.dimension,
                                      /*check_nesting=*/false);
    } catch (const std::exception& e) {
      add("construction", false, e.what());
      return out;
    }
  }

  NestingReport nest = validate_nesting(*fol, 32, 64);
  {
    std::ostringstream os;
    os << "min margin " << nest.min_margin << " over " << nest.levels
       << " levels x " << nest.points_per_level << " points";
    if (!nest.passed) os << "; " << nest.violations.size() << " violation(s)";
    add("nesting", nest.passed, os.str());
  }

  bool member = false;
  std::string detail;
  try {
    member = fol->set_at(fol->t_max())->contains(sc.x0);
    detail = member ? "x0 in S_b" : "x0 outside S_b";
  } catch (const std::exception& e) {
    detail = e.what();
  }
  add("x0_membership", member, detail);

  // index_of consistency on boundary samples of the outer set.
  if (nest.passed && member) {
    bool consistent = true;
    std::ostringstream os;
    auto mid_set = fol->set_at(0.5 * (fol->t_min() + fol->t_max()));
    for (const Vec& p : mid_set->boundary_samples(16)) {
      double t = fol->index_of(p);
      double dist = fol->set_at(t)->distance(p);
      double depth = fol->set_at(t)->interior_depth(p);
      if (dist > 10.0 * kMembershipTol || depth > 10.0 * kMembershipTol) {
        consistent = false;
        os << "index_of inconsistent at t=" << t;
        break;
      }
    }
    add("index_consistency", consistent,
        consistent ? "boundary samples map to their own level" : os.str());
  }
  return out;
}

}  // namespace folia
