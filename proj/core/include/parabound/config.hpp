#ifndef PARABOUND_CONFIG_HPP
#define PARABOUND_CONFIG_HPP

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "parabound/problem.hpp"
#include "parabound/sobolev.hpp"

namespace parabound {

using json = nlohmann::json;

struct DiscretizationConfig {
  double target_h = 0.1;
  double dt = 0.0;  // 0 = heuristic
  std::optional<double> m;  // truncation level; absent = no truncation
  double picard_tol = 1e-12;
  int picard_max = 200;
  bool upwind = false;
};

struct EstimatorConfig {
  bool enable_fallback = true;  // estimate missing constants (conditional)
  int iterations = 200;
  int starts = 4;
  std::uint64_t seed = 7;
  double target_h = 1.0 / 12.0;  // estimator runs on its own coarser mesh
};

struct RegistryOverride {
  ConstantEstimate entry;
};

struct RegistryConfig {
  std::vector<ConstantEstimate> overrides;
  EstimatorConfig estimator;
  std::string file;  // optional persisted registry to load
};

struct OutputConfig {
  std::string dir = ".";
  std::string format = "json";  // json | csv
  bool dump_fields = false;
  bool quiet = false;
};

struct CaseConfig {
  ProblemSpec problem;
  DiscretizationConfig disc;
  RegistryConfig registry;
  OutputConfig outputs;
  SamplingOptions sampling;  // assumption-check density knobs
  std::vector<std::array<double, 2>> norm_requests;  // extra ||u||_{p,q}
  std::uint64_t seed = 1;
  int moser_max_terms = 10000;
  bool diagnose_on_violation = true;
  std::string name = "case";
  json raw;  // the parsed source document, for sweep patching
};

/// Parses the JSON case document. Throws ConfigError on malformed input.
CaseConfig parse_config(const json& j);
CaseConfig load_config_file(const std::string& path);

/// Sets a dotted path (e.g. "problem.law.b_star") in a JSON document.
/// Understood shorthands: bsharp -> problem.law.b_star, escale ->
/// problem.drift.scale, m -> discretization.m.
json apply_override(json doc, const std::string& dotted_path,
                    const json& value);

std::string resolve_axis_path(const std::string& key);

}  // namespace parabound

#endif
