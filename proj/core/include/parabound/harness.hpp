#ifndef PARABOUND_HARNESS_HPP
#define PARABOUND_HARNESS_HPP

#include <string>
#include <vector>

#include "parabound/config.hpp"
#include "parabound/norms.hpp"

namespace parabound {

enum class Verdict { satisfied, violated, inapplicable, conditional, not_evaluated };
std::string verdict_name(Verdict v);

struct RunOptions {
  bool do_solve = true;          // `bounds` runs the formulas only
  bool allow_diagnostic = true;  // refined re-run before reporting a violation
  int moser_max_terms = 10000;
};

/// One verification run: a JSON document with validation results, every
/// bound constant keyed by its symbol, verdict rows, and a separate `meta`
/// block holding the only nondeterministic entries (timings).
struct VerificationReport {
  json doc;

  bool any_violated() const;
  bool has_stage_errors() const;
  int exit_code() const;  // 0 ok, 1 violated, 2 execution error
  /// Deterministic serialization: the document without the meta block.
  std::string canonical_dump(int indent = 2) const;
  std::string to_csv() const;
};

VerificationReport run_case(const CaseConfig& cfg, const RunOptions& opts = {});

/// Registry assembled for a spec: persisted file + analytic defaults +
/// user overrides + (optionally) numeric-lower fallbacks for whatever the
/// spec's bound formulas will request.
SobolevRegistry build_registry(const CaseConfig& cfg);

/// The (kind, p, q) skeletons the bound formulas of this spec resolve.
std::vector<ConstantEstimate> constant_requests(const ProblemSpec& spec);

struct SweepAxis {
  std::string key;           // dotted path or shorthand
  std::vector<json> values;
};

struct SweepResult {
  std::vector<json> case_labels;
  std::vector<VerificationReport> reports;
  json summary;             // worst ratio per row id
  std::string summary_csv;
  int exit_code() const;
};

SweepResult sweep(const CaseConfig& base, const std::vector<SweepAxis>& axes,
                  const RunOptions& opts = {}, int max_parallel = 0);

/// CLI entry point. Subcommands: validate, solve, bounds, verify, sweep,
/// sobolev. Returns the process exit code (0 ok, 1 violated, 2 error).
int cli(const std::vector<std::string>& args);

}  // namespace parabound

#endif
