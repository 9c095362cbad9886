#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "parabound/error.hpp"
#include "parabound/harness.hpp"

using namespace parabound;
namespace fs = std::filesystem;

namespace {

const std::string kConfigDir = PARABOUND_CONFIG_DIR;

json load_json(const std::string& name) {
  std::ifstream is(kConfigDir + "/" + name);
  REQUIRE(is.good());
  json j;
  is >> j;
  return j;
}

std::string row_verdict(const VerificationReport& rep, const std::string& id) {
  for (const auto& r : rep.doc.value("rows", json::array()))
    if (r.value("id", "") == id) return r.value("verdict", "");
  return "absent";
}

double row_number(const VerificationReport& rep, const std::string& id,
                  const char* key) {
  for (const auto& r : rep.doc.value("rows", json::array()))
    if (r.value("id", "") == id && r.contains(key) && r[key].is_number())
      return r[key].get<double>();
  return std::numeric_limits<double>::quiet_NaN();
}

fs::path temp_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("parabound_" + tag);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("config parsing fills every section") {
  const CaseConfig cfg = parse_config(load_json("blackbody_drift.json"));
  CHECK(cfg.name == "blackbody_drift");
  CHECK(cfg.problem.domain.time_horizon == 0.5);
  CHECK(cfg.problem.law.kind == LawKind::blackbody);
  CHECK(cfg.problem.law.ell == 5.0);
  CHECK(cfg.problem.drift.scale == doctest::Approx(0.2));
  CHECK_FALSE(cfg.problem.drift.is_zero);
  CHECK(cfg.disc.target_h == doctest::Approx(0.0625));
  CHECK(cfg.disc.dt == doctest::Approx(0.01));
  CHECK_FALSE(cfg.disc.m.has_value());
}

TEST_CASE("config errors are typed") {
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
  json bad = load_json("neumann_const.json");
  bad["problem"]["law"]["kind"] = "unheard-of";
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
}

TEST_CASE("override paths accept shorthands") {
  json doc = load_json("sweep_base.json");
  doc = apply_override(doc, "bsharp", json(2.5));
  CHECK(doc["problem"]["law"]["b_star"] == json(2.5));
  doc = apply_override(doc, "escale", json(0.0));
  CHECK(doc["problem"]["drift"]["scale"] == json(0.0));
  doc = apply_override(doc, "problem.domain.time_horizon", json(0.125));
  CHECK(doc["problem"]["domain"]["time_horizon"] == json(0.125));
}

TEST_CASE("neumann constant case: applicable bounds satisfied, min exact") {
  const CaseConfig cfg = parse_config(load_json("neumann_const.json"));
  const VerificationReport rep = run_case(cfg);
  REQUIRE_FALSE(rep.has_stage_errors());
  CHECK(rep.exit_code() == 0);
  CHECK(row_verdict(rep, "mass_balance") == "satisfied");
  CHECK(row_verdict(rep, "energy_inequality") == "satisfied");
  CHECK(row_verdict(rep, "min_principle") == "satisfied");
  CHECK(row_verdict(rep, "b0_sup_bound") == "satisfied");
  CHECK(row_verdict(rep, "b0_gradient_bound") == "satisfied");
  // The drift-energy and sup-iteration families need b_lower > 0.
  CHECK(row_verdict(rep, "l2_sup_bound") == "inapplicable");
  CHECK(row_verdict(rep, "max_principle") == "inapplicable");
  CHECK(row_number(rep, "b0_sup_bound", "ratio") <= 1.0);
  // Exact sign principle on the non-obtuse mesh without drift.
  const double m = rep.doc["norms"]["nodal_min"].get<double>();
  CHECK(m >= 0.0);
}

TEST_CASE("robin energy case: measured energy below the bound") {
  const CaseConfig cfg = parse_config(load_json("robin_energy.json"));
  const VerificationReport rep = run_case(cfg);
  REQUIRE_FALSE(rep.has_stage_errors());
  CHECK(row_verdict(rep, "l2_sup_bound") == "satisfied");
  CHECK(row_verdict(rep, "l2_energy_bound") == "satisfied");
  CHECK(row_number(rep, "l2_energy_bound", "ratio") <= 1.0);
  CHECK(row_verdict(rep, "interpolation_consistency") == "satisfied");
  CHECK(row_verdict(rep, "registry_consistency") == "satisfied");
  CHECK(rep.exit_code() == 0);
}

TEST_CASE("max principle row carries the divergent-series status") {
  const CaseConfig cfg = parse_config(load_json("blackbody_drift.json"));
  const VerificationReport rep = run_case(cfg);
  REQUIRE_FALSE(rep.has_stage_errors());
  const std::string v = row_verdict(rep, "max_principle");
  CHECK(v == "inapplicable");
  std::string detail;
  for (const auto& r : rep.doc["rows"])
    if (r.value("id", "") == "max_principle") detail = r.value("detail", "");
  const bool diverged = detail.find("divergent") != std::string::npos;
  const bool smallness = detail.find("smallness") != std::string::npos;
  CHECK((diverged || smallness));
}

TEST_CASE("reports are byte-identical for identical config and seed") {
  const CaseConfig cfg = parse_config(load_json("robin_energy.json"));
  const VerificationReport a = run_case(cfg);
  const VerificationReport b = run_case(cfg);
  CHECK(a.canonical_dump() == b.canonical_dump());
  CHECK(a.doc.contains("meta"));  // timings live outside the canonical dump
}

TEST_CASE("bounds-only run emits rhs without measured values") {
  const CaseConfig cfg = parse_config(load_json("robin_energy.json"));
  RunOptions opts;
  opts.do_solve = false;
  const VerificationReport rep = run_case(cfg, opts);
  CHECK(row_verdict(rep, "l2_sup_bound") == "not-evaluated");
  CHECK(std::isnan(row_number(rep, "l2_sup_bound", "measured")));
  CHECK(row_number(rep, "l2_sup_bound", "rhs") > 0.0);
  CHECK(rep.exit_code() == 0);
}

TEST_CASE("a false analytic-upper override is caught and exits violated") {
  CaseConfig cfg = parse_config(load_json("robin_energy.json"));
  cfg.diagnose_on_violation = false;  // keep the test fast
  ConstantEstimate bogus;
  bogus.kind = ConstantKind::S_1;
  bogus.p = 1.0;
  bogus.value = 0.05;  // far below the true constant
  bogus.provenance = Provenance::analytic_upper;
  cfg.registry.overrides.push_back(bogus);
  const VerificationReport rep = run_case(cfg);
  CHECK(row_verdict(rep, "registry_consistency") == "violated");
  CHECK(rep.exit_code() == 1);
}

TEST_CASE("sweep: Q strictly increases along the drift scaling axis") {
  // The Gronwall exponent lives in the L2 drift regime; move the base there.
  json doc = load_json("sweep_base.json");
  doc = apply_override(doc, "problem.drift.q", json(8.0));
  doc = apply_override(doc, "problem.drift.r", json(8.0));
  const CaseConfig base = parse_config(doc);
  SweepAxis ax;
  ax.key = "escale";
  ax.values = {json(0.0), json(0.1), json(0.2)};
  const SweepResult res = sweep(base, {ax});
  REQUIRE(res.reports.size() == 3);
  double prev = -1.0;
  for (const auto& rep : res.reports) {
    REQUIRE(rep.doc.contains("constants"));
    REQUIRE(rep.doc["constants"].contains("Q"));
    const double q = rep.doc["constants"]["Q"].get<double>();
    CHECK(q > prev);
    prev = q;
  }
}

TEST_CASE("2x2 sweep produces four labelled reports and a summary") {
  const CaseConfig base = parse_config(load_json("sweep_base.json"));
  SweepAxis a1{"bsharp", {json(0.5), json(1.0)}};
  SweepAxis a2{"escale", {json(0.0), json(0.1)}};
  const SweepResult res = sweep(base, {a1, a2});
  CHECK(res.reports.size() == 4);
  CHECK(res.case_labels.size() == 4);
  CHECK(res.summary.contains("mass_balance"));
  CHECK(res.summary_csv.find("case,axes,row") == 0);
  CHECK(res.exit_code() == 0);
}

TEST_CASE("sweeping bsharp to zero routes to the b0 rows") {
  const CaseConfig base = parse_config(load_json("sweep_base.json"));
  SweepAxis ax{"bsharp", {json(0.0)}};
  const SweepResult res = sweep(base, {ax});
  REQUIRE(res.reports.size() == 1);
  const VerificationReport& rep = res.reports[0];
  CHECK(row_verdict(rep, "l2_sup_bound") == "inapplicable");
  CHECK(row_verdict(rep, "b0_gradient_p_bound") == "satisfied");
  CHECK(row_verdict(rep, "b0_mass_bound") == "satisfied");
}

TEST_CASE("cli: verify a passing config returns 0 and writes the report") {
  const fs::path out = temp_dir("cli_verify");
  const int code =
      cli({"verify", kConfigDir + "/robin_energy.json", "--out", out.string(),
           "--quiet"});
  CHECK(code == 0);
  CHECK(fs::exists(out / "robin_energy_verify.json"));
}

TEST_CASE("cli: bounds subcommand reports inapplicable rows and exits 0") {
  // b_lower = 0 with ell = 5: the b0 energy bound requires ell <= 3.
  json doc = load_json("neumann_const.json");
  doc["name"] = "b0_ell5";
  doc["problem"]["law"] = {{"kind", "custom"}, {"ell", 5.0},
                           {"b_lower", 0.0}, {"b_upper", 0.0}};
  const fs::path out = temp_dir("cli_bounds");
  const fs::path cfg_path = out / "b0_ell5.json";
  std::ofstream(cfg_path) << doc.dump(2);
  const int code =
      cli({"bounds", cfg_path.string(), "--out", out.string(), "--quiet"});
  CHECK(code == 0);
  std::ifstream is(out / "b0_ell5_bounds.json");
  REQUIRE(is.good());
  json rep;
  is >> rep;
  bool found = false;
  for (const auto& r : rep["rows"]) {
    if (r.value("id", "") == "b0_sup_bound") {
      found = true;
      CHECK(r.value("verdict", "") == "inapplicable");
      CHECK(r.value("detail", "").find("ell") != std::string::npos);
    }
  }
  CHECK(found);
}

TEST_CASE("cli: unknown flags give usage text and exit 2") {
  CHECK(cli({"verify", "whatever.json", "--no-such-flag"}) == 2);
  CHECK(cli({"frobnicate"}) == 2);
  CHECK(cli({"verify", "/nonexistent/path.json", "--quiet"}) == 2);
}

TEST_CASE("cli: csv format emits verdict rows") {
  const fs::path out = temp_dir("cli_csv");
  const int code = cli({"verify", kConfigDir + "/neumann_const.json", "--out",
                        out.string(), "--format", "csv", "--quiet"});
  CHECK(code == 0);
  std::ifstream is(out / "neumann_const_verify.csv");
  REQUIRE(is.good());
  std::string header;
  std::getline(is, header);
  CHECK(header == "id,verdict,measured,rhs,ratio,detail");
}

TEST_CASE("exit-code contract over the canned configs") {
  for (const char* name :
       {"neumann_const.json", "robin_energy.json", "sweep_base.json"}) {
    const fs::path out = temp_dir("cli_contract");
    const int code =
        cli({"verify", kConfigDir + "/" + std::string(name), "--out",
             out.string(), "--quiet"});
    CHECK_MESSAGE(code == 0, name);
  }
}

TEST_CASE("cli: sobolev subcommand persists a registry table") {
  json doc = load_json("robin_energy.json");
  doc["name"] = "estimator_run";
  doc["registry"] = {{"estimator",
                      {{"iterations", 30}, {"starts", 2}, {"seed", 11},
                       {"target_h", 1.0 / 6.0}}}};
  const fs::path out = temp_dir("cli_sobolev");
  const fs::path cfg_path = out / "estimator_run.json";
  std::ofstream(cfg_path) << doc.dump(2);
  const int code =
      cli({"sobolev", cfg_path.string(), "--out", out.string(), "--quiet"});
  CHECK(code == 0);
  std::ifstream is(out / "registry.txt");
  REQUIRE(is.good());
  const SobolevRegistry reg = SobolevRegistry::load(is);
  CHECK(!reg.entries().empty());
  for (const auto& e : reg.entries())
    CHECK(e.provenance == Provenance::numeric_lower);
  // The persisted table can seed a later run.
  CaseConfig follow = parse_config(doc);
  follow.registry.file = (out / "registry.txt").string();
  const SobolevRegistry rebuilt = build_registry(follow);
  CHECK(rebuilt.has(ConstantKind::S_1));
}

TEST_CASE("cli: solve subcommand dumps fields and diagnostics") {
  json doc = load_json("manufactured.json");
  doc["name"] = "dump_run";
  doc["outputs"]["dump_fields"] = true;
  doc["discretization"]["target_h"] = 0.3;
  doc["discretization"]["dt"] = 0.125;
  const fs::path out = temp_dir("cli_solve");
  const fs::path cfg_path = out / "dump_run.json";
  std::ofstream(cfg_path) << doc.dump(2);
  const int code =
      cli({"solve", cfg_path.string(), "--out", out.string(), "--quiet"});
  CHECK(code == 0);
  CHECK(fs::exists(out / "mesh.txt"));
  CHECK(fs::exists(out / "fields" / "u_00000.txt"));
  CHECK(fs::exists(out / "fields" / "u_00004.txt"));
  std::ifstream diag(out / "diagnostics.jsonl");
  REQUIRE(diag.good());
  std::string line;
  int lines = 0;
  while (std::getline(diag, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    CHECK(j.contains("picard_iterations"));
    ++lines;
  }
  CHECK(lines == 4);
}

TEST_CASE("non-unit domains fall back to conditional verdicts") {
  // No analytic constants exist off the unit box; the estimator floor
  // (times the safety factor) backs the bound and the verdict says so.
  json doc = load_json("robin_energy.json");
  doc["name"] = "wide_box";
  doc["problem"]["domain"]["extents"] = {2.0, 1.0};
  // A nonzero drift makes the Gronwall exponent consume S_p.
  doc["problem"]["drift"] = {{"preset", "rotor"}, {"scale", 0.1},
                             {"q", 8.0}, {"r", 8.0}};
  doc["registry"] = {{"estimator",
                      {{"iterations", 60}, {"starts", 2}, {"seed", 3},
                       {"target_h", 0.2}}}};
  CaseConfig cfg = parse_config(doc);
  cfg.diagnose_on_violation = false;
  const VerificationReport rep = run_case(cfg);
  REQUIRE_FALSE(rep.has_stage_errors());
  const std::string v = row_verdict(rep, "l2_sup_bound");
  CHECK(v == "conditional");
  // The consumed constant is numeric-lower provenance.
  for (const auto& r : rep.doc["rows"]) {
    if (r.value("id", "") != "l2_sup_bound") continue;
    REQUIRE(r["constants"].contains("sobolev"));
    CHECK(r["constants"]["sobolev"][0]["provenance"] == "numeric-lower");
  }
}

TEST_CASE("strong drift reaches the series and reports divergence") {
  // Large ||E|| makes P exceed P2, so the smallness condition holds and the
  // row proceeds to the series, which always diverges for P1 > 0.
  json doc = load_json("sweep_base.json");
  doc["name"] = "strong_drift";
  doc["problem"]["drift"] = {{"preset", "rotor"}, {"scale", 6.0},
                             {"q", 8.0}, {"r", 8.0}};
  doc["problem"]["law"] = {{"kind", "robin"}, {"b_star", 1.0}};
  doc["problem"]["data"]["u0"] = {{"preset", "constant"}, {"value", 1.0}};
  doc["discretization"]["target_h"] = 0.09;
  doc["discretization"]["dt"] = 0.0125;
  CaseConfig cfg = parse_config(doc);
  cfg.diagnose_on_violation = false;
  const VerificationReport rep = run_case(cfg);
  REQUIRE_FALSE(rep.has_stage_errors());
  std::string detail;
  json constants;
  for (const auto& r : rep.doc["rows"]) {
    if (r.value("id", "") != "max_principle") continue;
    detail = r.value("detail", "");
    constants = r.value("constants", json::object());
  }
  CHECK(constants.value("smallness_ok", false));
  CHECK(detail.find("divergent") != std::string::npos);
  CHECK(constants.contains("M"));  // partial value still reported
  CHECK(rep.exit_code() == 0);     // divergence is a status, not a violation
}
