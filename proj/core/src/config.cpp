#include "parabound/config.hpp"

#include <fstream>
#include <sstream>

#include "parabound/error.hpp"
#include "parabound/presets.hpp"

namespace parabound {

namespace {

ParamMap params_of(const json& j) {
  ParamMap p;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.value().is_number()) p[it.key()] = it.value().get<double>();
    if (it.value().is_boolean()) p[it.key()] = it.value().get<bool>() ? 1.0 : 0.0;
  }
  return p;
}

DataField parse_data_field(const json& j, const std::string& what) {
  DataField d;
  if (j.is_null()) return d;
  if (!j.is_object() || !j.contains("preset"))
    throw ConfigError(what + " needs an object with a \"preset\" key");
  d.preset = j.at("preset").get<std::string>();
  const ParamMap params = params_of(j);
  d.fn = make_scalar_field(d.preset, params);
  d.is_zero = d.preset == "zero";
  if (d.preset == "constant" && params.count("value") &&
      params.at("value") == 0.0)
    d.is_zero = true;
  return d;
}

}  // namespace

CaseConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  CaseConfig cfg;
  cfg.raw = j;
  cfg.name = j.value("name", std::string("case"));
  cfg.seed = j.value("seed", std::uint64_t(1));
  cfg.moser_max_terms = j.value("moser_max_terms", 10000);
  cfg.diagnose_on_violation = j.value("diagnose_on_violation", true);

  const json jp = j.value("problem", json::object());

  // Domain.
  {
    const json jd = jp.value("domain", json::object());
    DomainSpec& d = cfg.problem.domain;
    d.dimension = jd.value("dimension", 2);
    d.extents = jd.value("extents", std::vector<double>{1.0, 1.0});
    d.time_horizon = jd.value("time_horizon", 1.0);
    d.gamma_faces = jd.value("gamma", std::vector<std::string>{"all"});
  }

  // Coefficients and data.
  {
    const json jdiff = jp.value("diffusion", json{{"preset", "identity"}});
    cfg.problem.diffusion = make_diffusion(
        jdiff.value("preset", std::string("identity")), params_of(jdiff),
        cfg.problem.domain);

    const json jdrift = jp.value("drift", json{{"preset", "zero"}});
    DriftField& drift = cfg.problem.drift;
    drift.preset = jdrift.value("preset", std::string("zero"));
    ParamMap dparams = params_of(jdrift);
    drift.q = jdrift.value("q", 8.0);
    drift.r = jdrift.value("r", 8.0);
    drift.theta = jdrift.value("theta", -1.0);
    drift.scale = jdrift.value("scale", 1.0);
    dparams["scale"] = drift.scale;
    drift.E = make_vector_field(drift.preset, dparams, cfg.problem.domain);
    drift.is_zero = is_drift_zero_preset(drift.preset, dparams);
    drift.time_independent = drift.preset != "time_linear";

    const json jlaw = jp.value("law", json{{"kind", "neumann"}});
    cfg.problem.law = make_boundary_law(
        jlaw.value("kind", std::string("neumann")), params_of(jlaw));

    const json jdata = jp.value("data", json::object());
    cfg.problem.data.u0 = parse_data_field(jdata.value("u0", json()), "u0");
    cfg.problem.data.h = parse_data_field(jdata.value("h", json()), "h");
    cfg.problem.data.f = parse_data_field(jdata.value("f", json()), "f");
    if (jdata.contains("regularity"))
      for (auto it = jdata["regularity"].begin();
           it != jdata["regularity"].end(); ++it)
        cfg.problem.data.regularity[it.key()] = it.value().get<std::string>();

    const json jexp = jp.value("exponents", json::object());
    cfg.problem.p = jexp.value("p", 0.0);
    cfg.problem.two_star = jexp.value("two_star", 4.0);
  }

  // Discretization.
  {
    const json jd = j.value("discretization", json::object());
    cfg.disc.target_h = jd.value("target_h", 0.1);
    cfg.disc.dt = jd.value("dt", 0.0);
    if (jd.contains("m") && !jd["m"].is_null())
      cfg.disc.m = jd["m"].get<double>();
    cfg.disc.picard_tol = jd.value("picard_tol", 1e-12);
    cfg.disc.picard_max = jd.value("picard_max", 200);
    cfg.disc.upwind = jd.value("upwind", false);
  }

  // Registry.
  {
    const json jr = j.value("registry", json::object());
    cfg.registry.file = jr.value("file", std::string());
    const json je = jr.value("estimator", json::object());
    cfg.registry.estimator.enable_fallback = je.value("enable_fallback", true);
    cfg.registry.estimator.iterations = je.value("iterations", 200);
    cfg.registry.estimator.starts = je.value("starts", 4);
    cfg.registry.estimator.seed = je.value("seed", std::uint64_t(7));
    cfg.registry.estimator.target_h = je.value("target_h", 1.0 / 12.0);
    for (const json& jo : jr.value("overrides", json::array())) {
      ConstantEstimate e;
      e.kind = kind_from_name(jo.at("kind").get<std::string>());
      e.p = jo.value("p", e.kind == ConstantKind::S_1 ? 1.0 : 0.0);
      e.q = jo.value("q", 0.0);
      e.value = jo.at("value").get<double>();
      e.provenance = provenance_from_name(
          jo.value("provenance", std::string("user-supplied")));
      cfg.registry.overrides.push_back(e);
    }
  }

  // Outputs.
  {
    const json jo = j.value("outputs", json::object());
    cfg.outputs.dir = jo.value("dir", std::string("."));
    cfg.outputs.format = jo.value("format", std::string("json"));
    cfg.outputs.dump_fields = jo.value("dump_fields", false);
    cfg.outputs.quiet = jo.value("quiet", false);
    for (const json& pq : jo.value("norms", json::array())) {
      if (!pq.is_array() || pq.size() != 2)
        throw ConfigError("outputs.norms entries must be [p, q] pairs");
      cfg.norm_requests.push_back({pq[0].get<double>(), pq[1].get<double>()});
    }
  }

  // Assumption-check sampling density.
  {
    const json jv = j.value("validation", json::object());
    cfg.sampling.lattice_per_axis =
        jv.value("lattice_per_axis", cfg.sampling.lattice_per_axis);
    cfg.sampling.xi_points = jv.value("xi_points", cfg.sampling.xi_points);
    cfg.sampling.xi_max = jv.value("xi_max", cfg.sampling.xi_max);
    cfg.sampling.boundary_points =
        jv.value("boundary_points", cfg.sampling.boundary_points);
  }

  return cfg;
}

CaseConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return parse_config(j);
}

std::string resolve_axis_path(const std::string& key) {
  if (key == "bsharp") return "problem.law.b_star";
  if (key == "sigma") return "problem.law.sigma";
  if (key == "escale") return "problem.drift.scale";
  if (key == "m") return "discretization.m";
  if (key == "target_h") return "discretization.target_h";
  if (key == "dt") return "discretization.dt";
  if (key == "ell") return "problem.law.ell";
  if (key == "seed") return "seed";
  return key;
}

json apply_override(json doc, const std::string& dotted_path,
                    const json& value) {
  const std::string path = resolve_axis_path(dotted_path);
  json* node = &doc;
  std::istringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) throw ConfigError("empty override path");
  for (std::size_t i = 0; i + 1 < parts.size(); ++i)
    node = &((*node)[parts[i]]);
  (*node)[parts.back()] = value;
  return doc;
}

}  // namespace parabound
