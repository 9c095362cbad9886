#include "parabound/harness.hpp"

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "parabound/bounds.hpp"
#include "parabound/error.hpp"

namespace parabound {

namespace fs = std::filesystem;

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::satisfied: return "satisfied";
    case Verdict::violated: return "violated";
    case Verdict::inapplicable: return "inapplicable";
    case Verdict::conditional: return "conditional";
    case Verdict::not_evaluated: return "not-evaluated";
  }
  return "?";
}

namespace {

json num(double x) {
  // JSON has no inf/nan literals; report them as strings.
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

struct Row {
  std::string id;
  Verdict verdict = Verdict::not_evaluated;
  double measured = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();
  double ratio = std::numeric_limits<double>::quiet_NaN();
  std::string detail;
  json constants = json::object();

  json to_json() const {
    json j;
    j["id"] = id;
    j["verdict"] = verdict_name(verdict);
    if (!std::isnan(measured)) j["measured"] = num(measured);
    if (!std::isnan(rhs)) j["rhs"] = num(rhs);
    if (!std::isnan(ratio)) j["ratio"] = num(ratio);
    if (!detail.empty()) j["detail"] = detail;
    if (!constants.empty()) j["constants"] = constants;
    return j;
  }
};

double safe_ratio(double measured, double rhs) {
  if (rhs > 0.0) return measured / rhs;
  if (std::abs(measured) <= 1e-12) return 0.0;
  return std::numeric_limits<double>::infinity();
}

// measured <= rhs with roundoff headroom.
Verdict compare(double measured, double rhs, bool conditional) {
  if (std::isinf(rhs) && rhs > 0)
    return conditional ? Verdict::conditional : Verdict::satisfied;
  const bool ok = measured <= rhs * (1.0 + 1e-9) + 1e-12;
  if (!ok) return Verdict::violated;
  return conditional ? Verdict::conditional : Verdict::satisfied;
}

json validation_to_json(const ValidationReport& v) {
  json j;
  j["checks"] = json::array();
  for (const auto& c : v.checks) {
    json cj;
    cj["name"] = c.name;
    cj["passed"] = c.passed;
    cj["margin"] = num(c.margin);
    if (!c.witness.empty()) cj["witness"] = c.witness;
    j["checks"].push_back(cj);
  }
  j["regimes"] = json::array();
  for (Regime r : v.regimes) j["regimes"].push_back(regime_name(r));
  j["f_present"] = v.f_present;
  return j;
}

json registry_to_json(const SobolevRegistry& reg) {
  json j = json::array();
  for (const auto& e : reg.entries()) {
    json ej;
    ej["kind"] = kind_name(e.kind);
    ej["p"] = e.p;
    ej["q"] = e.q;
    ej["value"] = num(e.value);
    ej["provenance"] = provenance_name(e.provenance);
    if (!e.converged) ej["converged"] = false;
    j.push_back(ej);
  }
  return j;
}

struct CaseContext {
  Mesh mesh;
  DomainMeasures dm;
  ValidationReport validation;
  SobolevRegistry registry;
  bool solved = false;
  DiscreteSolution sol;
  NormReport nr;
};

}  // namespace

std::vector<ConstantEstimate> constant_requests(const ProblemSpec& spec) {
  std::vector<ConstantEstimate> reqs;
  auto add = [&reqs](ConstantKind kind, double p, double q = 0.0) {
    for (const auto& e : reqs)
      if (e.kind == kind && std::abs(e.p - p) < 1e-9 &&
          std::abs(e.q - q) < 1e-9)
        return;
    ConstantEstimate e;
    e.kind = kind;
    e.p = p;
    e.q = q;
    reqs.push_back(e);
  };
  const int n = spec.dim();
  const double q = spec.drift.q, r = spec.drift.r;
  const double theta = theta_of(spec.drift, n);

  add(ConstantKind::S_1, 1.0);

  // Gronwall exponent subscripts (both displays).
  if (1.0 - n / q - theta > 0.0) {
    add(ConstantKind::S_p, q_sobolev_subscript(q, theta));
    add(ConstantKind::S_p,
        2.0 * n * (n + theta * q) / (n * n + (n + 2.0) * theta * q));
  }

  // L1-theory constants.
  const double p = p_of(spec);
  if (p > 1.0 && p < (n + 2.0) / (n + 1.0)) {
    add(ConstantKind::S_p, p);
    if (p < n) add(ConstantKind::K_p, p);
  }

  // b_lower = 0 energy bound trace constant.
  {
    const double two_star =
        n > 2 ? 2.0 * (n - 1.0) / (n - 2.0) : spec.two_star;
    const double s = n > 2 ? 2.0 : 2.0 * two_star / (two_star + 1.0);
    if (s < n) add(ConstantKind::K_p, s);
  }

  // Space-time embedding constants for the sup-norm machinery.
  const double theta_mp = 1.0 - 2.0 / r - n / q;
  if (theta_mp > 0.0 && q > 2.0 && r > 2.0) {
    if (n > 2) {
      add(ConstantKind::S_pq, 2.0, 2.0);
    } else {
      const double nu1 = (1.0 - 1.0 / q - 1.0 / r) - 0.5;  // sigma = 1
      if (nu1 > 1e-12) {
        const double s1 = 2.0 + 4.0 / (q * nu1);
        const double sub1 = 2.0 * s1 / (s1 + 2.0);
        add(ConstantKind::S_pq, sub1, sub1);
      }
      // Canonical sigma sits at the degenerate end (nu = 0).
      add(ConstantKind::S_pq, 2.0, 2.0);
    }
  }
  return reqs;
}

SobolevRegistry build_registry(const CaseConfig& cfg) {
  SobolevRegistry reg(domain_fingerprint(cfg.problem.domain));
  if (!cfg.registry.file.empty()) {
    std::ifstream is(cfg.registry.file);
    if (!is)
      throw ConfigError("cannot open registry file: " + cfg.registry.file);
    SobolevRegistry loaded = SobolevRegistry::load(is);
    if (!loaded.fingerprint().empty() &&
        loaded.fingerprint() != reg.fingerprint())
      throw ConfigError("registry file was built for domain " +
                        loaded.fingerprint() + ", expected " +
                        reg.fingerprint());
    for (const auto& e : loaded.entries()) reg.add(e);
  }

  const auto requests = constant_requests(cfg.problem);
  add_analytic_uppers(reg, cfg.problem.domain, requests);
  for (const auto& e : cfg.registry.overrides) reg.add(e);

  // Numeric-lower fallback for whatever is still unresolved (conditional).
  if (cfg.registry.estimator.enable_fallback && cfg.problem.dim() == 2) {
    Mesh emesh;
    bool have_mesh = false;
    for (const auto& rq : requests) {
      if (reg.has(rq.kind, rq.p, rq.q)) continue;
      if (!have_mesh) {
        emesh = build_box_mesh(cfg.problem.domain,
                               cfg.registry.estimator.target_h);
        have_mesh = true;
      }
      RayleighOptions ro;
      ro.iterations = cfg.registry.estimator.iterations;
      ro.starts = cfg.registry.estimator.starts;
      ro.seed = cfg.registry.estimator.seed;
      try {
        reg.add(estimate_rayleigh(emesh, rq.kind, rq.p, rq.q, ro));
      } catch (const RegimeError&) {
        // Constant not estimable for these exponents; the consuming
        // operation reports the missing entry.
      }
    }
  }
  return reg;
}

namespace {

void add_bound_rows(std::vector<Row>& rows, const CaseConfig& cfg,
                    const CaseContext& ctx, const RunOptions& opts,
                    json& constants, json& stage_errors) {
  const ProblemSpec& spec = cfg.problem;
  const bool measured = ctx.solved;
  const double bsharp = spec.law.b_lower;
  const double ell = spec.law.ell;

  // Each row lists the registry constants it consumed, with provenance.
  auto consumed = [&ctx](
      std::initializer_list<std::tuple<ConstantKind, double, double>> keys) {
    json out = json::array();
    for (const auto& [kind, p, q] : keys) {
      json e;
      e["constant"] = kind_name(kind);
      if (kind != ConstantKind::S_1) {
        e["p"] = p;
        if (kind == ConstantKind::S_pq) e["q"] = q;
      }
      try {
        const UpperConstant u = ctx.registry.upper(kind, p, q);
        e["value"] = num(u.value);
        e["provenance"] = provenance_name(u.provenance);
        if (u.conditional) e["conditional"] = true;
      } catch (const MissingConstantError&) {
        e["provenance"] = "missing";
      }
      out.push_back(e);
    }
    return out;
  };

  auto guard = [&](const std::vector<std::string>& row_ids, auto&& fn) {
    try {
      fn();
    } catch (const RegimeError& e) {
      for (const auto& id : row_ids) {
        Row r;
        r.id = id;
        r.verdict = Verdict::inapplicable;
        r.detail = e.what();
        rows.push_back(r);
      }
    } catch (const MissingConstantError& e) {
      for (const auto& id : row_ids) {
        Row r;
        r.id = id;
        r.verdict = Verdict::not_evaluated;
        r.detail = e.what();
        rows.push_back(r);
      }
      stage_errors["bounds:" + row_ids.front()] = e.what();
    }
  };

  // Drift-energy bounds (b_lower > 0).
  guard({"l2_sup_bound", "l2_energy_bound"}, [&] {
    if (!(bsharp > 0.0))
      throw RegimeError(
          "the b_lower > 0 energy bounds do not apply; see the b0 rows");
    const QResult Q = compute_Q(spec, ctx.registry, ctx.mesh);
    constants["Q"] = num(Q.value);
    constants["Q_main_display"] = num(Q.main_form);
    constants["Q_derivation_display"] = num(Q.derivation_form);
    const EnergyBound b =
        energy_bound(spec, ctx.registry, ctx.mesh, Q.value);
    constants["B0"] = num(b.B0);
    const bool cond = Q.conditional || b.conditional;
    const double qsub =
        q_sobolev_subscript(spec.drift.q, theta_of(spec.drift, spec.dim()));
    const json used = spec.drift.is_zero
                          ? json::array()
                          : consumed({{ConstantKind::S_p, qsub, 0.0}});
    {
      Row r;
      r.id = "l2_sup_bound";
      r.rhs = b.rhs_linf_sq;
      r.constants["Q"] = num(Q.value);
      r.constants["B0"] = num(b.B0);
      r.constants["sobolev"] = used;
      if (b.overflow) r.detail = "exp(Q) overflows; bound holds vacuously";
      if (measured) {
        r.measured = ctx.nr.l2_inf * ctx.nr.l2_inf;
        r.ratio = safe_ratio(r.measured, r.rhs);
        r.verdict = compare(r.measured, r.rhs, cond);
      }
      rows.push_back(r);
    }
    {
      Row r;
      r.id = "l2_energy_bound";
      r.rhs = b.rhs_energy;
      r.constants["Q"] = num(Q.value);
      r.constants["B0"] = num(b.B0);
      r.constants["sobolev"] = used;
      if (measured) {
        r.measured = spec.diffusion.a_lower * sqr(ctx.nr.grad_l2) +
                     bsharp * std::pow(ctx.nr.trace_ell, ell);
        r.ratio = safe_ratio(r.measured, r.rhs);
        r.verdict = compare(r.measured, r.rhs, cond);
      }
      rows.push_back(r);
    }
  });

  // L1-data bounds (b_lower > 0).
  guard({"l1_mass_bound", "l1_gradient_bound"}, [&] {
    const double Z = compute_Z(spec, ctx.mesh);
    constants["Z"] = num(Z);
    const Z12 z = compute_Z1_Z2(spec, ctx.registry, ctx.dm);
    constants["Z1"] = num(z.Z1);
    constants["Z2"] = num(z.Z2);
    const L1GradientBound b =
        l1_gradient_bound(spec, ctx.registry, ctx.mesh, Z, z.Z1, z.Z2);
    constants["B"] = num(b.B);
    const bool cond = z.conditional;
    {
      Row r;
      r.id = "l1_mass_bound";
      r.rhs = Z;
      r.constants["Z"] = num(Z);
      if (measured) {
        r.measured =
            ctx.nr.l1_inf + bsharp * std::pow(ctx.nr.trace_ellm1, ell - 1.0);
        r.ratio = safe_ratio(r.measured, r.rhs);
        r.verdict = compare(r.measured, r.rhs, false);
      }
      rows.push_back(r);
    }
    {
      Row r;
      r.id = "l1_gradient_bound";
      r.rhs = b.rhs_gradient_p;
      r.constants = {{"Z", num(Z)}, {"Z1", num(z.Z1)}, {"Z2", num(z.Z2)},
                     {"B", num(b.B)}};
      r.constants["sobolev"] = consumed({{ConstantKind::S_p, p_of(spec), 0.0},
                                         {ConstantKind::S_1, 1.0, 0.0}});
      if (measured) {
        const double p = p_of(spec);
        r.measured = std::pow(ctx.nr.grad_lp, p);
        r.ratio = safe_ratio(r.measured, r.rhs);
        r.verdict = compare(r.measured, r.rhs, cond);
      }
      rows.push_back(r);
    }
  });

  // b_lower = 0 variants.
  guard({"b0_sup_bound", "b0_gradient_bound"}, [&] {
    if (spec.law.b_lower > 0.0)
      throw RegimeError(
          "the b_lower = 0 energy bounds are stated for b_lower = 0");
    const QResult Q = compute_Q(spec, ctx.registry, ctx.mesh);
    const EnergyBoundB0 b = energy_bound_b0(spec, ctx.registry, ctx.mesh, Q.value);
    constants["A"] = num(b.A);
    const bool cond = Q.conditional || b.conditional;
    {
      Row r;
      r.id = "b0_sup_bound";
      r.rhs = b.rhs_linf;
      r.constants = {{"A", num(b.A)}, {"Q", num(Q.value)}, {"s", num(b.s)}};
      if (!spec.data.h.is_zero)
        r.constants["sobolev"] = consumed({{ConstantKind::K_p, b.s, 0.0}});
      if (b.overflow) r.detail = "exp(Q + T) overflows; bound holds vacuously";
      if (measured) {
        r.measured = ctx.nr.l2_inf;
        r.ratio = safe_ratio(r.measured, r.rhs);
        r.verdict = compare(r.measured, r.rhs, cond);
      }
      rows.push_back(r);
    }
    {
      Row r;
      r.id = "b0_gradient_bound";
      r.rhs = b.rhs_grad_sq;
      r.constants = {{"A", num(b.A)}, {"Q", num(Q.value)}};
      if (measured) {
        r.measured = sqr(ctx.nr.grad_l2);
        r.ratio = safe_ratio(r.measured, r.rhs);
        r.verdict = compare(r.measured, r.rhs, cond);
      }
      rows.push_back(r);
    }
  });

  guard({"b0_mass_bound", "b0_gradient_p_bound"}, [&] {
    if (spec.law.b_lower > 0.0)
      throw RegimeError(
          "the b_lower = 0 gradient bound is stated for b_lower = 0");
    const double Z = compute_Z(spec, ctx.mesh);
    const Z12 z = compute_Z1_Z2(spec, ctx.registry, ctx.dm);
    // The four-term sum B is shared with the b_lower > 0 display; its own
    // b-ratio term is absent here.
    L1GradientBound base;
    {
      // l1_gradient_bound requires b_lower > 0; recompute its B part inline via a
      // spec copy with the same exponents (B does not involve b).
      ProblemSpec tmp = spec;
      tmp.law.b_lower = 1.0;
      base = l1_gradient_bound(tmp, ctx.registry, ctx.mesh, Z, z.Z1, z.Z2);
    }
    const L1GradientBoundB0 b =
        l1_gradient_bound_b0(spec, ctx.registry, ctx.mesh, Z, base.B);
    constants["beta"] = num(b.beta);
    constants["alpha_ell"] = num(b.alpha_ell);
    constants["beta_ell"] = num(b.beta_ell);
    {
      Row r;
      r.id = "b0_mass_bound";
      r.rhs = Z;
      r.constants["Z"] = num(Z);
      if (measured) {
        r.measured = ctx.nr.l1_inf;
        r.ratio = safe_ratio(r.measured, r.rhs);
        r.verdict = compare(r.measured, r.rhs, false);
      }
      rows.push_back(r);
    }
    Row r;
    r.id = "b0_gradient_p_bound";
    r.constants = {{"beta", num(b.beta)},
                   {"alpha_ell", num(b.alpha_ell)},
                   {"beta_ell", num(b.beta_ell)},
                   {"B", num(base.B)}};
    r.constants["sobolev"] = consumed({{ConstantKind::K_p, p_of(spec), 0.0},
                                       {ConstantKind::S_p, p_of(spec), 0.0},
                                       {ConstantKind::S_1, 1.0, 0.0}});
    if (!b.applicable) {
      r.verdict = Verdict::inapplicable;
      r.detail = b.reason;
    } else {
      r.rhs = b.rhs_gradient_p;
      if (measured) {
        const double p = p_of(spec);
        r.measured = std::pow(ctx.nr.grad_lp, p);
        r.ratio = safe_ratio(r.measured, r.rhs);
        r.verdict = compare(r.measured, r.rhs,
                            b.conditional || z.conditional);
      }
    }
    rows.push_back(r);
  });

  // Sup-norm iteration (max principle).
  guard({"max_principle"}, [&] {
    const MoserParams mp = moser_params(spec, ctx.registry, ctx.mesh);
    json cj = {{"P", num(mp.P)},       {"P1", num(mp.P1)},
               {"P2", num(mp.P2)},     {"sigma", num(mp.sigma)},
               {"nu", num(mp.nu_sigma)}, {"C_n", num(mp.Cn_sigma)},
               {"clamped", mp.clamped},  {"smallness_ok", mp.smallness_ok}};
    {
      // The embedding constants behind C_n at the canonical sigma and at 1.
      std::initializer_list<std::tuple<ConstantKind, double, double>> keys =
          {{ConstantKind::S_pq, 2.0, 2.0}};
      cj["sobolev"] = consumed(keys);
    }
    constants["P"] = num(mp.P);
    constants["P1"] = num(mp.P1);
    constants["P2"] = num(mp.P2);
    constants["sigma"] = num(mp.sigma);
    Row r;
    r.id = "max_principle";
    r.constants = cj;
    if (!mp.smallness_ok) {
      r.verdict = Verdict::inapplicable;
      std::ostringstream os;
      os << "smallness condition fails: P2 = " << mp.P2 << " > P = " << mp.P;
      r.detail = os.str();
      rows.push_back(r);
      return;
    }
    if (!measured) {
      rows.push_back(r);
      return;
    }
    const double base =
        std::pow(spec.T(), mp.nu_one / 2.0) *
        std::sqrt(sqr(ctx.nr.l2_inf) +
                  mp.Cn_one * (sqr(ctx.nr.grad_l2) + sqr(ctx.nr.trace_l2)));
    const MoserSeriesResult series =
        moser_series(mp, base, 1e-12, opts.moser_max_terms);
    r.constants["M"] = num(series.M);
    r.constants["series_terms"] = series.terms_used;
    constants["M"] = num(series.M);
    if (!series.converged) {
      r.verdict = Verdict::inapplicable;
      std::ostringstream os;
      os << "divergent series (general term tends to 1); partial value M = "
         << series.M << " after " << series.terms_used << " terms";
      r.detail = os.str();
      rows.push_back(r);
      return;
    }
    r.measured = ctx.nr.ess_sup;
    r.rhs = series.M;
    r.ratio = safe_ratio(r.measured, r.rhs);
    r.verdict = compare(r.measured, r.rhs, mp.conditional);
    rows.push_back(r);
    Row rb;
    rb.id = "max_principle_boundary";
    rb.rhs = boundary_max_bound(series.M, mp.P1, bsharp);
    rb.measured = ctx.nr.ess_sup_gamma;
    rb.ratio = safe_ratio(rb.measured, rb.rhs);
    rb.verdict = compare(rb.measured, rb.rhs, mp.conditional);
    rows.push_back(rb);
  });
}

}  // namespace

bool VerificationReport::any_violated() const {
  if (!doc.contains("rows")) return false;
  for (const auto& r : doc["rows"])
    if (r.value("verdict", "") == "violated") return true;
  return false;
}

bool VerificationReport::has_stage_errors() const {
  return doc.contains("stage_errors") && !doc["stage_errors"].empty();
}

int VerificationReport::exit_code() const {
  if (has_stage_errors()) return 2;
  return any_violated() ? 1 : 0;
}

std::string VerificationReport::canonical_dump(int indent) const {
  json copy = doc;
  copy.erase("meta");
  return copy.dump(indent);
}

std::string VerificationReport::to_csv() const {
  std::ostringstream os;
  os << "id,verdict,measured,rhs,ratio,detail\n";
  if (doc.contains("rows")) {
    for (const auto& r : doc["rows"]) {
      auto cell = [&](const char* key) {
        if (!r.contains(key)) return std::string();
        const json& v = r[key];
        if (v.is_string()) return v.get<std::string>();
        std::ostringstream c;
        c << v;
        return c.str();
      };
      std::string detail = cell("detail");
      for (char& ch : detail)
        if (ch == ',') ch = ';';
      os << cell("id") << ',' << cell("verdict") << ',' << cell("measured")
         << ',' << cell("rhs") << ',' << cell("ratio") << ',' << detail
         << "\n";
    }
  }
  return os.str();
}

VerificationReport run_case(const CaseConfig& cfg, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  json doc;
  json stage_errors = json::object();
  doc["case"] = cfg.name;
  doc["seed"] = cfg.seed;

  CaseContext ctx;
  bool have_mesh = false;

  try {
    ctx.mesh = build_box_mesh(cfg.problem.domain, cfg.disc.target_h);
    ctx.dm = measures(ctx.mesh, cfg.problem.T());
    have_mesh = true;
    doc["mesh"] = {{"vertices", ctx.mesh.num_vertices()},
                   {"cells", ctx.mesh.num_cells()},
                   {"resolution", num(ctx.mesh.resolution)}};
    doc["measures"] = {{"vol_omega", num(ctx.dm.vol_omega)},
                       {"area_gamma", num(ctx.dm.area_gamma)},
                       {"area_rest", num(ctx.dm.area_rest)},
                       {"vol_QT", num(ctx.dm.vol_QT)},
                       {"area_SigmaT", num(ctx.dm.area_SigmaT)}};
  } catch (const std::exception& e) {
    stage_errors["mesh"] = e.what();
  }

  if (have_mesh) {
    ctx.validation = validate(cfg.problem, cfg.sampling);
    doc["validation"] = validation_to_json(ctx.validation);
    try {
      ctx.registry = build_registry(cfg);
      doc["registry"] = registry_to_json(ctx.registry);
    } catch (const std::exception& e) {
      stage_errors["registry"] = e.what();
    }
  }

  SolverOptions sopts;
  sopts.dt = cfg.disc.dt;
  sopts.truncation = cfg.disc.m;
  sopts.picard_tol = cfg.disc.picard_tol;
  sopts.picard_max = cfg.disc.picard_max;
  sopts.upwind = cfg.disc.upwind;

  if (have_mesh && opts.do_solve && cfg.problem.dim() == 2) {
    try {
      ctx.sol = solve(cfg.problem, ctx.mesh, sopts);
      ctx.solved = true;
      std::vector<NormRequest> reqs = {{2.0, 2.0}, {2.0, 4.0}};
      for (const auto& pq : cfg.norm_requests)
        reqs.push_back({pq[0], pq[1]});
      ctx.nr = norms(ctx.sol, ctx.mesh, cfg.problem, reqs);
      json nj;
      nj["l2_inf"] = num(ctx.nr.l2_inf);
      nj["l1_inf"] = num(ctx.nr.l1_inf);
      nj["grad_l2"] = num(ctx.nr.grad_l2);
      nj["grad_lp"] = num(ctx.nr.grad_lp);
      nj["trace_ell"] = num(ctx.nr.trace_ell);
      nj["trace_ellm1"] = num(ctx.nr.trace_ellm1);
      nj["trace_l2"] = num(ctx.nr.trace_l2);
      nj["ess_sup"] = num(ctx.nr.ess_sup);
      nj["ess_sup_gamma"] = num(ctx.nr.ess_sup_gamma);
      nj["nodal_min"] = num(ctx.nr.nodal_min);
      nj["trace_min"] = num(ctx.nr.trace_min);
      for (const auto& [pq, v] : ctx.nr.mixed) {
        std::ostringstream key;
        key << "L(" << pq.first << "," << pq.second << ")";
        nj[key.str()] = num(v);
      }
      doc["norms"] = nj;
      int worst_picard = 0;
      for (const auto& d : ctx.sol.diagnostics)
        worst_picard = std::max(worst_picard, d.picard_iterations);
      doc["solver"] = {{"steps", ctx.sol.steps()},
                       {"dt", num(ctx.sol.dt())},
                       {"max_picard_iterations", worst_picard}};
    } catch (const std::exception& e) {
      stage_errors["solve"] = e.what();
    }
  }

  std::vector<Row> rows;
  json constants = json::object();

  if (ctx.solved) {
    // Scheme-level diagnostics first: they gate the meaning of the rest.
    {
      const auto res = mass_balance(ctx.sol, cfg.problem, ctx.mesh, sopts);
      double worst = 0.0;
      for (double r : res) worst = std::max(worst, std::abs(r));
      Row r;
      r.id = "mass_balance";
      r.measured = worst;
      r.rhs = 100.0 * cfg.disc.picard_tol * (1.0 + ctx.nr.ess_sup) *
              std::max(1.0, ctx.dm.vol_omega);
      r.ratio = safe_ratio(r.measured, r.rhs);
      r.verdict = compare(r.measured, r.rhs, false);
      rows.push_back(r);
    }
    if (cfg.problem.drift.is_zero && cfg.problem.data.f.is_zero) {
      const EnergyCheck ec = energy_check(ctx.sol, cfg.problem, ctx.mesh);
      Row r;
      r.id = "energy_inequality";
      r.measured = ec.lhs;
      r.rhs = ec.rhs + 1e-8;
      r.ratio = safe_ratio(ec.lhs, ec.rhs);
      r.constants = {{"lhs", num(ec.lhs)}, {"rhs", num(ec.rhs)},
                     {"slack", num(ec.slack)}};
      r.verdict = compare(r.measured, r.rhs, false);
      rows.push_back(r);
    } else {
      Row r;
      r.id = "energy_inequality";
      r.verdict = Verdict::inapplicable;
      r.detail = "stated for the drift-free, source-free scheme";
      rows.push_back(r);
    }
    {
      // Minimum principle (nonnegative data).
      const bool u0_ok = ctx.validation.check("u0 >= 0 (sampled)");
      const bool h_ok = ctx.validation.check("h >= 0 (sampled)");
      bool f_ok = cfg.problem.data.f.is_zero;
      if (!f_ok) {
        // sign-check f on the sampling lattice
        f_ok = true;
        const double T = cfg.problem.T();
        for (int k = 0; k <= 8 && f_ok; ++k)
          for (const auto& vtx : ctx.mesh.vertices)
            if (cfg.problem.data.f.fn(vtx, T * k / 8.0) < -1e-12) {
              f_ok = false;
              break;
            }
      }
      Row r;
      r.id = "min_principle";
      if (u0_ok && h_ok && f_ok) {
        const bool exact = cfg.problem.drift.is_zero;
        const double tol = exact ? 0.0 : 1e-8;
        r.measured = -ctx.nr.nodal_min;  // <= tol means min >= -tol
        r.rhs = tol;
        r.constants = {{"nodal_min", num(ctx.nr.nodal_min)},
                       {"trace_min", num(ctx.nr.trace_min)},
                       {"tolerance", num(tol)}};
        r.verdict = r.measured <= r.rhs ? Verdict::satisfied
                                        : Verdict::violated;
        if (exact) r.detail = "non-obtuse mesh, no drift: exact sign bound";
      } else {
        r.verdict = Verdict::inapplicable;
        r.detail = "requires u0 >= 0, h >= 0, f >= 0";
      }
      rows.push_back(r);
    }
    if (cfg.problem.drift.is_zero && cfg.problem.law.b_lower > 0.0 &&
        cfg.problem.data.f.is_zero) {
      // Crude sup envelope (sanity only, drift-free).
      const double su0 = sampled_sup(cfg.problem.data.u0.fn,
                                     cfg.problem.domain, false);
      const double sh =
          cfg.problem.data.h.is_zero
              ? 0.0
              : sampled_sup(cfg.problem.data.h.fn, cfg.problem.domain, true);
      Row r;
      r.id = "sup_envelope";
      r.measured = ctx.nr.ess_sup;
      r.rhs = su0 + cfg.problem.T() * sh * ctx.dm.area_gamma +
              (sh > 0.0 ? std::pow(sh / cfg.problem.law.b_lower,
                                   1.0 / (cfg.problem.law.ell - 1.0))
                        : 0.0);
      r.ratio = safe_ratio(r.measured, r.rhs);
      r.verdict = compare(r.measured, r.rhs, false);
      rows.push_back(r);
    }
    {
      // Mixed-norm interpolation consistency on the solved field.
      const double n24 = ctx.nr.mixed.at({2.0, 4.0});
      const double n22 = ctx.nr.mixed.at({2.0, 2.0});
      Row r;
      r.id = "interpolation_consistency";
      r.measured = n24;
      r.rhs = interpolation_bound(ctx.nr.l2_inf, n22, 0.5);
      r.ratio = safe_ratio(r.measured, r.rhs);
      r.verdict = compare(r.measured, r.rhs, false);
      rows.push_back(r);
    }
    {
      // Operational meaning of analytic-upper registry entries on the final
      // discrete field.
      double worst = 0.0;
      std::string worst_key = "none";
      std::vector<double> v(ctx.sol.fields.back().data(),
                            ctx.sol.fields.back().data() + ctx.mesh.num_vertices());
      for (const auto& e : ctx.registry.entries()) {
        if (e.provenance != Provenance::analytic_upper) continue;
        const QuotientNorms qn =
            quotient_norms(ctx.mesh, v, e.kind, e.p, e.q);
        if (qn.source <= 0.0) continue;
        const double ratio = qn.target / (qn.source * e.value);
        if (ratio > worst) {
          worst = ratio;
          worst_key = kind_name(e.kind);
        }
      }
      Row r;
      r.id = "registry_consistency";
      r.measured = worst;
      r.rhs = 1.0;
      r.ratio = worst;
      r.detail = "worst quotient/constant over analytic-upper entries (" +
                 worst_key + ")";
      r.verdict = compare(r.measured, r.rhs, false);
      rows.push_back(r);
    }
  }

  if (have_mesh && !stage_errors.contains("registry"))
    add_bound_rows(rows, cfg, ctx, opts, constants, stage_errors);

  // Refined diagnostic re-run before reporting a violation.
  bool violated = false;
  for (const Row& r : rows) violated = violated || r.verdict == Verdict::violated;
  if (violated && opts.allow_diagnostic && cfg.diagnose_on_violation &&
      ctx.solved) {
    CaseConfig refined = cfg;
    refined.disc.target_h *= 0.5;
    if (refined.disc.dt > 0) refined.disc.dt *= 0.5;
    refined.name = cfg.name + ":refined";
    RunOptions ropts = opts;
    ropts.allow_diagnostic = false;
    VerificationReport rref = run_case(refined, ropts);
    doc["diagnostic"] = {{"note", "verdicts taken from the refined re-run"},
                         {"refined_rows", rref.doc.value("rows", json::array())}};
    // Adopt refined verdicts for rows that were violated.
    for (Row& r : rows) {
      if (r.verdict != Verdict::violated) continue;
      for (const auto& rr : rref.doc.value("rows", json::array())) {
        if (rr.value("id", "") == r.id) {
          r.detail += (r.detail.empty() ? "" : "; ");
          const std::string rv = rr.value("verdict", std::string());
          r.detail += "refined verdict: " + rv;
          if (rv == "conditional")
            r.verdict = Verdict::conditional;
          else if (rv != "violated" && !rv.empty())
            r.verdict = Verdict::satisfied;
        }
      }
    }
  }

  json jrows = json::array();
  for (const Row& r : rows) jrows.push_back(r.to_json());
  doc["rows"] = jrows;
  doc["constants"] = constants;
  if (!stage_errors.empty()) doc["stage_errors"] = stage_errors;

  const auto t1 = std::chrono::steady_clock::now();
  doc["meta"] = {
      {"wall_time_ms",
       std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()}};

  VerificationReport rep;
  rep.doc = std::move(doc);
  return rep;
}

int SweepResult::exit_code() const {
  int code = 0;
  for (const auto& r : reports) code = std::max(code, r.exit_code());
  return code;
}

SweepResult sweep(const CaseConfig& base, const std::vector<SweepAxis>& axes,
                  const RunOptions& opts, int max_parallel) {
  if (!base.raw.is_object())
    throw ConfigError("sweep needs the case's source document (base.raw)");
  // Cartesian product of axis values.
  std::vector<json> labels;
  std::vector<json> docs;
  labels.emplace_back(json::object());
  docs.push_back(base.raw);
  for (const auto& axis : axes) {
    std::vector<json> nl, nd;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      for (const json& v : axis.values) {
        json lab = labels[i];
        lab[axis.key] = v;
        nl.push_back(lab);
        nd.push_back(apply_override(docs[i], axis.key, v));
      }
    }
    labels = std::move(nl);
    docs = std::move(nd);
  }

  SweepResult result;
  result.case_labels = labels;
  result.reports.resize(docs.size());

  const int workers =
      max_parallel > 0
          ? max_parallel
          : std::max(1u, std::min(4u, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= docs.size()) break;
      try {
        CaseConfig cfg = parse_config(docs[i]);
        std::ostringstream nm;
        nm << base.name << "#" << i;
        cfg.name = nm.str();
        cfg.seed = mix_seed(base.seed, i);
        result.reports[i] = run_case(cfg, opts);
      } catch (const std::exception& e) {
        VerificationReport rep;
        rep.doc = {{"case", base.name + "#" + std::to_string(i)},
                   {"stage_errors", {{"config", e.what()}}},
                   {"rows", json::array()},
                   {"meta", json::object()}};
        result.reports[i] = std::move(rep);
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  // Summary: worst ratio per row id across the sweep.
  std::map<std::string, double> worst;
  for (const auto& rep : result.reports) {
    for (const auto& r : rep.doc.value("rows", json::array())) {
      if (!r.contains("ratio") || !r["ratio"].is_number()) continue;
      const std::string id = r.value("id", "");
      worst[id] = std::max(worst[id], r["ratio"].get<double>());
    }
  }
  result.summary = json::object();
  for (const auto& [id, v] : worst) result.summary[id] = v;

  std::ostringstream csv;
  csv << "case,axes,row,verdict,measured,rhs,ratio\n";
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const auto& rep = result.reports[i];
    std::string axes_str = result.case_labels[i].dump();
    for (char& c : axes_str)
      if (c == ',') c = ';';
    for (const auto& r : rep.doc.value("rows", json::array())) {
      auto cell = [&](const char* key) -> std::string {
        if (!r.contains(key)) return "";
        std::ostringstream c;
        c << r[key];
        return c.str();
      };
      csv << rep.doc.value("case", "") << ',' << axes_str << ','
          << r.value("id", "") << ',' << r.value("verdict", "") << ','
          << cell("measured") << ',' << cell("rhs") << ',' << cell("ratio")
          << "\n";
    }
  }
  result.summary_csv = csv.str();
  return result;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream os(path);
  os << text;
}

void dump_solution(const CaseConfig& cfg, const fs::path& dir) {
  // Re-solve and dump per-step fields plus line-delimited diagnostics.
  Mesh mesh = build_box_mesh(cfg.problem.domain, cfg.disc.target_h);
  SolverOptions sopts;
  sopts.dt = cfg.disc.dt;
  sopts.truncation = cfg.disc.m;
  sopts.picard_tol = cfg.disc.picard_tol;
  sopts.picard_max = cfg.disc.picard_max;
  sopts.upwind = cfg.disc.upwind;
  DiscreteSolution sol = solve(cfg.problem, mesh, sopts);
  fs::create_directories(dir / "fields");
  {
    std::ofstream ms(dir / "mesh.txt");
    export_mesh(mesh, ms);
  }
  for (std::size_t k = 0; k < sol.fields.size(); ++k) {
    std::ostringstream name;
    name << "u_" << std::setw(5) << std::setfill('0') << k << ".txt";
    std::ofstream os(dir / "fields" / name.str());
    os.precision(17);
    os << "# t " << sol.times[k] << "\n";
    for (int i = 0; i < sol.fields[k].size(); ++i)
      os << i << ' ' << sol.fields[k][i] << "\n";
  }
  std::ofstream ds(dir / "diagnostics.jsonl");
  for (std::size_t k = 0; k < sol.diagnostics.size(); ++k) {
    json j = {{"step", k + 1},
              {"picard_iterations", sol.diagnostics[k].picard_iterations},
              {"residual", sol.diagnostics[k].residual}};
    ds << j.dump() << "\n";
  }
}

}  // namespace

int cli(const std::vector<std::string>& args) {
  CLI::App app{"parabound: solver and a-priori bound verifier for mixed "
               "Neumann-Robin parabolic problems"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string out_dir = ".";
  std::string format;
  std::uint64_t seed_override = 0;
  bool have_seed = false;
  int max_terms = 0;
  bool quiet = false;
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "report format: json|csv");
  app.add_option_function<std::uint64_t>(
      "--seed", [&](std::uint64_t s) { seed_override = s; have_seed = true; },
      "seed override");
  app.add_option("--max-terms", max_terms, "series term cap");
  app.add_flag("--quiet", quiet, "suppress console output");

  std::string cfg_validate, cfg_solve, cfg_bounds, cfg_verify, cfg_sweep,
      cfg_sobolev;
  auto* sc_validate = app.add_subcommand("validate", "check assumptions");
  sc_validate->add_option("config", cfg_validate)->required();
  auto* sc_solve = app.add_subcommand("solve", "run the discrete solver");
  sc_solve->add_option("config", cfg_solve)->required();
  auto* sc_bounds = app.add_subcommand("bounds", "evaluate bound formulas only");
  sc_bounds->add_option("config", cfg_bounds)->required();
  auto* sc_verify = app.add_subcommand("verify", "full pipeline with verdicts");
  sc_verify->add_option("config", cfg_verify)->required();
  auto* sc_sweep = app.add_subcommand("sweep", "Cartesian case sweep");
  sc_sweep->add_option("config", cfg_sweep)->required();
  std::vector<std::string> axis_specs;
  sc_sweep->add_option("--axis", axis_specs, "axis as key=v1,v2,...");
  auto* sc_sobolev = app.add_subcommand("sobolev", "run the constant estimator");
  sc_sobolev->add_option("config", cfg_sobolev)->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream os;
    (void)app.exit(e, os, os);
    if (!quiet) std::cerr << os.str();
    return 2;
  }

  auto emit = [&](const std::string& name, const VerificationReport& rep) {
    fs::path out = fs::path(out_dir) / (name + (format == "csv" ? ".csv" : ".json"));
    write_text(out, format == "csv" ? rep.to_csv() : rep.doc.dump(2) + "\n");
    if (!quiet) {
      for (const auto& r : rep.doc.value("rows", json::array()))
        std::cout << r.value("id", "") << ": " << r.value("verdict", "")
                  << "\n";
      std::cout << "report written to " << out.string() << "\n";
    }
  };

  try {
    if (*sc_validate) {
      CaseConfig cfg = load_config_file(cfg_validate);
      const ValidationReport v = validate(cfg.problem);
      if (!quiet) std::cout << v.summary();
      return 0;
    }
    if (*sc_solve) {
      CaseConfig cfg = load_config_file(cfg_solve);
      if (have_seed) cfg.seed = seed_override;
      RunOptions opts;
      VerificationReport rep = run_case(cfg, opts);
      emit(cfg.name + "_solve", rep);
      if (cfg.outputs.dump_fields) dump_solution(cfg, fs::path(out_dir));
      return rep.has_stage_errors() ? 2 : 0;
    }
    if (*sc_bounds) {
      CaseConfig cfg = load_config_file(cfg_bounds);
      if (have_seed) cfg.seed = seed_override;
      RunOptions opts;
      opts.do_solve = false;
      if (max_terms > 0) opts.moser_max_terms = max_terms;
      VerificationReport rep = run_case(cfg, opts);
      emit(cfg.name + "_bounds", rep);
      return rep.exit_code();
    }
    if (*sc_verify) {
      CaseConfig cfg = load_config_file(cfg_verify);
      if (have_seed) cfg.seed = seed_override;
      RunOptions opts;
      if (max_terms > 0) opts.moser_max_terms = max_terms;
      VerificationReport rep = run_case(cfg, opts);
      emit(cfg.name + "_verify", rep);
      return rep.exit_code();
    }
    if (*sc_sweep) {
      CaseConfig cfg = load_config_file(cfg_sweep);
      if (have_seed) cfg.seed = seed_override;
      std::vector<SweepAxis> axes;
      for (const std::string& spec_str : axis_specs) {
        const auto eq = spec_str.find('=');
        if (eq == std::string::npos)
          throw ConfigError("axis must look like key=v1,v2,...: " + spec_str);
        SweepAxis ax;
        ax.key = spec_str.substr(0, eq);
        std::istringstream vs(spec_str.substr(eq + 1));
        std::string tok;
        while (std::getline(vs, tok, ',')) {
          try {
            ax.values.push_back(json(std::stod(tok)));
          } catch (...) {
            ax.values.push_back(json(tok));
          }
        }
        if (ax.values.empty()) throw ConfigError("axis has no values");
        axes.push_back(ax);
      }
      RunOptions opts;
      if (max_terms > 0) opts.moser_max_terms = max_terms;
      SweepResult res = sweep(cfg, axes, opts);
      for (std::size_t i = 0; i < res.reports.size(); ++i)
        write_text(fs::path(out_dir) / (cfg.name + "_" + std::to_string(i) +
                                        ".json"),
                   res.reports[i].doc.dump(2) + "\n");
      write_text(fs::path(out_dir) / (cfg.name + "_summary.csv"),
                 res.summary_csv);
      write_text(fs::path(out_dir) / (cfg.name + "_summary.json"),
                 res.summary.dump(2) + "\n");
      if (!quiet)
        std::cout << "sweep: " << res.reports.size() << " cases, summary in "
                  << (fs::path(out_dir) / (cfg.name + "_summary.csv")).string()
                  << "\n";
      return res.exit_code();
    }
    if (*sc_sobolev) {
      CaseConfig cfg = load_config_file(cfg_sobolev);
      if (have_seed) cfg.registry.estimator.seed = seed_override;
      Mesh mesh = build_box_mesh(cfg.problem.domain,
                                 cfg.registry.estimator.target_h);
      SobolevRegistry reg(domain_fingerprint(cfg.problem.domain));
      RayleighOptions ro;
      ro.iterations = cfg.registry.estimator.iterations;
      ro.starts = cfg.registry.estimator.starts;
      ro.seed = cfg.registry.estimator.seed;
      for (const auto& rq : constant_requests(cfg.problem)) {
        try {
          reg.add(estimate_rayleigh(mesh, rq.kind, rq.p, rq.q, ro));
        } catch (const RegimeError&) {
        }
      }
      fs::path out = fs::path(out_dir) / "registry.txt";
      fs::create_directories(out.parent_path());
      std::ofstream os(out);
      reg.save(os);
      if (!quiet) {
        reg.save(std::cout);
        std::cout << "registry written to " << out.string() << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    if (!quiet) std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace parabound
