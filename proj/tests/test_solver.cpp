#include <doctest.h>

#include <cmath>

#include "parabound/error.hpp"
#include "parabound/norms.hpp"
#include "parabound/presets.hpp"
#include "parabound/solver.hpp"

using namespace parabound;

namespace {

DomainSpec unit_square(std::vector<std::string> gamma = {"all"}) {
  DomainSpec d;
  d.dimension = 2;
  d.extents = {1.0, 1.0};
  d.gamma_faces = std::move(gamma);
  d.time_horizon = 1.0;
  return d;
}

ProblemSpec base_spec(const std::string& law = "robin") {
  ProblemSpec s;
  s.domain = unit_square();
  s.diffusion = make_diffusion("identity", {}, s.domain);
  s.drift.E = make_vector_field("zero", {}, s.domain);
  s.drift.is_zero = true;
  s.drift.q = 8.0;
  s.drift.r = 8.0;
  s.law = make_boundary_law(law, {{"b_star", 1.0}, {"sigma", 1.0}});
  s.data.u0 = {make_scalar_field("zero", {}), true, "zero"};
  s.data.h = {make_scalar_field("zero", {}), true, "zero"};
  s.data.f = {make_scalar_field("zero", {}), true, "zero"};
  return s;
}

// Two right triangles on the unit square, diagonal (0,0)-(1,1).
Mesh two_cell_mesh() {
  Mesh m;
  m.dimension = 2;
  m.extents = {1.0, 1.0};
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  m.cells = {0, 1, 2, 0, 2, 3};
  m.resolution = std::sqrt(2.0);
  Facet f;
  f.tag = FacetTag::gamma;
  f.v = {0, 1, -1};
  m.boundary_facets.push_back(f);
  f.v = {1, 2, -1};
  m.boundary_facets.push_back(f);
  f.v = {2, 3, -1};
  m.boundary_facets.push_back(f);
  f.v = {3, 0, -1};
  m.boundary_facets.push_back(f);
  return m;
}

}  // namespace

TEST_CASE("initial projection reproduces constants exactly") {
  const Mesh mesh = build_box_mesh(unit_square(), 0.25);
  const Eigen::VectorXd u =
      project_initial(mesh, make_scalar_field("constant", {{"value", 3.0}}));
  for (int i = 0; i < u.size(); ++i)
    CHECK(u[i] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("initial projection of a linear field is exact at interior nodes") {
  const Mesh mesh = build_box_mesh(unit_square(), 0.13);
  const Eigen::VectorXd u = project_initial(
      mesh, make_scalar_field("affine", {{"a0", 0.0}, {"ax", 1.0}}));
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    const Point& x = mesh.vertices[i];
    const bool interior = x[0] > 1e-9 && x[0] < 1.0 - 1e-9 && x[1] > 1e-9 &&
                          x[1] < 1.0 - 1e-9;
    if (interior) CHECK(u[i] == doctest::Approx(x[0]).epsilon(1e-12));
  }
}

TEST_CASE("initial projection of a step gives cellwise averages at the jump") {
  const Mesh mesh = two_cell_mesh();
  // 1 on the lower-right cell (x > y), 0 above.
  const Eigen::VectorXd u = project_initial(
      mesh, make_scalar_field("step", {{"axis", 0}, {"threshold", -1.0},
                                       {"low", 0.0}, {"high", 1.0}}));
  // That step preset splits on x > -1 (always 1); build the diagonal step
  // by hand instead.
  ScalarFn diag_step = [](const Point& x, double) {
    return x[0] > x[1] ? 1.0 : 0.0;
  };
  const Eigen::VectorXd v = project_initial(mesh, diag_step);
  CHECK(v[1] == doctest::Approx(1.0));   // interior of the "1" cell
  CHECK(v[3] == doctest::Approx(0.0));   // interior of the "0" cell
  CHECK(v[0] == doctest::Approx(0.5));   // node on the jump: patch average
  CHECK(v[2] == doctest::Approx(0.5));
  (void)u;
}

TEST_CASE("pure neumann constant initial state is a steady state") {
  ProblemSpec s = base_spec("neumann");
  s.data.u0 = {make_scalar_field("constant", {{"value", 2.5}}), false,
               "constant"};
  const Mesh mesh = build_box_mesh(s.domain, 0.25);
  SolverOptions opts;
  opts.dt = 0.1;
  const DiscreteSolution sol = solve(s, mesh, opts);
  CHECK(sol.steps() == 10);
  CHECK(static_cast<int>(sol.fields.size()) == 11);
  for (const auto& u : sol.fields)
    for (int i = 0; i < u.size(); ++i)
      CHECK(u[i] == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("linear robin problem takes one linear solve per step") {
  ProblemSpec s = base_spec("robin");
  s.data.u0 = {make_scalar_field("cos2", {{"amplitude", 1.0}}), false, "cos2"};
  const Mesh mesh = build_box_mesh(s.domain, 0.25);
  SolverOptions opts;
  opts.dt = 0.1;
  const DiscreteSolution sol = solve(s, mesh, opts);
  for (const auto& d : sol.diagnostics) CHECK(d.picard_iterations == 1);
}

TEST_CASE("mass balance: neumann conserves, sources push, sinks drain") {
  const Mesh mesh = build_box_mesh(unit_square(), 0.2);
  FemSpace fem(mesh);
  SolverOptions opts;
  opts.dt = 0.05;

  ProblemSpec neumann = base_spec("neumann");
  neumann.data.u0 = {make_scalar_field("cos2", {{"amplitude", 1.0}}), false,
                     "cos2"};
  const DiscreteSolution ns = solve(neumann, mesh, opts);
  const double mass0 = lumped_integral(fem, ns.fields.front());
  for (const auto& u : ns.fields)
    CHECK(lumped_integral(fem, u) == doctest::Approx(mass0).epsilon(1e-10));
  for (double r : mass_balance(ns, neumann, mesh, opts))
    CHECK(std::abs(r) < 1e-10);

  ProblemSpec fed = base_spec("neumann");
  fed.data.h = {make_scalar_field("constant", {{"value", 1.0}}), false,
                "constant"};
  const DiscreteSolution fs = solve(fed, mesh, opts);
  for (int k = 1; k <= fs.steps(); ++k)
    CHECK(lumped_integral(fem, fs.fields[k]) >
          lumped_integral(fem, fs.fields[k - 1]));

  ProblemSpec drained = base_spec("robin");
  drained.data.u0 = {make_scalar_field("constant", {{"value", 1.0}}), false,
                     "constant"};
  const DiscreteSolution ds = solve(drained, mesh, opts);
  for (int k = 1; k <= ds.steps(); ++k)
    CHECK(lumped_integral(fem, ds.fields[k]) <
          lumped_integral(fem, ds.fields[k - 1]));
  for (double r : mass_balance(ds, drained, mesh, opts))
    CHECK(std::abs(r) < 1e-10);
}

TEST_CASE("discrete minimum principle is exact without drift") {
  ProblemSpec s = base_spec("blackbody");
  s.diffusion = make_diffusion("checkerboard",
                               {{"a1", 0.5}, {"a2", 2.0}, {"cells", 4}},
                               s.domain);
  s.data.u0 = {make_scalar_field("gaussian", {{"amplitude", 2.0}}), false,
               "gaussian"};
  s.data.h = {make_scalar_field("constant", {{"value", 0.5}}), false,
              "constant"};
  const Mesh mesh = build_box_mesh(s.domain, 1.0 / 8.0);
  SolverOptions opts;
  opts.dt = 0.05;
  const DiscreteSolution sol = solve(s, mesh, opts);
  const NormReport nr = norms(sol, mesh, s);
  CHECK(nr.nodal_min >= 0.0);
  CHECK(nr.trace_min >= 0.0);
}

TEST_CASE("blackbody energy inequality holds to solver tolerance") {
  ProblemSpec s = base_spec("blackbody");
  s.data.u0 = {make_scalar_field("cos2", {{"amplitude", 1.5}}), false, "cos2"};
  s.data.h = {make_scalar_field("constant", {{"value", 0.8}}), false,
              "constant"};
  s.domain.time_horizon = 0.2;
  const Mesh mesh = build_box_mesh(s.domain, 1.0 / 12.0);
  SolverOptions opts;
  opts.dt = 0.02;
  const DiscreteSolution sol = solve(s, mesh, opts);
  const EnergyCheck ec = energy_check(sol, s, mesh);
  CHECK(ec.slack >= -1e-8);
  CHECK(ec.lhs > 0.0);
}

TEST_CASE("truncation at a level above the sup does not change the solution") {
  ProblemSpec s = base_spec("robin");
  s.data.u0 = {make_scalar_field("cos2", {{"amplitude", 1.0}}), false, "cos2"};
  s.drift.preset = "rotor";
  s.drift.is_zero = false;
  s.drift.E = make_vector_field("rotor", {{"scale", 1.0}}, s.domain);
  s.domain.time_horizon = 0.2;
  const Mesh mesh = build_box_mesh(s.domain, 1.0 / 10.0);
  SolverOptions exact_opts;
  exact_opts.dt = 0.02;
  const DiscreteSolution untrunc = solve(s, mesh, exact_opts);
  double sup = 0.0;
  for (const auto& u : untrunc.fields)
    sup = std::max(sup, u.cwiseAbs().maxCoeff());

  SolverOptions trunc_opts = exact_opts;
  trunc_opts.truncation = sup + 1.0;
  const DiscreteSolution trunc = solve(s, mesh, trunc_opts);
  double diff = 0.0;
  for (std::size_t k = 0; k < trunc.fields.size(); ++k)
    diff = std::max(diff,
                    (trunc.fields[k] - untrunc.fields[k]).cwiseAbs().maxCoeff());
  CHECK(diff < 1e-9);
}

TEST_CASE("a biting truncation level changes the solution") {
  ProblemSpec s = base_spec("robin");
  s.data.u0 = {make_scalar_field("constant", {{"value", 5.0}}), false,
               "constant"};
  s.drift.preset = "shear";
  s.drift.is_zero = false;
  s.drift.E = make_vector_field("shear", {{"scale", 3.0}}, s.domain);
  s.domain.time_horizon = 0.2;
  const Mesh mesh = build_box_mesh(s.domain, 1.0 / 10.0);
  SolverOptions opts;
  opts.dt = 0.02;
  const DiscreteSolution full = solve(s, mesh, opts);
  SolverOptions topts = opts;
  topts.truncation = 1.0;
  const DiscreteSolution cut = solve(s, mesh, topts);
  double diff = 0.0;
  for (std::size_t k = 0; k < cut.fields.size(); ++k)
    diff = std::max(diff,
                    (cut.fields[k] - full.fields[k]).cwiseAbs().maxCoeff());
  CHECK(diff > 1e-3);
}

TEST_CASE("source regularization is bounded by min(m, |f|)") {
  const Mesh mesh = build_box_mesh(unit_square(), 0.25);
  FemSpace fem(mesh);
  const ScalarFn f = make_scalar_field("constant", {{"value", 7.0}});
  const Eigen::VectorXd plain = fem.load_volume(f, 0.0, std::nullopt);
  const Eigen::VectorXd reg = fem.load_volume(f, 0.0, 3.0);
  // Constant f: regularized value is m f/(m + f) = 21/10 everywhere.
  CHECK(reg.sum() == doctest::Approx(plain.sum() * (3.0 / 10.0)).epsilon(1e-12));
  CHECK(reg.sum() <= 3.0 + 1e-12);  // below the level m * |Omega|
}

TEST_CASE("dt must divide the horizon") {
  ProblemSpec s = base_spec("neumann");
  s.data.u0 = {make_scalar_field("constant", {{"value", 1.0}}), false,
               "constant"};
  const Mesh mesh = build_box_mesh(s.domain, 0.3);
  SolverOptions opts;
  opts.dt = 0.3;
  CHECK_THROWS_AS(solve(s, mesh, opts), SolverError);
}

TEST_CASE("manufactured solution converges at the expected joint rate") {
  ProblemSpec s = base_spec("robin");
  s.domain.time_horizon = 0.5;
  s.data.u0 = {make_scalar_field("manufactured_u", {}), false,
               "manufactured_u"};
  s.data.f = {make_scalar_field("manufactured_f", {}), false,
              "manufactured_f"};
  s.data.h = {make_scalar_field("manufactured_h", {{"b_star", 1.0}}), false,
              "manufactured_h"};
  const ScalarFn exact = make_scalar_field("manufactured_u", {});

  double errs[2];
  double h = 1.0 / 8.0, dt = 1.0 / 20.0;
  for (int level = 0; level < 2; ++level) {
    const Mesh mesh = build_box_mesh(s.domain, h);
    SolverOptions opts;
    opts.dt = dt;
    const DiscreteSolution sol = solve(s, mesh, opts);
    errs[level] = l2_qt_error(sol, mesh, exact);
    h *= 0.5;
    dt *= 0.25;
  }
  CHECK(errs[0] / errs[1] > 3.0);
  CHECK(errs[0] / errs[1] < 5.6);
}

TEST_CASE("interpolation consistency of measured mixed norms") {
  ProblemSpec s = base_spec("robin");
  s.data.u0 = {make_scalar_field("gaussian", {{"amplitude", 1.0}}), false,
               "gaussian"};
  s.domain.time_horizon = 0.3;
  const Mesh mesh = build_box_mesh(s.domain, 1.0 / 10.0);
  SolverOptions opts;
  opts.dt = 0.03;
  const DiscreteSolution sol = solve(s, mesh, opts);
  const NormReport nr = norms(sol, mesh, s, {{2.0, 2.0}, {2.0, 4.0}});
  const double rhs = std::sqrt(nr.l2_inf * nr.mixed.at({2.0, 2.0}));
  CHECK(nr.mixed.at({2.0, 4.0}) <= rhs * (1.0 + 1e-12));
}

TEST_CASE("constant field norms match the closed form") {
  ProblemSpec s = base_spec("neumann");
  s.data.u0 = {make_scalar_field("constant", {{"value", 2.0}}), false,
               "constant"};
  s.domain.time_horizon = 1.0;
  const Mesh mesh = build_box_mesh(s.domain, 0.25);
  SolverOptions opts;
  opts.dt = 0.25;
  const DiscreteSolution sol = solve(s, mesh, opts);
  const NormReport nr = norms(sol, mesh, s, {{3.0, 2.0}});
  // |c| |Omega|^{1/p} T^{1/q} with c = 2, measures 1.
  CHECK(nr.mixed.at({3.0, 2.0}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(nr.l2_inf == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(nr.ess_sup == doctest::Approx(2.0).epsilon(1e-12));
}
