#include <benchmark/benchmark.h>

#include "parabound/bounds.hpp"
#include "parabound/norms.hpp"
#include "parabound/presets.hpp"
#include "parabound/solver.hpp"

using namespace parabound;

namespace {

DomainSpec unit_square(double T = 0.5) {
  DomainSpec d;
  d.dimension = 2;
  d.extents = {1.0, 1.0};
  d.gamma_faces = {"all"};
  d.time_horizon = T;
  return d;
}

ProblemSpec bench_spec(const std::string& law) {
  ProblemSpec s;
  s.domain = unit_square();
  s.diffusion = make_diffusion("checkerboard",
                               {{"a1", 0.5}, {"a2", 2.0}, {"cells", 4}},
                               s.domain);
  s.drift.E = make_vector_field("zero", {}, s.domain);
  s.drift.is_zero = true;
  s.drift.q = 8.0;
  s.drift.r = 8.0;
  s.law = make_boundary_law(law, {{"b_star", 1.0}, {"sigma", 1.0}});
  s.data.u0 = {make_scalar_field("cos2", {{"amplitude", 1.0}}), false, "cos2"};
  s.data.h = {make_scalar_field("constant", {{"value", 0.5}}), false,
              "constant"};
  s.data.f = {make_scalar_field("zero", {}), true, "zero"};
  return s;
}

SobolevRegistry bench_registry() {
  SobolevRegistry reg("bench");
  auto user = [&](ConstantKind k, double p, double q, double v) {
    ConstantEstimate e;
    e.kind = k;
    e.p = p;
    e.q = q;
    e.value = v;
    e.provenance = Provenance::user_supplied;
    reg.add(e);
  };
  user(ConstantKind::S_1, 1.0, 0.0, 1.0);
  user(ConstantKind::S_p, 1.25, 0.0, 2.4);
  user(ConstantKind::S_pq, 2.0, 2.0, 1.0);
  user(ConstantKind::S_pq, 4.0 / 3.0, 4.0 / 3.0, 1.0);
  return reg;
}

}  // namespace

static void BM_build_mesh(benchmark::State& state) {
  const DomainSpec d = unit_square();
  const double h = std::sqrt(2.0) / state.range(0);
  for (auto _ : state) {
    Mesh mesh = build_box_mesh(d, h);
    benchmark::DoNotOptimize(mesh.vertices.data());
  }
}
BENCHMARK(BM_build_mesh)->Arg(16)->Arg(32)->Arg(64);

static void BM_assemble_stiffness(benchmark::State& state) {
  const ProblemSpec s = bench_spec("robin");
  const Mesh mesh = build_box_mesh(s.domain, std::sqrt(2.0) / state.range(0));
  FemSpace fem(mesh);
  for (auto _ : state) {
    auto K = fem.stiffness(s.diffusion.A);
    benchmark::DoNotOptimize(K.valuePtr());
  }
}
BENCHMARK(BM_assemble_stiffness)->Arg(16)->Arg(32)->Arg(64);

static void BM_step_linear(benchmark::State& state) {
  const ProblemSpec s = bench_spec("robin");
  const Mesh mesh = build_box_mesh(s.domain, std::sqrt(2.0) / 32.0);
  FemSpace fem(mesh);
  const Eigen::VectorXd u0 = project_initial(mesh, s.data.u0.fn);
  SolverOptions opts;
  opts.dt = 0.01;
  for (auto _ : state) {
    StepDiagnostics diag;
    Eigen::VectorXd u = step(u0, opts.dt, opts.dt, s, fem, opts, &diag);
    benchmark::DoNotOptimize(u.data());
  }
}
BENCHMARK(BM_step_linear);

static void BM_step_radiative(benchmark::State& state) {
  const ProblemSpec s = bench_spec("blackbody");
  const Mesh mesh = build_box_mesh(s.domain, std::sqrt(2.0) / 32.0);
  FemSpace fem(mesh);
  const Eigen::VectorXd u0 = project_initial(mesh, s.data.u0.fn);
  SolverOptions opts;
  opts.dt = 0.01;
  for (auto _ : state) {
    StepDiagnostics diag;
    Eigen::VectorXd u = step(u0, opts.dt, opts.dt, s, fem, opts, &diag);
    benchmark::DoNotOptimize(u.data());
  }
}
BENCHMARK(BM_step_radiative);

static void BM_norm_report(benchmark::State& state) {
  const ProblemSpec s = bench_spec("robin");
  const Mesh mesh = build_box_mesh(s.domain, std::sqrt(2.0) / 24.0);
  SolverOptions opts;
  opts.dt = 0.05;
  const DiscreteSolution sol = solve(s, mesh, opts);
  for (auto _ : state) {
    NormReport nr = norms(sol, mesh, s);
    benchmark::DoNotOptimize(nr.l2_inf);
  }
}
BENCHMARK(BM_norm_report);

static void BM_compute_Q(benchmark::State& state) {
  ProblemSpec s = bench_spec("robin");
  s.diffusion = make_diffusion("identity", {}, s.domain);
  s.drift.preset = "rotor";
  s.drift.is_zero = false;
  s.drift.E = make_vector_field("rotor", {{"scale", 0.2}}, s.domain);
  const Mesh mesh = build_box_mesh(s.domain, std::sqrt(2.0) / 16.0);
  const SobolevRegistry reg = bench_registry();
  for (auto _ : state) {
    QResult q = compute_Q(s, reg, mesh);
    benchmark::DoNotOptimize(q.value);
  }
}
BENCHMARK(BM_compute_Q);

static void BM_moser_series(benchmark::State& state) {
  MoserParams mp;
  mp.P = 2.0;
  mp.P1 = 1.0;
  mp.P2 = 1.5;
  mp.sigma = 1.5;
  for (auto _ : state) {
    MoserSeriesResult r = moser_series(mp, 1.0, 1e-12, 2000);
    benchmark::DoNotOptimize(r.M);
  }
}
BENCHMARK(BM_moser_series);

BENCHMARK_MAIN();
