#include <doctest.h>

#include <cmath>
#include <sstream>

#include "parabound/error.hpp"
#include "parabound/sobolev.hpp"

using namespace parabound;

namespace {

DomainSpec unit_square() {
  DomainSpec d;
  d.dimension = 2;
  d.extents = {1.0, 1.0};
  d.gamma_faces = {"all"};
  d.time_horizon = 1.0;
  return d;
}

ConstantEstimate entry(ConstantKind k, double p, double q, double v,
                       Provenance prov) {
  ConstantEstimate e;
  e.kind = k;
  e.p = p;
  e.q = q;
  e.value = v;
  e.provenance = prov;
  return e;
}

}  // namespace

TEST_CASE("lookup prefers user-supplied, then analytic-upper") {
  SobolevRegistry reg("fp");
  reg.add(entry(ConstantKind::S_p, 1.0, 0, 1.0, Provenance::user_supplied));
  reg.add(entry(ConstantKind::S_p, 1.0, 0, 3.0, Provenance::analytic_upper));
  CHECK(reg.lookup(ConstantKind::S_p, 1.0).value == 1.0);
  CHECK(reg.lookup(ConstantKind::S_p, 1.0).provenance ==
        Provenance::user_supplied);

  SobolevRegistry reg2("fp");
  reg2.add(entry(ConstantKind::S_p, 1.0, 0, 3.0, Provenance::analytic_upper));
  reg2.add(entry(ConstantKind::S_p, 1.0, 0, 0.9, Provenance::numeric_lower));
  CHECK(reg2.lookup(ConstantKind::S_p, 1.0).provenance ==
        Provenance::analytic_upper);
}

TEST_CASE("missing constants are hard errors naming the request") {
  SobolevRegistry reg("fp");
  try {
    reg.lookup(ConstantKind::K_p, 1.2);
    CHECK(false);
  } catch (const MissingConstantError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("K_p") != std::string::npos);
    CHECK(msg.find("1.2") != std::string::npos);
  }
}

TEST_CASE("numeric-lower above analytic-upper is rejected at build") {
  SobolevRegistry reg("fp");
  reg.add(entry(ConstantKind::S_p, 1.5, 0, 2.0, Provenance::analytic_upper));
  CHECK_THROWS_AS(
      reg.add(entry(ConstantKind::S_p, 1.5, 0, 2.5, Provenance::numeric_lower)),
      Error);
}

TEST_CASE("upper() applies the conditional fallback to numeric-lower entries") {
  SobolevRegistry reg("fp");
  reg.add(entry(ConstantKind::S_p, 1.5, 0, 0.8, Provenance::numeric_lower));
  const UpperConstant u = reg.upper(ConstantKind::S_p, 1.5);
  CHECK(u.value == doctest::Approx(1.6));
  CHECK(u.conditional);
  reg.add(entry(ConstantKind::S_p, 1.5, 0, 2.0, Provenance::analytic_upper));
  const UpperConstant u2 = reg.upper(ConstantKind::S_p, 1.5);
  CHECK(u2.value == doctest::Approx(2.0));
  CHECK_FALSE(u2.conditional);
}

TEST_CASE("registry round-trips through the text table") {
  SobolevRegistry reg("box2:1x1:gamma=all");
  reg.add(entry(ConstantKind::S_p, 1.25, 0, 2.39, Provenance::analytic_upper));
  reg.add(entry(ConstantKind::S_pq, 4.0 / 3.0, 4.0 / 3.0, 0.7,
                Provenance::numeric_lower));
  reg.add(entry(ConstantKind::S_1, 1.0, 0, 1.0, Provenance::user_supplied));
  std::stringstream ss;
  reg.save(ss);
  const SobolevRegistry back = SobolevRegistry::load(ss);
  CHECK(back.fingerprint() == reg.fingerprint());
  CHECK(back.entries().size() == 3);
  CHECK(back.lookup(ConstantKind::S_p, 1.25).value == doctest::Approx(2.39));
  CHECK(back.lookup(ConstantKind::S_pq, 4.0 / 3.0, 4.0 / 3.0).provenance ==
        Provenance::numeric_lower);
}

TEST_CASE("analytic uppers exist on the unit square for p < 2") {
  SobolevRegistry reg("fp");
  std::vector<ConstantEstimate> reqs = {
      entry(ConstantKind::S_1, 1.0, 0, 1, Provenance::user_supplied),
      entry(ConstantKind::S_p, 1.25, 0, 1, Provenance::user_supplied),
      entry(ConstantKind::K_p, 1.6, 0, 1, Provenance::user_supplied),
      entry(ConstantKind::S_pq, 4.0 / 3.0, 4.0 / 3.0, 1,
            Provenance::user_supplied),
  };
  const int added = add_analytic_uppers(reg, unit_square(), reqs);
  CHECK(added == 4);
  CHECK(reg.lookup(ConstantKind::S_1).value == doctest::Approx(1.0));
  CHECK(reg.lookup(ConstantKind::S_p, 1.25).value > 0.0);
  CHECK(reg.lookup(ConstantKind::K_p, 1.6).value > 0.0);
}

TEST_CASE("talenti constant decreases toward the isoperimetric limit in 2-D") {
  // p -> 1 limit is 1/(2 sqrt(pi)).
  CHECK(talenti_constant(2, 1.0) ==
        doctest::Approx(1.0 / (2.0 * std::sqrt(M_PI))).epsilon(1e-12));
  CHECK(talenti_constant(2, 1.0 + 1e-9) ==
        doctest::Approx(talenti_constant(2, 1.0)).epsilon(1e-4));
  CHECK_THROWS_AS(talenti_constant(2, 2.0), RegimeError);
}

TEST_CASE("rayleigh estimator: constant function gives quotient 1 on the unit square") {
  const Mesh mesh = build_box_mesh(unit_square(), 0.34);
  RayleighOptions opts;
  opts.iterations = 60;
  opts.starts = 2;
  opts.seed = 11;
  const ConstantEstimate e =
      estimate_rayleigh(mesh, ConstantKind::S_p, 1.25, 0.0, opts);
  CHECK(e.provenance == Provenance::numeric_lower);
  CHECK(e.value >= 0.999);  // the constant trial already achieves 1
}

TEST_CASE("rayleigh estimate never exceeds the analytic upper bound") {
  const Mesh mesh = build_box_mesh(unit_square(), 0.2);
  RayleighOptions opts;
  opts.iterations = 120;
  opts.starts = 4;
  opts.seed = 3;
  for (double p : {1.25, 1.5}) {
    const ConstantEstimate e =
        estimate_rayleigh(mesh, ConstantKind::S_p, p, 0.0, opts);
    const auto upper = unit_box_sp_upper(2, p);
    REQUIRE(upper.has_value());
    CHECK(e.value <= *upper);
  }
  const ConstantEstimate k =
      estimate_rayleigh(mesh, ConstantKind::K_p, 1.5, 0.0, opts);
  const auto kupper = unit_square_kp_upper(1.5);
  REQUIRE(kupper.has_value());
  CHECK(k.value <= *kupper);
}

TEST_CASE("refinement with a warm start never decreases the estimate") {
  RayleighOptions copts;
  copts.iterations = 80;
  copts.starts = 3;
  copts.seed = 5;
  copts.quad_degree = 5;
  const Mesh coarse = build_box_mesh(unit_square(), 0.5);
  std::vector<double> argmax;
  const ConstantEstimate ce = estimate_rayleigh(
      coarse, ConstantKind::S_pq, 2.0, 2.0, copts, &argmax);

  // Prolongate the coarse maximizer onto the nested 2x finer grid.
  const Mesh fine = build_box_mesh(unit_square(), 0.25);
  const int cn = coarse.divisions[0];
  const int fn = fine.divisions[0];
  REQUIRE(fn == 2 * cn);
  std::vector<double> warm(fine.num_vertices());
  for (int j = 0; j <= fn; ++j) {
    for (int i = 0; i <= fn; ++i) {
      const double x = double(i) / fn * cn;
      const double y = double(j) / fn * cn;
      const int i0 = std::min(int(x), cn - 1);
      const int j0 = std::min(int(y), cn - 1);
      const double fx = x - i0, fy = y - j0;
      auto cv = [&](int a, int b) { return argmax[b * (cn + 1) + a]; };
      // Interpolation within the diagonal split of the coarse square.
      double v;
      if (fx >= fy)
        v = cv(i0, j0) + fx * (cv(i0 + 1, j0) - cv(i0, j0)) +
            fy * (cv(i0 + 1, j0 + 1) - cv(i0 + 1, j0));
      else
        v = cv(i0, j0) + fy * (cv(i0, j0 + 1) - cv(i0, j0)) +
            fx * (cv(i0 + 1, j0 + 1) - cv(i0, j0 + 1));
      warm[j * (fn + 1) + i] = v;
    }
  }
  RayleighOptions fopts = copts;
  fopts.warm_start = &warm;
  const ConstantEstimate fe =
      estimate_rayleigh(fine, ConstantKind::S_pq, 2.0, 2.0, fopts);
  CHECK(fe.value >= ce.value * (1.0 - 1e-12));
}

TEST_CASE("estimator is stable across refinements for S_pq(2,2)") {
  RayleighOptions opts;
  opts.iterations = 250;
  opts.starts = 5;
  opts.seed = 9;
  opts.quad_degree = 5;
  const Mesh m1 = build_box_mesh(unit_square(), 1.0 / 6.0);
  const Mesh m2 = build_box_mesh(unit_square(), 1.0 / 12.0);
  const double v1 =
      estimate_rayleigh(m1, ConstantKind::S_pq, 2.0, 2.0, opts).value;
  const double v2 =
      estimate_rayleigh(m2, ConstantKind::S_pq, 2.0, 2.0, opts).value;
  CHECK(std::abs(v1 - v2) / v2 < 5e-3);  // three significant digits
}

TEST_CASE("estimator is deterministic for a fixed seed") {
  const Mesh mesh = build_box_mesh(unit_square(), 0.34);
  RayleighOptions opts;
  opts.iterations = 40;
  opts.starts = 3;
  opts.seed = 123;
  const double a =
      estimate_rayleigh(mesh, ConstantKind::S_p, 1.5, 0.0, opts).value;
  const double b =
      estimate_rayleigh(mesh, ConstantKind::S_p, 1.5, 0.0, opts).value;
  CHECK(a == b);
}

TEST_CASE("estimator enforces p < n for the gradient-embedding kinds") {
  const Mesh mesh = build_box_mesh(unit_square(), 0.34);
  CHECK_THROWS_AS(
      estimate_rayleigh(mesh, ConstantKind::S_p, 2.0, 0.0, RayleighOptions{}),
      RegimeError);
  CHECK_THROWS_AS(
      estimate_rayleigh(mesh, ConstantKind::K_p, 2.5, 0.0, RayleighOptions{}),
      RegimeError);
}
