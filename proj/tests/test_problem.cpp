#include <doctest.h>

#include <cmath>
#include <random>

#include "parabound/error.hpp"
#include "parabound/presets.hpp"
#include "parabound/problem.hpp"

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

ProblemSpec basic_spec() {
  ProblemSpec s;
  s.domain = unit_square();
  s.diffusion = make_diffusion("identity", {}, s.domain);
  s.drift.E = make_vector_field("zero", {}, s.domain);
  s.drift.is_zero = true;
  s.drift.q = 8.0;
  s.drift.r = 8.0;
  s.law = make_boundary_law("robin", {{"b_star", 1.0}});
  s.data.u0 = {make_scalar_field("constant", {{"value", 1.0}}), false,
               "constant"};
  s.data.h = {make_scalar_field("zero", {}), true, "zero"};
  s.data.f = {make_scalar_field("zero", {}), true, "zero"};
  return s;
}

}  // namespace

TEST_CASE("identity diffusion passes ellipticity with zero margin") {
  const ProblemSpec s = basic_spec();
  const ValidationReport rep = validate(s);
  CHECK(rep.check("(A) ellipticity"));
  CHECK(rep.check("(A) boundedness"));
  for (const auto& c : rep.checks)
    if (c.name == "(A) ellipticity") CHECK(c.margin == doctest::Approx(0.0));
}

TEST_CASE("blackbody law passes growth and monotonicity") {
  ProblemSpec s = basic_spec();
  s.law = make_boundary_law("blackbody", {{"sigma", 1.0}});
  CHECK(s.law.ell == 5.0);
  const ValidationReport rep = validate(s);
  CHECK(rep.check("(B) growth"));
  CHECK(rep.check("(B) monotonicity"));
}

TEST_CASE("all boundary-law presets satisfy the growth band and flux monotonicity") {
  for (const char* kind : {"neumann", "robin", "blackbody", "wien", "custom"}) {
    ProblemSpec s = basic_spec();
    ParamMap params;
    if (std::string(kind) == "custom") {
      params = {{"ell", 3.0}, {"b_lower", 0.5}, {"b_upper", 2.0}};
    } else {
      params = {{"b_star", 1.5}, {"sigma", 0.8}};
    }
    s.law = make_boundary_law(kind, params);
    const ValidationReport rep = validate(s);
    CHECK_MESSAGE(rep.check("(B) growth"), kind);
    CHECK_MESSAGE(rep.check("(B) monotonicity"), kind);
  }
}

TEST_CASE("wien preset has quartic growth exponent") {
  const BoundaryLaw law = make_boundary_law("wien", {{"b_star", 2.0}});
  CHECK(law.ell == 6.0);
  CHECK(law.b(Point{0, 0, 0}, 3.0) == doctest::Approx(2.0 * 81.0));
}

TEST_CASE("regime inequality failure is reported with the violated check") {
  ProblemSpec s = basic_spec();
  s.drift.q = 3.0;
  s.drift.r = 3.0;
  s.drift.is_zero = false;
  s.drift.preset = "constant";
  s.drift.E = make_vector_field("constant", {{"ex", 1.0}}, s.domain);
  const ValidationReport rep = validate(s);
  // 2/3 + 2/3 = 4/3 > 1.
  CHECK_FALSE(rep.check("L2 drift regime (2/r + n/q <= 1)"));
  CHECK_FALSE(rep.in(Regime::l2_theory));
}

TEST_CASE("regime classification: robin with admissible drift exponents") {
  ProblemSpec s = basic_spec();  // q = r = 8: 2/8 + 2/8 = 0.5 < 1
  const ValidationReport rep = validate(s);
  CHECK(rep.in(Regime::l2_theory));
  CHECK(rep.in(Regime::max_principle));  // u0 = 1 > 0, h = 0
  CHECK_FALSE(rep.in(Regime::b0_l2));
}

TEST_CASE("neumann routes to the b0 regimes") {
  ProblemSpec s = basic_spec();
  s.law = make_boundary_law("neumann", {});
  const ValidationReport rep = validate(s);
  CHECK(rep.in(Regime::b0_l2));
  CHECK_FALSE(rep.in(Regime::l2_theory));
}

TEST_CASE("L1 regime needs 1 < r(1-n/q) < 2 and the exponent relation") {
  ProblemSpec s = basic_spec();
  s.drift.q = 6.0;
  s.drift.r = 2.0;  // r(1 - 2/6) = 4/3
  const ValidationReport rep = validate(s);
  CHECK(rep.check("L1 drift regime (1 < r(1-n/q) < 2)"));
  CHECK(rep.in(Regime::l1_theory));
  const double p = p_of(s);
  CHECK(p == doctest::Approx((2.0 * (2.0 / 3.0) + 2.0) / 3.0));
  CHECK(p > 1.0);
  CHECK(p < 4.0 / 3.0);
}

TEST_CASE("explicit p violating the relation fails validation") {
  ProblemSpec s = basic_spec();
  s.drift.q = 10.0;
  s.drift.r = 5.0;
  s.p = 1.2;  // n/q + (p(n+1)-n)/r = 0.2 + 1.6/5 = 0.52 != 1
  const ValidationReport rep = validate(s);
  CHECK_FALSE(rep.check("(pqrn) exponent relation"));
}

TEST_CASE("theta defaults to the midpoint of its admissible interval") {
  DriftField d;
  d.q = 8.0;
  d.theta = -1.0;
  CHECK(theta_of(d, 2) == doctest::Approx(0.5 * (1.0 - 2.0 / 8.0)));
  CHECK(theta_of(d, 3) == 0.0);
  d.theta = 0.1;
  CHECK(theta_of(d, 2) == doctest::Approx(0.1));
}

TEST_CASE("drift norm of the zero field vanishes") {
  const ProblemSpec s = basic_spec();
  const Mesh mesh = build_box_mesh(s.domain, 0.25);
  CHECK(drift_norm(s, mesh) == 0.0);
}

TEST_CASE("drift norm of a constant unit field is |Omega|^{1/q} T^{1/r}") {
  ProblemSpec s = basic_spec();
  s.drift.preset = "constant";
  s.drift.is_zero = false;
  s.drift.E = make_vector_field("constant", {{"ex", 1.0}, {"ey", 0.0}},
                                s.domain);
  const Mesh mesh = build_box_mesh(s.domain, 0.25);
  for (double q : {2.0, 4.0, 8.0}) {
    for (double r : {2.0, 3.0}) {
      CHECK(drift_mixed_norm(s, mesh, q, r) ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("drift norm of E = (t, 0) matches the analytic integral") {
  ProblemSpec s = basic_spec();
  s.drift.preset = "time_linear";
  s.drift.is_zero = false;
  s.drift.time_independent = false;
  s.drift.E = make_vector_field("time_linear", {{"scale", 1.0}}, s.domain);
  const Mesh mesh = build_box_mesh(s.domain, 0.25);
  // (int_0^1 t^2 dt)^{1/2} = 3^{-1/2}
  CHECK(drift_mixed_norm(s, mesh, 2.0, 2.0) ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("drift norm is positively homogeneous") {
  ProblemSpec s = basic_spec();
  s.drift.preset = "shear";
  s.drift.is_zero = false;
  s.drift.E = make_vector_field("shear", {{"scale", 1.0}}, s.domain);
  ProblemSpec s3 = s;
  s3.drift.E = make_vector_field("shear", {{"scale", 3.0}}, s.domain);
  const Mesh mesh = build_box_mesh(s.domain, 0.25);
  CHECK(drift_norm(s3, mesh) ==
        doctest::Approx(3.0 * drift_norm(s, mesh)).epsilon(1e-12));
}

TEST_CASE("truncation clamps and has the stated properties") {
  CHECK(truncate(2, 5.0) == 2.0);
  CHECK(truncate(2, -3.0) == -2.0);
  CHECK(truncate(7, 3.5) == 3.5);

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(-50.0, 50.0);
  std::uniform_int_distribution<int> mdist(1, 20);
  for (int i = 0; i < 1000; ++i) {
    const double m = mdist(rng);
    const double s1 = unif(rng), s2 = unif(rng);
    const double t1 = truncate(m, s1), t2 = truncate(m, s2);
    CHECK(std::abs(t1) <= std::min(m, std::abs(s1)) + 1e-15);
    CHECK(t1 * s1 >= 0.0);
    CHECK(truncate(m, t1) == t1);                      // idempotent
    if (s1 <= s2) CHECK(t1 <= t2);                     // monotone
    CHECK(std::abs(t1 - t2) <= std::abs(s1 - s2) + 1e-15);  // nonexpansive
  }
  CHECK_THROWS_AS(truncate(0.5, 1.0), Error);
}

TEST_CASE("validate flags nonzero f for the drift-energy bound") {
  ProblemSpec s = basic_spec();
  s.data.f = {make_scalar_field("constant", {{"value", 1.0}}), false,
              "constant"};
  const ValidationReport rep = validate(s);
  CHECK(rep.f_present);
  CHECK_FALSE(rep.check("f == 0 (drift-energy bound requires it)"));
}

TEST_CASE("checkerboard diffusion keeps exact per-material constants") {
  ProblemSpec s = basic_spec();
  s.diffusion = make_diffusion("checkerboard",
                               {{"a1", 0.5}, {"a2", 2.0}, {"cells", 4}},
                               s.domain);
  CHECK(s.diffusion.a_lower == 0.5);
  CHECK(s.diffusion.a_upper == 2.0);
  const ValidationReport rep = validate(s);
  CHECK(rep.check("(A) ellipticity"));
  CHECK(rep.check("(A) boundedness"));
}

TEST_CASE("sampled sup sees the data peak") {
  const ProblemSpec s = basic_spec();
  const double sup =
      sampled_sup(make_scalar_field("cos_product", {{"amplitude", 2.5}}),
                  s.domain, false);
  CHECK(sup == doctest::Approx(2.5).epsilon(1e-12));
}
