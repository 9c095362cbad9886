#ifndef PARABOUND_PROBLEM_HPP
#define PARABOUND_PROBLEM_HPP

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "parabound/geometry.hpp"
#include "parabound/util.hpp"

namespace parabound {

using ScalarFn = std::function<double(const Point&, double)>;
using VectorFn = std::function<Point(const Point&, double)>;
using MatrixFn = std::function<std::array<double, 9>(const Point&)>;  // row-major n x n

/// Leading coefficient: measurable, uniformly elliptic and bounded.
struct DiffusionField {
  MatrixFn A;
  double a_lower = 1.0;   // ellipticity constant
  double a_upper = 1.0;   // entrywise sup bound
  std::string preset = "identity";
};

/// Drift field with its mixed-norm integrability exponents. theta is the
/// auxiliary exponent of the two-dimensional case; negative means "use the
/// default midpoint (1 - 2/q)/2 of the admissible interval".
struct DriftField {
  VectorFn E;
  double q = 8.0;        // spatial exponent, > 2
  double r = 8.0;        // temporal exponent, > 1
  double theta = -1.0;
  double scale = 1.0;
  bool is_zero = true;
  bool time_independent = true;
  std::string preset = "zero";
};

enum class LawKind { neumann, robin, blackbody, wien, custom };

/// Boundary coefficient b(x, xi) with (ell-2)-growth between b_lower and
/// b_upper and monotone xi |-> b(x, xi) xi.
struct BoundaryLaw {
  LawKind kind = LawKind::neumann;
  double ell = 2.0;
  double b_lower = 0.0;
  double b_upper = 0.0;
  std::function<double(const Point&, double)> b;  // b(x, xi)
  std::string preset = "neumann";

  double conjugate_ell() const { return ell / (ell - 1.0); }
};

struct DataField {
  ScalarFn fn;
  bool is_zero = true;
  std::string preset = "zero";
};

struct ProblemData {
  DataField u0;
  DataField h;  // boundary source on Gamma
  DataField f;  // volumetric source
  std::map<std::string, std::string> regularity;  // claimed spaces, informative
};

/// Gradient-integrability exponent and auxiliary knobs of the L1 theory.
struct ProblemSpec {
  DomainSpec domain;
  DiffusionField diffusion;
  DriftField drift;
  BoundaryLaw law;
  ProblemData data;
  double p = 0.0;        // 0 means "derive from (q, r, n) when needed"
  double two_star = 4.0; // the exponent "> 2" of the n = 2 branch of the b#=0 L2 bound

  int dim() const { return domain.dimension; }
  double T() const { return domain.time_horizon; }
};

/// Effective theta: the stored value if set, else the documented default.
double theta_of(const DriftField& drift, int dimension);

/// p solving n/q + (p(n+1) - n)/r = 1 for the given drift exponents.
double derive_p(double q, double r, int n);

/// Effective p for the L1-theory formulas: spec.p if positive, else derived.
double p_of(const ProblemSpec& spec);

enum class Regime { l2_theory, max_principle, l1_theory, b0_l2, b0_l1 };

std::string regime_name(Regime r);

struct CheckResult {
  std::string name;
  bool passed = false;
  double margin = 0.0;
  std::string witness;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  std::set<Regime> regimes;
  bool f_present = false;       // nonzero f excludes the drift-energy bound
  bool check(const std::string& name) const;
  bool in(Regime r) const { return regimes.count(r) > 0; }
  std::string summary() const;
};

struct SamplingOptions {
  int lattice_per_axis = 24;  // interior sampling for (A) and data signs
  int xi_points = 81;         // logarithmic xi-grid for (B), symmetric + 0
  double xi_max = 1e6;
  int boundary_points = 64;   // x samples on Gamma for x-dependent b
};

/// Checks assumptions (A) and (B), the exponent regimes, and the data sign
/// hypotheses by dense sampling. Always returns a report; downstream
/// operations refuse invalid specs themselves.
ValidationReport validate(const ProblemSpec& spec,
                          const SamplingOptions& opts = {});

/// || E ||_{q,r,Q_T} = ( int_0^T ||E(t)||_{q,Omega}^r dt )^{1/r} with the
/// spec's own exponents.
double drift_norm(const ProblemSpec& spec, const Mesh& mesh);

/// Same with explicit exponents (spatial q, temporal r).
double drift_mixed_norm(const ProblemSpec& spec, const Mesh& mesh,
                        double q_space, double r_time);

/// int_0^T || E(t) ||_{q,Omega}^rho dt.
double drift_time_integral(const ProblemSpec& spec, const Mesh& mesh,
                           double q_space, double rho);

/// T_m(s) = min(m, max(-m, s)).
double truncate(double m, double s);

/// Sampled sup of |field| over the space-time lattice (ess-sup surrogate).
double sampled_sup(const ScalarFn& fn, const DomainSpec& domain,
                   bool boundary_only, const SamplingOptions& opts = {});

struct DriftQuadratureOptions {
  int space_degree = 4;
  int time_panels = 32;
  int time_points = 4;
};

/// Data norm helpers used by the bound formulas (quadrature in space,
/// Gauss-Legendre panels in time).
double data_norm_omega(const ScalarFn& fn, const Mesh& mesh, double p);
double data_norm_QT(const ScalarFn& fn, const Mesh& mesh, double T, double p,
                    double q_time);
double data_norm_SigmaT(const ScalarFn& fn, const Mesh& mesh, double T,
                        double p, double q_time);

}  // namespace parabound

#endif
