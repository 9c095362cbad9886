#ifndef PARABOUND_BOUNDS_HPP
#define PARABOUND_BOUNDS_HPP

#include <string>

#include "parabound/problem.hpp"
#include "parabound/sobolev.hpp"

namespace parabound {

/// Gronwall exponent of the L2 energy estimate. Two algebraically equivalent
/// displays of the same constant exist (they differ in how the exponents are
/// grouped); both are evaluated and the larger is used for bound checks.
struct QResult {
  double main_form = 0.0;
  double derivation_form = 0.0;
  double value = 0.0;  // max of the two
  bool conditional = false;
  bool overflow = false;
};
QResult compute_Q(const ProblemSpec& spec, const SobolevRegistry& registry,
                  const Mesh& mesh);

/// L2-theory bounds (b_lower > 0): B0 exp(Q) controls ||u||_{2,inf}^2 and
/// B0 (Q exp(Q) + 1) controls a_# ||grad u||_2^2 + b_# ||u||_{ell,Sigma}^ell.
struct EnergyBound {
  double B0 = 0.0;
  double rhs_linf_sq = 0.0;  // bounds the squared norm
  double rhs_energy = 0.0;
  bool conditional = false;
  bool overflow = false;
};
EnergyBound energy_bound(const ProblemSpec& spec, const SobolevRegistry& registry,
                       const Mesh& mesh, double Q);

/// Z = ||u0||_{1,Omega} + ||f||_{1,Q_T} + ||h||_{1,Sigma_T}.
double compute_Z(const ProblemSpec& spec, const Mesh& mesh);

struct Z12 {
  double Z1 = 0.0;
  double Z2 = 0.0;
  bool conditional = false;
};
Z12 compute_Z1_Z2(const ProblemSpec& spec, const SobolevRegistry& registry,
                  const DomainMeasures& dm);

/// L1-theory gradient bound (b_lower > 0). rhs_l1 repeats Z, the right-hand
/// side of the L1/trace estimate.
struct L1GradientBound {
  double B = 0.0;
  double rhs_gradient_p = 0.0;
  double rhs_l1 = 0.0;
  bool conditional = false;
};
L1GradientBound l1_gradient_bound(const ProblemSpec& spec, const SobolevRegistry& registry,
                       const Mesh& mesh, double Z, double Z1, double Z2);

/// b_lower = 0 energy bounds, 2 <= ell <= 3.
struct EnergyBoundB0 {
  double A = 0.0;
  double rhs_linf = 0.0;     // bounds ||u||_{2,inf} (not squared)
  double rhs_grad_sq = 0.0;  // bounds ||grad u||_{2,Q_T}^2
  double s = 0.0;
  bool conditional = false;
  bool overflow = false;
};
EnergyBoundB0 energy_bound_b0(const ProblemSpec& spec, const SobolevRegistry& registry,
                       const Mesh& mesh, double Q);

/// b_lower = 0 gradient bound, 2 <= ell <= p+1, with the smallness condition
/// on beta when ell = p+1.
struct L1GradientBoundB0 {
  double alpha_ell = 0.0;
  double beta_ell = 0.0;
  double beta = 0.0;
  double rhs_gradient_p = 0.0;
  bool applicable = false;
  std::string reason;
  bool conditional = false;
};
L1GradientBoundB0 l1_gradient_bound_b0(const ProblemSpec& spec, const SobolevRegistry& registry,
                       const Mesh& mesh, double Z, double B);

/// Mixed-norm interpolation: geometric mean of the flanking norms.
double interpolation_bound(double norm_q_q1, double norm_r_r1, double lambda);

/// Space-time embedding constants nu(sigma), C_n(sigma) and the adm issibility
/// of sigma for given (q, r). The auxiliary exponent s of the n = 2 branch is
/// reported; at the upper end of the admissible range nu -> 0 and s diverges,
/// in which case the limiting values are used.
struct SigmaEmbedding {
  double nu = 0.0;
  double Cn = 0.0;
  double s = 0.0;  // n = 2 auxiliary exponent (inf at the degenerate end)
  bool admissible = false;
  bool conditional = false;
  std::string note;
};
SigmaEmbedding sigma_embedding(const ProblemSpec& spec,
                               const SobolevRegistry& registry,
                               const DomainMeasures& dm, double sigma, double q,
                               double r);

/// Constants of the iterative sup-norm estimate.
struct MoserParams {
  double P = 1.0;
  double P1 = 0.0;
  double P2 = 0.0;
  double sigma = 0.0;   // chi = 1/sigma
  double nu_sigma = 0.0;
  double Cn_sigma = 0.0;
  double nu_one = 0.0;  // embedding data at sigma = 1 (base norm factor)
  double Cn_one = 0.0;
  double s = 0.0;
  bool clamped = false;       // raw P < 1 was clamped up to 1
  bool smallness_ok = false;  // P2 <= P
  bool conditional = false;
};
MoserParams moser_params(const ProblemSpec& spec,
                         const SobolevRegistry& registry, const Mesh& mesh);

/// Sup bound M = leading closed form + P1 * series. The series' general term
/// tends to 1, so it diverges whenever P1 > 0; this is detected and reported,
/// never masked. With P1 = 0 the closed form is exact.
struct MoserSeriesResult {
  double M = 0.0;
  bool converged = false;
  int terms_used = 0;
  double leading = 0.0;
};
MoserSeriesResult moser_series(const MoserParams& params, double base_norm,
                               double tol = 1e-12, int max_terms = 10000);

/// Boundary sup bound (M + P1) / b_lower.
double boundary_max_bound(double M, double P1, double b_lower);

/// Mixed-norm bound for L^{1,inf} + gradient data
/// (the W^{1,p} interpolation estimate with constants Z1-style).
double vpp1_bound(const ProblemSpec& spec, const SobolevRegistry& registry,
                  const DomainMeasures& dm, double grad_norm_pp1,
                  double linf_l1_norm, double pbar, double qbar);

/// Boundary (ell-1)-mass bound from the trace embedding.
double luell_bound(const ProblemSpec& spec, const SobolevRegistry& registry,
                   const DomainMeasures& dm, double grad_norm_p,
                   double l1p_norm);

/// Sobolev subscript of the Gronwall exponent: (2 + theta q)/(1 + theta q).
double q_sobolev_subscript(double q, double theta);

}  // namespace parabound

#endif
