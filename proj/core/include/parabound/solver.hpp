#ifndef PARABOUND_SOLVER_HPP
#define PARABOUND_SOLVER_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <map>
#include <optional>
#include <vector>

#include "parabound/problem.hpp"

namespace parabound {

struct SolverOptions {
  double dt = 0.0;  // 0 = heuristic h^2 / a_upper
  std::optional<double> truncation;  // drift truncation level; empty = none
  double picard_tol = 1e-12;
  int picard_max = 200;
  double picard_damping = 0.5;
  bool upwind = false;  // stability-study toggle, off for bound checks
  int store_every = 1;
};

struct StepDiagnostics {
  int picard_iterations = 0;
  double residual = 0.0;
};

struct DiscreteSolution {
  std::vector<double> times;            // t_0 = 0 .. t_K = T
  std::vector<Eigen::VectorXd> fields;  // nodal coefficients per time
  std::vector<int> gamma_nodes;
  std::vector<StepDiagnostics> diagnostics;  // one per step

  int steps() const { return static_cast<int>(times.size()) - 1; }
  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

/// Precomputed P1 structures on a fixed mesh (2-D).
struct FemSpace {
  explicit FemSpace(const Mesh& mesh);
  const Mesh& mesh;
  int nv = 0;
  Eigen::VectorXd lumped_mass;           // row sums of the mass matrix
  std::vector<double> gamma_weights;     // lumped boundary measure per node
  std::vector<int> gamma_nodes;          // nodes with positive gamma weight
  std::vector<std::array<double, 6>> cell_grads;  // grad phi_k per cell
  std::vector<double> cell_areas;

  Eigen::SparseMatrix<double> stiffness(const MatrixFn& A) const;
  /// Drift matrix C with C(i,j) = int phi_j E(x,t) . grad phi_i dx.
  Eigen::SparseMatrix<double> drift_matrix(const VectorFn& E, double t) const;
  Eigen::VectorXd load_volume(const ScalarFn& f, double t,
                              std::optional<double> regularize) const;
  Eigen::VectorXd load_gamma(const ScalarFn& h, double t) const;
  /// Lagged drift load: int T_m(u_lag) E . grad phi_i dx.
  Eigen::VectorXd drift_load(const VectorFn& E, double t,
                             const Eigen::VectorXd& u_lag, double trunc,
                             bool upwind) const;
};

/// Lumped-mass L2 projection onto the P1 space (consistent load).
Eigen::VectorXd project_initial(const Mesh& mesh, const ScalarFn& u0);

/// One implicit Euler step. The boundary factor b(.) and the truncated drift
/// factor are lagged inside a damped Picard loop; with a constant b and no
/// truncation the step is a single linear solve (drift handled implicitly).
Eigen::VectorXd step(const Eigen::VectorXd& prev, double t_next, double dt,
                     const ProblemSpec& spec, const FemSpace& fem,
                     const SolverOptions& opts, StepDiagnostics* diag);

/// Implicit Euler over [0, T]; dt must divide T.
DiscreteSolution solve(const ProblemSpec& spec, const Mesh& mesh,
                       const SolverOptions& opts);

/// Per-step residual of the discrete mass balance (test function v = 1).
std::vector<double> mass_balance(const DiscreteSolution& sol,
                                 const ProblemSpec& spec, const Mesh& mesh,
                                 const SolverOptions& opts);

/// Discrete energy inequality for the drift-free scheme, evaluated with the
/// scheme's own (lumped) quadrature on both sides:
///   1/2 ||u_K||^2 + a_# sum dt ||grad u_k||^2 + b_# sum dt ||u_k||^ell_Gamma
///     <= 1/2 ||u_0||^2 + sum dt int_Gamma h u_k.
struct EnergyCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs, should be >= -tolerance
};
EnergyCheck energy_check(const DiscreteSolution& sol, const ProblemSpec& spec,
                         const Mesh& mesh);

/// Lumped (scheme-consistent) integral of a nodal field over Omega.
double lumped_integral(const FemSpace& fem, const Eigen::VectorXd& u);

}  // namespace parabound

#endif
