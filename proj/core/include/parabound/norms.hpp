#ifndef PARABOUND_NORMS_HPP
#define PARABOUND_NORMS_HPP

#include <map>
#include <utility>
#include <vector>

#include "parabound/solver.hpp"

namespace parabound {

/// Mixed norms of the discrete solution. Spatial integrals use per-cell
/// Gauss rules on the P1 field; temporal q-norms use the solver's own grid
/// (right-endpoint rectangle rule), so bound checks compare like-for-like
/// discrete quantities. Sup norms are exact for P1 (attained at vertices).
struct NormReport {
  double l2_inf = 0.0;        // ||u||_{2,inf,Q_T}
  double l1_inf = 0.0;        // ||u||_{1,inf,Q_T}
  double grad_l2 = 0.0;       // ||grad u||_{2,Q_T}
  double grad_lp = 0.0;       // ||grad u||_{p,Q_T}
  double trace_ell = 0.0;     // ||u||_{ell,Sigma_T}
  double trace_ellm1 = 0.0;   // ||u||_{ell-1,Sigma_T}
  double trace_l2 = 0.0;      // ||u||_{2,Sigma_T}
  double ess_sup = 0.0;       // ess sup over Q_T
  double ess_sup_gamma = 0.0; // ess sup over Sigma_T
  double nodal_min = 0.0;     // signed min over nodes and steps
  double trace_min = 0.0;     // signed min over Gamma nodes and steps
  std::map<std::pair<double, double>, double> mixed;  // requested ||u||_{p,q}
};

struct NormRequest {
  double p = 2.0;
  double q = 2.0;
};

NormReport norms(const DiscreteSolution& sol, const Mesh& mesh,
                 const ProblemSpec& spec,
                 const std::vector<NormRequest>& requests = {});

/// Spatial L^p norm of a nodal P1 field (per-cell Gauss rule).
double spatial_lp(const Mesh& mesh, const Eigen::VectorXd& u, double p);

/// L^p norm of the piecewise-constant gradient (exact).
double spatial_grad_lp(const Mesh& mesh, const Eigen::VectorXd& u, double p);

/// L^p norm of the trace on Gamma.
double trace_lp(const Mesh& mesh, const Eigen::VectorXd& u, double p);

/// Mixed norm over the solution's time grid: q_time = inf -> max over all
/// stored fields, else right-endpoint rectangle rule over steps 1..K.
double mixed_norm(const DiscreteSolution& sol, const Mesh& mesh,
                  double p_space, double q_time, bool on_gamma = false);

/// L2(Q_T) distance between the discrete solution and a reference field,
/// by cellwise quadrature and right-endpoint rectangle in time.
double l2_qt_error(const DiscreteSolution& sol, const Mesh& mesh,
                   const ScalarFn& reference);

}  // namespace parabound

#endif
