#include "parabound/norms.hpp"

#include <cmath>

#include "parabound/error.hpp"
#include "parabound/quadrature.hpp"

namespace parabound {

namespace {

// Barycentric coordinates of a physical point in a triangle.
void bary(const Mesh& mesh, const int* v, const Point& x, double lam[3]) {
  const Point& A = mesh.vertices[v[0]];
  const Point& B = mesh.vertices[v[1]];
  const Point& C = mesh.vertices[v[2]];
  const double det =
      (B[0] - A[0]) * (C[1] - A[1]) - (C[0] - A[0]) * (B[1] - A[1]);
  lam[1] = ((x[0] - A[0]) * (C[1] - A[1]) - (C[0] - A[0]) * (x[1] - A[1])) /
           det;
  lam[2] = ((B[0] - A[0]) * (x[1] - A[1]) - (x[0] - A[0]) * (B[1] - A[1])) /
           det;
  lam[0] = 1.0 - lam[1] - lam[2];
}

}  // namespace

double spatial_lp(const Mesh& mesh, const Eigen::VectorXd& u, double p) {
  KahanSum acc;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const int* v = mesh.cell(c);
    for (const QPoint& qp : cell_rule(mesh, c, 4)) {
      double lam[3];
      bary(mesh, v, qp.x, lam);
      const double val =
          lam[0] * u[v[0]] + lam[1] * u[v[1]] + lam[2] * u[v[2]];
      acc.add(qp.w * std::pow(std::abs(val), p));
    }
  }
  return std::pow(acc.value(), 1.0 / p);
}

double spatial_grad_lp(const Mesh& mesh, const Eigen::VectorXd& u, double p) {
  KahanSum acc;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const int* v = mesh.cell(c);
    const Point& A = mesh.vertices[v[0]];
    const Point& B = mesh.vertices[v[1]];
    const Point& C = mesh.vertices[v[2]];
    const double det =
        (B[0] - A[0]) * (C[1] - A[1]) - (C[0] - A[0]) * (B[1] - A[1]);
    const double area = 0.5 * std::abs(det);
    const double gx[3] = {(B[1] - C[1]) / det, (C[1] - A[1]) / det,
                          (A[1] - B[1]) / det};
    const double gy[3] = {(C[0] - B[0]) / det, (A[0] - C[0]) / det,
                          (B[0] - A[0]) / det};
    double ux = 0, uy = 0;
    for (int k = 0; k < 3; ++k) {
      ux += gx[k] * u[v[k]];
      uy += gy[k] * u[v[k]];
    }
    acc.add(area * std::pow(std::hypot(ux, uy), p));
  }
  return std::pow(acc.value(), 1.0 / p);
}

double trace_lp(const Mesh& mesh, const Eigen::VectorXd& u, double p) {
  KahanSum acc;
  for (const Facet& f : mesh.boundary_facets) {
    if (f.tag != FacetTag::gamma) continue;
    const double len = mesh.facet_measure(f);
    const Point& A = mesh.vertices[f.v[0]];
    for (const QPoint& qp : facet_rule(mesh, f, 5)) {
      const double s =
          std::hypot(qp.x[0] - A[0], qp.x[1] - A[1]) / len;
      const double val = (1.0 - s) * u[f.v[0]] + s * u[f.v[1]];
      acc.add(qp.w * std::pow(std::abs(val), p));
    }
  }
  return std::pow(acc.value(), 1.0 / p);
}

double mixed_norm(const DiscreteSolution& sol, const Mesh& mesh,
                  double p_space, double q_time, bool on_gamma) {
  auto snorm = [&](const Eigen::VectorXd& u) {
    return on_gamma ? trace_lp(mesh, u, p_space)
                    : spatial_lp(mesh, u, p_space);
  };
  if (std::isinf(q_time)) {
    double m = 0.0;
    for (const auto& u : sol.fields) m = std::max(m, snorm(u));
    return m;
  }
  const double dt = sol.dt();
  KahanSum acc;
  for (int k = 1; k <= sol.steps(); ++k)
    acc.add(dt * std::pow(snorm(sol.fields[k]), q_time));
  return std::pow(acc.value(), 1.0 / q_time);
}

NormReport norms(const DiscreteSolution& sol, const Mesh& mesh,
                 const ProblemSpec& spec,
                 const std::vector<NormRequest>& requests) {
  if (sol.fields.empty()) throw Error("empty solution");
  NormReport rep;
  const double inf = std::numeric_limits<double>::infinity();
  rep.l2_inf = mixed_norm(sol, mesh, 2.0, inf);
  rep.l1_inf = mixed_norm(sol, mesh, 1.0, inf);

  const double dt = sol.dt();
  const double p = p_of(spec);
  {
    KahanSum g2, gp;
    for (int k = 1; k <= sol.steps(); ++k) {
      g2.add(dt * sqr(spatial_grad_lp(mesh, sol.fields[k], 2.0)));
      gp.add(dt * std::pow(spatial_grad_lp(mesh, sol.fields[k], p), p));
    }
    rep.grad_l2 = std::sqrt(g2.value());
    rep.grad_lp = std::pow(gp.value(), 1.0 / p);
  }

  const double ell = spec.law.ell;
  rep.trace_ell = mixed_norm(sol, mesh, ell, ell, true);
  rep.trace_ellm1 = mixed_norm(sol, mesh, ell - 1.0, ell - 1.0, true);
  rep.trace_l2 = mixed_norm(sol, mesh, 2.0, 2.0, true);

  rep.nodal_min = inf;
  rep.trace_min = inf;
  for (const auto& u : sol.fields) {
    rep.ess_sup = std::max(rep.ess_sup, u.cwiseAbs().maxCoeff());
    rep.nodal_min = std::min(rep.nodal_min, u.minCoeff());
    for (int i : sol.gamma_nodes) {
      rep.ess_sup_gamma = std::max(rep.ess_sup_gamma, std::abs(u[i]));
      rep.trace_min = std::min(rep.trace_min, u[i]);
    }
  }

  for (const NormRequest& rq : requests)
    rep.mixed[{rq.p, rq.q}] = mixed_norm(sol, mesh, rq.p, rq.q);
  return rep;
}

double l2_qt_error(const DiscreteSolution& sol, const Mesh& mesh,
                   const ScalarFn& reference) {
  const double dt = sol.dt();
  KahanSum acc;
  for (int k = 1; k <= sol.steps(); ++k) {
    const Eigen::VectorXd& u = sol.fields[k];
    const double t = sol.times[k];
    KahanSum sp;
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const int* v = mesh.cell(c);
      for (const QPoint& qp : cell_rule(mesh, c, 4)) {
        double lam[3];
        bary(mesh, v, qp.x, lam);
        const double val =
            lam[0] * u[v[0]] + lam[1] * u[v[1]] + lam[2] * u[v[2]];
        sp.add(qp.w * sqr(val - reference(qp.x, t)));
      }
    }
    acc.add(dt * sp.value());
  }
  return std::sqrt(acc.value());
}

}  // namespace parabound
