#include "parabound/solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>

#include "parabound/error.hpp"
#include "parabound/quadrature.hpp"

namespace parabound {

FemSpace::FemSpace(const Mesh& m) : mesh(m) {
  if (m.dimension != 2)
    throw SolverError("the finite element solver supports 2-D meshes");
  nv = m.num_vertices();
  lumped_mass = Eigen::VectorXd::Zero(nv);
  gamma_weights.assign(nv, 0.0);
  cell_grads.resize(m.num_cells());
  cell_areas.resize(m.num_cells());

  for (int c = 0; c < m.num_cells(); ++c) {
    const int* v = m.cell(c);
    const Point& A = m.vertices[v[0]];
    const Point& B = m.vertices[v[1]];
    const Point& C = m.vertices[v[2]];
    const double det =
        (B[0] - A[0]) * (C[1] - A[1]) - (C[0] - A[0]) * (B[1] - A[1]);
    const double area = 0.5 * std::abs(det);
    cell_areas[c] = area;
    cell_grads[c] = {(B[1] - C[1]) / det, (C[0] - B[0]) / det,
                     (C[1] - A[1]) / det, (A[0] - C[0]) / det,
                     (A[1] - B[1]) / det, (B[0] - A[0]) / det};
    for (int k = 0; k < 3; ++k) lumped_mass[v[k]] += area / 3.0;
  }
  for (const Facet& f : mesh.boundary_facets) {
    if (f.tag != FacetTag::gamma) continue;
    const double len = mesh.facet_measure(f);
    gamma_weights[f.v[0]] += 0.5 * len;
    gamma_weights[f.v[1]] += 0.5 * len;
  }
  for (int i = 0; i < nv; ++i)
    if (gamma_weights[i] > 0.0) gamma_nodes.push_back(i);
}

Eigen::SparseMatrix<double> FemSpace::stiffness(const MatrixFn& A) const {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.num_cells() * 9);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const int* v = mesh.cell(c);
    // One-point rule: A is piecewise constant in the supported presets and
    // the gradients are cellwise constant, so this is the exact element
    // integral for them.
    Point centroid{0, 0, 0};
    for (int k = 0; k < 3; ++k)
      for (int d = 0; d < 2; ++d) centroid[d] += mesh.vertices[v[k]][d] / 3.0;
    const auto a = A(centroid);
    const auto& g = cell_grads[c];
    for (int i = 0; i < 3; ++i) {
      const double gi[2] = {g[2 * i], g[2 * i + 1]};
      for (int j = 0; j < 3; ++j) {
        const double gj[2] = {g[2 * j], g[2 * j + 1]};
        // grad_phi_i . (A grad_phi_j)
        const double Ag0 = a[0] * gj[0] + a[1] * gj[1];
        const double Ag1 = a[2] * gj[0] + a[3] * gj[1];
        trip.emplace_back(v[i], v[j],
                          cell_areas[c] * (gi[0] * Ag0 + gi[1] * Ag1));
      }
    }
  }
  Eigen::SparseMatrix<double> K(nv, nv);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

Eigen::SparseMatrix<double> FemSpace::drift_matrix(const VectorFn& E,
                                                   double t) const {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.num_cells() * 9);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const int* v = mesh.cell(c);
    const auto& g = cell_grads[c];
    for (const QPoint& qp : cell_rule(mesh, c, 2)) {
      const Point e = E(qp.x, t);
      // Barycentric values of phi_j at the quadrature point.
      const Point& A = mesh.vertices[v[0]];
      const Point& B = mesh.vertices[v[1]];
      const Point& C = mesh.vertices[v[2]];
      const double det =
          (B[0] - A[0]) * (C[1] - A[1]) - (C[0] - A[0]) * (B[1] - A[1]);
      double lam[3];
      lam[1] = ((qp.x[0] - A[0]) * (C[1] - A[1]) -
                (C[0] - A[0]) * (qp.x[1] - A[1])) /
               det;
      lam[2] = ((B[0] - A[0]) * (qp.x[1] - A[1]) -
                (qp.x[0] - A[0]) * (B[1] - A[1])) /
               det;
      lam[0] = 1.0 - lam[1] - lam[2];
      for (int i = 0; i < 3; ++i) {
        const double edotg = e[0] * g[2 * i] + e[1] * g[2 * i + 1];
        for (int j = 0; j < 3; ++j)
          trip.emplace_back(v[i], v[j], qp.w * lam[j] * edotg);
      }
    }
  }
  Eigen::SparseMatrix<double> Cm(nv, nv);
  Cm.setFromTriplets(trip.begin(), trip.end());
  return Cm;
}

Eigen::VectorXd FemSpace::load_volume(const ScalarFn& f, double t,
                                      std::optional<double> regularize) const {
  Eigen::VectorXd F = Eigen::VectorXd::Zero(nv);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const int* v = mesh.cell(c);
    const Point& A = mesh.vertices[v[0]];
    const Point& B = mesh.vertices[v[1]];
    const Point& C = mesh.vertices[v[2]];
    const double det =
        (B[0] - A[0]) * (C[1] - A[1]) - (C[0] - A[0]) * (B[1] - A[1]);
    for (const QPoint& qp : cell_rule(mesh, c, 4)) {
      double val = f(qp.x, t);
      if (regularize) val = *regularize * val / (*regularize + std::abs(val));
      double lam[3];
      lam[1] = ((qp.x[0] - A[0]) * (C[1] - A[1]) -
                (C[0] - A[0]) * (qp.x[1] - A[1])) /
               det;
      lam[2] = ((B[0] - A[0]) * (qp.x[1] - A[1]) -
                (qp.x[0] - A[0]) * (B[1] - A[1])) /
               det;
      lam[0] = 1.0 - lam[1] - lam[2];
      for (int k = 0; k < 3; ++k) F[v[k]] += qp.w * val * lam[k];
    }
  }
  return F;
}

Eigen::VectorXd FemSpace::load_gamma(const ScalarFn& h, double t) const {
  // Vertex rule on each edge, matching the lumped boundary mass.
  Eigen::VectorXd H = Eigen::VectorXd::Zero(nv);
  for (const Facet& f : mesh.boundary_facets) {
    if (f.tag != FacetTag::gamma) continue;
    const double half = 0.5 * mesh.facet_measure(f);
    H[f.v[0]] += half * h(mesh.vertices[f.v[0]], t);
    H[f.v[1]] += half * h(mesh.vertices[f.v[1]], t);
  }
  return H;
}

Eigen::VectorXd FemSpace::drift_load(const VectorFn& E, double t,
                                     const Eigen::VectorXd& u_lag,
                                     double trunc, bool upwind) const {
  Eigen::VectorXd F = Eigen::VectorXd::Zero(nv);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const int* v = mesh.cell(c);
    const auto& g = cell_grads[c];
    const Point& A = mesh.vertices[v[0]];
    const Point& B = mesh.vertices[v[1]];
    const Point& C = mesh.vertices[v[2]];
    const double det =
        (B[0] - A[0]) * (C[1] - A[1]) - (C[0] - A[0]) * (B[1] - A[1]);
    for (const QPoint& qp : cell_rule(mesh, c, 2)) {
      const Point e = E(qp.x, t);
      double uval;
      if (upwind) {
        // Use the value at the upstream vertex of the cell.
        int up = 0;
        double best = 0.0;
        for (int k = 0; k < 3; ++k) {
          const double sdot = -(e[0] * mesh.vertices[v[k]][0] +
                                e[1] * mesh.vertices[v[k]][1]);
          if (k == 0 || sdot > best) {
            best = sdot;
            up = k;
          }
        }
        uval = u_lag[v[up]];
      } else {
        double lam[3];
        lam[1] = ((qp.x[0] - A[0]) * (C[1] - A[1]) -
                  (C[0] - A[0]) * (qp.x[1] - A[1])) /
                 det;
        lam[2] = ((B[0] - A[0]) * (qp.x[1] - A[1]) -
                  (qp.x[0] - A[0]) * (B[1] - A[1])) /
                 det;
        lam[0] = 1.0 - lam[1] - lam[2];
        uval = lam[0] * u_lag[v[0]] + lam[1] * u_lag[v[1]] +
               lam[2] * u_lag[v[2]];
      }
      const double tu = truncate(trunc, uval);
      for (int i = 0; i < 3; ++i)
        F[v[i]] += qp.w * tu * (e[0] * g[2 * i] + e[1] * g[2 * i + 1]);
    }
  }
  return F;
}

Eigen::VectorXd project_initial(const Mesh& mesh, const ScalarFn& u0) {
  FemSpace fem(mesh);
  const Eigen::VectorXd load = fem.load_volume(u0, 0.0, std::nullopt);
  return load.cwiseQuotient(fem.lumped_mass);
}

double lumped_integral(const FemSpace& fem, const Eigen::VectorXd& u) {
  return fem.lumped_mass.dot(u);
}

namespace {

bool law_is_constant(const BoundaryLaw& law) {
  return law.kind == LawKind::neumann || law.kind == LawKind::robin;
}

Eigen::VectorXd boundary_coefficients(const FemSpace& fem,
                                      const BoundaryLaw& law,
                                      const Eigen::VectorXd& u_lag) {
  // Lumped boundary term: diagonal w_i b(x_i, u_i).
  Eigen::VectorXd d = Eigen::VectorXd::Zero(fem.nv);
  for (int i : fem.gamma_nodes)
    d[i] = fem.gamma_weights[i] * law.b(fem.mesh.vertices[i], u_lag[i]);
  return d;
}

}  // namespace

Eigen::VectorXd step(const Eigen::VectorXd& prev, double t_next, double dt,
                     const ProblemSpec& spec, const FemSpace& fem,
                     const SolverOptions& opts, StepDiagnostics* diag) {
  if (!(dt > 0.0)) throw SolverError("dt must be positive");
  const int nv = fem.nv;
  const bool drift_active = !spec.drift.is_zero;
  const bool drift_lagged = drift_active && opts.truncation.has_value();
  const bool linear = law_is_constant(spec.law) && !drift_lagged;

  const Eigen::SparseMatrix<double> K = fem.stiffness(spec.diffusion.A);
  Eigen::SparseMatrix<double> base = K;
  if (drift_active && !drift_lagged)
    base = base - fem.drift_matrix(spec.drift.E, t_next);

  Eigen::VectorXd rhs0 = (fem.lumped_mass.array() * prev.array()).matrix() / dt;
  if (!spec.data.f.is_zero)
    rhs0 += fem.load_volume(spec.data.f.fn, t_next, opts.truncation);
  if (!spec.data.h.is_zero) rhs0 += fem.load_gamma(spec.data.h.fn, t_next);

  auto assemble_and_solve = [&](const Eigen::VectorXd& u_lag) {
    Eigen::SparseMatrix<double> Amat = base;
    Eigen::VectorXd diag_add = fem.lumped_mass / dt;
    diag_add += boundary_coefficients(fem, spec.law, u_lag);
    for (int i = 0; i < nv; ++i) Amat.coeffRef(i, i) += diag_add[i];
    Eigen::VectorXd rhs = rhs0;
    if (drift_lagged)
      rhs += fem.drift_load(spec.drift.E, t_next, u_lag, *opts.truncation,
                            opts.upwind);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(Amat);
    if (lu.info() != Eigen::Success)
      throw SolverError("singular linear system in time step");
    Eigen::VectorXd u = lu.solve(rhs);
    if (lu.info() != Eigen::Success)
      throw SolverError("linear solve failed in time step");
    return u;
  };

  if (linear) {
    Eigen::VectorXd u = assemble_and_solve(prev);
    if (diag) {
      diag->picard_iterations = 1;
      diag->residual = 0.0;
    }
    return u;
  }

  // Damped Picard iteration on the lagged factors.
  Eigen::VectorXd u_lag = prev;
  Eigen::VectorXd u = prev;
  double resid = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < opts.picard_max; ++it) {
    u = assemble_and_solve(u_lag);
    resid = (u - u_lag).cwiseAbs().maxCoeff();
    const double scale = 1.0 + u.cwiseAbs().maxCoeff();
    if (resid <= opts.picard_tol * scale) {
      ++it;
      break;
    }
    u_lag += opts.picard_damping * (u - u_lag);
  }
  if (diag) {
    diag->picard_iterations = it;
    diag->residual = resid;
  }
  if (resid > opts.picard_tol * (1.0 + u.cwiseAbs().maxCoeff())) {
    std::ostringstream os;
    os << "Picard iteration did not converge at t = " << t_next
       << " (residual " << resid << " after " << it << " iterations)";
    throw SolverError(os.str());
  }
  return u;
}

DiscreteSolution solve(const ProblemSpec& spec, const Mesh& mesh,
                       const SolverOptions& opts_in) {
  SolverOptions opts = opts_in;
  const double T = spec.T();
  if (opts.dt <= 0.0) {
    // Accuracy heuristic (the scheme is implicit, not stability-limited),
    // rounded so that dt divides T.
    const double heur =
        mesh.resolution * mesh.resolution / spec.diffusion.a_upper;
    const int K0 = std::max(1, static_cast<int>(std::ceil(T / heur)));
    opts.dt = T / K0;
  }
  const double steps_real = T / opts.dt;
  const int K = static_cast<int>(std::lround(steps_real));
  if (K < 1 || std::abs(steps_real - K) > 1e-8 * std::max(1.0, steps_real))
    throw SolverError("dt must divide the time horizon");

  FemSpace fem(mesh);
  DiscreteSolution sol;
  sol.gamma_nodes = fem.gamma_nodes;
  sol.times.push_back(0.0);
  sol.fields.push_back(project_initial(mesh, spec.data.u0.fn));

  Eigen::VectorXd u = sol.fields[0];
  for (int k = 1; k <= K; ++k) {
    const double t = k * opts.dt;
    StepDiagnostics diag;
    u = step(u, t, opts.dt, spec, fem, opts, &diag);
    sol.times.push_back(t);
    sol.fields.push_back(u);
    sol.diagnostics.push_back(diag);
  }
  return sol;
}

std::vector<double> mass_balance(const DiscreteSolution& sol,
                                 const ProblemSpec& spec, const Mesh& mesh,
                                 const SolverOptions& opts) {
  FemSpace fem(mesh);
  std::vector<double> residuals;
  const double dt = sol.dt();
  for (int k = 1; k <= sol.steps(); ++k) {
    const Eigen::VectorXd& u = sol.fields[k];
    const double t = sol.times[k];
    double r = (lumped_integral(fem, u) - lumped_integral(fem, sol.fields[k - 1])) / dt;
    for (int i : fem.gamma_nodes)
      r += fem.gamma_weights[i] * spec.law.b(mesh.vertices[i], u[i]) * u[i];
    if (!spec.data.f.is_zero)
      r -= fem.load_volume(spec.data.f.fn, t, opts.truncation).sum();
    if (!spec.data.h.is_zero)
      r -= fem.load_gamma(spec.data.h.fn, t).sum();
    residuals.push_back(r);
  }
  return residuals;
}

EnergyCheck energy_check(const DiscreteSolution& sol, const ProblemSpec& spec,
                         const Mesh& mesh) {
  FemSpace fem(mesh);
  const double dt = sol.dt();
  const double a = spec.diffusion.a_lower;
  const double b = spec.law.b_lower;
  const double ell = spec.law.ell;

  auto lumped_sq = [&](const Eigen::VectorXd& u) {
    return (fem.lumped_mass.array() * u.array().square()).sum();
  };

  KahanSum lhs, rhs;
  lhs.add(0.5 * lumped_sq(sol.fields.back()));
  rhs.add(0.5 * lumped_sq(sol.fields.front()));
  for (int k = 1; k <= sol.steps(); ++k) {
    const Eigen::VectorXd& u = sol.fields[k];
    // Exact gradient seminorm of the P1 field.
    double grad2 = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const int* v = mesh.cell(c);
      const auto& g = fem.cell_grads[c];
      double ux = 0, uy = 0;
      for (int j = 0; j < 3; ++j) {
        ux += g[2 * j] * u[v[j]];
        uy += g[2 * j + 1] * u[v[j]];
      }
      grad2 += fem.cell_areas[c] * (ux * ux + uy * uy);
    }
    lhs.add(dt * a * grad2);
    if (b > 0.0) {
      double bnd = 0.0;
      for (int i : fem.gamma_nodes)
        bnd += fem.gamma_weights[i] * std::pow(std::abs(u[i]), ell);
      lhs.add(dt * b * bnd);
    }
    if (!spec.data.h.is_zero) {
      const Eigen::VectorXd H = fem.load_gamma(spec.data.h.fn, sol.times[k]);
      rhs.add(dt * H.dot(u));
    }
  }
  EnergyCheck ec;
  ec.lhs = lhs.value();
  ec.rhs = rhs.value();
  ec.slack = ec.rhs - ec.lhs;
  return ec;
}

}  // namespace parabound
