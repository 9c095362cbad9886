#ifndef PARABOUND_QUADRATURE_HPP
#define PARABOUND_QUADRATURE_HPP

#include <vector>

#include "parabound/geometry.hpp"

namespace parabound {

struct QPoint {
  Point x;
  double w = 0.0;
};

/// Quadrature points on a physical cell, exact for polynomials up to
/// `degree` (triangles: 1..5, tetrahedra: 1..2 plus a degree-4 rule).
std::vector<QPoint> cell_rule(const Mesh& mesh, int c, int degree);

/// Quadrature points on a boundary facet (Gauss-Legendre on edges,
/// symmetric rules on boundary triangles).
std::vector<QPoint> facet_rule(const Mesh& mesh, const Facet& f, int degree);

/// Composite Gauss-Legendre rule on [0, T]: `panels` panels with
/// `points_per_panel` Gauss points each.
struct TimeRule {
  std::vector<double> t;
  std::vector<double> w;
};
TimeRule time_rule(double T, int panels, int points_per_panel);

/// Gauss-Legendre nodes/weights on [0, 1], npts in 1..5.
void gauss_legendre_01(int npts, std::vector<double>& nodes,
                       std::vector<double>& weights);

}  // namespace parabound

#endif
