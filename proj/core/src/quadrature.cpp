#include "parabound/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "parabound/error.hpp"

namespace parabound {

namespace {

struct RefPoint {
  double l[4];  // barycentric coordinates
  double w;     // weight relative to the simplex measure
};

// Symmetric triangle rules (barycentric), weights summing to 1.
const std::vector<RefPoint>& triangle_rule(int degree) {
  static const std::vector<RefPoint> deg1 = {
      {{1. / 3, 1. / 3, 1. / 3, 0}, 1.0}};
  static const std::vector<RefPoint> deg2 = {
      {{2. / 3, 1. / 6, 1. / 6, 0}, 1. / 3},
      {{1. / 6, 2. / 3, 1. / 6, 0}, 1. / 3},
      {{1. / 6, 1. / 6, 2. / 3, 0}, 1. / 3}};
  // Dunavant degree-4, six points.
  static const std::vector<RefPoint> deg4 = [] {
    std::vector<RefPoint> pts;
    const double a1 = 0.108103018168070, b1 = 0.445948490915965,
                 w1 = 0.223381589678011;
    const double a2 = 0.816847572980459, b2 = 0.091576213509771,
                 w2 = 0.109951743655322;
    auto add3 = [&pts](double a, double b, double w) {
      pts.push_back({{a, b, b, 0}, w});
      pts.push_back({{b, a, b, 0}, w});
      pts.push_back({{b, b, a, 0}, w});
    };
    add3(a1, b1, w1);
    add3(a2, b2, w2);
    return pts;
  }();
  // Dunavant degree-5, seven points.
  static const std::vector<RefPoint> deg5 = [] {
    std::vector<RefPoint> pts;
    pts.push_back({{1. / 3, 1. / 3, 1. / 3, 0}, 0.225});
    const double a1 = 0.059715871789770, b1 = 0.470142064105115,
                 w1 = 0.132394152788506;
    const double a2 = 0.797426985353087, b2 = 0.101286507323456,
                 w2 = 0.125939180544827;
    auto add3 = [&pts](double a, double b, double w) {
      pts.push_back({{a, b, b, 0}, w});
      pts.push_back({{b, a, b, 0}, w});
      pts.push_back({{b, b, a, 0}, w});
    };
    add3(a1, b1, w1);
    add3(a2, b2, w2);
    return pts;
  }();
  if (degree <= 1) return deg1;
  if (degree <= 2) return deg2;
  if (degree <= 4) return deg4;
  return deg5;
}

const std::vector<RefPoint>& tet_rule(int degree) {
  static const std::vector<RefPoint> deg1 = {
      {{0.25, 0.25, 0.25, 0.25}, 1.0}};
  static const std::vector<RefPoint> deg2 = [] {
    std::vector<RefPoint> pts;
    const double a = 0.585410196624969, b = 0.138196601125011;
    for (int i = 0; i < 4; ++i) {
      RefPoint p{{b, b, b, b}, 0.25};
      p.l[i] = a;
      pts.push_back(p);
    }
    return pts;
  }();
  // Keast degree-4, eleven points.
  static const std::vector<RefPoint> deg4 = [] {
    std::vector<RefPoint> pts;
    pts.push_back({{0.25, 0.25, 0.25, 0.25}, -0.013155555555556 * 6});
    const double a = 0.785714285714286, b = 0.071428571428571;
    const double w1 = 0.007622222222222 * 6;
    for (int i = 0; i < 4; ++i) {
      RefPoint p{{b, b, b, b}, w1};
      p.l[i] = a;
      pts.push_back(p);
    }
    const double c = 0.399403576166799, d = 0.100596423833201;
    const double w2 = 0.024888888888889 * 6;
    const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (const auto& pr : pairs) {
      RefPoint p{{d, d, d, d}, w2};
      p.l[pr[0]] = c;
      p.l[pr[1]] = c;
      pts.push_back(p);
    }
    return pts;
  }();
  if (degree <= 1) return deg1;
  if (degree <= 2) return deg2;
  return deg4;
}

}  // namespace

void gauss_legendre_01(int npts, std::vector<double>& nodes,
                       std::vector<double>& weights) {
  // Tabulated nodes on [-1,1], mapped to [0,1].
  static const std::vector<std::vector<double>> xs = {
      {0.0},
      {-0.5773502691896257, 0.5773502691896257},
      {-0.7745966692414834, 0.0, 0.7745966692414834},
      {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
       0.8611363115940526},
      {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
       0.9061798459386640}};
  static const std::vector<std::vector<double>> ws = {
      {2.0},
      {1.0, 1.0},
      {0.5555555555555556, 0.8888888888888888, 0.5555555555555556},
      {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
       0.3478548451374538},
      {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
       0.4786286704993665, 0.2369268850561891}};
  if (npts < 1 || npts > 5)
    throw Error("gauss_legendre_01 supports 1..5 points");
  nodes.clear();
  weights.clear();
  for (int i = 0; i < npts; ++i) {
    nodes.push_back(0.5 * (xs[npts - 1][i] + 1.0));
    weights.push_back(0.5 * ws[npts - 1][i]);
  }
}

std::vector<QPoint> cell_rule(const Mesh& mesh, int c, int degree) {
  const int* v = mesh.cell(c);
  const double meas = mesh.cell_measure(c);
  const auto& ref =
      mesh.dimension == 2 ? triangle_rule(degree) : tet_rule(degree);
  std::vector<QPoint> out;
  out.reserve(ref.size());
  const int ss = mesh.simplex_size();
  for (const RefPoint& rp : ref) {
    QPoint qp;
    qp.x = {0, 0, 0};
    for (int k = 0; k < ss; ++k)
      for (int a = 0; a < 3; ++a) qp.x[a] += rp.l[k] * mesh.vertices[v[k]][a];
    qp.w = rp.w * meas;
    out.push_back(qp);
  }
  return out;
}

std::vector<QPoint> facet_rule(const Mesh& mesh, const Facet& f, int degree) {
  const double meas = mesh.facet_measure(f);
  std::vector<QPoint> out;
  if (mesh.dimension == 2) {
    std::vector<double> n, w;
    gauss_legendre_01(std::min(5, std::max(1, (degree + 2) / 2)), n, w);
    const Point& a = mesh.vertices[f.v[0]];
    const Point& b = mesh.vertices[f.v[1]];
    for (std::size_t i = 0; i < n.size(); ++i) {
      QPoint qp;
      for (int d = 0; d < 3; ++d) qp.x[d] = a[d] + n[i] * (b[d] - a[d]);
      qp.w = w[i] * meas;
      out.push_back(qp);
    }
  } else {
    const auto& ref = triangle_rule(degree);
    for (const RefPoint& rp : ref) {
      QPoint qp;
      qp.x = {0, 0, 0};
      for (int k = 0; k < 3; ++k)
        for (int d = 0; d < 3; ++d)
          qp.x[d] += rp.l[k] * mesh.vertices[f.v[k]][d];
      qp.w = rp.w * meas;
      out.push_back(qp);
    }
  }
  return out;
}

TimeRule time_rule(double T, int panels, int points_per_panel) {
  TimeRule tr;
  std::vector<double> n, w;
  gauss_legendre_01(points_per_panel, n, w);
  const double dt = T / panels;
  for (int p = 0; p < panels; ++p) {
    const double t0 = p * dt;
    for (std::size_t i = 0; i < n.size(); ++i) {
      tr.t.push_back(t0 + n[i] * dt);
      tr.w.push_back(w[i] * dt);
    }
  }
  return tr;
}

}  // namespace parabound
