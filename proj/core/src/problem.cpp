#include "parabound/problem.hpp"

#include <cmath>
#include <sstream>

#include "parabound/error.hpp"
#include "parabound/quadrature.hpp"

namespace parabound {

double theta_of(const DriftField& drift, int dimension) {
  if (dimension != 2) return 0.0;
  if (drift.theta >= 0.0) return drift.theta;
  return 0.5 * (1.0 - 2.0 / drift.q);
}

double derive_p(double q, double r, int n) {
  return (r * (1.0 - n / q) + n) / (n + 1.0);
}

double p_of(const ProblemSpec& spec) {
  if (spec.p > 0.0) return spec.p;
  return derive_p(spec.drift.q, spec.drift.r, spec.dim());
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::l2_theory: return "L2-theory";
    case Regime::max_principle: return "max-principle";
    case Regime::l1_theory: return "L1-theory";
    case Regime::b0_l2: return "b0-L2";
    case Regime::b0_l1: return "b0-L1";
  }
  return "?";
}

bool ValidationReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c.passed;
  return false;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "[pass] " : "[FAIL] ") << c.name;
    if (!c.witness.empty()) os << " (" << c.witness << ")";
    os << "\n";
  }
  os << "regimes:";
  if (regimes.empty()) os << " none";
  for (Regime r : regimes) os << " " << regime_name(r);
  os << "\n";
  return os.str();
}

namespace {

std::vector<Point> lattice_points(const DomainSpec& d, int per_axis) {
  std::vector<Point> pts;
  const int n = d.dimension;
  const int k = per_axis;
  if (n == 2) {
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= k; ++j)
        pts.push_back({d.extents[0] * i / k, d.extents[1] * j / k, 0.0});
  } else {
    const int k3 = std::max(4, per_axis / 2);
    for (int i = 0; i <= k3; ++i)
      for (int j = 0; j <= k3; ++j)
        for (int l = 0; l <= k3; ++l)
          pts.push_back({d.extents[0] * i / k3, d.extents[1] * j / k3,
                         d.extents[2] * l / k3});
  }
  return pts;
}

std::vector<Point> gamma_points(const DomainSpec& d, int count) {
  // Sample points on the selected faces; for tagging purposes a generic
  // spread along each face suffices.
  std::vector<Point> pts;
  const int n = d.dimension;
  const int per_face = std::max(4, count / std::max<int>(1, d.gamma_faces.size()));
  auto add_face = [&](int axis, int side) {
    for (int i = 0; i <= per_face; ++i) {
      Point x{0, 0, 0};
      const double s = double(i) / per_face;
      for (int a = 0; a < n; ++a) x[a] = s * d.extents[a];
      x[axis] = side ? d.extents[axis] : 0.0;
      pts.push_back(x);
    }
  };
  for (const auto& name : d.gamma_faces) {
    if (name == "all") {
      for (int a = 0; a < n; ++a) {
        add_face(a, 0);
        add_face(a, 1);
      }
    } else if (name == "left" || name == "x0") add_face(0, 0);
    else if (name == "right" || name == "x1") add_face(0, 1);
    else if (name == "bottom") add_face(n == 2 ? 1 : 2, 0);
    else if (name == "top") add_face(n == 2 ? 1 : 2, 1);
    else if (name == "y0" || name == "front") add_face(1, 0);
    else if (name == "y1" || name == "back") add_face(1, 1);
    else if (name == "z0") add_face(2, 0);
    else if (name == "z1") add_face(2, 1);
  }
  if (pts.empty()) pts.push_back({0, 0, 0});
  return pts;
}

std::vector<double> xi_grid(const SamplingOptions& opts) {
  // Symmetric logarithmic grid plus zero and a small linear band near zero.
  std::vector<double> xs;
  const int half = opts.xi_points / 2;
  for (int i = 0; i < half; ++i) {
    const double e = -3.0 + (std::log10(opts.xi_max) + 3.0) * i / (half - 1);
    xs.push_back(std::pow(10.0, e));
  }
  std::vector<double> grid;
  grid.push_back(0.0);
  for (double x : xs) {
    grid.push_back(x);
    grid.push_back(-x);
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

}  // namespace

ValidationReport validate(const ProblemSpec& spec, const SamplingOptions& opts) {
  ValidationReport rep;
  const int n = spec.dim();
  auto push = [&rep](std::string name, bool ok, double margin,
                     std::string witness = "") {
    rep.checks.push_back({std::move(name), ok, margin, std::move(witness)});
  };

  // Domain sanity.
  {
    bool ok = (n >= 2) && static_cast<int>(spec.domain.extents.size()) == n;
    for (double L : spec.domain.extents) ok = ok && L > 0;
    ok = ok && spec.domain.time_horizon > 0;
    push("domain", ok, 0.0, ok ? "" : "n >= 2, positive extents and T required");
  }

  // (A): ellipticity and boundedness on the sampling lattice.
  {
    const auto pts = lattice_points(spec.domain, opts.lattice_per_axis);
    double worst_ell = std::numeric_limits<double>::infinity();
    double worst_bound = 0.0;
    Point we{0, 0, 0}, wb{0, 0, 0};
    for (const Point& x : pts) {
      const auto A = spec.diffusion.A(x);
      // Smallest eigenvalue of the symmetric part.
      double lmin;
      if (n == 2) {
        const double s12 = 0.5 * (A[1] + A[2]);
        const double tr = A[0] + A[3];
        const double disc = std::sqrt(sqr(A[0] - A[3]) + 4.0 * s12 * s12);
        lmin = 0.5 * (tr - disc);
      } else {
        // Gershgorin lower bound on the symmetric part; exact for the
        // diagonal presets this build ships.
        lmin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 3; ++i) {
          double off = 0;
          for (int j = 0; j < 3; ++j)
            if (j != i) off += std::abs(0.5 * (A[i * 3 + j] + A[j * 3 + i]));
          lmin = std::min(lmin, A[i * 3 + i] - off);
        }
      }
      if (lmin < worst_ell) {
        worst_ell = lmin;
        we = x;
      }
      for (int k = 0; k < n * n; ++k)
        if (std::abs(A[k]) > worst_bound) {
          worst_bound = std::abs(A[k]);
          wb = x;
        }
    }
    std::ostringstream osw;
    osw << "min eig " << worst_ell << " at (" << we[0] << "," << we[1] << ")";
    push("(A) ellipticity", worst_ell >= spec.diffusion.a_lower - 1e-12,
         worst_ell - spec.diffusion.a_lower, osw.str());
    std::ostringstream osb;
    osb << "max entry " << worst_bound << " at (" << wb[0] << "," << wb[1]
        << ")";
    push("(A) boundedness", worst_bound <= spec.diffusion.a_upper + 1e-12,
         spec.diffusion.a_upper - worst_bound, osb.str());
  }

  // (B): growth band and monotonicity of xi -> b(x, xi) xi on the xi-grid.
  {
    const auto grid = xi_grid(opts);
    const auto xpts = gamma_points(spec.domain, opts.boundary_points);
    const double ell = spec.law.ell;
    bool growth_ok = true, mono_ok = true;
    double growth_margin = std::numeric_limits<double>::infinity();
    double mono_margin = std::numeric_limits<double>::infinity();
    std::string gw, mw;
    for (const Point& x : xpts) {
      double prev_flux = 0.0, prev_xi = 0.0;
      bool have_prev = false;
      for (double xi : grid) {
        const double b = spec.law.b(x, xi);
        const double env = std::pow(std::abs(xi), ell - 2.0);
        const double lo = spec.law.b_lower * env;
        const double hi = spec.law.b_upper * env;
        const double scale = std::max(1.0, hi);
        if (b < lo - 1e-12 * scale || b > hi + 1e-12 * scale) {
          if (growth_ok) {
            std::ostringstream os;
            os << "b(" << xi << ") = " << b << " outside [" << lo << ", "
               << hi << "]";
            gw = os.str();
          }
          growth_ok = false;
        }
        growth_margin = std::min(growth_margin,
                                 std::min(b - lo, hi - b) / scale);
        const double flux = b * xi;
        if (have_prev) {
          const double inc = (flux - prev_flux) * (xi - prev_xi);
          mono_margin = std::min(mono_margin, inc);
          if (inc < -1e-12 * std::max(1.0, std::abs(flux))) {
            if (mono_ok) {
              std::ostringstream os;
              os << "flux decreases between xi = " << prev_xi << " and "
                 << xi;
              mw = os.str();
            }
            mono_ok = false;
          }
        }
        prev_flux = flux;
        prev_xi = xi;
        have_prev = true;
      }
    }
    push("(B) growth", growth_ok, growth_margin, gw);
    push("(B) monotonicity", mono_ok, mono_margin, mw);
    push("(B) ell >= 2", spec.law.ell >= 2.0, spec.law.ell - 2.0, "");
  }

  // Exponent regimes.
  const double q = spec.drift.q, r = spec.drift.r;
  const double theta = theta_of(spec.drift, n);
  const bool bpos = spec.law.b_lower > 0.0;
  rep.f_present = !spec.data.f.is_zero;

  const double sum_qr = 2.0 / r + double(n) / q;
  {
    std::ostringstream os;
    os << "2/r + n/q = " << sum_qr;
    push("drift exponents q>2, r>1", q > 2.0 && r > 1.0, 0.0, "");
    push("L2 drift regime (2/r + n/q <= 1)", sum_qr <= 1.0 + 1e-12,
         1.0 - sum_qr, os.str());
    push("max-principle drift regime (2/r + n/q < 1)", sum_qr < 1.0,
         1.0 - sum_qr, os.str());
  }
  if (n == 2) {
    push("theta in [0, 1 - 2/q)", theta >= 0.0 && theta < 1.0 - 2.0 / q,
         (1.0 - 2.0 / q) - theta, "");
  }
  const double rq = r * (1.0 - double(n) / q);
  {
    std::ostringstream os;
    os << "r(1 - n/q) = " << rq;
    push("L1 drift regime (1 < r(1-n/q) < 2)", rq > 1.0 && rq < 2.0,
         std::min(rq - 1.0, 2.0 - rq), os.str());
  }
  const double p = p_of(spec);
  {
    const double lhs = double(n) / q + (p * (n + 1.0) - n) / r;
    std::ostringstream os;
    os << "n/q + (p(n+1)-n)/r = " << lhs << " with p = " << p;
    push("(pqrn) exponent relation", std::abs(lhs - 1.0) <= 1e-9, 1.0 - lhs,
         os.str());
    push("p in (1, (n+2)/(n+1))", p > 1.0 && p < (n + 2.0) / (n + 1.0),
         std::min(p - 1.0, (n + 2.0) / (n + 1.0) - p), "");
    const double side = r * (2.0 - p);
    push("gradient side condition r(2-p) < 2np", side < 2.0 * n * p,
         2.0 * n * p - side, "");
  }

  // Data sign hypotheses (sampled).
  double u0_min = std::numeric_limits<double>::infinity();
  double h_min = std::numeric_limits<double>::infinity();
  {
    const auto pts = lattice_points(spec.domain, opts.lattice_per_axis);
    const double T = spec.T();
    for (const Point& x : pts)
      u0_min = std::min(u0_min, spec.data.u0.fn(x, 0.0));
    const auto gpts = gamma_points(spec.domain, opts.boundary_points);
    for (int k = 0; k <= 8; ++k) {
      const double t = T * k / 8.0;
      for (const Point& x : gpts) h_min = std::min(h_min, spec.data.h.fn(x, t));
    }
    push("u0 >= 0 (sampled)", u0_min >= -1e-12, u0_min, "");
    push("u0 > 0 (sampled)", u0_min > 0.0, u0_min, "");
    push("h >= 0 (sampled)", h_min >= -1e-12, h_min, "");
  }
  push("f == 0 (drift-energy bound requires it)", !rep.f_present, 0.0,
       rep.f_present ? "nonzero f present; flagged for the L2 bounds" : "");

  // Gamma must carry measure when the law or h is active.
  {
    const bool needs_gamma = spec.law.b_upper > 0.0 || !spec.data.h.is_zero;
    const bool has_gamma = !spec.domain.gamma_faces.empty() &&
                           !(spec.domain.gamma_faces.size() == 1 &&
                             spec.domain.gamma_faces[0] == "none");
    push("Gamma nonempty when b or h active", !needs_gamma || has_gamma, 0.0,
         "");
  }

  // Regime classification.
  const bool l2_drift = rep.check("L2 drift regime (2/r + n/q <= 1)") &&
                        rep.check("drift exponents q>2, r>1");
  const bool mp_drift = rep.check("max-principle drift regime (2/r + n/q < 1)");
  const bool l1_drift = rep.check("L1 drift regime (1 < r(1-n/q) < 2)") &&
                        rep.check("(pqrn) exponent relation");
  const bool assumptions = rep.check("(A) ellipticity") &&
                           rep.check("(A) boundedness") &&
                           rep.check("(B) growth") &&
                           rep.check("(B) monotonicity");
  if (assumptions && l2_drift && bpos) rep.regimes.insert(Regime::l2_theory);
  if (assumptions && mp_drift && bpos && u0_min > 0.0 && h_min >= -1e-12)
    rep.regimes.insert(Regime::max_principle);
  if (assumptions && l1_drift && bpos) rep.regimes.insert(Regime::l1_theory);
  if (assumptions && l2_drift && !bpos && spec.law.ell >= 2.0 &&
      spec.law.ell <= 3.0)
    rep.regimes.insert(Regime::b0_l2);
  if (assumptions && l1_drift && !bpos && spec.law.ell >= 2.0 &&
      spec.law.ell <= p + 1.0 + 1e-12)
    rep.regimes.insert(Regime::b0_l1);

  return rep;
}

namespace {

double spatial_vector_norm(const ProblemSpec& spec, const Mesh& mesh, double t,
                           double q, int degree) {
  KahanSum acc;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (const QPoint& qp : cell_rule(mesh, c, degree)) {
      const Point e = spec.drift.E(qp.x, t);
      const double mag = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
      if (!std::isfinite(mag))
        throw Error("drift field is not finite at a quadrature point");
      acc.add(qp.w * std::pow(mag, q));
    }
  }
  return std::pow(acc.value(), 1.0 / q);
}

}  // namespace

double drift_mixed_norm(const ProblemSpec& spec, const Mesh& mesh,
                        double q_space, double r_time) {
  if (spec.drift.is_zero) return 0.0;
  const DriftQuadratureOptions opt;
  const TimeRule tr = time_rule(spec.T(), opt.time_panels, opt.time_points);
  KahanSum acc;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    const double s =
        spatial_vector_norm(spec, mesh, tr.t[i], q_space, opt.space_degree);
    acc.add(tr.w[i] * std::pow(s, r_time));
  }
  return std::pow(acc.value(), 1.0 / r_time);
}

double drift_norm(const ProblemSpec& spec, const Mesh& mesh) {
  return drift_mixed_norm(spec, mesh, spec.drift.q, spec.drift.r);
}

double drift_time_integral(const ProblemSpec& spec, const Mesh& mesh,
                           double q_space, double rho) {
  if (spec.drift.is_zero) return 0.0;
  const DriftQuadratureOptions opt;
  const TimeRule tr = time_rule(spec.T(), opt.time_panels, opt.time_points);
  KahanSum acc;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    const double s =
        spatial_vector_norm(spec, mesh, tr.t[i], q_space, opt.space_degree);
    acc.add(tr.w[i] * std::pow(s, rho));
  }
  return acc.value();
}

double truncate(double m, double s) {
  if (!(m >= 1.0)) throw Error("truncation level must satisfy m >= 1");
  return std::min(m, std::max(-m, s));
}

double sampled_sup(const ScalarFn& fn, const DomainSpec& domain,
                   bool boundary_only, const SamplingOptions& opts) {
  const auto pts = boundary_only ? gamma_points(domain, opts.boundary_points)
                                 : lattice_points(domain, opts.lattice_per_axis);
  double sup = 0.0;
  for (int k = 0; k <= 8; ++k) {
    const double t = domain.time_horizon * k / 8.0;
    for (const Point& x : pts) sup = std::max(sup, std::abs(fn(x, t)));
  }
  return sup;
}

double data_norm_omega(const ScalarFn& fn, const Mesh& mesh, double p) {
  KahanSum acc;
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (const QPoint& qp : cell_rule(mesh, c, 4))
      acc.add(qp.w * std::pow(std::abs(fn(qp.x, 0.0)), p));
  return std::pow(acc.value(), 1.0 / p);
}

double data_norm_QT(const ScalarFn& fn, const Mesh& mesh, double T, double p,
                    double q_time) {
  const DriftQuadratureOptions opt;
  const TimeRule tr = time_rule(T, opt.time_panels, opt.time_points);
  KahanSum acc;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    KahanSum sp;
    for (int c = 0; c < mesh.num_cells(); ++c)
      for (const QPoint& qp : cell_rule(mesh, c, 4))
        sp.add(qp.w * std::pow(std::abs(fn(qp.x, tr.t[i])), p));
    acc.add(tr.w[i] * std::pow(std::pow(sp.value(), 1.0 / p), q_time));
  }
  return std::pow(acc.value(), 1.0 / q_time);
}

double data_norm_SigmaT(const ScalarFn& fn, const Mesh& mesh, double T,
                        double p, double q_time) {
  const DriftQuadratureOptions opt;
  const TimeRule tr = time_rule(T, opt.time_panels, opt.time_points);
  KahanSum acc;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    KahanSum sp;
    for (const Facet& f : mesh.boundary_facets) {
      if (f.tag != FacetTag::gamma) continue;
      for (const QPoint& qp : facet_rule(mesh, f, 4))
        sp.add(qp.w * std::pow(std::abs(fn(qp.x, tr.t[i])), p));
    }
    acc.add(tr.w[i] * std::pow(std::pow(sp.value(), 1.0 / p), q_time));
  }
  return std::pow(acc.value(), 1.0 / q_time);
}

}  // namespace parabound
