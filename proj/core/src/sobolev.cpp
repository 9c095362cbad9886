#include "parabound/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "parabound/error.hpp"
#include "parabound/quadrature.hpp"
#include "parabound/util.hpp"

namespace parabound {

std::string kind_name(ConstantKind k) {
  switch (k) {
    case ConstantKind::S_p: return "S_p";
    case ConstantKind::S_pq: return "S_pq";
    case ConstantKind::K_p: return "K_p";
    case ConstantKind::S_1: return "S_1";
    case ConstantKind::C_inf: return "C_inf";
  }
  return "?";
}

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::analytic_upper: return "analytic-upper";
    case Provenance::numeric_lower: return "numeric-lower";
    case Provenance::user_supplied: return "user-supplied";
  }
  return "?";
}

ConstantKind kind_from_name(const std::string& s) {
  if (s == "S_p") return ConstantKind::S_p;
  if (s == "S_pq") return ConstantKind::S_pq;
  if (s == "K_p") return ConstantKind::K_p;
  if (s == "S_1") return ConstantKind::S_1;
  if (s == "C_inf") return ConstantKind::C_inf;
  throw ConfigError("unknown constant kind: " + s);
}

Provenance provenance_from_name(const std::string& s) {
  if (s == "analytic-upper") return Provenance::analytic_upper;
  if (s == "numeric-lower") return Provenance::numeric_lower;
  if (s == "user-supplied") return Provenance::user_supplied;
  throw ConfigError("unknown provenance: " + s);
}

namespace {

bool key_match(const ConstantEstimate& e, ConstantKind kind, double p,
               double q) {
  if (e.kind != kind) return false;
  if (kind == ConstantKind::S_1) return true;  // parameter-free
  if (std::abs(e.p - p) > 1e-9) return false;
  if (kind == ConstantKind::S_pq && std::abs(e.q - q) > 1e-9) return false;
  return true;
}

std::string key_string(ConstantKind kind, double p, double q) {
  std::ostringstream os;
  os << kind_name(kind);
  if (kind != ConstantKind::S_1) {
    os << "(p=" << p;
    if (kind == ConstantKind::S_pq) os << ", q=" << q;
    os << ")";
  }
  return os.str();
}

}  // namespace

void SobolevRegistry::add(const ConstantEstimate& e) {
  if (!(e.value > 0.0))
    throw Error("registry entry must have a positive value: " +
                key_string(e.kind, e.p, e.q));
  // Consistency: a numeric lower estimate must not exceed an analytic upper
  // bound for the same constant (and vice versa).
  for (const auto& other : entries_) {
    if (!key_match(other, e.kind, e.p, e.q)) continue;
    const ConstantEstimate* lower = nullptr;
    const ConstantEstimate* upper = nullptr;
    if (e.provenance == Provenance::numeric_lower &&
        other.provenance == Provenance::analytic_upper) {
      lower = &e;
      upper = &other;
    } else if (e.provenance == Provenance::analytic_upper &&
               other.provenance == Provenance::numeric_lower) {
      lower = &other;
      upper = &e;
    }
    if (lower && upper && lower->value > upper->value * (1.0 + 1e-9)) {
      std::ostringstream os;
      os << "registry inconsistency for " << key_string(e.kind, e.p, e.q)
         << ": numeric-lower " << lower->value << " exceeds analytic-upper "
         << upper->value;
      throw Error(os.str());
    }
  }
  for (auto& other : entries_) {
    if (key_match(other, e.kind, e.p, e.q) &&
        other.provenance == e.provenance) {
      other = e;
      return;
    }
  }
  entries_.push_back(e);
}

bool SobolevRegistry::has(ConstantKind kind, double p, double q) const {
  for (const auto& e : entries_)
    if (key_match(e, kind, p, q)) return true;
  return false;
}

ConstantEstimate SobolevRegistry::lookup(ConstantKind kind, double p,
                                         double q) const {
  const ConstantEstimate* best = nullptr;
  auto rank = [](Provenance pr) {
    switch (pr) {
      case Provenance::user_supplied: return 0;
      case Provenance::analytic_upper: return 1;
      case Provenance::numeric_lower: return 2;
    }
    return 3;
  };
  for (const auto& e : entries_) {
    if (!key_match(e, kind, p, q)) continue;
    if (!best || rank(e.provenance) < rank(best->provenance)) best = &e;
  }
  if (!best)
    throw MissingConstantError("missing Sobolev constant " +
                               key_string(kind, p, q) + " for domain " +
                               fingerprint_);
  return *best;
}

UpperConstant SobolevRegistry::upper(ConstantKind kind, double p,
                                     double q) const {
  const ConstantEstimate e = lookup(kind, p, q);
  UpperConstant u;
  u.provenance = e.provenance;
  if (e.provenance == Provenance::numeric_lower) {
    u.value = 2.0 * e.value;  // safety factor; result is conditional
    u.conditional = true;
  } else {
    u.value = e.value;
    u.conditional = false;
  }
  return u;
}

void SobolevRegistry::save(std::ostream& os) const {
  os << "# parabound sobolev registry\n";
  os << "fingerprint " << fingerprint_ << "\n";
  os << "# kind p q value provenance converged\n";
  os.precision(17);
  for (const auto& e : entries_) {
    os << kind_name(e.kind) << ' ' << e.p << ' ' << e.q << ' ' << e.value
       << ' ' << provenance_name(e.provenance) << ' '
       << (e.converged ? 1 : 0) << "\n";
  }
}

SobolevRegistry SobolevRegistry::load(std::istream& is) {
  SobolevRegistry reg;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first == "fingerprint") {
      std::string fp;
      ls >> fp;
      reg.fingerprint_ = fp;
      continue;
    }
    ConstantEstimate e;
    e.kind = kind_from_name(first);
    std::string prov;
    int conv = 1;
    ls >> e.p >> e.q >> e.value >> prov >> conv;
    if (!ls && ls.eof() && prov.empty())
      throw ConfigError("malformed registry line: " + line);
    e.provenance = provenance_from_name(prov);
    e.converged = conv != 0;
    reg.add(e);
  }
  return reg;
}

double talenti_constant(int n, double p) {
  if (!(p >= 1.0) || !(p < n))
    throw RegimeError("talenti_constant requires 1 <= p < n");
  const double nn = n;
  if (std::abs(p - 1.0) < 1e-12) {
    // Limit p -> 1: the isoperimetric constant.
    return std::pow(std::tgamma(1.0 + nn / 2.0), 1.0 / nn) /
           (nn * std::sqrt(M_PI));
  }
  const double f1 = 1.0 / std::sqrt(M_PI);
  const double f2 = std::pow(nn, -1.0 / p);
  const double f3 = std::pow((p - 1.0) / (nn - p), 1.0 - 1.0 / p);
  const double g = std::tgamma(1.0 + nn / 2.0) * std::tgamma(nn) /
                   (std::tgamma(nn / p) * std::tgamma(1.0 + nn - nn / p));
  return f1 * f2 * f3 * std::pow(g, 1.0 / nn);
}

std::optional<double> unit_box_sp_upper(int n, double p) {
  if (!(p >= 1.0) || !(p < n)) return std::nullopt;
  if (n == 2 && std::abs(p - 1.0) < 1e-12) {
    // Sectioning argument on the unit square gives ||v||_2 <= ||v||_{W^{1,1}}.
    return 1.0;
  }
  // Even reflection onto the 3^n tiling, product cutoff with |grad phi| <=
  // sqrt(n), then the sharp whole-space inequality.
  const double copies = std::pow(3.0, double(n));
  return std::sqrt(double(n)) * std::pow(copies, 1.0 / p) *
         talenti_constant(n, p);
}

std::optional<double> unit_square_kp_upper(double p) {
  const int n = 2;
  if (!(p >= 1.0) || !(p < n)) return std::nullopt;
  const auto sp = unit_box_sp_upper(n, p);
  if (!sp) return std::nullopt;
  const double pst = p * (n - 1.0) / (n - p);  // trace exponent p_*
  // Per edge: ||v||^a_{a,edge} <= ||v||^a_{a,Omega} + a int |v|^{a-1}|grad v|
  // with a = p_*, then Hoelder toward ||v||_{p*} and the S_p bound.
  const double val =
      4.0 * (std::pow(*sp, pst) + pst * std::pow(*sp, pst - 1.0));
  return std::pow(val, 1.0 / pst);
}

int add_analytic_uppers(SobolevRegistry& reg, const DomainSpec& domain,
                        const std::vector<ConstantEstimate>& requests) {
  const bool unit_box =
      std::all_of(domain.extents.begin(), domain.extents.end(),
                  [](double L) { return L == 1.0; });
  if (!unit_box) return 0;
  const int n = domain.dimension;
  int added = 0;
  for (const auto& req : requests) {
    std::optional<double> value;
    switch (req.kind) {
      case ConstantKind::S_1:
        value = unit_box_sp_upper(n, 1.0);
        break;
      case ConstantKind::S_p:
        value = unit_box_sp_upper(n, req.p);
        break;
      case ConstantKind::S_pq:
        // The V_{p,q} source norm dominates the W^{1,p} norm, so the S_p
        // upper bound is also an upper bound here.
        value = unit_box_sp_upper(n, req.p);
        break;
      case ConstantKind::K_p:
        if (n == 2) value = unit_square_kp_upper(req.p);
        break;
      case ConstantKind::C_inf:
        break;  // no analytic bound shipped
    }
    if (value) {
      ConstantEstimate e;
      e.kind = req.kind;
      e.p = req.kind == ConstantKind::S_1 ? 1.0 : req.p;
      e.q = req.q;
      e.value = *value;
      e.provenance = Provenance::analytic_upper;
      reg.add(e);
      ++added;
    }
  }
  return added;
}

// ---------------------------------------------------------------------------
// Rayleigh quotient estimator.

namespace {

struct P1Norm {
  double value = 0.0;
  std::vector<double> grad;  // d value / d v_i
};

// || v_h ||_{p,Omega} and its coefficient gradient.
P1Norm lp_norm_omega(const Mesh& mesh, const std::vector<double>& v, double p,
                     int degree) {
  P1Norm out;
  out.grad.assign(v.size(), 0.0);
  KahanSum acc;
  const int ss = mesh.simplex_size();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const int* cv = mesh.cell(c);
    // Barycentric interpolation at the reference points of the rule.
    for (const QPoint& qp : cell_rule(mesh, c, degree)) {
      // Recover barycentric weights by solving the small affine system is
      // overkill; evaluate P1 via the rule's construction instead:
      // cell_rule returns physical points, so evaluate with barycentric
      // coordinates computed from the simplex.
      double lambda[4];
      // For triangles: areas ratio; for tets: volume ratio.
      if (mesh.dimension == 2) {
        const Point& A = mesh.vertices[cv[0]];
        const Point& B = mesh.vertices[cv[1]];
        const Point& C = mesh.vertices[cv[2]];
        const double det = (B[0] - A[0]) * (C[1] - A[1]) -
                           (C[0] - A[0]) * (B[1] - A[1]);
        lambda[1] = ((qp.x[0] - A[0]) * (C[1] - A[1]) -
                     (C[0] - A[0]) * (qp.x[1] - A[1])) /
                    det;
        lambda[2] = ((B[0] - A[0]) * (qp.x[1] - A[1]) -
                     (qp.x[0] - A[0]) * (B[1] - A[1])) /
                    det;
        lambda[0] = 1.0 - lambda[1] - lambda[2];
        lambda[3] = 0.0;
      } else {
        throw Error("rayleigh estimator supports 2-D meshes");
      }
      double u = 0.0;
      for (int k = 0; k < ss; ++k) u += lambda[k] * v[cv[k]];
      const double au = std::abs(u);
      acc.add(qp.w * std::pow(au, p));
      if (au > 0.0) {
        const double dint = p * std::pow(au, p - 1.0) * (u > 0 ? 1.0 : -1.0);
        for (int k = 0; k < ss; ++k)
          out.grad[cv[k]] += qp.w * dint * lambda[k];
      }
    }
  }
  const double ip = acc.value();
  out.value = std::pow(ip, 1.0 / p);
  const double f = ip > 0 ? out.value / (p * ip) : 0.0;
  for (double& g : out.grad) g *= f;
  return out;
}

// || v_h ||_{p,Gamma} and gradient.
P1Norm lp_norm_gamma(const Mesh& mesh, const std::vector<double>& v, double p,
                     int degree) {
  P1Norm out;
  out.grad.assign(v.size(), 0.0);
  KahanSum acc;
  for (const Facet& f : mesh.boundary_facets) {
    if (f.tag != FacetTag::gamma) continue;
    const Point& A = mesh.vertices[f.v[0]];
    const double len = mesh.facet_measure(f);
    for (const QPoint& qp : facet_rule(mesh, f, degree)) {
      const double dx = qp.x[0] - A[0], dy = qp.x[1] - A[1];
      const double s = std::sqrt(dx * dx + dy * dy) / len;
      const double u = (1.0 - s) * v[f.v[0]] + s * v[f.v[1]];
      const double au = std::abs(u);
      acc.add(qp.w * std::pow(au, p));
      if (au > 0.0) {
        const double dint = p * std::pow(au, p - 1.0) * (u > 0 ? 1.0 : -1.0);
        out.grad[f.v[0]] += qp.w * dint * (1.0 - s);
        out.grad[f.v[1]] += qp.w * dint * s;
      }
    }
  }
  const double ip = acc.value();
  out.value = std::pow(ip, 1.0 / p);
  const double fgrad = ip > 0 ? out.value / (p * ip) : 0.0;
  for (double& g : out.grad) g *= fgrad;
  return out;
}

// || grad v_h ||_{p,Omega} (piecewise-constant gradient, exact per cell).
P1Norm lp_norm_grad(const Mesh& mesh, const std::vector<double>& v, double p) {
  P1Norm out;
  out.grad.assign(v.size(), 0.0);
  KahanSum acc;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const int* cv = mesh.cell(c);
    const Point& A = mesh.vertices[cv[0]];
    const Point& B = mesh.vertices[cv[1]];
    const Point& C = mesh.vertices[cv[2]];
    const double det =
        (B[0] - A[0]) * (C[1] - A[1]) - (C[0] - A[0]) * (B[1] - A[1]);
    const double meas = 0.5 * std::abs(det);
    // grad phi_k, constant on the cell.
    const double gx[3] = {(B[1] - C[1]) / det, (C[1] - A[1]) / det,
                          (A[1] - B[1]) / det};
    const double gy[3] = {(C[0] - B[0]) / det, (A[0] - C[0]) / det,
                          (B[0] - A[0]) / det};
    double ux = 0, uy = 0;
    for (int k = 0; k < 3; ++k) {
      ux += gx[k] * v[cv[k]];
      uy += gy[k] * v[cv[k]];
    }
    const double mag = std::hypot(ux, uy);
    acc.add(meas * std::pow(mag, p));
    if (mag > 0.0) {
      const double dint = p * std::pow(mag, p - 2.0);
      for (int k = 0; k < 3; ++k)
        out.grad[cv[k]] += meas * dint * (ux * gx[k] + uy * gy[k]);
    }
  }
  const double ip = acc.value();
  out.value = std::pow(ip, 1.0 / p);
  const double f = ip > 0 ? out.value / (p * ip) : 0.0;
  for (double& g : out.grad) g *= f;
  return out;
}

P1Norm sup_norm(const Mesh&, const std::vector<double>& v) {
  P1Norm out;
  out.grad.assign(v.size(), 0.0);
  int arg = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[arg])) arg = static_cast<int>(i);
  out.value = std::abs(v[arg]);
  out.grad[arg] = v[arg] >= 0 ? 1.0 : -1.0;
  return out;
}

struct KindExponents {
  double target_exp;      // L^t(Omega) or L^t(Gamma)
  bool target_on_gamma;
  bool target_sup;
  double source_p;        // W^{1,p} part
  double source_q;        // boundary term exponent (S_pq only), 0 = none
};

KindExponents kind_exponents(const Mesh& mesh, ConstantKind kind, double p,
                             double q, double borderline_target) {
  const int n = mesh.dimension;
  (void)q;
  KindExponents ke{0.0, false, false, p, 0.0};
  switch (kind) {
    case ConstantKind::S_1:
      ke.source_p = 1.0;
      ke.target_exp = double(n) / (n - 1.0);
      break;
    case ConstantKind::S_p:
      if (!(p < n)) throw RegimeError("S_p estimation requires p < n");
      ke.target_exp = n * p / (n - p);
      break;
    case ConstantKind::S_pq:
      ke.source_q = q;
      if (p < n)
        ke.target_exp = n * p / (n - p);
      else
        ke.target_exp = borderline_target;
      break;
    case ConstantKind::K_p:
      if (!(p < n)) throw RegimeError("K_p estimation requires p < n");
      ke.target_on_gamma = true;
      ke.target_exp = p * (n - 1.0) / (n - p);
      break;
    case ConstantKind::C_inf:
      if (!(p > n)) throw RegimeError("C_inf estimation requires p > n");
      ke.target_sup = true;
      break;
  }
  return ke;
}

}  // namespace

QuotientNorms quotient_norms(const Mesh& mesh, const std::vector<double>& v,
                             ConstantKind kind, double p, double q,
                             int quad_degree, double borderline_target) {
  const KindExponents ke =
      kind_exponents(mesh, kind, p, q, borderline_target);
  QuotientNorms qn;
  const P1Norm gradn = lp_norm_grad(mesh, v, ke.source_p);
  const P1Norm valn = lp_norm_omega(mesh, v, ke.source_p, quad_degree);
  qn.source = gradn.value + valn.value;
  if (ke.source_q > 0.0)
    qn.source += lp_norm_gamma(mesh, v, ke.source_q, quad_degree).value;
  if (ke.target_sup)
    qn.target = sup_norm(mesh, v).value;
  else if (ke.target_on_gamma)
    qn.target = lp_norm_gamma(mesh, v, ke.target_exp, quad_degree).value;
  else
    qn.target = lp_norm_omega(mesh, v, ke.target_exp, quad_degree).value;
  return qn;
}

ConstantEstimate estimate_rayleigh(const Mesh& mesh, ConstantKind kind,
                                   double p, double q,
                                   const RayleighOptions& opts,
                                   std::vector<double>* maximizer) {
  if (mesh.dimension != 2)
    throw RegimeError("rayleigh estimator supports 2-D meshes only");
  const KindExponents ke =
      kind_exponents(mesh, kind, p, q, opts.borderline_target);
  const int nv = mesh.num_vertices();

  auto evaluate = [&](const std::vector<double>& v, P1Norm* tgrad,
                      P1Norm* sgrad) -> double {
    // target and source norms with gradients.
    P1Norm tnorm;
    if (ke.target_sup)
      tnorm = sup_norm(mesh, v);
    else if (ke.target_on_gamma)
      tnorm = lp_norm_gamma(mesh, v, ke.target_exp, opts.quad_degree);
    else
      tnorm = lp_norm_omega(mesh, v, ke.target_exp, opts.quad_degree);
    P1Norm gradn = lp_norm_grad(mesh, v, ke.source_p);
    P1Norm valn = lp_norm_omega(mesh, v, ke.source_p, opts.quad_degree);
    P1Norm snorm;
    snorm.value = gradn.value + valn.value;
    snorm.grad.assign(nv, 0.0);
    for (int i = 0; i < nv; ++i)
      snorm.grad[i] = gradn.grad[i] + valn.grad[i];
    if (ke.source_q > 0.0) {
      P1Norm bn = lp_norm_gamma(mesh, v, ke.source_q, opts.quad_degree);
      snorm.value += bn.value;
      for (int i = 0; i < nv; ++i) snorm.grad[i] += bn.grad[i];
    }
    if (tgrad) *tgrad = tnorm;
    if (sgrad) *sgrad = snorm;
    return snorm.value > 0 ? tnorm.value / snorm.value : 0.0;
  };

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  double best = 0.0;
  std::vector<double> best_v;
  bool converged = true;

  std::vector<std::vector<double>> starts;
  starts.emplace_back(nv, 1.0);  // the constant function
  if (opts.warm_start && static_cast<int>(opts.warm_start->size()) == nv)
    starts.push_back(*opts.warm_start);
  // A corner-concentrated bump probes trace and low-p behaviour.
  {
    std::vector<double> bump(nv, 0.0);
    for (int i = 0; i < nv; ++i) {
      const Point& x = mesh.vertices[i];
      bump[i] = std::exp(-8.0 * (x[0] * x[0] + x[1] * x[1]));
    }
    starts.push_back(std::move(bump));
  }
  while (static_cast<int>(starts.size()) < opts.starts + 2) {
    std::vector<double> v(nv);
    for (double& x : v) x = gauss(rng);
    starts.push_back(std::move(v));
  }

  for (auto& v : starts) {
    P1Norm tn, sn;
    double R = evaluate(v, &tn, &sn);
    if (sn.value <= 0) continue;
    // Normalize the source norm once; re-normalize as we go.
    for (double& x : v) x /= sn.value;
    R = evaluate(v, &tn, &sn);
    double step = opts.step0;
    int stall = 0;
    for (int it = 0; it < opts.iterations; ++it) {
      // Ascent direction of the quotient R = T/S at S = 1.
      std::vector<double> dir(nv);
      double gnorm = 0.0;
      for (int i = 0; i < nv; ++i) {
        dir[i] = tn.grad[i] - R * sn.grad[i];
        gnorm += dir[i] * dir[i];
      }
      gnorm = std::sqrt(gnorm);
      if (gnorm < 1e-14) break;
      std::vector<double> trial(nv);
      double Rt = 0.0;
      bool improved = false;
      while (step > 1e-10) {
        for (int i = 0; i < nv; ++i)
          trial[i] = v[i] + step * dir[i] / gnorm;
        P1Norm ttn, tsn;
        Rt = evaluate(trial, &ttn, &tsn);
        if (Rt > R * (1.0 + 1e-14)) {
          v = trial;
          for (double& x : v) x /= tsn.value;
          R = evaluate(v, &tn, &sn);
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved) {
        ++stall;
        if (stall > 3) break;
      } else {
        stall = 0;
      }
      if (it == opts.iterations - 1 && improved) converged = false;
    }
    if (R > best) {
      best = R;
      best_v = v;
    }
  }

  if (maximizer) *maximizer = best_v;
  ConstantEstimate e;
  e.kind = kind;
  e.p = kind == ConstantKind::S_1 ? 1.0 : p;
  e.q = kind == ConstantKind::S_pq ? q : 0.0;
  e.value = best;
  e.provenance = Provenance::numeric_lower;
  e.converged = converged;
  return e;
}

double maggi_bound(double Sp, double S1, double p, int n, double grad_norm,
                   double trace_norm) {
  if (!(p < n)) throw RegimeError("maggi_bound requires p < n");
  if (grad_norm < 0 || trace_norm < 0)
    throw Error("maggi_bound needs nonnegative norms");
  const double pst = p * (n - 1.0) / (n - p);
  return Sp * grad_norm + std::pow(S1, 1.0 / pst) * trace_norm;
}

}  // namespace parabound
