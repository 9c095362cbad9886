#include "parabound/bounds.hpp"

#include <cmath>
#include <sstream>

#include "parabound/error.hpp"
#include "parabound/util.hpp"

namespace parabound {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw RegimeError(what);
}

// Drift-regime gate shared by the L2-theory formulas.
void require_l2_drift(const ProblemSpec& spec, double theta) {
  const int n = spec.dim();
  const double q = spec.drift.q, r = spec.drift.r;
  require(q > 2.0 && r > 1.0, "drift exponents require q > 2, r > 1");
  if (n > 2)
    require(2.0 / r + n / q <= 1.0 + 1e-12,
            "L2 drift regime requires 2/r + n/q <= 1");
  else
    require(2.0 / r + 2.0 / q < 1.0,
            "L2 drift regime requires 2/r + 2/q < 1 in two dimensions");
  require(1.0 - n / q - theta > 0.0,
          "exponent singularity: q <= n + theta q");
}

void require_l1_regime(const ProblemSpec& spec) {
  const int n = spec.dim();
  const double q = spec.drift.q, r = spec.drift.r;
  const double rq = r * (1.0 - n / q);
  require(rq > 1.0 && rq < 2.0, "L1 drift regime requires 1 < r(1 - n/q) < 2");
  const double p = p_of(spec);
  const double rel = n / q + (p * (n + 1.0) - n) / r;
  require(std::abs(rel - 1.0) <= 1e-9,
          "exponent relation n/q + (p(n+1)-n)/r = 1 violated");
  require(p > 1.0 && p < (n + 2.0) / (n + 1.0),
          "L1 theory requires 1 < p < (n+2)/(n+1)");
}

}  // namespace

double q_sobolev_subscript(double q, double theta) {
  return (2.0 + theta * q) / (1.0 + theta * q);
}

QResult compute_Q(const ProblemSpec& spec, const SobolevRegistry& registry,
                  const Mesh& mesh) {
  const int n = spec.dim();
  const double q = spec.drift.q;
  const double theta = theta_of(spec.drift, n);
  require_l2_drift(spec, theta);

  const DomainMeasures dm = measures(mesh, spec.T());
  const double vol = dm.vol_omega;
  const double a = spec.diffusion.a_lower;

  QResult out;
  if (spec.drift.is_zero) {
    // Both terms carry a factor of the drift norm.
    out.main_form = out.derivation_form = out.value = 0.0;
    return out;
  }

  const double norm_q2 = drift_mixed_norm(spec, mesh, q, 2.0);
  const double rho = 2.0 / (1.0 - n / q - theta);
  const double integral = drift_time_integral(spec, mesh, q, rho);

  // Display as stated in the main estimate.
  {
    const double sub = q_sobolev_subscript(q, theta);
    const UpperConstant S = registry.upper(ConstantKind::S_p, sub);
    out.conditional = out.conditional || S.conditional;
    const long double term1 = (2.0L / a) *
                              std::pow((long double)S.value,
                                       (long double)(2.0 * (n + theta * q) / q)) *
                              std::pow((long double)vol, (long double)theta) *
                              (long double)(norm_q2 * norm_q2);
    const long double inner =
        std::pow((long double)(4.0 / a), (long double)(q + n + theta * q)) *
        std::pow((long double)S.value, (long double)(2.0 * (n + theta * q))) *
        std::pow((long double)vol, (long double)(q * theta));
    const long double term2 =
        std::pow(inner, 1.0L / (long double)(q - n - theta * q)) *
        (long double)integral;
    out.main_form = (double)(term1 + term2);
  }

  // Display as derived in the estimate chain (algebraically the same
  // grouping up to the measure power; evaluated independently on purpose).
  {
    const double sub =
        2.0 * n * (n + theta * q) / (n * n + (n + 2.0) * theta * q);
    const UpperConstant S = registry.upper(ConstantKind::S_p, sub);
    out.conditional = out.conditional || S.conditional;
    const double lam = n / q + theta;
    const long double term1 =
        (2.0L / a) * std::pow((long double)S.value, (long double)(2.0 * lam)) *
        std::pow((long double)vol, (long double)(2.0 * theta / n)) *
        (long double)(norm_q2 * norm_q2);
    const long double inner =
        std::pow((long double)(4.0 / a), (long double)(1.0 + lam)) *
        std::pow((long double)S.value, (long double)(2.0 * lam)) *
        std::pow((long double)vol, (long double)(2.0 * theta / n));
    const long double term2 =
        std::pow(inner, (long double)(q / (q - n - theta * q))) *
        (long double)integral;
    out.derivation_form = (double)(term1 + term2);
  }

  out.value = std::max(out.main_form, out.derivation_form);
  out.overflow = !std::isfinite(out.value);
  return out;
}

EnergyBound energy_bound(const ProblemSpec& spec, const SobolevRegistry&,
                       const Mesh& mesh, double Q) {
  const double bsharp = spec.law.b_lower;
  if (!(bsharp > 0.0))
    throw RegimeError("the b_lower > 0 energy bound does not apply; use the "
                      "b_lower = 0 variant");
  if (!spec.data.f.is_zero)
    throw RegimeError("the drift-energy bound is stated for f = 0");
  const double ell = spec.law.ell;
  const double ellp = spec.law.conjugate_ell();

  EnergyBound out;
  KahanSum b0;
  const double u0n = spec.data.u0.is_zero
                         ? 0.0
                         : data_norm_omega(spec.data.u0.fn, mesh, 2.0);
  b0.add(u0n * u0n);
  if (!spec.data.h.is_zero) {
    const double hn =
        data_norm_SigmaT(spec.data.h.fn, mesh, spec.T(), ellp, ellp);
    b0.add(2.0 / (ellp * std::pow(bsharp, 1.0 / (ell - 1.0))) *
           std::pow(hn, ellp));
  }
  out.B0 = b0.value();
  const double eQ = exp_guarded(Q);
  out.rhs_linf_sq = out.B0 * eQ;
  out.rhs_energy = out.B0 * (Q * eQ + 1.0);
  out.overflow = !std::isfinite(eQ);
  return out;
}

double compute_Z(const ProblemSpec& spec, const Mesh& mesh) {
  KahanSum z;
  if (!spec.data.u0.is_zero)
    z.add(data_norm_omega(spec.data.u0.fn, mesh, 1.0));
  if (!spec.data.f.is_zero)
    z.add(data_norm_QT(spec.data.f.fn, mesh, spec.T(), 1.0, 1.0));
  if (!spec.data.h.is_zero)
    z.add(data_norm_SigmaT(spec.data.h.fn, mesh, spec.T(), 1.0, 1.0));
  return z.value();
}

Z12 compute_Z1_Z2(const ProblemSpec& spec, const SobolevRegistry& registry,
                  const DomainMeasures& dm) {
  const int n = spec.dim();
  const double p = p_of(spec);
  require(p > 1.0 && p < (n + 2.0) / (n + 1.0),
          "Z constants require 1 < p < (n+2)/(n+1)");
  const UpperConstant Sp = registry.upper(ConstantKind::S_p, p);
  const UpperConstant S1 = registry.upper(ConstantKind::S_1);
  Z12 out;
  out.Z1 = Sp.value * (1.0 + std::pow(dm.vol_omega, 1.0 / n) * S1.value);
  out.Z2 = Sp.value * S1.value * std::pow(spec.T(), 1.0 / p) *
           std::pow(dm.vol_omega, 1.0 / p + 1.0 / n - 1.0);
  out.conditional = Sp.conditional || S1.conditional;
  return out;
}

L1GradientBound l1_gradient_bound(const ProblemSpec& spec, const SobolevRegistry&,
                       const Mesh& mesh, double Z, double Z1, double Z2) {
  const int n = spec.dim();
  if (!(spec.law.b_lower > 0.0))
    throw RegimeError("the b_lower > 0 gradient bound does not apply; use the "
                      "b_lower = 0 variant");
  require_l1_regime(spec);
  const double p = p_of(spec);
  const double r = spec.drift.r;
  require(r * (2.0 - p) < 2.0 * n * p,
          "side condition r(2-p) < 2np violated");

  const double T = spec.T();
  const DomainMeasures dm = measures(mesh, T);
  const double a = spec.diffusion.a_lower;
  const double TO = T * dm.vol_omega;
  const double Enorm = drift_norm(spec, mesh);

  const double denom = a * (n + 2.0 - p * (n + 1.0)) * (n - 1.0);
  const double bracket = pow0(Z1, 2.0 - p) * pow0(Z, (2.0 - p) / n) + 1.0;

  KahanSum B;
  B.add(r * (TO + pow0(Z2, p) * pow0(Z, p * (n + 1.0) / n)));
  B.add(r * n * n / denom * bracket * (TO + 2.0 * Z));
  B.add(r / (2.0 * a * a) * Enorm * Enorm * pow0(Z2, p * (r - 2.0) / r) *
        (pow0(Z1, 2.0 - p) * pow0(Z, p) + pow0(Z, (p * (n + 1.0) - 2.0) / n)));
  B.add(std::pow(2.0, (r - 2.0) / 2.0) / std::pow(a, r) * std::pow(Enorm, r) *
        (pow0(Z1, r - p) * pow0(Z, p) +
         pow0(Z1, p * (r - 2.0) / 2.0) *
             pow0(Z, p - r * (2.0 - p) / (2.0 * n))));

  L1GradientBound out;
  out.B = B.value();
  out.rhs_gradient_p =
      out.B + r * n * n * bracket / denom * (spec.law.b_upper /
                                             spec.law.b_lower) * Z;
  out.rhs_l1 = Z;
  return out;
}

EnergyBoundB0 energy_bound_b0(const ProblemSpec& spec, const SobolevRegistry& registry,
                       const Mesh& mesh, double Q) {
  const int n = spec.dim();
  if (spec.law.b_lower > 0.0)
    throw RegimeError("the b_lower = 0 energy bound is stated for b_lower = 0");
  require(spec.law.ell >= 2.0 && spec.law.ell <= 3.0,
          "b_lower = 0 energy bound requires 2 <= ell <= 3");
  const double two_star =
      n > 2 ? 2.0 * (n - 1.0) / (n - 2.0) : spec.two_star;
  require(two_star > 2.0, "the auxiliary exponent must exceed 2");
  const double s = n > 2 ? 2.0 : 2.0 * two_star / (two_star + 1.0);

  EnergyBoundB0 out;
  out.s = s;
  const DomainMeasures dm = measures(mesh, spec.T());

  const double u0n = spec.data.u0.is_zero
                         ? 0.0
                         : data_norm_omega(spec.data.u0.fn, mesh, 2.0);
  double hterm = 0.0;
  if (!spec.data.h.is_zero) {
    const UpperConstant Ks = registry.upper(ConstantKind::K_p, s);
    out.conditional = Ks.conditional;
    const double conj = two_star / (two_star - 1.0);
    const double hn =
        data_norm_SigmaT(spec.data.h.fn, mesh, spec.T(), conj, 2.0);
    hterm = (2.0 / spec.diffusion.a_lower + 1.0) * Ks.value * Ks.value *
            std::pow(dm.vol_omega, 2.0 / s - 1.0) * hn * hn;
  }
  const double A2 = u0n * u0n + hterm;
  out.A = std::sqrt(A2);
  const double e = exp_guarded(Q + spec.T());
  out.rhs_linf = out.A * std::sqrt(e);
  out.rhs_grad_sq =
      2.0 * A2 * ((Q + spec.T()) * e + 1.0) / spec.diffusion.a_lower;
  out.overflow = !std::isfinite(e);
  return out;
}

L1GradientBoundB0 l1_gradient_bound_b0(const ProblemSpec& spec, const SobolevRegistry& registry,
                       const Mesh& mesh, double Z, double B) {
  const int n = spec.dim();
  if (spec.law.b_lower > 0.0)
    throw RegimeError(
        "the b_lower = 0 gradient bound is stated for b_lower = 0");
  require_l1_regime(spec);
  const double p = p_of(spec);
  const double ell = spec.law.ell;
  require(ell >= 2.0 && ell <= p + 1.0 + 1e-12,
          "b_lower = 0 gradient bound requires 2 <= ell <= p + 1");
  require(p * (n - 1.0) < n, "trace exponents require p(n-1) < n");

  const double T = spec.T();
  const DomainMeasures dm = measures(mesh, T);
  const double a = spec.diffusion.a_lower;
  const double r = spec.drift.r;
  const double pst = p * (n - 1.0) / (n - p);

  L1GradientBoundB0 out;
  const UpperConstant Kp = registry.upper(ConstantKind::K_p, p);
  const UpperConstant S1 = registry.upper(ConstantKind::S_1);
  out.conditional = Kp.conditional || S1.conditional;

  const Z12 z12 = compute_Z1_Z2(spec, registry, dm);
  out.conditional = out.conditional || z12.conditional;
  const double denom = a * (n + 2.0 - p * (n + 1.0)) * (n - 1.0);
  const double zfac = pow0(z12.Z1, 2.0 - p) * pow0(Z, (2.0 - p) / n) + 1.0;

  out.beta = spec.law.b_upper * std::pow(T, 1.0 - (ell - 1.0) / p) *
             pow0(dm.area_gamma, 1.0 - (ell - 1.0) / pst) *
             std::pow(Kp.value, ell - 1.0) * r * n * n * zfac / denom;

  const bool ell_top = std::abs(ell - (p + 1.0)) <= 1e-12;
  if (ell_top) {
    const double small = std::pow(2.0, 1.0 - 2.0 * p);
    if (!(out.beta < small)) {
      out.applicable = false;
      std::ostringstream os;
      os << "smallness condition fails: beta = " << out.beta
         << " >= 2^(1-2p) = " << small;
      out.reason = os.str();
      return out;
    }
    out.alpha_ell = 0.0;
    out.beta_ell = 1.0 / (1.0 - std::pow(2.0, 2.0 * p - 1.0) * out.beta);
  } else {
    out.alpha_ell =
        pow0(std::pow(2.0, 2.0 * ell - 3.0) * out.beta, p / (p - ell + 1.0));
    out.beta_ell = p / (p - ell + 1.0);
  }

  const double ex1 = n * (p - 1.0) / (n - p * (n - 1.0));
  const double ex2 = n * sqr(p - 1.0) / ((n - p * (n - 1.0)) * p);
  const double ex3 = n * (p - 1.0) / p;
  const double sfac = pow0(S1.value, ex1) * pow0(dm.vol_omega, ex2) +
                      pow0(S1.value, ex3);
  out.rhs_gradient_p =
      out.alpha_ell +
      out.beta_ell *
          (B + std::pow(2.0, ell - 2.0) * out.beta *
                   pow0(sfac * T * Z, ell - 1.0));
  out.applicable = true;
  return out;
}

double interpolation_bound(double norm_q_q1, double norm_r_r1, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw Error("interpolation parameter must lie in [0, 1]");
  if (norm_q_q1 < 0.0 || norm_r_r1 < 0.0)
    throw Error("interpolation needs nonnegative norms");
  return pow0(norm_q_q1, lambda) * pow0(norm_r_r1, 1.0 - lambda);
}

SigmaEmbedding sigma_embedding(const ProblemSpec& spec,
                               const SobolevRegistry& registry,
                               const DomainMeasures& dm, double sigma, double q,
                               double r) {
  require(q > 2.0 && r > 2.0, "sigma embedding requires q, r > 2");
  const int n = spec.dim();
  SigmaEmbedding out;

  const double cap = 1.0 + 2.0 * (1.0 - n / q - 2.0 / r) / n;
  bool adm = sigma > 1.0 - 2.0 / q && sigma <= cap + 1e-12;
  if (n > 2) adm = adm && sigma <= n * (q - 2.0) / (q * (n - 2.0)) + 1e-12;
  if (n == 2) adm = adm && sigma > 2.0 / q - 2.0 / r;
  out.admissible = adm;

  if (n > 2) {
    out.nu = (1.0 - n / q - 2.0 / r) / sigma + n * (1.0 / sigma - 1.0) / 2.0;
    const UpperConstant S = registry.upper(ConstantKind::S_pq, 2.0, 2.0);
    out.Cn = 2.0 * S.value * S.value;
    out.conditional = S.conditional;
    out.s = 0.0;
    return out;
  }

  out.nu = (1.0 - 1.0 / q - 1.0 / r) / sigma - 0.5;
  const double c = 0.5 - (0.5 - 1.0 / q) / sigma;
  if (out.nu > 1e-12) {
    out.s = 2.0 + 4.0 * c / out.nu;
    const double sub = 2.0 * out.s / (out.s + 2.0);
    const UpperConstant S = registry.upper(ConstantKind::S_pq, sub, sub);
    out.Cn = 2.0 * S.value * S.value *
             (std::pow(dm.vol_omega, 1.0 / out.s) +
              std::pow(dm.area_gamma, 1.0 / out.s));
    out.conditional = S.conditional;
  } else {
    // Degenerate upper end of the admissible range: s tends to infinity and
    // the auxiliary subscript tends to the borderline exponent 2.
    out.s = std::numeric_limits<double>::infinity();
    const UpperConstant S = registry.upper(ConstantKind::S_pq, 2.0, 2.0);
    out.Cn = 2.0 * S.value * S.value * 2.0;
    out.conditional = S.conditional;
    out.note = "borderline embedding; limiting constant used";
  }
  return out;
}

MoserParams moser_params(const ProblemSpec& spec,
                         const SobolevRegistry& registry, const Mesh& mesh) {
  const int n = spec.dim();
  const double q = spec.drift.q, r = spec.drift.r;
  require(2.0 / r + n / q < 1.0,
          "sup-norm iteration requires 2/r + n/q < 1");
  require(spec.law.b_lower > 0.0, "sup-norm iteration requires b_lower > 0");

  MoserParams out;
  out.sigma = 1.0 + (2.0 / n) * (1.0 - 2.0 / r - n / q);
  const DomainMeasures dm = measures(mesh, spec.T());
  const SigmaEmbedding at_sigma =
      sigma_embedding(spec, registry, dm, out.sigma, q, r);
  const SigmaEmbedding at_one = sigma_embedding(spec, registry, dm, 1.0, q, r);
  out.nu_sigma = at_sigma.nu;
  out.Cn_sigma = at_sigma.Cn;
  out.nu_one = at_one.nu;
  out.Cn_one = at_one.Cn;
  out.s = at_sigma.s;
  out.conditional = at_sigma.conditional || at_one.conditional;

  const double a = spec.diffusion.a_lower;
  const double b = spec.law.b_lower;
  const double mins = std::min({1.0, a, b});
  const double Tnu = std::pow(spec.T(), out.nu_sigma);
  const double Enorm = drift_norm(spec, mesh);
  const double raw =
      std::sqrt(2.0 * Tnu * std::max(1.0, out.Cn_sigma) / (a * mins)) * Enorm;
  out.clamped = raw < 1.0;
  out.P = std::max(1.0, raw);

  const double sup_u0 = spec.data.u0.is_zero
                            ? 0.0
                            : sampled_sup(spec.data.u0.fn, spec.domain, false);
  const double sup_h = spec.data.h.is_zero
                           ? 0.0
                           : sampled_sup(spec.data.h.fn, spec.domain, true);
  out.P1 = std::sqrt(std::max({1.0, sup_u0, sup_h}));

  out.P2 = std::sqrt(
      Tnu * std::max(1.0, out.Cn_sigma) *
      (dm.vol_omega +
       (b * (spec.law.ell - 2.0) + std::max(1.0, 1.0 / b)) * dm.area_SigmaT) /
      mins);
  out.smallness_ok = out.P2 <= out.P;
  return out;
}

MoserSeriesResult moser_series(const MoserParams& params, double base_norm,
                               double tol, int max_terms) {
  require(params.P >= 1.0, "series requires P >= 1");
  require(params.sigma > 1.0, "series requires sigma > 1 (chi < 1)");
  require(params.P1 >= 0.0, "series requires P1 >= 0");
  if (params.P1 > 0.0)
    require(params.P2 > 0.0 && params.P2 <= params.P,
            "series requires 0 < P2 <= P");
  require(base_norm >= 0.0, "base norm must be nonnegative");

  const double chi = 1.0 / params.sigma;
  const double om = 1.0 - chi;
  MoserSeriesResult out;
  out.leading = std::pow(params.P, 1.0 / om) *
                std::pow(chi, -chi / (om * om)) * base_norm;
  if (params.P1 == 0.0) {
    out.M = out.leading;
    out.converged = true;
    out.terms_used = 0;
    return out;
  }

  KahanSum sum;
  double prev_term = -1.0;
  int high_ratio_streak = 0;
  bool diverged = false;
  int i = 0;
  for (; i < max_terms; ++i) {
    const double chi_i = std::pow(chi, double(i));
    const double chi_i1 = chi_i * chi;
    const double chi_i2 = chi_i1 * chi;
    const double term = std::pow(params.P, chi_i1 / om) *
                        std::pow(chi, (i * chi_i2 - (i + 1) * chi_i1) /
                                          (om * om)) *
                        std::pow(params.P2, chi_i);
    sum.add(term);
    if (prev_term > 0.0) {
      const double ratio = term / prev_term;
      if (ratio > 1.0 - 1e-9)
        ++high_ratio_streak;
      else
        high_ratio_streak = 0;
      if (high_ratio_streak >= 100) {
        diverged = true;
        ++i;
        break;
      }
    }
    if (term <= tol * std::max(sum.value(), 1e-300)) {
      ++i;
      out.converged = true;
      break;
    }
    prev_term = term;
  }
  out.terms_used = i;
  if (diverged || i >= max_terms) out.converged = false;
  out.M = out.leading + params.P1 * sum.value();
  return out;
}

double boundary_max_bound(double M, double P1, double b_lower) {
  if (!(b_lower > 0.0))
    throw RegimeError("boundary sup bound requires b_lower > 0");
  return (M + P1) / b_lower;
}

double vpp1_bound(const ProblemSpec& spec, const SobolevRegistry& registry,
                  const DomainMeasures& dm, double grad_norm_pp1,
                  double linf_l1_norm, double pbar, double qbar) {
  const int n = spec.dim();
  const double p = p_of(spec);
  require(p >= 1.0 && p <= n / (n - 1.0),
          "interpolation estimate requires 1 <= p <= n/(n-1)");
  require(pbar > 1.0 && qbar > 0.0, "pbar > 1 and qbar > 0 required");
  const double factor = 1.0 + 1.0 / n - 1.0 / p;
  const double p1 = qbar * (1.0 - 1.0 / pbar) / factor;
  const double lambda = p1 / qbar;
  require(lambda < 1.0 && p1 >= 1.0,
          "exponent relation violated: need 1 <= p1 < qbar");
  if (grad_norm_pp1 < 0 || linf_l1_norm < 0)
    throw Error("norms must be nonnegative");

  const UpperConstant Sp = registry.upper(ConstantKind::S_p, p);
  const UpperConstant S1 = registry.upper(ConstantKind::S_1);
  const double c1 =
      std::pow(Sp.value * (1.0 + std::pow(dm.vol_omega, 1.0 / n) * S1.value),
               lambda);
  const double c2 = std::pow(Sp.value * S1.value, lambda) *
                    std::pow(spec.T(), 1.0 / qbar) *
                    std::pow(dm.vol_omega, lambda * (1.0 / p + 1.0 / n - 1.0));
  return c1 * pow0(grad_norm_pp1, lambda) * pow0(linf_l1_norm, 1.0 - lambda) +
         c2 * linf_l1_norm;
}

double luell_bound(const ProblemSpec& spec, const SobolevRegistry& registry,
                   const DomainMeasures& dm, double grad_norm_p,
                   double l1p_norm) {
  const int n = spec.dim();
  const double p = p_of(spec);
  const double ell = spec.law.ell;
  require(p * (n - 1.0) < n, "trace bound requires p(n-1) < n");
  require(ell <= p + 1.0 + 1e-12, "trace bound requires ell <= p + 1");
  if (grad_norm_p < 0 || l1p_norm < 0)
    throw Error("norms must be nonnegative");

  const double pst = p * (n - 1.0) / (n - p);
  const UpperConstant Kp = registry.upper(ConstantKind::K_p, p);
  const UpperConstant S1 = registry.upper(ConstantKind::S_1);
  const double ex1 = n * (p - 1.0) / (n - p * (n - 1.0));
  const double ex2 = n * sqr(p - 1.0) / ((n - p * (n - 1.0)) * p);
  const double ex3 = n * (p - 1.0) / p;
  const double coeff = pow0(S1.value, ex1) * pow0(dm.vol_omega, ex2) +
                       pow0(S1.value, ex3);
  return std::pow(spec.T(), 1.0 - (ell - 1.0) / p) *
         pow0(dm.area_gamma, 1.0 - (ell - 1.0) / pst) *
         std::pow(Kp.value, ell - 1.0) *
         pow0(2.0 * grad_norm_p + coeff * l1p_norm, ell - 1.0);
}

}  // namespace parabound
