#ifndef PARABOUND_SOBOLEV_HPP
#define PARABOUND_SOBOLEV_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "parabound/geometry.hpp"

namespace parabound {

/// Embedding constants consumed by the bound formulas. All source norms are
/// sum norms: W^{1,p} carries ||grad v||_p + ||v||_p, the V_{p,q} norm adds
/// ||v||_{q,Gamma}. Targets: S_p and S_pq embed into L^{p*}(Omega) with
/// p* = np/(n-p); K_p embeds into L^{p_*}(Gamma) with p_* = p(n-1)/(n-p);
/// S_1 is S_p at p = 1; C_inf is the Morrey embedding into C(closure).
enum class ConstantKind { S_p, S_pq, K_p, S_1, C_inf };

enum class Provenance { analytic_upper, numeric_lower, user_supplied };

std::string kind_name(ConstantKind k);
std::string provenance_name(Provenance p);
ConstantKind kind_from_name(const std::string& s);
Provenance provenance_from_name(const std::string& s);

struct ConstantEstimate {
  ConstantKind kind = ConstantKind::S_p;
  double p = 0.0;
  double q = 0.0;  // only meaningful for S_pq
  double value = 0.0;
  Provenance provenance = Provenance::user_supplied;
  bool converged = true;
};

/// A value safe to use on the right-hand side of a bound. When only a
/// numeric lower estimate exists, the value is the estimate times a safety
/// factor of 2 and the result is flagged conditional.
struct UpperConstant {
  double value = 0.0;
  Provenance provenance = Provenance::user_supplied;
  bool conditional = false;
};

class SobolevRegistry {
 public:
  SobolevRegistry() = default;
  explicit SobolevRegistry(std::string fingerprint)
      : fingerprint_(std::move(fingerprint)) {}

  const std::string& fingerprint() const { return fingerprint_; }
  const std::vector<ConstantEstimate>& entries() const { return entries_; }

  /// Inserts or replaces the entry with the same (kind, p, q, provenance).
  /// Enforces numeric-lower <= analytic-upper consistency where both exist.
  void add(const ConstantEstimate& e);

  bool has(ConstantKind kind, double p = 0.0, double q = 0.0) const;

  /// Preferred entry: user-supplied, then analytic-upper, then numeric-lower.
  /// Throws MissingConstantError naming the request when nothing matches.
  ConstantEstimate lookup(ConstantKind kind, double p = 0.0,
                          double q = 0.0) const;

  /// Bound-side value with the conditional fallback policy.
  UpperConstant upper(ConstantKind kind, double p = 0.0, double q = 0.0) const;

  void save(std::ostream& os) const;
  static SobolevRegistry load(std::istream& is);

 private:
  std::string fingerprint_;
  std::vector<ConstantEstimate> entries_;
};

/// Sharp constant of the gradient Sobolev inequality on R^n,
/// ||v||_{p*} <= C ||grad v||_p, for 1 <= p < n.
double talenti_constant(int n, double p);

/// Analytic upper bound for S_p on the unit box via reflection + cutoff +
/// the sharp whole-space inequality; for p = 1 on the unit square the direct
/// sectioning bound S_1 <= 1 is returned.
std::optional<double> unit_box_sp_upper(int n, double p);

/// Analytic upper bound for the trace constant K_p on the unit square,
/// built from the S_p upper bound.
std::optional<double> unit_square_kp_upper(double p);

/// Populates analytic-upper entries for the requested constants when the
/// domain is the unit box. Returns how many entries were added.
int add_analytic_uppers(SobolevRegistry& reg, const DomainSpec& domain,
                        const std::vector<ConstantEstimate>& requests);

struct RayleighOptions {
  int iterations = 300;
  int starts = 5;
  std::uint64_t seed = 1;
  double step0 = 0.5;
  int quad_degree = 4;
  /// Target exponent surrogate for the borderline case p = n (the true
  /// constant diverges); documented knob, entries built from it are
  /// conditional by construction.
  double borderline_target = 6.0;
  const std::vector<double>* warm_start = nullptr;
};

/// Numeric lower bound: maximizes the discrete quotient
/// ||v_h||_target / ||v_h||_source over the P1 space by normalized gradient
/// ascent from several deterministic starts. Returns the best quotient;
/// `converged` is false when the iteration cap was hit while still improving.
ConstantEstimate estimate_rayleigh(const Mesh& mesh, ConstantKind kind,
                                   double p, double q,
                                   const RayleighOptions& opts = {},
                                   std::vector<double>* maximizer = nullptr);

/// Right-hand side of the two-term Sobolev inequality
/// ||v||_{pn/(n-p)} <= S_p ||grad v||_p + S_1^{1/p_*} ||v||_{p_*, dOmega}.
double maggi_bound(double Sp, double S1, double p, int n, double grad_norm,
                   double trace_norm);

/// target/source norm pair of a registry kind for a P1 field; used by the
/// estimator and by the per-run registry consistency check.
struct QuotientNorms {
  double target = 0.0;
  double source = 0.0;
};
QuotientNorms quotient_norms(const Mesh& mesh, const std::vector<double>& v,
                             ConstantKind kind, double p, double q,
                             int quad_degree = 4, double borderline_target = 6.0);

}  // namespace parabound

#endif
