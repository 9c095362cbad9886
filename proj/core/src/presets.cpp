#include "parabound/presets.hpp"

#include <cmath>
#include <random>

#include "parabound/error.hpp"

namespace parabound {

namespace {

double get(const ParamMap& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

constexpr double kPi = 3.14159265358979323846;

ScalarFn time_modulated(ScalarFn base, const ParamMap& params) {
  const double rate = get(params, "time_rate", 0.0);
  if (rate == 0.0) return base;
  return [base, rate](const Point& x, double t) {
    return base(x, t) * std::exp(-rate * t);
  };
}

}  // namespace

ScalarFn make_scalar_field(const std::string& preset, const ParamMap& params) {
  if (preset == "zero") {
    return [](const Point&, double) { return 0.0; };
  }
  if (preset == "constant") {
    const double v = get(params, "value", 1.0);
    return time_modulated([v](const Point&, double) { return v; }, params);
  }
  if (preset == "affine") {
    const double a0 = get(params, "a0", 0.0);
    const double ax = get(params, "ax", 0.0);
    const double ay = get(params, "ay", 0.0);
    const double az = get(params, "az", 0.0);
    return time_modulated(
        [=](const Point& x, double) {
          return a0 + ax * x[0] + ay * x[1] + az * x[2];
        },
        params);
  }
  if (preset == "cos_product") {
    const double a = get(params, "amplitude", 1.0);
    const double kx = get(params, "kx", 1.0);
    const double ky = get(params, "ky", 1.0);
    return time_modulated(
        [=](const Point& x, double) {
          return a * std::cos(kx * kPi * x[0]) * std::cos(ky * kPi * x[1]);
        },
        params);
  }
  if (preset == "cos2") {
    const double a = get(params, "amplitude", 1.0);
    return time_modulated(
        [=](const Point& x, double) {
          const double cx = std::cos(kPi * x[0]);
          const double cy = std::cos(kPi * x[1]);
          return a * cx * cx * cy * cy;
        },
        params);
  }
  if (preset == "gaussian") {
    const double a = get(params, "amplitude", 1.0);
    const double cx = get(params, "cx", 0.5);
    const double cy = get(params, "cy", 0.5);
    const double w = get(params, "width", 0.2);
    return time_modulated(
        [=](const Point& x, double) {
          const double dx = x[0] - cx, dy = x[1] - cy;
          return a * std::exp(-(dx * dx + dy * dy) / (2.0 * w * w));
        },
        params);
  }
  if (preset == "step") {
    const int axis = static_cast<int>(get(params, "axis", 0.0));
    const double thr = get(params, "threshold", 0.5);
    const double lo = get(params, "low", 0.0);
    const double hi = get(params, "high", 1.0);
    return [=](const Point& x, double) { return x[axis] > thr ? hi : lo; };
  }
  if (preset == "fourier_random") {
    // Low-mode cosine series with seeded coefficients, offset so the field
    // stays nonnegative (the sign hypotheses of the min/max principles).
    const auto seed = static_cast<std::uint64_t>(get(params, "seed", 1.0));
    const double mean = get(params, "mean", 1.0);
    const double amp = get(params, "amplitude", 0.5);
    const int modes = static_cast<int>(get(params, "modes", 2.0));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<std::array<double, 3>> coef;  // {c, kx, ky}
    double total = 0.0;
    for (int kx = 0; kx <= modes; ++kx) {
      for (int ky = 0; ky <= modes; ++ky) {
        if (kx == 0 && ky == 0) continue;
        const double c = unif(rng);
        coef.push_back({c, double(kx), double(ky)});
        total += std::abs(c);
      }
    }
    const double norm = total > 0 ? amp / total : 0.0;
    return time_modulated(
        [=](const Point& x, double) {
          double v = mean;
          for (const auto& c : coef)
            v += norm * c[0] * std::cos(c[1] * kPi * x[0]) *
                 std::cos(c[2] * kPi * x[1]);
          return v;
        },
        params);
  }
  if (preset == "manufactured_u") {
    return [](const Point& x, double t) {
      return std::exp(-t) * std::cos(kPi * x[0]) * std::cos(kPi * x[1]);
    };
  }
  if (preset == "manufactured_f") {
    // d/dt u - Laplace u for u = e^{-t} cos(pi x) cos(pi y).
    return [](const Point& x, double t) {
      return (2.0 * kPi * kPi - 1.0) * std::exp(-t) * std::cos(kPi * x[0]) *
             std::cos(kPi * x[1]);
    };
  }
  if (preset == "manufactured_h") {
    // Robin datum b u + normal flux; the normal flux of the manufactured
    // field vanishes on the box faces, so h = b_star * u.
    const double b = get(params, "b_star", 1.0);
    return [b](const Point& x, double t) {
      return b * std::exp(-t) * std::cos(kPi * x[0]) * std::cos(kPi * x[1]);
    };
  }
  throw ConfigError("unknown scalar preset: " + preset);
}

VectorFn make_vector_field(const std::string& preset, const ParamMap& params,
                           const DomainSpec& domain) {
  const double s = get(params, "scale", 1.0);
  if (preset == "zero" || s == 0.0) {
    return [](const Point&, double) { return Point{0, 0, 0}; };
  }
  if (preset == "constant") {
    const double ex = get(params, "ex", 1.0) * s;
    const double ey = get(params, "ey", 0.0) * s;
    const double ez = get(params, "ez", 0.0) * s;
    return [=](const Point&, double) { return Point{ex, ey, ez}; };
  }
  if (preset == "time_linear") {
    return [=](const Point&, double t) { return Point{s * t, 0, 0}; };
  }
  if (preset == "rotor") {
    const double cx = domain.extents.empty() ? 0.5 : 0.5 * domain.extents[0];
    const double cy =
        domain.extents.size() < 2 ? 0.5 : 0.5 * domain.extents[1];
    return [=](const Point& x, double) {
      return Point{s * (x[1] - cy), -s * (x[0] - cx), 0};
    };
  }
  if (preset == "shear") {
    return [=](const Point& x, double) {
      return Point{s * std::sin(kPi * x[1]), 0, 0};
    };
  }
  throw ConfigError("unknown vector preset: " + preset);
}

DiffusionField make_diffusion(const std::string& preset, const ParamMap& params,
                              const DomainSpec& domain) {
  DiffusionField d;
  d.preset = preset;
  const int n = domain.dimension;
  if (preset == "identity") {
    const double a = get(params, "scale", 1.0);
    if (!(a > 0)) throw ConfigError("identity diffusion needs scale > 0");
    d.a_lower = a;
    d.a_upper = a;
    d.A = [a, n](const Point&) {
      std::array<double, 9> m{};
      for (int i = 0; i < n; ++i) m[i * n + i] = a;
      return m;
    };
    return d;
  }
  if (preset == "diag") {
    const double a1 = get(params, "a1", 1.0);
    const double a2 = get(params, "a2", 1.0);
    const double a3 = get(params, "a3", 1.0);
    d.a_lower = std::min({a1, a2, n == 3 ? a3 : a1});
    d.a_upper = std::max({a1, a2, n == 3 ? a3 : a1});
    d.A = [=](const Point&) {
      std::array<double, 9> m{};
      m[0] = a1;
      m[n + 1] = a2;
      if (n == 3) m[8] = a3;
      return m;
    };
    return d;
  }
  if (preset == "matrix") {
    if (n != 2) throw ConfigError("matrix diffusion preset is 2-D only");
    const double a11 = get(params, "a11", 1.0);
    const double a12 = get(params, "a12", 0.0);
    const double a21 = get(params, "a21", a12);
    const double a22 = get(params, "a22", 1.0);
    // Ellipticity constant of the symmetric part, exact for 2x2.
    const double s12 = 0.5 * (a12 + a21);
    const double tr = a11 + a22;
    const double disc = std::sqrt(sqr(a11 - a22) + 4.0 * s12 * s12);
    d.a_lower = 0.5 * (tr - disc);
    d.a_upper = std::max({std::abs(a11), std::abs(a12), std::abs(a21),
                          std::abs(a22)});
    if (!(d.a_lower > 0)) throw ConfigError("matrix diffusion not elliptic");
    d.A = [=](const Point&) {
      std::array<double, 9> m{};
      m[0] = a11;
      m[1] = a12;
      m[2] = a21;
      m[3] = a22;
      return m;
    };
    return d;
  }
  if (preset == "checkerboard") {
    // Two scalar materials on a cells x cells grid; ellipticity constants
    // are exact per material.
    const double a1 = get(params, "a1", 1.0);
    const double a2 = get(params, "a2", 2.0);
    const int cells = static_cast<int>(get(params, "cells", 4.0));
    if (!(a1 > 0) || !(a2 > 0))
      throw ConfigError("checkerboard materials must be positive");
    d.a_lower = std::min(a1, a2);
    d.a_upper = std::max(a1, a2);
    std::vector<double> ext = domain.extents;
    d.A = [=](const Point& x) {
      int parity = 0;
      for (int axis = 0; axis < n; ++axis) {
        const double rel = x[axis] / ext[axis] * cells;
        parity += static_cast<int>(std::floor(std::min(rel, cells - 1e-12)));
      }
      const double a = (parity % 2 == 0) ? a1 : a2;
      std::array<double, 9> m{};
      for (int i = 0; i < n; ++i) m[i * n + i] = a;
      return m;
    };
    return d;
  }
  throw ConfigError("unknown diffusion preset: " + preset);
}

BoundaryLaw make_boundary_law(const std::string& kind, const ParamMap& params) {
  BoundaryLaw law;
  law.preset = kind;
  if (kind == "neumann") {
    law.kind = LawKind::neumann;
    law.ell = 2.0;
    law.b_lower = 0.0;
    law.b_upper = 0.0;
    law.b = [](const Point&, double) { return 0.0; };
    return law;
  }
  if (kind == "robin") {
    const double b = get(params, "b_star", 1.0);
    if (b < 0) throw ConfigError("robin coefficient must be nonnegative");
    law.kind = LawKind::robin;
    law.ell = 2.0;
    law.b_lower = b;
    law.b_upper = b;
    law.b = [b](const Point&, double) { return b; };
    return law;
  }
  if (kind == "blackbody") {
    const double sigma = get(params, "sigma", kStefanBoltzmann);
    law.kind = LawKind::blackbody;
    law.ell = 5.0;
    law.b_lower = sigma;
    law.b_upper = sigma;
    law.b = [sigma](const Point&, double xi) {
      return sigma * std::abs(xi) * std::abs(xi) * std::abs(xi);
    };
    return law;
  }
  if (kind == "wien") {
    const double b = get(params, "b_star", 1.0);
    law.kind = LawKind::wien;
    law.ell = 6.0;
    law.b_lower = b;
    law.b_upper = b;
    law.b = [b](const Point&, double xi) {
      const double x2 = xi * xi;
      return b * x2 * x2;
    };
    return law;
  }
  if (kind == "custom") {
    // Power law whose multiplier varies smoothly along the boundary within
    // the [b_lower, b_upper] band.
    const double ell = get(params, "ell", 2.0);
    const double blo = get(params, "b_lower", 1.0);
    const double bhi = get(params, "b_upper", blo);
    if (ell < 2.0) throw ConfigError("custom law needs ell >= 2");
    if (!(blo >= 0) || !(bhi >= blo))
      throw ConfigError("custom law needs 0 <= b_lower <= b_upper");
    law.kind = LawKind::custom;
    law.ell = ell;
    law.b_lower = blo;
    law.b_upper = bhi;
    law.b = [=](const Point& x, double xi) {
      const double mid = 0.5 * (blo + bhi);
      const double half = 0.5 * (bhi - blo);
      const double mult =
          mid + half * std::sin(kPi * (x[0] + x[1]));  // stays in the band
      return mult * std::pow(std::abs(xi), ell - 2.0);
    };
    return law;
  }
  throw ConfigError("unknown boundary law: " + kind);
}

bool is_drift_zero_preset(const std::string& preset, const ParamMap& params) {
  return preset == "zero" || get(params, "scale", 1.0) == 0.0;
}

}  // namespace parabound
