#pragma once

// Neighbors around a fixed region. Around a region X of color c the regions
// meeting it alternate between colors c+1 and c+2 (cyclically); write them
// (y_n, z_n). Crossing edges along the boundary of X acts on (y_n, z_n) by
//   y_{n+1} = q - x z_n - y_n,   z_{n+1} = r - x y_{n+1} - z_n
// with (p, q, r) rotated so that c plays the role of color 1. All functions
// below take the region's color and do the rotation internally.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include "fourhole/algebra.hpp"

namespace fourhole {

enum class TwistKind { kElliptic, kParabolic, kLoxodromic };

inline const char* to_string(TwistKind k) {
  switch (k) {
    case TwistKind::kElliptic: return "elliptic";
    case TwistKind::kParabolic: return "parabolic";
    case TwistKind::kLoxodromic: return "loxodromic";
  }
  return "?";
}

/// Eigen-data of M = [[-1, -x], [x, x^2 - 1]]. delta is the principal square
/// root of x^2 - 4 (branch cut on the negative real axis), Lambda =
/// (x + delta) / 2 and lambda = Lambda^2.
struct TwistSpectrum {
  Complex x;
  Complex delta;
  Complex lambda, lambda_inv;
  Complex cap_lambda, cap_lambda_inv;
  TwistKind kind = TwistKind::kLoxodromic;
};

inline TwistSpectrum twist_spectrum(Complex x) {
  if (!is_finite(x)) throw Error(ErrorCode::kNonFiniteInput, "twist_spectrum: non-finite x");
  TwistSpectrum out;
  out.x = x;
  out.delta = std::sqrt(x * x - 4.0);
  out.cap_lambda = (x + out.delta) / 2.0;
  out.cap_lambda_inv = (x - out.delta) / 2.0;
  out.lambda = out.cap_lambda * out.cap_lambda;
  out.lambda_inv = out.cap_lambda_inv * out.cap_lambda_inv;
  if (x.imag() == 0.0 && (x.real() == 2.0 || x.real() == -2.0)) {
    out.kind = TwistKind::kParabolic;
  } else if (x.imag() == 0.0 && x.real() > -2.0 && x.real() < 2.0) {
    out.kind = TwistKind::kElliptic;
  } else {
    out.kind = TwistKind::kLoxodromic;
  }
  return out;
}

inline constexpr double kParabolicTolerance = 1e-12;

inline bool near_parabolic(Complex x) {
  return std::abs(x - 2.0) <= kParabolicTolerance || std::abs(x + 2.0) <= kParabolicTolerance;
}

/// Center of the neighbor conic, the fixed point of the affine twist map.
struct ConicCenter {
  Complex frak_y, frak_z;
};

inline ConicCenter conic_center(Complex x, const MuParams& mu, Color color) {
  if (near_parabolic(x)) throw Error(ErrorCode::kParabolicCenterUndefined, "conic center undefined at x = +-2");
  const MuParams m = mu.rotated_to(color);
  const Complex denom = 4.0 - x * x;
  return {(2.0 * m.q - x * m.r) / denom, (2.0 * m.r - x * m.q) / denom};
}

/// y_n = A Lambda^{2n} + B Lambda^{-2n} + frak_y,
/// z_n = -(A Lambda^{2n+1} + B Lambda^{-2n-1}) + frak_z.
struct OrbitCoefficients {
  Complex a_coef, b_coef;
};

inline OrbitCoefficients orbit_coefficients(Complex x, Complex y0, Complex z0, const MuParams& mu, Color color) {
  const TwistSpectrum spec = twist_spectrum(x);
  if (spec.kind != TwistKind::kLoxodromic || near_parabolic(x)) {
    throw Error(ErrorCode::kNotLoxodromic, "orbit coefficients need x outside [-2, 2]");
  }
  const ConicCenter c = conic_center(x, mu, color);
  const Complex dy = y0 - c.frak_y;
  const Complex dz = z0 - c.frak_z;
  const Complex d = spec.cap_lambda - spec.cap_lambda_inv;
  return {-(spec.cap_lambda_inv * dy + dz) / d, (spec.cap_lambda * dy + dz) / d};
}

/// AB written without the seed:
/// (p x + s - x^2 + (q^2 + r^2 - x q r) / (4 - x^2)) / (4 - x^2).
inline Complex ab_product_closed_form(Complex x, const MuParams& mu, Color color) {
  const MuParams m = mu.rotated_to(color);
  const Complex denom = 4.0 - x * x;
  return (m.p * x + m.s - x * x + (m.q * m.q + m.r * m.r - x * m.q * m.r) / denom) / denom;
}

/// One application of the affine twist map.
inline std::pair<Complex, Complex> neighbor_step(Complex x, Complex y, Complex z, const MuParams& mu, Color color) {
  const MuParams m = mu.rotated_to(color);
  const Complex y1 = m.q - x * z - y;
  return {y1, m.r - x * y1 - z};
}

inline std::pair<Complex, Complex> neighbor_step_back(Complex x, Complex y, Complex z, const MuParams& mu,
                                                      Color color) {
  const MuParams m = mu.rotated_to(color);
  const Complex z0 = m.r - x * y - z;
  return {m.q - x * z0 - y, z0};
}

inline std::pair<Complex, Complex> iterate_neighbors(Complex x, Complex y0, Complex z0, const MuParams& mu,
                                                     Color color, std::int64_t n) {
  std::pair<Complex, Complex> cur{y0, z0};
  if (n >= 0) {
    for (std::int64_t k = 0; k < n; ++k) cur = neighbor_step(x, cur.first, cur.second, mu, color);
  } else {
    for (std::int64_t k = 0; k < -n; ++k) cur = neighbor_step_back(x, cur.first, cur.second, mu, color);
  }
  return cur;
}

/// (y_n, z_n). Loxodromic x uses the closed form; elliptic and parabolic x
/// iterate the recurrence |n| times.
inline std::pair<Complex, Complex> neighbor_sequence(Complex x, Complex y0, Complex z0, const MuParams& mu,
                                                     Color color, std::int64_t n) {
  const TwistSpectrum spec = twist_spectrum(x);
  if (spec.kind != TwistKind::kLoxodromic || near_parabolic(x)) {
    return iterate_neighbors(x, y0, z0, mu, color, n);
  }
  const ConicCenter c = conic_center(x, mu, color);
  const OrbitCoefficients ab = orbit_coefficients(x, y0, z0, mu, color);
  const double nn = static_cast<double>(n);
  const Complex up = std::pow(spec.cap_lambda, 2.0 * nn);
  const Complex down = std::pow(spec.cap_lambda_inv, 2.0 * nn);
  const Complex y = ab.a_coef * up + ab.b_coef * down + c.frak_y;
  const Complex z = -(ab.a_coef * up * spec.cap_lambda + ab.b_coef * down * spec.cap_lambda_inv) + c.frak_z;
  return {y, z};
}

// ---------------------------------------------------------------------------
// Bounded windows: which neighbors have both coordinates within radius r.

enum class WindowKind { kFinite, kUnboundedBoth, kUnboundedPlus, kUnboundedMinus, kConstant, kEmpty };

inline const char* to_string(WindowKind k) {
  switch (k) {
    case WindowKind::kFinite: return "finite";
    case WindowKind::kUnboundedBoth: return "unbounded_both";
    case WindowKind::kUnboundedPlus: return "unbounded_plus";
    case WindowKind::kUnboundedMinus: return "unbounded_minus";
    case WindowKind::kConstant: return "constant";
    case WindowKind::kEmpty: return "empty";
  }
  return "?";
}

/// For kFinite, [n1, n2] is the hull of the member indices and `contiguous`
/// says whether every index in it is a member. For kUnboundedPlus, n1 is the
/// first member; for kUnboundedMinus, n2 is the last member.
struct BoundedWindow {
  WindowKind kind = WindowKind::kEmpty;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  bool contiguous = true;
};

inline constexpr std::int64_t kMaxWindowScan = 2'000'000;

namespace detail {

// Smallest k >= 0 with coef * g^k > target (g > 1).
inline std::int64_t growth_crossing(double coef, double g, double target) {
  if (coef * 1.0 > target) return 0;
  const double k = std::ceil(std::log(target / coef) / std::log(g)) + 1.0;
  if (!(k < static_cast<double>(kMaxWindowScan))) {
    throw Error(ErrorCode::kWindowTooWide, "neighbor window scan exceeds limit");
  }
  return static_cast<std::int64_t>(k);
}

}  // namespace detail

inline BoundedWindow bounded_window(Complex x, Complex y0, Complex z0, const MuParams& mu, Color color, double r) {
  const TwistSpectrum spec = twist_spectrum(x);
  const auto within = [r](std::pair<Complex, Complex> v) {
    return std::abs(v.first) <= r && std::abs(v.second) <= r;
  };

  if (spec.kind == TwistKind::kElliptic) return {WindowKind::kUnboundedBoth, 0, 0, true};
  if (spec.kind == TwistKind::kParabolic || near_parabolic(x)) {
    const auto next = neighbor_step(x, y0, z0, mu, color);
    if (next.first == y0 && next.second == z0) {
      return within({y0, z0}) ? BoundedWindow{WindowKind::kConstant, 0, 0, true} : BoundedWindow{};
    }
    return {WindowKind::kUnboundedBoth, 0, 0, true};
  }

  const ConicCenter c = conic_center(x, mu, color);
  const OrbitCoefficients ab = orbit_coefficients(x, y0, z0, mu, color);
  const double seed_scale = std::abs(y0 - c.frak_y) + std::abs(z0 - c.frak_z);
  const double zero_tol = 1e-12 * seed_scale;
  const double abs_a = std::abs(ab.a_coef) <= zero_tol ? 0.0 : std::abs(ab.a_coef);
  const double abs_b = std::abs(ab.b_coef) <= zero_tol ? 0.0 : std::abs(ab.b_coef);
  const double center_max = std::max(std::abs(c.frak_y), std::abs(c.frak_z));
  const bool center_inside = std::abs(c.frak_y) <= r && std::abs(c.frak_z) <= r;

  if (abs_a == 0.0 && abs_b == 0.0) {
    return center_inside ? BoundedWindow{WindowKind::kConstant, 0, 0, true} : BoundedWindow{};
  }

  const double rho = std::norm(spec.cap_lambda);  // |Lambda|^2
  if (!(std::abs(rho - 1.0) > 1e-15)) return {WindowKind::kUnboundedBoth, 0, 0, true};
  const double g = std::max(rho, 1.0 / rho);
  // Coefficient that grows as n -> +inf and as n -> -inf.
  const double grow_plus = rho > 1.0 ? abs_a : abs_b;
  const double grow_minus = rho > 1.0 ? abs_b : abs_a;
  const double lam = std::abs(spec.cap_lambda);
  const double slack = std::max(1.0, std::max(lam, 1.0 / lam));

  // Past these indices |y_n| > r or |z_n| > r for good, or the orbit has
  // settled at the center.
  // Once the decaying part is below this the orbit stays inside.
  const double settle = std::max(r - center_max, 1e-12 * (1.0 + r));
  bool open_plus = false, open_minus = false;
  std::int64_t hi = 0, lo = 0;
  if (grow_plus > 0.0) {
    hi = detail::growth_crossing(grow_plus, g, r + center_max + slack * (abs_a + abs_b));
  } else if (center_inside) {
    open_plus = true;
    hi = detail::growth_crossing(settle, g, slack * (abs_a + abs_b));
  } else {
    const double gap = center_max - r;
    hi = detail::growth_crossing(gap, g, slack * (abs_a + abs_b));
  }
  if (grow_minus > 0.0) {
    lo = -detail::growth_crossing(grow_minus, g, r + center_max + slack * (abs_a + abs_b));
  } else if (center_inside) {
    open_minus = true;
    lo = -detail::growth_crossing(settle, g, slack * (abs_a + abs_b));
  } else {
    const double gap = center_max - r;
    lo = -detail::growth_crossing(gap, g, slack * (abs_a + abs_b));
  }

  std::int64_t first = 1, last = 0, count = 0;
  for (std::int64_t n = lo; n <= hi; ++n) {
    if (within(neighbor_sequence(x, y0, z0, mu, color, n))) {
      if (count == 0) first = n;
      last = n;
      ++count;
    }
  }
  if (open_plus) return {WindowKind::kUnboundedPlus, count ? first : hi, 0, true};
  if (open_minus) return {WindowKind::kUnboundedMinus, 0, count ? last : lo, true};
  if (count == 0) return {};
  return {WindowKind::kFinite, first, last, count == last - first + 1};
}

}  // namespace fourhole
