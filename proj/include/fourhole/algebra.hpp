#pragma once

// Trace algebra of the four-holed sphere: the vertex equation, the three
// involutions acting on triples, the boundary-trace map and the degenerate
// quartics that control where the neighbor conics degenerate.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fourhole/types.hpp"

namespace fourhole {

/// (a,b,c,d) -> (ab+cd, ad+bc, ac+bd, 4 - a^2 - b^2 - c^2 - d^2 - abcd).
inline MuParams gt_map(const BoundaryTraces& tau) {
  const auto& [a, b, c, d] = tau;
  return {a * b + c * d, a * d + b * c, a * c + b * d,
          4.0 - a * a - b * b - c * c - d * d - a * b * c * d};
}

/// LHS - RHS of the vertex equation; zero exactly on the variety.
inline Complex vertex_residual(const MarkoffTriple& t, const MuParams& mu) {
  const auto& [x, y, z] = t;
  return x * x + y * y + z * z + x * y * z - (mu.p * x + mu.q * y + mu.r * z + mu.s);
}

/// Magnitude of the terms entering the residual; used to turn absolute
/// residuals into relative ones.
inline double residual_scale(const MarkoffTriple& t, const MuParams& mu) {
  const auto& [x, y, z] = t;
  return 1.0 + std::norm(x) + std::norm(y) + std::norm(z) + std::abs(x * y * z) +
         std::abs(mu.p * x) + std::abs(mu.q * y) + std::abs(mu.r * z) + std::abs(mu.s);
}

/// The conjugate root of the vertex quadratic in the coordinate of `color`:
/// theta_1: x -> p - yz - x, theta_2: y -> q - xz - y, theta_3: z -> r - xy - z.
inline Complex conjugate_coordinate(const MarkoffTriple& t, const MuParams& mu, Color color) {
  switch (color) {
    case Color::kOne: return mu.p - t.y * t.z - t.x;
    case Color::kTwo: return mu.q - t.x * t.z - t.y;
    case Color::kThree: return mu.r - t.x * t.y - t.z;
  }
  return t.x;
}

inline MarkoffTriple apply_theta(const MarkoffTriple& t, const MuParams& mu, Color color) {
  MarkoffTriple out = t;
  out[color] = conjugate_coordinate(t, mu, color);
  return out;
}

/// Products of two involutions. `k23` is theta_2 o theta_3 (theta_3 applied
/// first); the other two are its cyclic relabelings.
enum class Twist { k23, k31, k12 };

inline MarkoffTriple apply_twist(MarkoffTriple t, const MuParams& mu, Twist twist, std::int64_t power) {
  Color first = Color::kThree, second = Color::kTwo;
  switch (twist) {
    case Twist::k23: first = Color::kThree; second = Color::kTwo; break;
    case Twist::k31: first = Color::kOne; second = Color::kThree; break;
    case Twist::k12: first = Color::kTwo; second = Color::kOne; break;
  }
  if (power < 0) std::swap(first, second);
  const std::uint64_t count = power < 0 ? static_cast<std::uint64_t>(-(power + 1)) + 1
                                        : static_cast<std::uint64_t>(power);
  for (std::uint64_t k = 0; k < count; ++k) {
    t = apply_theta(t, mu, first);
    t = apply_theta(t, mu, second);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Polynomials

/// Coefficients in ascending degree: c[k] multiplies x^k.
using Quartic = std::array<Complex, 5>;

inline Complex evaluate(const Quartic& c, Complex x) {
  Complex acc = c[4];
  for (int k = 3; k >= 0; --k) acc = acc * x + c[k];
  return acc;
}

inline Complex evaluate_derivative(const Quartic& c, Complex x) {
  Complex acc = 4.0 * c[4];
  for (int k = 3; k >= 1; --k) acc = acc * x + static_cast<double>(k) * c[k];
  return acc;
}

inline double max_coefficient_modulus(const Quartic& c) {
  double m = 0.0;
  for (const auto& v : c) m = std::max(m, std::abs(v));
  return m;
}

/// Roots of a quartic with nonzero leading coefficient. Companion-matrix
/// eigenvalues, then clusters of a multiple root are replaced by their mean
/// and each root gets one guarded Newton step.
inline std::array<Complex, 4> quartic_roots(const Quartic& c) {
  if (c[4] == Complex(0.0)) throw Error(ErrorCode::kDegenerateRootFailure, "leading coefficient vanishes");
  Eigen::Matrix4cd companion = Eigen::Matrix4cd::Zero();
  for (int i = 1; i < 4; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < 4; ++i) companion(i, 3) = -c[i] / c[4];

  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kDegenerateRootFailure, "companion eigenvalue iteration did not converge");
  }
  std::array<Complex, 4> roots;
  for (int i = 0; i < 4; ++i) roots[i] = solver.eigenvalues()[i];

  // A root of multiplicity k comes out as k points spread by ~eps^(1/k);
  // their centroid is accurate to ~eps.
  std::array<bool, 4> used{};
  for (int i = 0; i < 4; ++i) {
    if (used[i]) continue;
    std::vector<int> cluster{i};
    const double radius = 1e-3 * (1.0 + std::abs(roots[i]));
    for (int j = i + 1; j < 4; ++j) {
      if (!used[j] && std::abs(roots[j] - roots[i]) < radius) cluster.push_back(j);
    }
    if (cluster.size() < 2) continue;
    Complex mean = 0.0;
    double worst = 0.0;
    for (int k : cluster) {
      mean += roots[k];
      worst = std::max(worst, std::abs(evaluate(c, roots[k])));
    }
    mean /= static_cast<double>(cluster.size());
    if (std::abs(evaluate(c, mean)) <= worst) {
      for (int k : cluster) {
        roots[k] = mean;
        used[k] = true;
      }
    }
  }

  for (auto& root : roots) {
    const Complex f = evaluate(c, root);
    const Complex df = evaluate_derivative(c, root);
    if (std::abs(df) == 0.0) continue;
    const Complex polished = root - f / df;
    if (is_finite(polished) && std::abs(evaluate(c, polished)) < std::abs(f)) root = polished;
  }
  return roots;
}

// ---------------------------------------------------------------------------
// Degenerate locus

/// Quartic whose roots are the values of a region of the given color at
/// which its neighbor conic degenerates. For color 1:
///   D(x) = -x^4 + p x^3 + (4+s) x^2 + (qr - 4p) x - (q^2 + r^2 + 4s),
/// and colors 2, 3 use (p,q,r) -> (q,r,p), (r,p,q).
struct DegenerateData {
  Color color = Color::kOne;
  Quartic quartic{};
  std::array<Complex, 4> roots{};
  /// Roots within the exclusion tolerance of +2 or -2.
  std::vector<Complex> exclusions;
};

inline Quartic degenerate_quartic(const MuParams& mu, Color color) {
  const MuParams m = mu.rotated_to(color);
  return {-(m.q * m.q + m.r * m.r + 4.0 * m.s), m.q * m.r - 4.0 * m.p, 4.0 + m.s, m.p, Complex(-1.0)};
}

inline constexpr double kPlusMinusTwoExclusion = 1e-8;

inline DegenerateData degenerate_data(const MuParams& mu, Color color) {
  require_finite(mu, "degenerate_data");
  DegenerateData out;
  out.color = color;
  out.quartic = degenerate_quartic(mu, color);
  out.roots = quartic_roots(out.quartic);
  const double tol = 1e-9 * (1.0 + max_coefficient_modulus(out.quartic));
  for (const auto& root : out.roots) {
    if (!is_finite(root) || std::abs(evaluate(out.quartic, root)) >= tol) {
      throw Error(ErrorCode::kDegenerateRootFailure, "quartic residual above tolerance after polishing");
    }
    if (std::abs(root - 2.0) < kPlusMinusTwoExclusion || std::abs(root + 2.0) < kPlusMinusTwoExclusion) {
      out.exclusions.push_back(root);
    }
  }
  return out;
}

/// All twelve degenerate values (four per color).
inline std::vector<Complex> degenerate_values(const MuParams& mu) {
  std::vector<Complex> out;
  for (Color c : kColors) {
    const auto data = degenerate_data(mu, c);
    out.insert(out.end(), data.roots.begin(), data.roots.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constants

struct DerivedConstants {
  double alpha = 0.0;  ///< max(|p|,|q|,|r|) / 2
  double m = 0.0;      ///< bound on the smallest coordinate at a sink
  double big_m = 0.0;  ///< largest conic-center coordinate over degenerate values
  double big_l = 0.0;  ///< max(2 + alpha, m, big_m + 1)
};

/// Sink bound: every fraction in the sink argument is below 1/12 once the
/// smallest coordinate exceeds this value.
inline double sink_bound(const MuParams& mu) {
  const double pqr = std::max({std::abs(mu.p), std::abs(mu.q), std::abs(mu.r)});
  return std::max({12.0, pqr, std::sqrt(12.0 * pqr), std::cbrt(12.0 * std::abs(mu.s))});
}

inline DerivedConstants derived_constants(const MuParams& mu) {
  require_finite(mu, "derived_constants");
  DerivedConstants out;
  const std::array<Complex, 3> lin = {mu.p, mu.q, mu.r};
  out.alpha = std::max({std::abs(mu.p), std::abs(mu.q), std::abs(mu.r)}) / 2.0;
  out.m = sink_bound(mu);

  for (Color c : kColors) {
    const auto data = degenerate_data(mu, c);
    for (const auto& x : data.roots) {
      if (std::abs(x - 2.0) < kPlusMinusTwoExclusion || std::abs(x + 2.0) < kPlusMinusTwoExclusion) continue;
      const Complex denom = 4.0 - x * x;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          if (i == j) continue;
          out.big_m = std::max(out.big_m, std::abs((2.0 * lin[i] - x * lin[j]) / denom));
        }
      }
    }
  }
  out.big_l = std::max({2.0 + out.alpha, out.m, out.big_m + 1.0});
  return out;
}

}  // namespace fourhole
