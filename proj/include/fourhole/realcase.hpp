#pragma once

// Real boundary data: topology of the real relative character variety, the
// ergodic-or-not decision for the whole real slice, and an explicit real
// triple whose map passes the BQ test whenever (p, q, r) != 0.

#include <array>
#include <cmath>
#include <string>

#include "fourhole/algebra.hpp"
#include "fourhole/dynamics.hpp"

namespace fourhole {

enum class TopologyCase {
  kQuadruplyPuncturedSphere,
  kTriplyPuncturedTorusPlusDisc,
  kTriplyPuncturedSpherePlusDisc,
  kAnnulusPlusTwoDiscs,
  kFourDiscs,
  kFourDiscsPlusSphere,
};

inline const char* to_string(TopologyCase c) {
  switch (c) {
    case TopologyCase::kQuadruplyPuncturedSphere: return "QuadruplyPuncturedSphere";
    case TopologyCase::kTriplyPuncturedTorusPlusDisc: return "TriplyPuncturedTorusPlusDisc";
    case TopologyCase::kTriplyPuncturedSpherePlusDisc: return "TriplyPuncturedSpherePlusDisc";
    case TopologyCase::kAnnulusPlusTwoDiscs: return "AnnulusPlusTwoDiscs";
    case TopologyCase::kFourDiscs: return "FourDiscs";
    case TopologyCase::kFourDiscsPlusSphere: return "FourDiscsPlusSphere";
  }
  return "?";
}

struct RealTopology {
  int n_in_segment = 0;
  TopologyCase topology = TopologyCase::kQuadruplyPuncturedSphere;
  std::string euler_note;
};

inline void require_real(const BoundaryTraces& tau, const char* where) {
  if (!tau.finite()) throw Error(ErrorCode::kNonFiniteInput, std::string(where) + ": non-finite traces");
  if (!tau.real()) throw Error(ErrorCode::kNonRealInput, std::string(where) + ": boundary traces must be real");
}

inline RealTopology classify_real(const BoundaryTraces& tau) {
  require_real(tau, "classify_real");
  const std::array<double, 4> v = {tau.a.real(), tau.b.real(), tau.c.real(), tau.d.real()};
  RealTopology out;
  for (double t : v) out.n_in_segment += std::abs(t) <= 2.0 ? 1 : 0;
  const double product = v[0] * v[1] * v[2] * v[3];

  switch (out.n_in_segment) {
    case 0:
      if (product < 0) {
        out.topology = TopologyCase::kQuadruplyPuncturedSphere;
        out.euler_note = "relative Euler class +1 or -1";
      } else {
        out.topology = TopologyCase::kTriplyPuncturedTorusPlusDisc;
        out.euler_note =
            "triply punctured torus: relative Euler class 0; disc: maximal relative Euler class +2 or -2 "
            "(hyperbolic structures with geodesic boundary)";
      }
      break;
    case 1:
      out.topology = TopologyCase::kTriplyPuncturedSpherePlusDisc;
      out.euler_note = "not all boundary traces hyperbolic; no relative Euler class labels";
      break;
    case 2:
      out.topology = TopologyCase::kAnnulusPlusTwoDiscs;
      out.euler_note = "not all boundary traces hyperbolic; no relative Euler class labels";
      break;
    case 3:
      out.topology = TopologyCase::kFourDiscs;
      out.euler_note = "not all boundary traces hyperbolic; no relative Euler class labels";
      break;
    default:
      out.topology = TopologyCase::kFourDiscsPlusSphere;
      out.euler_note = "compact sphere component contains the SU(2) characters; no relative Euler class labels";
      break;
  }
  return out;
}

enum class ErgodicityVerdict { kErgodicWholeSlice, kHasDomainOfDiscontinuity };

inline const char* to_string(ErgodicityVerdict v) {
  return v == ErgodicityVerdict::kErgodicWholeSlice ? "ErgodicWholeSlice" : "HasDomainOfDiscontinuity";
}

struct ErgodicityDecision {
  ErgodicityVerdict verdict = ErgodicityVerdict::kHasDomainOfDiscontinuity;
  MuParams mu;
  std::string rationale;
};

inline constexpr double kLinearZeroTolerance = 1e-12;
inline constexpr double kErgodicIntervalTolerance = 1e-9;

/// Ergodic on the whole real slice exactly when (p, q, r) = 0 and
/// s in [4, 20]; otherwise there is an open domain of discontinuity.
inline ErgodicityDecision ergodicity_decision(const BoundaryTraces& tau) {
  require_real(tau, "ergodicity_decision");
  ErgodicityDecision out;
  out.mu = gt_map(tau);
  const double scale = 1.0 + std::norm(tau.a) + std::norm(tau.b) + std::norm(tau.c) + std::norm(tau.d);
  const bool linear_zero = std::abs(out.mu.p) <= kLinearZeroTolerance * scale &&
                           std::abs(out.mu.q) <= kLinearZeroTolerance * scale &&
                           std::abs(out.mu.r) <= kLinearZeroTolerance * scale;
  const double s = out.mu.s.real();
  const double slack = kErgodicIntervalTolerance * (1.0 + std::abs(s));
  const bool s_inside = s >= 4.0 - slack && s <= 20.0 + slack;

  if (!linear_zero) {
    out.verdict = ErgodicityVerdict::kHasDomainOfDiscontinuity;
    out.rationale = "(p,q,r) != (0,0,0): real characters satisfying the BQ-conditions exist";
  } else if (s_inside) {
    out.verdict = ErgodicityVerdict::kErgodicWholeSlice;
    out.rationale =
        "(p,q,r) = (0,0,0) and s in the closed interval [4,20] (equivalently |a|=|b|=|c|=|d| in "
        "[2, sqrt(2(1+sqrt 5))] or a=0; endpoints included)";
  } else {
    out.verdict = ErgodicityVerdict::kHasDomainOfDiscontinuity;
    out.rationale = s < 4.0 ? "(p,q,r) = (0,0,0) and s < 4: properly discontinuous components exist"
                            : "(p,q,r) = (0,0,0) and s > 20: an open domain of discontinuity exists";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Explicit real seed

/// A real triple (-2 - eps, y, y) in a relabeled frame. `small_color` is the
/// original color carrying -2 - eps; the other two follow cyclically. With
/// `mirrored` the two large coordinates are negated (shared sign positive).
struct RealSeed {
  MarkoffTriple triple;
  Color small_color = Color::kOne;
  bool mirrored = false;
  double epsilon = 0.0;
  double y = 0.0;
  /// The neighbor-monotonicity conditions (eps > max(-q,-r)/y, or with one
  /// of q, r zero: -3q/(4y) < eps < 1/4) hold.
  bool monotone_conditions = false;
};

namespace detail {

struct SeedFrame {
  Color small_color;
  bool mirrored;
  double p, q, r, s;  // frame parameters with q, r <= 0
};

inline SeedFrame seed_frame(const MuParams& mu) {
  if (!mu.finite()) throw Error(ErrorCode::kNonFiniteInput, "construct_real_seed: non-finite parameters");
  if (!mu.real()) throw Error(ErrorCode::kNonRealInput, "construct_real_seed: parameters must be real");
  for (Color c : kColors) {
    const MuParams m = mu.rotated_to(c);
    const double q = m.q.real();
    const double r = m.r.real();
    if (q * r < 0 || (q == 0 && r == 0)) continue;
    const bool mirrored = q > 0 || r > 0;
    return {c, mirrored, m.p.real(), mirrored ? -q : q, mirrored ? -r : r, m.s.real()};
  }
  throw Error(ErrorCode::kSeedNotAvailable, "(p,q,r) = (0,0,0): no real seed construction");
}

inline bool monotone_conditions(const SeedFrame& f, double eps, double y) {
  if (f.q != 0 && f.r != 0) return eps > std::max(-f.q, -f.r) / y;
  const double nz = f.q != 0 ? f.q : f.r;
  return eps > -0.75 * nz / y && eps < 0.25;
}

}  // namespace detail

/// eps^-(y) = ((y^2 - p - 4) - sqrt(D)) / 2 with
/// D = y^4 - 8y^2 - 2py^2 + 4(q+r)y + p^2 + 4s, evaluated in the
/// cancellation-free form 2(2p + 4 - (q+r)y - s) / ((y^2 - p - 4) + sqrt(D)).
inline RealSeed construct_real_seed(const MuParams& mu, double y) {
  const detail::SeedFrame f = detail::seed_frame(mu);
  if (!(y > 0) || !std::isfinite(y)) throw Error(ErrorCode::kSeedNotAvailable, "y must be positive and finite");
  const double y2 = y * y;
  const double disc = y2 * y2 - 8.0 * y2 - 2.0 * f.p * y2 + 4.0 * (f.q + f.r) * y + f.p * f.p + 4.0 * f.s;
  if (!(disc >= 0)) throw Error(ErrorCode::kSeedNotAvailable, "negative discriminant for this y");
  const double head = y2 - f.p - 4.0;
  const double root = std::sqrt(disc);
  double eps;
  if (head + root > 0) {
    eps = 2.0 * (2.0 * f.p + 4.0 - (f.q + f.r) * y - f.s) / (head + root);
  } else {
    eps = 0.5 * (head - root);
  }
  if (!(eps > 0) || !std::isfinite(eps)) throw Error(ErrorCode::kSeedNotAvailable, "eps(y) is not positive");

  RealSeed out;
  out.small_color = f.small_color;
  out.mirrored = f.mirrored;
  out.epsilon = eps;
  out.y = y;
  out.monotone_conditions = detail::monotone_conditions(f, eps, y);
  const double big = f.mirrored ? -y : y;
  out.triple[f.small_color] = -2.0 - eps;
  out.triple[next_color(f.small_color)] = big;
  out.triple[prev_color(f.small_color)] = big;
  return out;
}

/// max(33, 10 (1 + |p| + |q| + |r| + |s|)).
inline double default_seed_y(const MuParams& mu) {
  return std::max(33.0, 10.0 * (1.0 + std::abs(mu.p) + std::abs(mu.q) + std::abs(mu.r) + std::abs(mu.s)));
}

/// Starts at default_seed_y and doubles y (at most 60 times) until the seed
/// exists and its neighbor-monotonicity conditions hold.
inline RealSeed construct_real_seed(const MuParams& mu) {
  double y = default_seed_y(mu);
  for (int k = 0; k <= 60; ++k, y *= 2.0) {
    try {
      RealSeed seed = construct_real_seed(mu, y);
      if (seed.monotone_conditions) return seed;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSeedNotAvailable) throw;
      detail::seed_frame(mu);  // rethrows when no frame exists at all
    }
  }
  throw Error(ErrorCode::kSeedNotAvailable, "no admissible y found after 60 doublings");
}

}  // namespace fourhole
