#pragma once

// Lazy navigation of the properly embedded trivalent tree. A vertex is a
// triple together with the slopes of its three regions; moving across the
// edge of color i applies theta_i to the triple and reflects the slope of
// color i across the opposite Farey edge. No global tree is stored.

#include <array>
#include <cmath>
#include <cstdint>

#include "fourhole/algebra.hpp"
#include "fourhole/slope.hpp"

namespace fourhole {

struct VertexState {
  MarkoffTriple triple;
  std::array<Slope, 3> slopes;  // indexed by color - 1
  MuParams mu;

  const Slope& slope(Color c) const { return slopes[index_of(c)]; }
  Slope& slope(Color c) { return slopes[index_of(c)]; }
};

/// Slopes 0, inf, -1 for colors 1, 2, 3.
inline VertexState base_state(const MarkoffTriple& t, const MuParams& mu) {
  return {t, {Slope(0, 1), Slope::infinity(), Slope(-1, 1)}, mu};
}

inline bool is_farey_triangle(const std::array<Slope, 3>& s) {
  return farey_adjacent(s[0], s[1]) && farey_adjacent(s[1], s[2]) && farey_adjacent(s[0], s[2]);
}

/// Crosses the edge of the given color.
inline VertexState step(const VertexState& s, Color color) {
  VertexState out = s;
  out.triple = apply_theta(s.triple, s.mu, color);
  const auto [plus, minus] = farey_completions(s.slope(next_color(color)), s.slope(prev_color(color)));
  out.slope(color) = (plus == s.slope(color)) ? minus : plus;
  return out;
}

/// A face of an edge: one of the two regions the edge separates.
struct Face {
  Color color;
  Complex value;
  Slope slope;
};

/// The edge of color `color` at a vertex, seen from that vertex. `near` is
/// the region of that color at the vertex, `far` the region of the same
/// color at the other endpoint.
struct DirectedEdgeInfo {
  Complex near_value;
  Complex far_value;
  Slope near_slope;
  Slope far_slope;
  std::array<Face, 2> faces;
  Color color;
};

inline DirectedEdgeInfo edge_info(const VertexState& s, Color color) {
  const Color a = next_color(color);
  const Color b = prev_color(color);
  DirectedEdgeInfo e;
  e.color = color;
  e.near_value = s.triple[color];
  e.far_value = conjugate_coordinate(s.triple, s.mu, color);
  e.near_slope = s.slope(color);
  const auto [plus, minus] = farey_completions(s.slope(a), s.slope(b));
  e.far_slope = (plus == e.near_slope) ? minus : plus;
  e.faces = {Face{a, s.triple[a], s.slope(a)}, Face{b, s.triple[b], s.slope(b)}};
  return e;
}

/// Arrows point toward the region of smaller modulus. Moduli within
/// `eps_tie` (relative) are a tie, broken toward the smaller slope.
inline bool arrow_points_to_far(const DirectedEdgeInfo& e, double eps_tie = 0.0) {
  const double near = std::abs(e.near_value);
  const double far = std::abs(e.far_value);
  if (std::abs(near - far) <= eps_tie * std::max(near, far)) return e.far_slope < e.near_slope;
  return far < near;
}

enum class VertexKind { kSink, kMerge, kFork, kSource };

inline const char* to_string(VertexKind k) {
  switch (k) {
    case VertexKind::kSink: return "sink";
    case VertexKind::kMerge: return "merge";
    case VertexKind::kFork: return "fork";
    case VertexKind::kSource: return "source";
  }
  return "?";
}

/// Classification by the number of arrows pointing into the vertex (3/2/1/0).
inline VertexKind classify_vertex(const VertexState& s, double eps_tie = 0.0) {
  int inward = 0;
  for (Color c : kColors) inward += arrow_points_to_far(edge_info(s, c), eps_tie) ? 0 : 1;
  switch (inward) {
    case 3: return VertexKind::kSink;
    case 2: return VertexKind::kMerge;
    case 1: return VertexKind::kFork;
    default: return VertexKind::kSource;
  }
}

inline constexpr std::int64_t kMaxNavigationSteps = 1'000'000;

/// Color of the edge to cross from `s` to get closer to the region `target`,
/// or -1 when `target` is one of the three regions at `s`.
inline int navigation_color(const std::array<Slope, 3>& slopes, const Slope& target) {
  for (int i = 0; i < 3; ++i) {
    if (slopes[i] == target) return -1;
  }
  // target lies in exactly one of the three arcs cut out by the slopes; the
  // arc between slopes j and k (avoiding slope i) sits across edge i.
  for (int i = 0; i < 3; ++i) {
    const Slope& a = slopes[(i + 1) % 3];
    const Slope& b = slopes[(i + 2) % 3];
    if (cyclic_orientation(a, target, b) != cyclic_orientation(a, slopes[i], b)) return i;
  }
  return -1;
}

/// Walks from `start` toward the region of slope `target`, returning the
/// first vertex adjacent to it and the number of edges crossed.
inline std::pair<VertexState, std::int64_t> walk_to_region(VertexState start, const Slope& target) {
  std::int64_t steps = 0;
  for (;;) {
    const int i = navigation_color(start.slopes, target);
    if (i < 0) return {start, steps};
    if (++steps > kMaxNavigationSteps) {
      throw Error(ErrorCode::kStepBudgetExceeded, "path to slope " + target.to_string() + " too long");
    }
    start = step(start, color_at(i));
  }
}

/// Value of the region with slope `target` in the map determined by `t`.
inline Complex trace_at_slope(const MarkoffTriple& t, const MuParams& mu, const Slope& target) {
  const auto [vertex, steps] = walk_to_region(base_state(t, mu), target);
  (void)steps;
  for (Color c : kColors) {
    if (vertex.slope(c) == target) return vertex.triple[c];
  }
  return Complex(std::nan(""), std::nan(""));
}

/// Number of edges between the base vertex and the nearest vertex adjacent
/// to the region of this slope (0 for 0, inf, -1).
inline std::int64_t farey_depth(const Slope& target) {
  const MarkoffTriple zero{};
  return walk_to_region(base_state(zero, MuParams{}), target).second;
}

}  // namespace fourhole
