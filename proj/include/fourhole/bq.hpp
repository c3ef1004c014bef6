#pragma once

// Certified decision of the BQ-conditions for the map determined by a triple.
//
// Phase 1 follows arrows downhill from the starting vertex until it reaches
// a sink. Phase 2 explores the tree breadth-first from the sink. A frontier
// edge is pruned only with a certificate that nothing beyond it can have
// modulus <= K (K >= L(mu)) or meet [-2, 2]:
//
//  * escape: both faces have modulus > K and the arrow points back. Each new
//    region beyond then satisfies |w| >= |x||y| / (2 + alpha) > K, and the
//    arrows beyond keep pointing back, inductively.
//  * boundary tail: one face X is small, the other is > K, and the closed
//    form of the neighbors of X shows every neighbor further along the
//    boundary of X has modulus > K. Everything beyond is then that tail plus
//    side branches whose two faces are > K, each covered by the escape case.
//
// When the frontier empties the explored regions of modulus <= K are all of
// them. Hitting a value in [-2, 2] or a degenerate value rejects.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "fourhole/algebra.hpp"
#include "fourhole/dynamics.hpp"
#include "fourhole/tree.hpp"

namespace fourhole {

struct Tolerances {
  double eps_segment = 1e-8;
  double eps_degenerate = 1e-8;
  double eps_tie = 0.0;
};

struct SearchBudget {
  std::int64_t max_descent_steps = 10000;
  std::int64_t max_vertices = 20000;
};

struct RegionRecord {
  Slope slope;
  Color color = Color::kOne;
  Complex value;
};

enum class RejectReason { kSegmentHit, kDegenerateHit, kSmallRay };

inline const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::kSegmentHit: return "segment_hit";
    case RejectReason::kDegenerateHit: return "degenerate_hit";
    case RejectReason::kSmallRay: return "small_ray";
  }
  return "?";
}

/// Statistics about the part of the attracting subtree the search saw.
struct AttractingTreeStats {
  bool sink_found = false;
  std::array<Slope, 3> sink_slopes{};
  /// Explored edges with a face of modulus <= 2 + alpha.
  std::int64_t edges_in_t0 = 0;
  std::vector<RegionRecord> regions_le_2alpha;
  /// Explored edges outside that set whose arrow points away from the sink.
  std::int64_t outward_arrows_outside_t0 = 0;
  bool arrows_point_inward = true;
};

struct SearchStats {
  std::int64_t descent_steps = 0;
  std::int64_t vertices_used = 0;
  std::int64_t escape_certified = 0;
  std::int64_t tail_certified = 0;
  /// Forks or sources whose smallest coordinate exceeds 2 + alpha.
  std::int64_t fork_bound_violations = 0;
  std::int64_t forks_checked = 0;
  /// The search reached slopes beyond 64-bit range and stopped.
  bool slope_overflow = false;
};

enum class VerdictKind { kAccepted, kRejected, kUndetermined };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::kAccepted: return "accepted";
    case VerdictKind::kRejected: return "rejected";
    case VerdictKind::kUndetermined: return "undetermined";
  }
  return "?";
}

struct BqVerdict {
  VerdictKind kind = VerdictKind::kUndetermined;
  /// Search level K; for bq_test this is L(mu).
  double level = 0.0;
  /// kAccepted: every region with modulus <= level, sorted by slope.
  std::vector<RegionRecord> omega;
  /// Every region seen during the search (accepted verdicts only).
  std::vector<RegionRecord> explored;
  RejectReason reason = RejectReason::kSegmentHit;
  RegionRecord witness;
  /// Set on degenerate rejections: a true BQ map within eps_degenerate of
  /// the degenerate locus would be rejected too.
  bool degenerate_caveat = false;
  std::int64_t vertices_used = 0;
  std::int64_t frontier_size = 0;
  SearchStats stats;
  AttractingTreeStats tree;
};

/// Everything about mu the search needs, computed once.
struct BqContext {
  MuParams mu;
  DerivedConstants constants;
  std::array<std::array<Complex, 4>, 3> degenerate_roots{};
  Tolerances tol;
  SearchBudget budget;

  BqContext(const MuParams& m, const Tolerances& t = {}, const SearchBudget& b = {})
      : mu(m), constants(derived_constants(m)), tol(t), budget(b) {
    if (t.eps_segment < 0 || t.eps_degenerate < 0 || t.eps_tie < 0) {
      throw Error(ErrorCode::kInvalidArgument, "tolerances must be non-negative");
    }
    if (b.max_descent_steps <= 0 || b.max_vertices <= 0) {
      throw Error(ErrorCode::kInvalidArgument, "budgets must be positive");
    }
    for (Color c : kColors) degenerate_roots[index_of(c)] = degenerate_data(m, c).roots;
  }

  double two_plus_alpha() const { return 2.0 + constants.alpha; }
};

inline bool in_segment(Complex v, double eps) {
  return std::abs(v.imag()) <= eps && v.real() >= -2.0 - eps && v.real() <= 2.0 + eps;
}

inline double distance_to_degenerate(const BqContext& ctx, Color color, Complex v) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& root : ctx.degenerate_roots[index_of(color)]) best = std::min(best, std::abs(v - root));
  return best;
}

/// Pruning certificate for an edge whose two faces are both large.
inline bool certify_escape(const DirectedEdgeInfo& edge, double level) {
  return std::abs(edge.faces[0].value) > level && std::abs(edge.faces[1].value) > level &&
         std::abs(edge.far_value) >= std::abs(edge.near_value);
}

namespace detail {

// Lower bound, valid for k >= 1, on |c_up rho^k + c_down rho^-k + center|
// style terms; increasing in k.
inline double tail_lower_bound(double c_up, double c_down, double rho, double center, int k) {
  const double up = std::pow(rho, k);
  const double down = 1.0 / up;
  return rho > 1.0 ? c_up * up - c_down * down - center : c_down * down - c_up * up - center;
}

}  // namespace detail

/// Pruning certificate for an edge running along the boundary of a small
/// region: every neighbor of that region past this edge has modulus > level.
inline bool certify_boundary_tail(const VertexState& v, Color color, double level) {
  const DirectedEdgeInfo e = edge_info(v, color);
  const double m0 = std::abs(e.faces[0].value);
  const double m1 = std::abs(e.faces[1].value);
  if ((m0 <= level) == (m1 <= level)) return false;
  const Face& small = m0 <= level ? e.faces[0] : e.faces[1];
  const Complex x = small.value;
  if (in_segment(x, 0.0) || near_parabolic(x)) return false;

  const Color cx = small.color;
  const Complex u0 = v.triple[next_color(cx)];
  const Complex w0 = v.triple[prev_color(cx)];
  const TwistSpectrum spec = twist_spectrum(x);
  const ConicCenter c = conic_center(x, v.mu, cx);
  const OrbitCoefficients ab = orbit_coefficients(x, u0, w0, v.mu, cx);
  const double rho = std::norm(spec.cap_lambda);
  if (!(std::abs(rho - 1.0) > 1e-12) || !std::isfinite(rho)) return false;
  const double lam = std::abs(spec.cap_lambda);
  const double a = std::abs(ab.a_coef);
  const double b = std::abs(ab.b_coef);
  const double cy = std::abs(c.frak_y);
  const double cz = std::abs(c.frak_z);
  // Rounding in A, B and the center.
  const double err = 1e-11 * (std::abs(u0) + std::abs(w0) + cy + cz + a + b) * std::max(rho, 1.0 / rho);
  const double need = level * (1.0 + 1e-9) + err;

  double lb_y, lb_z;
  if (color == next_color(cx)) {
    // Forward along the boundary: y_n, z_n for n >= 1.
    lb_y = detail::tail_lower_bound(a, b, rho, cy, 1);
    lb_z = detail::tail_lower_bound(a * lam, b / lam, rho, cz, 1);
  } else {
    // Backward: y_n, z_n for n <= -1.
    lb_y = detail::tail_lower_bound(b, a, rho, cy, 1);
    lb_z = detail::tail_lower_bound(b / lam, a * lam, rho, cz, 1);
  }
  return lb_y > need && lb_z > need;
}

enum class DescentOutcome { kSink, kRejected, kBudgetExceeded };

struct DescentResult {
  DescentOutcome outcome = DescentOutcome::kBudgetExceeded;
  VertexState vertex;
  RejectReason reason = RejectReason::kSegmentHit;
  RegionRecord witness;
  SearchStats stats;
  /// Smallest region seen on the way down.
  RegionRecord running_min;
};

namespace detail {

inline double log_plus(Complex v) { return std::max(0.0, std::log(std::abs(v))); }

inline bool check_region(const BqContext& ctx, const RegionRecord& region, RejectReason& reason) {
  if (in_segment(region.value, ctx.tol.eps_segment)) {
    reason = RejectReason::kSegmentHit;
    return false;
  }
  if (distance_to_degenerate(ctx, region.color, region.value) <= ctx.tol.eps_degenerate) {
    reason = RejectReason::kDegenerateHit;
    return false;
  }
  return true;
}

inline void check_fork_bound(const BqContext& ctx, const VertexState& v, SearchStats& stats) {
  const VertexKind kind = classify_vertex(v, ctx.tol.eps_tie);
  if (kind != VertexKind::kFork && kind != VertexKind::kSource) return;
  ++stats.forks_checked;
  const double smallest = std::min({std::abs(v.triple.x), std::abs(v.triple.y), std::abs(v.triple.z)});
  if (smallest > ctx.two_plus_alpha() * (1.0 + 1e-9)) ++stats.fork_bound_violations;
}

inline RegionRecord region_at(const VertexState& v, Color c) { return {v.slope(c), c, v.triple[c]}; }

}  // namespace detail

namespace detail {

inline void descend_impl(const VertexState& start, const BqContext& ctx, DescentResult& out) {
  out.vertex = start;
  out.running_min = detail::region_at(start, Color::kOne);
  for (Color c : kColors) {
    const RegionRecord region = detail::region_at(start, c);
    if (!detail::check_region(ctx, region, out.reason)) {
      out.outcome = DescentOutcome::kRejected;
      out.witness = region;
      return;
    }
    if (std::abs(region.value) < std::abs(out.running_min.value)) out.running_min = region;
  }

  VertexState& v = out.vertex;
  for (;;) {
    detail::check_fork_bound(ctx, v, out.stats);
    int best = -1;
    double best_score = std::numeric_limits<double>::infinity();
    for (Color c : kColors) {
      const DirectedEdgeInfo e = edge_info(v, c);
      if (!arrow_points_to_far(e, ctx.tol.eps_tie)) continue;
      MarkoffTriple moved = v.triple;
      moved[c] = e.far_value;
      const double score =
          std::max({detail::log_plus(moved.x), detail::log_plus(moved.y), detail::log_plus(moved.z)});
      if (score < best_score) {
        best_score = score;
        best = index_of(c);
      }
    }
    if (best < 0) {
      out.outcome = DescentOutcome::kSink;
      return;
    }
    if (out.stats.descent_steps >= ctx.budget.max_descent_steps) {
      if (std::abs(out.running_min.value) < 2.0) {
        out.outcome = DescentOutcome::kRejected;
        out.reason = RejectReason::kSmallRay;
        out.witness = out.running_min;
      } else {
        out.outcome = DescentOutcome::kBudgetExceeded;
      }
      return;
    }
    const Color c = color_at(best);
    v = step(v, c);
    ++out.stats.descent_steps;
    const RegionRecord region = detail::region_at(v, c);
    if (!detail::check_region(ctx, region, out.reason)) {
      out.outcome = DescentOutcome::kRejected;
      out.witness = region;
      return;
    }
    if (std::abs(region.value) < std::abs(out.running_min.value)) out.running_min = region;
  }
}

}  // namespace detail

/// Follows outgoing arrows, always taking the move that minimises the
/// largest log+ modulus of the new triple (ties: lowest color). Slopes past
/// 64-bit range end the descent as if the budget ran out.
inline DescentResult descend(const VertexState& start, const BqContext& ctx) {
  DescentResult out;
  try {
    detail::descend_impl(start, ctx, out);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSlopeOverflow) throw;
    out.stats.slope_overflow = true;
    if (std::abs(out.running_min.value) < 2.0) {
      out.outcome = DescentOutcome::kRejected;
      out.reason = RejectReason::kSmallRay;
      out.witness = out.running_min;
    } else {
      out.outcome = DescentOutcome::kBudgetExceeded;
    }
  }
  return out;
}

inline DescentResult descend(const VertexState& start, const Tolerances& tol = {}, const SearchBudget& budget = {}) {
  return descend(start, BqContext(start.mu, tol, budget));
}

/// Certified search at level `level` (>= L(mu)). Exposed for omega_k.
inline BqVerdict bq_search(const MarkoffTriple& t, const BqContext& ctx, double level) {
  require_finite(t, "bq_test");
  const double scale = residual_scale(t, ctx.mu);
  if (!(std::abs(vertex_residual(t, ctx.mu)) < 1e-6 * scale)) {
    throw Error(ErrorCode::kResidualTooLarge, "triple is not on the variety of mu");
  }
  level = std::max(level, ctx.constants.big_l);

  BqVerdict out;
  out.level = level;
  const DescentResult d = descend(base_state(t, ctx.mu), ctx);
  out.stats = d.stats;
  if (d.outcome == DescentOutcome::kRejected) {
    out.kind = VerdictKind::kRejected;
    out.reason = d.reason;
    out.witness = d.witness;
    out.degenerate_caveat = d.reason == RejectReason::kDegenerateHit;
    return out;
  }
  if (d.outcome == DescentOutcome::kBudgetExceeded) {
    out.kind = VerdictKind::kUndetermined;
    out.vertices_used = 0;
    out.frontier_size = 0;
    return out;
  }

  const double small = ctx.two_plus_alpha();
  out.tree.sink_found = true;
  out.tree.sink_slopes = d.vertex.slopes;

  std::map<Slope, RegionRecord> seen;
  for (Color c : kColors) seen.emplace(d.vertex.slope(c), detail::region_at(d.vertex, c));

  std::deque<std::pair<VertexState, Color>> frontier;
  for (Color c : kColors) frontier.emplace_back(d.vertex, c);
  std::int64_t vertices = 1;

  // Slopes past 64-bit range leave the verdict undetermined.
  const auto explore = [&] {
    while (!frontier.empty()) {
      auto [v, c] = frontier.front();
      frontier.pop_front();
      const DirectedEdgeInfo e = edge_info(v, c);
      if (certify_escape(e, level)) {
        ++out.stats.escape_certified;
        continue;
      }
      if (certify_boundary_tail(v, c, level)) {
        ++out.stats.tail_certified;
        continue;
      }
      if (vertices + 1 > ctx.budget.max_vertices) {
        out.kind = VerdictKind::kUndetermined;
        out.vertices_used = vertices;
        out.frontier_size = static_cast<std::int64_t>(frontier.size()) + 1;
        out.stats.vertices_used = vertices;
        return;
      }
      const VertexState w = step(v, c);
      ++vertices;
      const bool in_t0 = std::abs(e.faces[0].value) <= small || std::abs(e.faces[1].value) <= small;
      if (in_t0) {
        ++out.tree.edges_in_t0;
      } else if (arrow_points_to_far(e, ctx.tol.eps_tie)) {
        ++out.tree.outward_arrows_outside_t0;
      }
      const RegionRecord region = detail::region_at(w, c);
      RejectReason reason;
      if (!detail::check_region(ctx, region, reason)) {
        out.kind = VerdictKind::kRejected;
        out.reason = reason;
        out.witness = region;
        out.degenerate_caveat = reason == RejectReason::kDegenerateHit;
        out.vertices_used = vertices;
        out.stats.vertices_used = vertices;
        return;
      }
      seen.emplace(region.slope, region);
      detail::check_fork_bound(ctx, w, out.stats);
      frontier.emplace_back(w, next_color(c));
      frontier.emplace_back(w, prev_color(c));
    }

    out.kind = VerdictKind::kAccepted;
    out.vertices_used = vertices;
    out.stats.vertices_used = vertices;
    out.tree.arrows_point_inward = out.tree.outward_arrows_outside_t0 == 0;
    for (const auto& [slope, region] : seen) {
      out.explored.push_back(region);
      if (std::abs(region.value) <= level) out.omega.push_back(region);
      if (std::abs(region.value) <= small) out.tree.regions_le_2alpha.push_back(region);
    }
  };
  try {
    explore();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSlopeOverflow) throw;
    out.kind = VerdictKind::kUndetermined;
    out.omega.clear();
    out.explored.clear();
    out.stats.slope_overflow = true;
    out.vertices_used = vertices;
    out.stats.vertices_used = vertices;
    out.frontier_size = static_cast<std::int64_t>(frontier.size());
  }
  return out;
}

inline BqVerdict bq_test(const MarkoffTriple& t, const BqContext& ctx) {
  return bq_search(t, ctx, ctx.constants.big_l);
}

inline BqVerdict bq_test(const MarkoffTriple& t, const MuParams& mu, const Tolerances& tol = {},
                         const SearchBudget& budget = {}) {
  return bq_test(t, BqContext(mu, tol, budget));
}

/// Regions with modulus <= k, for a map that passes the BQ test. The search
/// runs at level max(k, L).
inline std::vector<RegionRecord> omega_k(const MarkoffTriple& t, const BqContext& ctx, double k) {
  const BqVerdict v = bq_search(t, ctx, k);
  if (v.kind != VerdictKind::kAccepted) {
    throw Error(ErrorCode::kNotBqAccepted, std::string("search verdict is ") + to_string(v.kind));
  }
  std::vector<RegionRecord> out;
  for (const auto& region : v.omega) {
    if (std::abs(region.value) <= k) out.push_back(region);
  }
  return out;
}

inline std::vector<RegionRecord> omega_k(const MarkoffTriple& t, const MuParams& mu, double k,
                                         const Tolerances& tol = {}, const SearchBudget& budget = {}) {
  return omega_k(t, BqContext(mu, tol, budget), k);
}

/// Whether the regions form a connected set, two regions being adjacent when
/// they share an edge (their slopes are Farey neighbors).
inline bool regions_connected(const std::vector<RegionRecord>& regions) {
  if (regions.size() <= 1) return true;
  std::vector<bool> reached(regions.size(), false);
  std::queue<std::size_t> todo;
  todo.push(0);
  reached[0] = true;
  std::size_t count = 1;
  while (!todo.empty()) {
    const std::size_t i = todo.front();
    todo.pop();
    for (std::size_t j = 0; j < regions.size(); ++j) {
      if (!reached[j] && farey_adjacent(regions[i].slope, regions[j].slope)) {
        reached[j] = true;
        ++count;
        todo.push(j);
      }
    }
  }
  return count == regions.size();
}

/// min over regions at Farey depth >= min_depth of log+|value| / F(slope).
/// Returns +inf when no region qualifies.
inline double min_fibonacci_ratio(const std::vector<RegionRecord>& regions, std::int64_t min_depth = 3) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& region : regions) {
    if (farey_depth(region.slope) < min_depth) continue;
    best = std::min(best, detail::log_plus(region.value) / static_cast<double>(fibonacci_weight(region.slope)));
  }
  return best;
}

}  // namespace fourhole
