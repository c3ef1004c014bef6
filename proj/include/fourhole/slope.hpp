#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <string_view>

#include "fourhole/error.hpp"
#include "fourhole/types.hpp"

namespace fourhole {

/// Element of Q u {inf} in lowest terms with den >= 0; infinity is 1/0.
/// Complementary regions of the tree are labeled by slopes.
class Slope {
 public:
  constexpr Slope() = default;

  Slope(std::int64_t num, std::int64_t den) {
    if (num == 0 && den == 0) throw Error(ErrorCode::kInvalidArgument, "slope 0/0");
    if (den < 0 || (den == 0 && num < 0)) {
      if (num == INT64_MIN || den == INT64_MIN) throw Error(ErrorCode::kSlopeOverflow, "slope sign flip");
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  static Slope infinity() { return Slope(1, 0); }
  static Slope integer(std::int64_t n) { return Slope(n, 1); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_infinity() const { return den_ == 0; }

  /// Lexicographic on (num, den).
  auto operator<=>(const Slope&) const = default;

  std::string to_string() const {
    if (den_ == 0) return "inf";
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Accepts "p/q", "n", "inf" or "1/0".
  static Slope parse(std::string_view text) {
    if (text == "inf" || text == "infinity" || text == "oo") return infinity();
    const auto slash = text.find('/');
    try {
      const std::string head(text.substr(0, slash));
      std::size_t used = 0;
      const std::int64_t num = std::stoll(head, &used);
      if (used != head.size()) throw std::invalid_argument("trailing");
      std::int64_t den = 1;
      if (slash != std::string_view::npos) {
        const std::string tail(text.substr(slash + 1));
        den = std::stoll(tail, &used);
        if (used != tail.size()) throw std::invalid_argument("trailing");
      }
      return Slope(num, den);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kInvalidArgument, "cannot parse slope '" + std::string(text) + "'");
    }
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline __int128 determinant(const Slope& a, const Slope& b) {
  return static_cast<__int128>(a.num()) * b.den() - static_cast<__int128>(b.num()) * a.den();
}

/// Farey neighbors bound a common edge of the tree.
inline bool farey_adjacent(const Slope& a, const Slope& b) {
  const __int128 d = determinant(a, b);
  return d == 1 || d == -1;
}

/// Color of the region with this slope, read off the parities of (num, den):
/// 0/1 -> 1, 1/0 -> 2, 1/1 -> 3.
inline Color region_color(const Slope& s) {
  const bool num_odd = (s.num() % 2) != 0;
  const bool den_odd = (s.den() % 2) != 0;
  if (!num_odd) return Color::kOne;
  if (!den_odd) return Color::kTwo;
  return Color::kThree;
}

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw Error(ErrorCode::kSlopeOverflow, "slope arithmetic overflow");
  return out;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_sub_overflow(a, b, &out)) throw Error(ErrorCode::kSlopeOverflow, "slope arithmetic overflow");
  return out;
}

inline int sign(__int128 v) { return (v > 0) - (v < 0); }

}  // namespace detail

/// The two slopes completing the Farey edge (a, b) to a triangle: a+b, a-b.
inline std::pair<Slope, Slope> farey_completions(const Slope& a, const Slope& b) {
  return {Slope(detail::checked_add(a.num(), b.num()), detail::checked_add(a.den(), b.den())),
          Slope(detail::checked_sub(a.num(), b.num()), detail::checked_sub(a.den(), b.den()))};
}

/// Orientation of three distinct points of the projective line: +1 when
/// u -> v -> w runs in the positive direction of R u {inf}.
inline int cyclic_orientation(const Slope& u, const Slope& v, const Slope& w) {
  return detail::sign(determinant(u, v)) * detail::sign(determinant(v, w)) * detail::sign(determinant(w, u));
}

/// F_e for the base edge between the regions 0 and inf: 1 on those two
/// regions and additive over Farey parents, which gives |p| + q.
inline std::int64_t fibonacci_weight(const Slope& s) {
  return detail::checked_add(std::llabs(s.num()), s.den());
}

}  // namespace fourhole
