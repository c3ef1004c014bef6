#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "fourhole/error.hpp"

namespace fourhole {

using Complex = std::complex<double>;

// Regions and edges of the trivalent tree carry one of three colors. The
// coordinate of color i in a triple is the value of the region of color i.
enum class Color : int { kOne = 1, kTwo = 2, kThree = 3 };

constexpr std::array<Color, 3> kColors = {Color::kOne, Color::kTwo, Color::kThree};

constexpr int index_of(Color c) { return static_cast<int>(c) - 1; }
constexpr Color color_at(int index) { return static_cast<Color>(index % 3 + 1); }
/// Next color in the cyclic order 1 -> 2 -> 3 -> 1.
constexpr Color next_color(Color c) { return color_at(index_of(c) + 1); }
constexpr Color prev_color(Color c) { return color_at(index_of(c) + 2); }

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Parameters (p, q, r, s) of the vertex equation
/// x^2 + y^2 + z^2 + xyz = px + qy + rz + s.
struct MuParams {
  Complex p, q, r, s;

  /// p, q or r by color.
  Complex linear(Color c) const {
    switch (c) {
      case Color::kOne: return p;
      case Color::kTwo: return q;
      case Color::kThree: return r;
    }
    return p;
  }

  /// Relabels colors cyclically so that `c` plays the role of color 1:
  /// color 2 -> (q, r, p), color 3 -> (r, p, q).
  MuParams rotated_to(Color c) const {
    switch (c) {
      case Color::kOne: return *this;
      case Color::kTwo: return {q, r, p, s};
      case Color::kThree: return {r, p, q, s};
    }
    return *this;
  }

  bool finite() const { return is_finite(p) && is_finite(q) && is_finite(r) && is_finite(s); }
  bool real() const { return p.imag() == 0 && q.imag() == 0 && r.imag() == 0 && s.imag() == 0; }
};

/// Boundary traces (a, b, c, d) of the four-holed sphere.
struct BoundaryTraces {
  Complex a, b, c, d;

  bool finite() const { return is_finite(a) && is_finite(b) && is_finite(c) && is_finite(d); }
  bool real() const { return a.imag() == 0 && b.imag() == 0 && c.imag() == 0 && d.imag() == 0; }
};

/// Ordered triple; coordinate i carries color i. Permuting coordinates does
/// not give another solution of the same equation.
struct MarkoffTriple {
  Complex x, y, z;

  Complex& operator[](Color c) { return c == Color::kOne ? x : (c == Color::kTwo ? y : z); }
  const Complex& operator[](Color c) const {
    return c == Color::kOne ? x : (c == Color::kTwo ? y : z);
  }

  MarkoffTriple rotated_to(Color c) const {
    switch (c) {
      case Color::kOne: return *this;
      case Color::kTwo: return {y, z, x};
      case Color::kThree: return {z, x, y};
    }
    return *this;
  }

  bool finite() const { return is_finite(x) && is_finite(y) && is_finite(z); }
  bool operator==(const MarkoffTriple&) const = default;
};

inline void require_finite(const MuParams& mu, const char* where) {
  if (!mu.finite()) throw Error(ErrorCode::kNonFiniteInput, std::string(where) + ": non-finite parameters");
}

inline void require_finite(const MarkoffTriple& t, const char* where) {
  if (!t.finite()) throw Error(ErrorCode::kNonFiniteInput, std::string(where) + ": non-finite triple");
}

}  // namespace fourhole
