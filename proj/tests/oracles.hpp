#pragma once

// Independent reference computations used only by the tests.

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "fourhole/slope.hpp"
#include "fourhole/types.hpp"

namespace oracle {

using fourhole::Color;
using fourhole::Complex;
using fourhole::MarkoffTriple;
using fourhole::MuParams;
using fourhole::Slope;

/// kappa_{a,b}(x) = x^2 - ab x + a^2 + b^2 - 4, ascending coefficients.
inline std::array<Complex, 3> kappa(Complex a, Complex b) { return {a * a + b * b - 4.0, -a * b, 1.0}; }

/// -kappa_{a,b} kappa_{c,d}, ascending coefficients.
inline std::array<Complex, 5> minus_kappa_product(Complex a, Complex b, Complex c, Complex d) {
  const auto k1 = kappa(a, b);
  const auto k2 = kappa(c, d);
  std::array<Complex, 5> out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out[i + j] -= k1[i] * k2[j];
  }
  return out;
}

/// Weierstrass (Durand-Kerner) iteration on a monic-normalized polynomial.
inline std::vector<Complex> durand_kerner(std::vector<Complex> ascending) {
  const Complex lead = ascending.back();
  for (auto& c : ascending) c /= lead;
  const int n = static_cast<int>(ascending.size()) - 1;
  std::vector<Complex> z(n);
  for (int k = 0; k < n; ++k) z[k] = std::pow(Complex(0.4, 0.9), k);
  const auto eval = [&](Complex x) {
    Complex acc = 0.0;
    for (int k = n; k >= 0; --k) acc = acc * x + ascending[k];
    return acc;
  };
  for (int iter = 0; iter < 2000; ++iter) {
    for (int i = 0; i < n; ++i) {
      Complex denom = 1.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) denom *= z[i] - z[j];
      }
      if (std::abs(denom) > 0) z[i] -= eval(z[i]) / denom;
    }
  }
  return z;
}

inline Complex linear(const MuParams& mu, Color c) {
  return c == Color::kOne ? mu.p : (c == Color::kTwo ? mu.q : mu.r);
}

inline Color color_of(std::int64_t num, std::int64_t den) {
  if (num % 2 == 0) return Color::kOne;
  return den % 2 == 0 ? Color::kTwo : Color::kThree;
}

/// Values of every region with |num| + den <= height, built by closure over
/// the edge relation: if X, Y are adjacent with completions Z, W then
/// Z + W = lin(C(Z)) - XY. No tree walking.
inline std::map<Slope, Complex> region_values(const MarkoffTriple& t, const MuParams& mu, std::int64_t height) {
  std::map<Slope, Complex> known{{Slope(0, 1), t.x}, {Slope::infinity(), t.y}, {Slope(-1, 1), t.z}};
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::pair<Slope, Complex>> added;
    for (auto i = known.begin(); i != known.end(); ++i) {
      for (auto j = std::next(i); j != known.end(); ++j) {
        const Slope& u = i->first;
        const Slope& v = j->first;
        const __int128 det = static_cast<__int128>(u.num()) * v.den() - static_cast<__int128>(v.num()) * u.den();
        if (det != 1 && det != -1) continue;
        const Slope plus(u.num() + v.num(), u.den() + v.den());
        const Slope minus(u.num() - v.num(), u.den() - v.den());
        const bool has_plus = known.count(plus) > 0;
        const bool has_minus = known.count(minus) > 0;
        if (has_plus == has_minus) continue;
        const Slope& fresh = has_plus ? minus : plus;
        const Slope& other = has_plus ? plus : minus;
        if (std::abs(fresh.num()) + fresh.den() > height) continue;
        const Color c = color_of(fresh.num(), fresh.den());
        added.emplace_back(fresh, linear(mu, c) - i->second * j->second - known.at(other));
      }
    }
    for (const auto& [s, v] : added) grew |= known.emplace(s, v).second;
  }
  return known;
}

/// Color-1 neighbor recurrence written out for an arbitrary color.
inline std::pair<Complex, Complex> recurrence(Complex x, Complex y, Complex z, const MuParams& mu, Color color,
                                              int steps) {
  const Color a = color == Color::kOne ? Color::kTwo : (color == Color::kTwo ? Color::kThree : Color::kOne);
  const Color b = a == Color::kOne ? Color::kTwo : (a == Color::kTwo ? Color::kThree : Color::kOne);
  for (int k = 0; k < steps; ++k) {
    y = linear(mu, a) - x * z - y;
    z = linear(mu, b) - x * y - z;
  }
  return {y, z};
}

inline double rel_err(Complex got, Complex want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  Complex complex(double r) { return {uniform(-r, r), uniform(-r, r)}; }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen);
  }
};

}  // namespace oracle
