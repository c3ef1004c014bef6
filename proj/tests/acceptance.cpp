// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fourhole/fourhole.hpp"
#include "oracles.hpp"

using namespace fourhole;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;
std::int64_t fork_violations = 0;
std::int64_t forks_checked = 0;

// Every search run here feeds the fork-bound tally used by criterion 7.
BqVerdict tallied(const MarkoffTriple& t, const MuParams& mu, const Tolerances& tol = {},
                  const SearchBudget& budget = {}) {
  BqVerdict v = bq_test(t, mu, tol, budget);
  fork_violations += v.stats.fork_bound_violations;
  forks_checked += v.stats.forks_checked;
  return v;
}

void criterion(int id, const char* name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs >= limit_seconds) {
    out.pass = false;
    out.detail += "; over time limit";
  }
  if (!out.pass) ++failures;
  std::printf("%s %2d %s: %s (%.2f s", out.pass ? "PASS" : "FAIL", id, name, out.detail.c_str(), secs);
  if (limit_seconds > 0) std::printf(" < %.0f s", limit_seconds);
  std::printf(")\n");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Complex solve_z(Complex x, Complex y, const MuParams& mu, bool plus = true) {
  const Complex b = x * y - mu.r;
  const Complex c = x * x + y * y - mu.p * x - mu.q * y - mu.s;
  const Complex d = std::sqrt(b * b - 4.0 * c);
  return plus ? (-b + d) / 2.0 : (-b - d) / 2.0;
}

Complex random_loxodromic(oracle::Rng& rng) {
  for (;;) {
    const Complex x = rng.complex(4.0);
    if (std::abs(x.imag()) > 0.05 || std::abs(x.real()) > 2.2) return x;
  }
}

// Quad-precision reals for the convergence check in criterion 2, where the
// divergent mode of the recurrence swamps double precision long before the
// convergent one reaches 1e-9.
using Quad = __float128;

Quad quad_sqrt(Quad v) {
  Quad r = std::sqrt(static_cast<double>(v));
  for (int k = 0; k < 4; ++k) r = (r + v / r) / 2;
  return r;
}

double qabs(Quad v) { return static_cast<double>(v < 0 ? -v : v); }

const std::vector<MuParams> kSeedParams = {{0, -1, -1, 4}, {0, -1, 0, 20}, {3, -2, -2, -5}};

// ---------------------------------------------------------------------------

Outcome kappa_factorization() {
  oracle::Rng rng(1);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const bool real = k % 2 == 0;
    const BoundaryTraces tau = real ? BoundaryTraces{rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-4, 4),
                                                     rng.uniform(-4, 4)}
                                    : BoundaryTraces{rng.complex(4), rng.complex(4), rng.complex(4), rng.complex(4)};
    const Quartic q = degenerate_quartic(gt_map(tau), Color::kOne);
    const auto want = oracle::minus_kappa_product(tau.a, tau.b, tau.c, tau.d);
    double scale = 0.0;
    for (const auto& c : want) scale = std::max(scale, std::abs(c));
    for (int i = 0; i < 5; ++i) worst = std::max(worst, std::abs(q[i] - want[i]) / scale);
  }
  return {worst < 1e-9, fmt("1000 tau, max rel coefficient error %.2e < 1e-9", worst)};
}

Outcome degenerate_example() {
  const MuParams mu{0, 0, 1, 20};
  const double s7 = std::sqrt(7.0);
  const double x = -std::sqrt(12 - 3 * s7);
  const double alpha = derived_constants(mu).alpha;
  std::string detail;
  bool pass = true;

  const double residual = std::abs(evaluate(degenerate_quartic(mu, Color::kOne), x));
  pass &= residual < 1e-12;
  detail += fmt("quartic residual %.1e", residual);

  const ConicCenter c = conic_center(x, mu, Color::kOne);
  const double want_z = 16 + 6 * s7, want_y = (8 + 3 * s7) * std::sqrt(12 - 3 * s7);
  const double center_err = std::max(std::abs(std::abs(c.frak_z) - want_z), std::abs(std::abs(c.frak_y) - want_y));
  pass &= center_err < 1e-9;
  detail += fmt(", center error %.1e", center_err);

  // Diagonal seed y0 = z0 on the conic: (2 + x) y^2 - y + x^2 - 20 = 0, the
  // root with |y0| > 33. Everything below is real.
  const Quad qx = -quad_sqrt(12 - 3 * quad_sqrt(7));
  const Quad a2 = 2 + qx, a0 = qx * qx - 20;
  const Quad disc = quad_sqrt(1 - 4 * a2 * a0);
  Quad y0 = (1 + disc) / (2 * a2);
  if (qabs(y0) <= 33) y0 = (1 - disc) / (2 * a2);
  pass &= qabs(y0) > 33;
  detail += fmt(", seed y0 = z0 = %.6f", static_cast<double>(y0));

  // Library neighbors (double) against the quad recurrence while double
  // precision still holds.
  const Quad cy = -qx / (4 - qx * qx), cz = 2 / (4 - qx * qx);
  double lib_err = 0.0;
  {
    Quad y = y0, z = y0;
    for (int n = 1; n <= 20; ++n) {
      y = 0 - qx * z - y;
      z = 1 - qx * y - z;
      const auto [ly, lz] = neighbor_sequence(x, static_cast<double>(y0), static_cast<double>(y0), mu, Color::kOne, n);
      lib_err = std::max({lib_err, oracle::rel_err(ly, static_cast<double>(y)),
                          oracle::rel_err(lz, static_cast<double>(z))});
    }
  }
  pass &= lib_err < 1e-8;
  detail += fmt(", library vs recurrence %.1e", lib_err);

  // Walk both directions; exactly one should settle on the center. 150 steps
  // shrink the convergent mode by 1e-16 while rounding in the divergent one
  // grows by about the inverse, still far below quad precision.
  int convergent = 0, small = 0;
  double final_gap = 0.0;
  for (int dir : {1, -1}) {
    Quad y = y0, z = y0;
    int small_here = 0;
    for (int n = 0; n < 150; ++n) {
      if (dir > 0) {
        y = 0 - qx * z - y;
        z = 1 - qx * y - z;
      } else {
        const Quad z_prev = 1 - qx * y - z;
        y = 0 - qx * z_prev - y;
        z = z_prev;
      }
      if (qabs(y) > 1e30) break;
      small_here += (qabs(y) <= 2 + alpha) + (qabs(z) <= 2 + alpha);
    }
    const double gap = std::max(qabs(y - cy), qabs(z - cz));
    if (gap < 1e-9) {
      ++convergent;
      small = small_here;
      final_gap = gap;
    }
  }
  pass &= convergent == 1 && small <= 1;
  detail += fmt(", convergent directions %.0f", convergent);
  detail += fmt(" (gap to center %.1e", final_gap);
  detail += fmt(", neighbors <= 2.5: %.0f)", small);
  return {pass, detail};
}

Outcome zero_linear_product() {
  oracle::Rng rng(3);
  double worst = 0.0;
  for (Complex s : {Complex(4), Complex(20), Complex(-7, 3)}) {
    const MuParams mu{0, 0, 0, s};
    for (int k = 0; k < 100; ++k) {
      const Complex x = random_loxodromic(rng);
      const Complex y0 = rng.complex(3);
      const Complex z0 = solve_z(x, y0, mu);
      const OrbitCoefficients ab = orbit_coefficients(x, y0, z0, mu, Color::kOne);
      const Complex want = (x * x - s) / (x * x - 4.0);
      worst = std::max(worst, std::abs(ab.a_coef * ab.b_coef - want) / std::max(1.0, std::abs(want)));
    }
  }
  return {worst < 1e-9, fmt("300 maps, max rel error of AB %.2e < 1e-9", worst)};
}

Outcome closed_form_vs_recurrence() {
  oracle::Rng rng(4);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    Complex x;
    do {
      x = random_loxodromic(rng);
    } while (std::abs(twist_spectrum(x).cap_lambda) > 1.6 || std::abs(twist_spectrum(x).cap_lambda) < 1 / 1.6);
    const MuParams mu{rng.complex(2), rng.complex(2), rng.complex(2), rng.complex(2)};
    const Color color = color_at(k % 3);
    const Complex y0 = rng.complex(2), z0 = rng.complex(2);
    Complex y = y0, z = z0;
    for (int n = 1; n <= 50; ++n) {
      std::tie(y, z) = oracle::recurrence(x, y, z, mu, color, 1);
      const auto [cy, cz] = neighbor_sequence(x, y0, z0, mu, color, n);
      worst = std::max({worst, oracle::rel_err(cy, y), oracle::rel_err(cz, z)});
    }
  }

  double growth = 0.0;
  for (int k = 0; k < 20; ++k) {
    const MuParams mu{rng.complex(0.5), rng.complex(0.5), rng.complex(0.5), rng.complex(2)};
    const Complex x = rng.uniform(-1.9, 1.9);
    Complex y = rng.complex(2), z = rng.complex(2);
    const double start = std::max(std::abs(y), std::abs(z));
    double top = start;
    for (int n = 0; n < 10000; ++n) {
      std::tie(y, z) = neighbor_step(x, y, z, mu, Color::kOne);
      top = std::max({top, std::abs(y), std::abs(z)});
    }
    growth = std::max(growth, top / std::max(start, 1.0));
  }

  bool constant = true;
  Complex y = 1.0, z = -1.0;
  for (int n = 0; n < 10000 && constant; ++n) {
    std::tie(y, z) = neighbor_step(2.0, y, z, {0, 0, 0, 4}, Color::kOne);
    constant = y == Complex(1.0) && z == Complex(-1.0);
  }
  const auto [fy, fz] = neighbor_sequence(2.0, 1.0, -1.0, {0, 0, 0, 4}, Color::kOne, 10000);
  constant &= fy == Complex(1.0) && fz == Complex(-1.0);

  const bool pass = worst < 1e-8 && growth < 10 && constant;
  std::string d = fmt("loxodromic max rel error %.2e < 1e-8", worst);
  d += fmt(", elliptic growth factor %.2f < 10", growth);
  d += constant ? ", parabolic fixed vector constant" : ", parabolic fixed vector moved";
  return {pass, d};
}

std::vector<std::pair<MuParams, RealSeed>> accepted_seeds;

Outcome seed_construction() {
  bool pass = true;
  std::string d;
  for (const MuParams& mu : kSeedParams) {
    const RealSeed seed = construct_real_seed(mu);
    const double residual = std::abs(vertex_residual(seed.triple, mu));
    const BqVerdict v = tallied(seed.triple, mu);
    const double level = 2 + derived_constants(mu).alpha;
    const auto omega = omega_k(seed.triple, mu, level);
    const bool singleton = omega.size() == 1 && omega[0].value == seed.triple[seed.small_color];
    const bool ok = residual < 1e-9 * seed.y * seed.y && v.kind == VerdictKind::kAccepted && singleton;
    pass &= ok;
    if (ok) accepted_seeds.emplace_back(mu, seed);
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s(%g,%g,%g,%g): residual %.1e, %s, |omega| %zu", d.empty() ? "" : "; ",
                  mu.p.real(), mu.q.real(), mu.r.real(), mu.s.real(), residual, to_string(v.kind), omega.size());
    d += buf;
  }
  return {pass, d};
}

Outcome segment_rejections() {
  oracle::Rng rng(6);
  int good = 0;
  for (int k = 0; k < 100; ++k) {
    const MuParams mu{rng.complex(3), rng.complex(3), rng.complex(3), rng.complex(3)};
    const Color c = color_at(static_cast<int>(rng.integer(0, 2)));
    const Complex x = rng.uniform(-2, 2), y = rng.complex(5);
    const Complex z = solve_z(x, y, mu.rotated_to(c));
    MarkoffTriple t;
    t[c] = x;
    t[next_color(c)] = y;
    t[prev_color(c)] = z;
    const BqVerdict v = tallied(t, mu);
    const bool witnessed = v.kind == VerdictKind::kRejected && v.reason == RejectReason::kSegmentHit &&
                           in_segment(v.witness.value, Tolerances{}.eps_segment) &&
                           std::abs(trace_at_slope(t, mu, v.witness.slope) - v.witness.value) <= 1e-9;
    good += witnessed;
  }
  return {good == 100, fmt("%.0f/100 rejected as segment_hit with verified witness", good)};
}

Outcome quasi_convexity() {
  bool connected = true;
  int sets = 0;
  for (const auto& [mu, seed] : accepted_seeds) {
    const DerivedConstants c = derived_constants(mu);
    for (double k : {2 + c.alpha, c.big_l, 2 * c.big_l}) {
      connected &= regions_connected(omega_k(seed.triple, mu, k));
      ++sets;
    }
  }
  const bool pass = connected && sets == 9 && fork_violations == 0;
  std::string d = fmt("%.0f omega sets connected", connected ? sets : 0);
  d += fmt(" of %.0f", 9);
  d += fmt(", fork-bound violations %.0f", static_cast<double>(fork_violations));
  d += fmt(" over %.0f forks checked", static_cast<double>(forks_checked));
  return {pass, d};
}

Outcome ergodicity_table() {
  const double edge = std::sqrt(2 * (1 + std::sqrt(5.0)));
  const struct {
    BoundaryTraces tau;
    ErgodicityVerdict want;
  } table[] = {
      {{0, 0, 0, 0}, ErgodicityVerdict::kErgodicWholeSlice},
      {{2.2, 2.2, 2.2, -2.2}, ErgodicityVerdict::kErgodicWholeSlice},
      {{2.6, 2.6, 2.6, -2.6}, ErgodicityVerdict::kHasDomainOfDiscontinuity},
      {{3, 3, 3, 3}, ErgodicityVerdict::kHasDomainOfDiscontinuity},
      {{edge, edge, edge, -edge}, ErgodicityVerdict::kErgodicWholeSlice},
  };
  int good = 0;
  for (const auto& row : table) good += ergodicity_decision(row.tau).verdict == row.want;
  const double s26 = ergodicity_decision({2.6, 2.6, 2.6, -2.6}).mu.s.real();
  const bool pass = good == 5 && std::abs(s26 - 22.6576) < 1e-3;
  std::string d = fmt("%.0f/5 rows match (boundary a = 2.54372 closed)", good);
  d += fmt(", s(2.6) = %.4f", s26);
  return {pass, d};
}

Outcome topology_table() {
  const struct {
    BoundaryTraces tau;
    TopologyCase want;
  } table[] = {
      {{3, 3, 3, -3}, TopologyCase::kQuadruplyPuncturedSphere},
      {{3, 3, 3, 3}, TopologyCase::kTriplyPuncturedTorusPlusDisc},
      {{1, 3, 3, 3}, TopologyCase::kTriplyPuncturedSpherePlusDisc},
      {{1, -2, 3, -5}, TopologyCase::kAnnulusPlusTwoDiscs},
      {{0, 1, 2, 7}, TopologyCase::kFourDiscs},
      {{1, 1, 1, 1}, TopologyCase::kFourDiscsPlusSphere},
  };
  int good = 0;
  for (const auto& row : table) good += classify_real(row.tau).topology == row.want;
  return {good == 6, fmt("%.0f/6 cases match", good)};
}

Outcome render_determinism() {
  const MuParams mu{0, -1, -1, 4};
  SliceSpec s;
  s.mu = mu;
  s.mode = PlaneMode::kLine;
  s.base = construct_real_seed(mu).triple;
  s.direction = {0.0, 1.0, 1.0};
  s.re_min = -70;
  s.re_max = -50;
  s.im_min = -10;
  s.im_max = 10;
  s.width = s.height = 64;
  const SliceGrid a = evaluate_slice(s, 1);
  const SliceGrid b = evaluate_slice(s, 1);
  const SliceGrid c = evaluate_slice(s, 8);
  const std::string pa = encode_ppm(a), pb = encode_ppm(b), pc = encode_ppm(c);
  const bool identical = pa == pb && pa == pc && a == b && a == c;

  int accepted = 0, verified = 0;
  for (int j = 0; j < s.height; ++j) {
    for (int i = 0; i < s.width; ++i) {
      if (a.at(i, j).kind != PixelKind::kAccepted) continue;
      ++accepted;
      const BqVerdict v = tallied(pixel_triple(s, i, j), mu, s.tol, s.budget);
      verified += v.kind == VerdictKind::kAccepted && v.vertices_used == a.at(i, j).depth;
    }
  }
  const bool pass = identical && accepted > 0 && verified == accepted;
  std::string d = identical ? "PPM byte-identical across runs and 1 vs 8 workers" : "PPM output differs";
  d += fmt(", %.0f accepted pixels", accepted);
  d += fmt(", %.0f re-verified", verified);
  return {pass, d};
}

}  // namespace

int main() {
  criterion(1, "kappa factorization", 1, kappa_factorization);
  criterion(2, "degenerate conic example", 1, degenerate_example);
  criterion(3, "AB product for mu = (0,0,0,s)", 0, zero_linear_product);
  criterion(4, "closed form vs recurrence", 0, closed_form_vs_recurrence);
  criterion(5, "real seed construction", 5, seed_construction);
  criterion(6, "segment rejection soundness", 0, segment_rejections);
  criterion(7, "quasi-convexity and fork bound", 0, quasi_convexity);
  criterion(8, "ergodicity table", 0, ergodicity_table);
  criterion(9, "topology table", 0, topology_table);
  criterion(10, "render determinism", 60, render_determinism);
  std::printf("%s: %d failure(s)\n", failures == 0 ? "ALL PASS" : "FAILED", failures);
  return failures == 0 ? 0 : 1;
}
