#pragma once

// Rasterized slices of the relative character variety. Each pixel is a point
// of the variety and is colored by its BQ verdict. Pixels are independent;
// workers pull rows from a shared counter and write disjoint cells of a
// preallocated grid, so the result does not depend on scheduling.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "fourhole/bq.hpp"

namespace fourhole {

enum class PlaneMode { kXyPlane, kLine };
enum class ZBranch { kPlus, kMinus };

/// Slice through the variety. The pixel parameter is the complex number
/// w = re + i*im sampled at pixel centers, top row at im_max.
///  * kXyPlane: x = x_fixed, y = w, z the root of
///    z^2 + (xy - r) z + (x^2 + y^2 - px - qy - s) = 0 on the chosen branch
///    (plus: (-b + sqrt(disc)) / 2 with the principal square root).
///  * kLine: x = base.x + w dir.x, y = base.y + w dir.y and z is the root of
///    the same quadratic nearest to base.z + w dir.z.
struct SliceSpec {
  MuParams mu;
  PlaneMode mode = PlaneMode::kXyPlane;
  Complex x_fixed;
  ZBranch z_branch = ZBranch::kPlus;
  MarkoffTriple base;
  std::array<Complex, 3> direction{};
  double re_min = -1.0, re_max = 1.0, im_min = -1.0, im_max = 1.0;
  int width = 1, height = 1;
  SearchBudget budget;
  Tolerances tol;
};

enum class PixelKind : std::uint8_t {
  kAccepted,
  kRejectedSegment,
  kRejectedDegenerate,
  kRejectedSmallRay,
  kUndetermined,
  kOffVariety,
};

inline const char* to_string(PixelKind k) {
  switch (k) {
    case PixelKind::kAccepted: return "accepted";
    case PixelKind::kRejectedSegment: return "rejected_segment";
    case PixelKind::kRejectedDegenerate: return "rejected_degenerate";
    case PixelKind::kRejectedSmallRay: return "rejected_small_ray";
    case PixelKind::kUndetermined: return "undetermined";
    case PixelKind::kOffVariety: return "off_variety";
  }
  return "?";
}

struct PixelVerdict {
  PixelKind kind = PixelKind::kOffVariety;
  std::int64_t depth = 0;

  bool operator==(const PixelVerdict&) const = default;
};

/// Row-major, top row first.
struct SliceGrid {
  int width = 0;
  int height = 0;
  std::vector<PixelVerdict> pixels;

  const PixelVerdict& at(int i, int j) const { return pixels[static_cast<std::size_t>(j) * width + i]; }
  bool operator==(const SliceGrid&) const = default;
};

inline void validate(const SliceSpec& spec) {
  if (spec.width < 1 || spec.height < 1) throw Error(ErrorCode::kInvalidSpec, "width and height must be >= 1");
  if (!(spec.re_min < spec.re_max) || !(spec.im_min < spec.im_max)) {
    throw Error(ErrorCode::kInvalidSpec, "window must satisfy re_min < re_max and im_min < im_max");
  }
  if (!spec.mu.finite()) throw Error(ErrorCode::kInvalidSpec, "non-finite parameters");
  if (spec.mode == PlaneMode::kXyPlane && !is_finite(spec.x_fixed)) {
    throw Error(ErrorCode::kInvalidSpec, "non-finite x");
  }
  if (spec.mode == PlaneMode::kLine) {
    if (!spec.base.finite()) throw Error(ErrorCode::kInvalidSpec, "non-finite base triple");
    for (const auto& d : spec.direction) {
      if (!is_finite(d)) throw Error(ErrorCode::kInvalidSpec, "non-finite direction");
    }
  }
}

inline Complex pixel_parameter(const SliceSpec& spec, int i, int j) {
  const double re = spec.re_min + (i + 0.5) * (spec.re_max - spec.re_min) / spec.width;
  const double im = spec.im_max - (j + 0.5) * (spec.im_max - spec.im_min) / spec.height;
  return {re, im};
}

/// Both roots of the monic z-quadratic, (plus, minus).
inline std::pair<Complex, Complex> z_roots(Complex x, Complex y, const MuParams& mu) {
  const Complex b = x * y - mu.r;
  const Complex c = x * x + y * y - mu.p * x - mu.q * y - mu.s;
  const Complex sq = std::sqrt(b * b - 4.0 * c);
  const Complex plus_num = -b + sq;
  const Complex minus_num = -b - sq;
  // The larger numerator is cancellation-free; the other root is c / it.
  if (std::abs(plus_num) >= std::abs(minus_num)) {
    const Complex plus = plus_num / 2.0;
    return {plus, plus == Complex(0.0) ? minus_num / 2.0 : c / plus};
  }
  const Complex minus = minus_num / 2.0;
  return {minus == Complex(0.0) ? plus_num / 2.0 : c / minus, minus};
}

/// The variety point sampled by pixel (i, j).
inline MarkoffTriple pixel_triple(const SliceSpec& spec, int i, int j) {
  const Complex w = pixel_parameter(spec, i, j);
  if (spec.mode == PlaneMode::kXyPlane) {
    const auto [plus, minus] = z_roots(spec.x_fixed, w, spec.mu);
    return {spec.x_fixed, w, spec.z_branch == ZBranch::kPlus ? plus : minus};
  }
  const Complex x = spec.base.x + w * spec.direction[0];
  const Complex y = spec.base.y + w * spec.direction[1];
  const Complex target = spec.base.z + w * spec.direction[2];
  const auto [plus, minus] = z_roots(x, y, spec.mu);
  return {x, y, std::abs(plus - target) <= std::abs(minus - target) ? plus : minus};
}

inline PixelVerdict to_pixel(const BqVerdict& v) {
  PixelVerdict out;
  out.depth = v.vertices_used;
  switch (v.kind) {
    case VerdictKind::kAccepted: out.kind = PixelKind::kAccepted; break;
    case VerdictKind::kUndetermined:
      out.kind = PixelKind::kUndetermined;
      out.depth = std::max<std::int64_t>(v.vertices_used, v.stats.descent_steps);
      break;
    case VerdictKind::kRejected:
      switch (v.reason) {
        case RejectReason::kSegmentHit: out.kind = PixelKind::kRejectedSegment; break;
        case RejectReason::kDegenerateHit: out.kind = PixelKind::kRejectedDegenerate; break;
        case RejectReason::kSmallRay: out.kind = PixelKind::kRejectedSmallRay; break;
      }
      break;
  }
  return out;
}

inline PixelVerdict evaluate_pixel(const SliceSpec& spec, const BqContext& ctx, int i, int j) {
  const MarkoffTriple t = pixel_triple(spec, i, j);
  if (!t.finite()) return {PixelKind::kOffVariety, 0};
  try {
    return to_pixel(bq_test(t, ctx));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kResidualTooLarge || e.code() == ErrorCode::kNonFiniteInput) {
      return {PixelKind::kOffVariety, 0};
    }
    throw;
  }
}

/// Worker count from FOURHOLE_THREADS, else the hardware concurrency.
inline int default_thread_count() {
  if (const char* env = std::getenv("FOURHOLE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline SliceGrid evaluate_slice(const SliceSpec& spec, int threads = 0) {
  validate(spec);
  const BqContext ctx(spec.mu, spec.tol, spec.budget);
  SliceGrid grid;
  grid.width = spec.width;
  grid.height = spec.height;
  grid.pixels.resize(static_cast<std::size_t>(spec.width) * spec.height);

  if (threads <= 0) threads = default_thread_count();
  threads = std::min(threads, spec.height);
  std::atomic<int> next_row{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (int j = next_row++; j < spec.height && !failed; j = next_row++) {
      try {
        for (int i = 0; i < spec.width; ++i) {
          grid.pixels[static_cast<std::size_t>(j) * spec.width + i] = evaluate_pixel(spec, ctx, i, j);
        }
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (int k = 0; k < threads; ++k) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return grid;
}

// ---------------------------------------------------------------------------
// Portable pixmap output

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

/// Undetermined pixels interpolate from undetermined_low (depth 0) to
/// undetermined_high (depth >= depth_scale).
struct Palette {
  Rgb accepted{255, 255, 255};
  Rgb rejected_segment{0, 0, 0};
  Rgb rejected_degenerate{0, 0, 255};
  Rgb rejected_small_ray{64, 64, 64};
  Rgb undetermined_low{0, 64, 0};
  Rgb undetermined_high{0, 255, 0};
  Rgb off_variety{255, 0, 0};
  std::int64_t depth_scale = 20000;
};

inline Rgb pixel_color(const PixelVerdict& p, const Palette& palette) {
  switch (p.kind) {
    case PixelKind::kAccepted: return palette.accepted;
    case PixelKind::kRejectedSegment: return palette.rejected_segment;
    case PixelKind::kRejectedDegenerate: return palette.rejected_degenerate;
    case PixelKind::kRejectedSmallRay: return palette.rejected_small_ray;
    case PixelKind::kOffVariety: return palette.off_variety;
    case PixelKind::kUndetermined: break;
  }
  const std::int64_t scale = std::max<std::int64_t>(1, palette.depth_scale);
  const std::int64_t d = std::clamp<std::int64_t>(p.depth, 0, scale);
  const auto lerp = [&](std::uint8_t lo, std::uint8_t hi) {
    return static_cast<std::uint8_t>(lo + (static_cast<std::int64_t>(hi) - lo) * d / scale);
  };
  return {lerp(palette.undetermined_low.r, palette.undetermined_high.r),
          lerp(palette.undetermined_low.g, palette.undetermined_high.g),
          lerp(palette.undetermined_low.b, palette.undetermined_high.b)};
}

/// "P6\n<w> <h>\n255\n" followed by 3 bytes per pixel, rows top to bottom.
inline std::string encode_ppm(const SliceGrid& grid, const Palette& palette = {}) {
  if (grid.width < 1 || grid.height < 1 || grid.pixels.size() != static_cast<std::size_t>(grid.width) * grid.height) {
    throw Error(ErrorCode::kInvalidArgument, "grid is empty or inconsistent");
  }
  std::string out = "P6\n" + std::to_string(grid.width) + " " + std::to_string(grid.height) + "\n255\n";
  out.reserve(out.size() + grid.pixels.size() * 3);
  for (const auto& p : grid.pixels) {
    const Rgb c = pixel_color(p, palette);
    out.push_back(static_cast<char>(c.r));
    out.push_back(static_cast<char>(c.g));
    out.push_back(static_cast<char>(c.b));
  }
  return out;
}

/// Writes to a temporary sibling and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::kIoFailure, "cannot open " + tmp.string());
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorCode::kIoFailure, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIoFailure, "cannot rename into " + path.string());
  }
}

/// Returns the number of bytes written.
inline std::size_t write_ppm(const SliceGrid& grid, const Palette& palette, const std::filesystem::path& path) {
  const std::string bytes = encode_ppm(grid, palette);
  write_file_atomic(path, bytes);
  return bytes.size();
}

}  // namespace fourhole
