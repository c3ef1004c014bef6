#pragma once

// Text and JSON forms of the library types, shared by the CLI and the render
// sidecar. Complex numbers are written as "re" or "re+imi" on the command
// line and as {"re": .., "im": ..} in JSON; JSON input accepts a number, a
// string or the object form.

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fourhole/algebra.hpp"
#include "fourhole/bq.hpp"
#include "fourhole/realcase.hpp"
#include "fourhole/render.hpp"

namespace fourhole {

using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_double(z.real());
  std::string im = format_double(z.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return format_double(z.real()) + im + "i";
}

namespace detail {

inline bool read_double(std::string_view& s, double& out) {
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto res = std::from_chars(first, s.data() + s.size(), out);
  if (res.ec != std::errc()) return false;
  s.remove_prefix(static_cast<std::size_t>(res.ptr - s.data()));
  return true;
}

}  // namespace detail

/// Parses "1.5", "-2i", "3+4i", "3-4e-2i", "i", "-i".
inline Complex parse_complex(std::string_view text) {
  const auto fail = [&] { return Error(ErrorCode::kInvalidArgument, "cannot parse complex '" + std::string(text) + "'"); };
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) throw fail();
  if (s == "i" || s == "+i") return {0.0, 1.0};
  if (s == "-i") return {0.0, -1.0};

  double first = 0.0;
  if (!detail::read_double(s, first)) throw fail();
  if (s.empty()) return {first, 0.0};
  if (s == "i") return {0.0, first};
  if (s.front() != '+' && s.front() != '-') throw fail();
  if (s == "+i") return {first, 1.0};
  if (s == "-i") return {first, -1.0};
  double second = 0.0;
  if (!detail::read_double(s, second) || s != "i") throw fail();
  return {first, second};
}

/// Comma-separated complex list of the given length.
inline std::vector<Complex> parse_complex_list(std::string_view text, std::size_t expected) {
  std::vector<Complex> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_complex(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.size() != expected) {
    throw Error(ErrorCode::kInvalidArgument, "expected " + std::to_string(expected) + " comma-separated values, got " +
                                                 std::to_string(out.size()));
  }
  return out;
}

inline MuParams mu_from_list(const std::vector<Complex>& v) { return {v.at(0), v.at(1), v.at(2), v.at(3)}; }
inline BoundaryTraces tau_from_list(const std::vector<Complex>& v) { return {v.at(0), v.at(1), v.at(2), v.at(3)}; }
inline MarkoffTriple triple_from_list(const std::vector<Complex>& v) { return {v.at(0), v.at(1), v.at(2)}; }

// ---------------------------------------------------------------------------
// JSON output

inline Json to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline Json to_json(const MuParams& mu) {
  return Json{{"p", to_json(mu.p)}, {"q", to_json(mu.q)}, {"r", to_json(mu.r)}, {"s", to_json(mu.s)}};
}

inline Json to_json(const BoundaryTraces& t) {
  return Json{{"a", to_json(t.a)}, {"b", to_json(t.b)}, {"c", to_json(t.c)}, {"d", to_json(t.d)}};
}

inline Json to_json(const MarkoffTriple& t) {
  return Json{{"x", to_json(t.x)}, {"y", to_json(t.y)}, {"z", to_json(t.z)}};
}

inline Json to_json(const RegionRecord& r) {
  return Json{{"slope", r.slope.to_string()}, {"color", index_of(r.color) + 1}, {"value", to_json(r.value)},
              {"modulus", std::abs(r.value)}};
}

inline Json to_json(const std::vector<RegionRecord>& regions) {
  Json out = Json::array();
  for (const auto& r : regions) out.push_back(to_json(r));
  return out;
}

inline Json to_json(const DerivedConstants& c) {
  return Json{{"alpha", c.alpha}, {"m", c.m}, {"big_m", c.big_m}, {"big_l", c.big_l}};
}

inline Json to_json(const DegenerateData& d) {
  Json roots = Json::array();
  for (const auto& r : d.roots) roots.push_back(to_json(r));
  Json quartic = Json::array();
  for (const auto& c : d.quartic) quartic.push_back(to_json(c));
  Json excl = Json::array();
  for (const auto& r : d.exclusions) excl.push_back(to_json(r));
  return Json{{"color", index_of(d.color) + 1}, {"quartic", quartic}, {"roots", roots}, {"exclusions", excl}};
}

inline Json to_json(const SearchStats& s) {
  return Json{{"descent_steps", s.descent_steps},       {"vertices_used", s.vertices_used},
              {"escape_certified", s.escape_certified}, {"tail_certified", s.tail_certified},
              {"forks_checked", s.forks_checked},       {"fork_bound_violations", s.fork_bound_violations},
              {"slope_overflow", s.slope_overflow}};
}

inline Json to_json(const BqVerdict& v) {
  Json out{{"verdict", to_string(v.kind)}, {"level", v.level}};
  if (v.kind == VerdictKind::kAccepted) {
    out["omega"] = to_json(v.omega);
    out["regions_le_2_plus_alpha"] = to_json(v.tree.regions_le_2alpha);
  } else if (v.kind == VerdictKind::kRejected) {
    out["reason"] = to_string(v.reason);
    out["witness"] = to_json(v.witness);
    out["degenerate_caveat"] = v.degenerate_caveat;
  } else {
    out["frontier_size"] = v.frontier_size;
  }
  out["vertices_used"] = v.vertices_used;
  out["stats"] = to_json(v.stats);
  return out;
}

inline Json to_json(const RealTopology& t) {
  return Json{{"n_in_segment", t.n_in_segment}, {"topology", to_string(t.topology)}, {"euler_note", t.euler_note}};
}

inline Json to_json(const ErgodicityDecision& d) {
  return Json{{"verdict", to_string(d.verdict)}, {"mu", to_json(d.mu)}, {"rationale", d.rationale}};
}

inline Json to_json(const RealSeed& s) {
  return Json{{"triple", to_json(s.triple)},     {"small_color", index_of(s.small_color) + 1},
              {"mirrored", s.mirrored},          {"epsilon", s.epsilon},
              {"y", s.y},                        {"monotone_conditions", s.monotone_conditions}};
}

inline Json rgb_json(const Rgb& c) { return Json::array({c.r, c.g, c.b}); }

inline Json to_json(const Palette& p) {
  return Json{{"accepted", rgb_json(p.accepted)},
              {"rejected_segment", rgb_json(p.rejected_segment)},
              {"rejected_degenerate", rgb_json(p.rejected_degenerate)},
              {"rejected_small_ray", rgb_json(p.rejected_small_ray)},
              {"undetermined_low", rgb_json(p.undetermined_low)},
              {"undetermined_high", rgb_json(p.undetermined_high)},
              {"off_variety", rgb_json(p.off_variety)},
              {"depth_scale", p.depth_scale}};
}

inline Json to_json(const Tolerances& t) {
  return Json{{"eps_segment", t.eps_segment}, {"eps_degenerate", t.eps_degenerate}, {"eps_tie", t.eps_tie}};
}

inline Json to_json(const SearchBudget& b) {
  return Json{{"max_descent_steps", b.max_descent_steps}, {"max_vertices", b.max_vertices}};
}

inline Json to_json(const SliceSpec& s) {
  Json out{{"mu", to_json(s.mu)}};
  if (s.mode == PlaneMode::kXyPlane) {
    out["mode"] = "xy_plane";
    out["x"] = to_json(s.x_fixed);
    out["z_branch"] = s.z_branch == ZBranch::kPlus ? "plus" : "minus";
  } else {
    out["mode"] = "line";
    out["base"] = to_json(s.base);
    out["direction"] = Json::array({to_json(s.direction[0]), to_json(s.direction[1]), to_json(s.direction[2])});
  }
  out["window"] = Json::array({s.re_min, s.re_max, s.im_min, s.im_max});
  out["width"] = s.width;
  out["height"] = s.height;
  out["budget"] = to_json(s.budget);
  out["tolerances"] = to_json(s.tol);
  return out;
}

/// Spec echo plus row-major per-pixel kind and depth arrays.
inline Json slice_sidecar(const SliceSpec& spec, const SliceGrid& grid, const Palette& palette) {
  Json kinds = Json::array();
  Json depths = Json::array();
  for (const auto& p : grid.pixels) {
    kinds.push_back(to_string(p.kind));
    depths.push_back(p.depth);
  }
  Json counts = Json::object();
  for (PixelKind k : {PixelKind::kAccepted, PixelKind::kRejectedSegment, PixelKind::kRejectedDegenerate,
                      PixelKind::kRejectedSmallRay, PixelKind::kUndetermined, PixelKind::kOffVariety}) {
    std::int64_t n = 0;
    for (const auto& p : grid.pixels) n += p.kind == k ? 1 : 0;
    counts[to_string(k)] = n;
  }
  return Json{{"spec", to_json(spec)}, {"palette", to_json(palette)}, {"counts", counts},
              {"kind", kinds},       {"depth", depths}};
}

// ---------------------------------------------------------------------------
// JSON input

inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (j.is_object() && j.contains("re")) {
    return {j.at("re").get<double>(), j.contains("im") ? j.at("im").get<double>() : 0.0};
  }
  throw Error(ErrorCode::kInvalidSpec, "expected a complex number, got " + j.dump());
}

/// Array of complex values, a comma-separated string, or an object such as
/// {"x": .., "y": .., "z": ..} read in key order (as written by to_json).
inline std::vector<Complex> complex_list_from_json(const Json& j, std::size_t expected) {
  if (j.is_string()) return parse_complex_list(j.get<std::string>(), expected);
  if (!(j.is_array() || j.is_object()) || j.size() != expected) {
    throw Error(ErrorCode::kInvalidSpec, "expected an array of " + std::to_string(expected) + " values");
  }
  std::vector<Complex> out;
  for (const auto& e : j) out.push_back(complex_from_json(e));
  return out;
}

inline Rgb rgb_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::kInvalidSpec, "color must be [r, g, b]");
  Rgb c;
  std::uint8_t* dst[3] = {&c.r, &c.g, &c.b};
  for (int k = 0; k < 3; ++k) {
    const int v = j[k].get<int>();
    if (v < 0 || v > 255) throw Error(ErrorCode::kInvalidSpec, "color component out of range");
    *dst[k] = static_cast<std::uint8_t>(v);
  }
  return c;
}

/// Overrides only the keys present.
inline void apply_json(Palette& p, const Json& j) {
  const std::pair<const char*, Rgb*> fields[] = {
      {"accepted", &p.accepted},
      {"rejected_segment", &p.rejected_segment},
      {"rejected_degenerate", &p.rejected_degenerate},
      {"rejected_small_ray", &p.rejected_small_ray},
      {"undetermined_low", &p.undetermined_low},
      {"undetermined_high", &p.undetermined_high},
      {"off_variety", &p.off_variety},
  };
  for (const auto& [key, dst] : fields) {
    if (j.contains(key)) *dst = rgb_from_json(j.at(key));
  }
  if (j.contains("depth_scale")) p.depth_scale = j.at("depth_scale").get<std::int64_t>();
}

inline void apply_json(Tolerances& t, const Json& j) {
  if (j.contains("eps_segment")) t.eps_segment = j.at("eps_segment").get<double>();
  if (j.contains("eps_degenerate")) t.eps_degenerate = j.at("eps_degenerate").get<double>();
  if (j.contains("eps_tie")) t.eps_tie = j.at("eps_tie").get<double>();
}

inline void apply_json(SearchBudget& b, const Json& j) {
  if (j.contains("max_descent_steps")) b.max_descent_steps = j.at("max_descent_steps").get<std::int64_t>();
  if (j.contains("max_vertices")) b.max_vertices = j.at("max_vertices").get<std::int64_t>();
}

/// Reads the "slice" block: mode, x, z_branch, base, direction, window,
/// width, height. mu, budget and tolerances are filled in by the caller.
inline void apply_json(SliceSpec& s, const Json& j) {
  if (j.contains("mode")) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "xy_plane") {
      s.mode = PlaneMode::kXyPlane;
    } else if (mode == "line") {
      s.mode = PlaneMode::kLine;
    } else {
      throw Error(ErrorCode::kInvalidSpec, "unknown slice mode '" + mode + "'");
    }
  }
  if (j.contains("x")) s.x_fixed = complex_from_json(j.at("x"));
  if (j.contains("z_branch")) {
    const std::string b = j.at("z_branch").get<std::string>();
    if (b != "plus" && b != "minus") throw Error(ErrorCode::kInvalidSpec, "z_branch must be plus or minus");
    s.z_branch = b == "plus" ? ZBranch::kPlus : ZBranch::kMinus;
  }
  if (j.contains("base")) s.base = triple_from_list(complex_list_from_json(j.at("base"), 3));
  if (j.contains("direction")) {
    const auto d = complex_list_from_json(j.at("direction"), 3);
    s.direction = {d[0], d[1], d[2]};
  }
  if (j.contains("window")) {
    const Json& w = j.at("window");
    if (!w.is_array() || w.size() != 4) throw Error(ErrorCode::kInvalidSpec, "window must be [re_min, re_max, im_min, im_max]");
    s.re_min = w[0].get<double>();
    s.re_max = w[1].get<double>();
    s.im_min = w[2].get<double>();
    s.im_max = w[3].get<double>();
  }
  if (j.contains("width")) s.width = j.at("width").get<int>();
  if (j.contains("height")) s.height = j.at("height").get<int>();
}

}  // namespace fourhole
