// fourhole: command-line access to the Markoff-map tools.
//
//   fourhole trace     --mu .. --triple .. --slope p/q
//   fourhole bq        --mu .. --triple ..
//   fourhole omega     --mu .. --triple .. --k K
//   fourhole slice     --config slice.json [--ppm out.ppm] [--sidecar out.json]
//   fourhole classify  --tau a,b,c,d
//   fourhole seed      --mu .. [--y Y]
//   fourhole constants --mu ..
//
// Every command takes --json, --config FILE and the tolerance/budget
// overrides. Flags win over the config file. Exit status: 0 success,
// 2 invalid input, 3 undetermined (bq, and slice with a single pixel),
// 1 anything else.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "fourhole/fourhole.hpp"
#include "fourhole/json_io.hpp"

namespace {

using namespace fourhole;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitUndetermined = 3;

struct Options {
  std::string config;
  std::string mu, tau, triple, slope;
  std::optional<double> k, y;
  bool json = false;

  std::optional<double> eps_segment, eps_degenerate, eps_tie;
  std::optional<std::int64_t> max_descent_steps, max_vertices;

  std::string mode, x, z_branch, base, direction, window;
  std::optional<int> width, height, threads;
  std::string ppm, sidecar;
};

// Parameters as given on the command line or in the config, plus where mu
// came from.
struct Inputs {
  Json config = Json::object();
  MuParams mu;
  std::optional<BoundaryTraces> tau;
  Tolerances tol;
  SearchBudget budget;
};

Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::kIoFailure, "cannot read config " + path);
  Json j = Json::parse(f);
  if (!j.is_object()) throw Error(ErrorCode::kInvalidSpec, "config must be a JSON object");
  return j;
}

std::vector<Complex> list_from(const std::string& flag, const Json& config, const char* key, std::size_t n) {
  if (!flag.empty()) return parse_complex_list(flag, n);
  return complex_list_from_json(config.at(key), n);
}

bool has(const std::string& flag, const Json& config, const char* key) {
  return !flag.empty() || config.contains(key);
}

Inputs resolve(const Options& o, bool need_mu) {
  Inputs in;
  in.config = load_config(o.config);
  const bool has_mu = has(o.mu, in.config, "mu");
  const bool has_tau = has(o.tau, in.config, "tau");
  if (has_mu && has_tau) throw Error(ErrorCode::kInvalidArgument, "give either mu or tau, not both");
  if (has_tau) {
    in.tau = tau_from_list(list_from(o.tau, in.config, "tau", 4));
    in.mu = gt_map(*in.tau);
  } else if (has_mu) {
    in.mu = mu_from_list(list_from(o.mu, in.config, "mu", 4));
  } else if (need_mu) {
    throw Error(ErrorCode::kInvalidArgument, "one of --mu or --tau is required");
  }
  if (in.config.contains("tolerances")) apply_json(in.tol, in.config.at("tolerances"));
  if (in.config.contains("budget")) apply_json(in.budget, in.config.at("budget"));
  if (o.eps_segment) in.tol.eps_segment = *o.eps_segment;
  if (o.eps_degenerate) in.tol.eps_degenerate = *o.eps_degenerate;
  if (o.eps_tie) in.tol.eps_tie = *o.eps_tie;
  if (o.max_descent_steps) in.budget.max_descent_steps = *o.max_descent_steps;
  if (o.max_vertices) in.budget.max_vertices = *o.max_vertices;
  return in;
}

MarkoffTriple triple_of(const Options& o, const Inputs& in) {
  if (!has(o.triple, in.config, "triple")) throw Error(ErrorCode::kInvalidArgument, "--triple is required");
  return triple_from_list(list_from(o.triple, in.config, "triple", 3));
}

Json header(const Inputs& in) {
  Json out = Json::object();
  if (in.tau) out["tau"] = to_json(*in.tau);
  out["mu"] = to_json(in.mu);
  return out;
}

void emit(const Options& o, const Json& j, const std::string& text) {
  if (o.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

std::string mu_line(const Inputs& in) {
  std::ostringstream s;
  if (in.tau) {
    s << "tau " << format_complex(in.tau->a) << "," << format_complex(in.tau->b) << ","
      << format_complex(in.tau->c) << "," << format_complex(in.tau->d) << "\n";
  }
  s << "mu " << format_complex(in.mu.p) << "," << format_complex(in.mu.q) << "," << format_complex(in.mu.r) << ","
    << format_complex(in.mu.s) << "\n";
  return s.str();
}

std::string region_line(const RegionRecord& r) {
  return r.slope.to_string() + " (color " + std::to_string(index_of(r.color) + 1) + ") " +
         format_complex(r.value) + "  |" + format_double(std::abs(r.value)) + "|";
}

std::string verdict_text(const BqVerdict& v) {
  std::ostringstream s;
  switch (v.kind) {
    case VerdictKind::kAccepted:
      s << "accepted\n"
        << "level " << format_double(v.level) << "\n"
        << "vertices " << v.vertices_used << "\n"
        << "omega " << v.omega.size() << " region(s)\n";
      for (const auto& r : v.omega) s << "  " << region_line(r) << "\n";
      break;
    case VerdictKind::kRejected:
      s << "rejected(" << to_string(v.reason) << ")\n"
        << "witness " << region_line(v.witness) << "\n";
      if (v.degenerate_caveat) s << "caveat: within eps_degenerate of the degenerate locus\n";
      break;
    case VerdictKind::kUndetermined:
      s << "undetermined\n"
        << "vertices " << v.vertices_used << "\n"
        << "frontier " << v.frontier_size << "\n";
      if (v.stats.slope_overflow) s << "slopes left 64-bit range\n";
      break;
  }
  return s.str();
}

// ---------------------------------------------------------------------------
// Commands

int run_trace(const Options& o) {
  const Inputs in = resolve(o, true);
  const MarkoffTriple t = triple_of(o, in);
  std::string slope_text = o.slope;
  if (slope_text.empty() && in.config.contains("slope")) slope_text = in.config.at("slope").get<std::string>();
  if (slope_text.empty()) throw Error(ErrorCode::kInvalidArgument, "--slope is required");
  const Slope slope = Slope::parse(slope_text);
  const Complex value = trace_at_slope(t, in.mu, slope);
  Json j = header(in);
  j["triple"] = to_json(t);
  j["slope"] = slope.to_string();
  j["color"] = index_of(region_color(slope)) + 1;
  j["value"] = to_json(value);
  emit(o, j, mu_line(in) + "slope " + slope.to_string() + "\nvalue " + format_complex(value) + "\n");
  return kExitOk;
}

int run_bq(const Options& o) {
  const Inputs in = resolve(o, true);
  const MarkoffTriple t = triple_of(o, in);
  const BqVerdict v = bq_test(t, in.mu, in.tol, in.budget);
  Json j = header(in);
  j["triple"] = to_json(t);
  j["result"] = to_json(v);
  emit(o, j, mu_line(in) + verdict_text(v));
  return v.kind == VerdictKind::kUndetermined ? kExitUndetermined : kExitOk;
}

int run_omega(const Options& o) {
  const Inputs in = resolve(o, true);
  const MarkoffTriple t = triple_of(o, in);
  double k = 2.0 + derived_constants(in.mu).alpha;
  if (o.k) {
    k = *o.k;
  } else if (in.config.contains("k")) {
    k = in.config.at("k").get<double>();
  }
  if (!(k >= 0) || !std::isfinite(k)) throw Error(ErrorCode::kInvalidArgument, "k must be finite and >= 0");
  const auto regions = omega_k(t, BqContext(in.mu, in.tol, in.budget), k);
  Json j = header(in);
  j["triple"] = to_json(t);
  j["k"] = k;
  j["regions"] = to_json(regions);
  j["connected"] = regions_connected(regions);
  std::ostringstream s;
  s << mu_line(in) << "k " << format_double(k) << "\n" << regions.size() << " region(s)\n";
  for (const auto& r : regions) s << "  " << region_line(r) << "\n";
  emit(o, j, s.str());
  return kExitOk;
}

int run_slice(const Options& o) {
  const Inputs in = resolve(o, true);
  SliceSpec spec;
  spec.mu = in.mu;
  spec.tol = in.tol;
  spec.budget = in.budget;
  Palette palette;
  const Json& cfg = in.config;
  bool base_is_seed = false;
  if (cfg.contains("slice")) {
    Json block = cfg.at("slice");
    if (block.contains("base") && block.at("base") == "seed") {
      base_is_seed = true;
      block.erase("base");
    }
    apply_json(spec, block);
  }
  if (cfg.contains("palette")) apply_json(palette, cfg.at("palette"));

  if (!o.mode.empty()) apply_json(spec, Json{{"mode", o.mode}});
  if (!o.x.empty()) spec.x_fixed = parse_complex(o.x);
  if (!o.z_branch.empty()) apply_json(spec, Json{{"z_branch", o.z_branch}});
  if (o.base == "seed") {
    base_is_seed = true;
  } else if (!o.base.empty()) {
    base_is_seed = false;
    spec.base = triple_from_list(parse_complex_list(o.base, 3));
  }
  if (base_is_seed) spec.base = construct_real_seed(in.mu).triple;
  if (!o.direction.empty()) {
    const auto d = parse_complex_list(o.direction, 3);
    spec.direction = {d[0], d[1], d[2]};
  }
  if (!o.window.empty()) {
    const auto w = parse_complex_list(o.window, 4);
    for (const auto& c : w) {
      if (c.imag() != 0) throw Error(ErrorCode::kInvalidSpec, "window entries must be real");
    }
    spec.re_min = w[0].real();
    spec.re_max = w[1].real();
    spec.im_min = w[2].real();
    spec.im_max = w[3].real();
  }
  if (o.width) spec.width = *o.width;
  if (o.height) spec.height = *o.height;

  int threads = 0;
  if (o.threads) {
    threads = *o.threads;
  } else if (cfg.contains("threads")) {
    threads = cfg.at("threads").get<int>();
  }
  if (threads < 0) throw Error(ErrorCode::kInvalidArgument, "--threads must be >= 0");

  std::string ppm = o.ppm, sidecar = o.sidecar;
  if (cfg.contains("output")) {
    const Json& out = cfg.at("output");
    if (ppm.empty() && out.contains("ppm")) ppm = out.at("ppm").get<std::string>();
    if (sidecar.empty() && out.contains("sidecar")) sidecar = out.at("sidecar").get<std::string>();
  }

  const SliceGrid grid = evaluate_slice(spec, threads);
  const Json side = slice_sidecar(spec, grid, palette);
  std::size_t ppm_bytes = 0;
  if (!ppm.empty()) ppm_bytes = write_ppm(grid, palette, ppm);
  if (!sidecar.empty()) write_file_atomic(sidecar, side.dump(2) + "\n");

  Json j = header(in);
  j["spec"] = side.at("spec");
  j["counts"] = side.at("counts");
  if (!ppm.empty()) j["ppm"] = {{"path", ppm}, {"bytes", ppm_bytes}};
  if (!sidecar.empty()) j["sidecar"] = sidecar;
  std::ostringstream s;
  s << mu_line(in) << spec.width << "x" << spec.height << " pixels\n";
  for (const auto& [kind, n] : side.at("counts").items()) s << "  " << kind << " " << n.get<std::int64_t>() << "\n";
  if (!ppm.empty()) s << "wrote " << ppm << " (" << ppm_bytes << " bytes)\n";
  if (!sidecar.empty()) s << "wrote " << sidecar << "\n";
  emit(o, j, s.str());
  const bool single = grid.pixels.size() == 1;
  return single && grid.pixels[0].kind == PixelKind::kUndetermined ? kExitUndetermined : kExitOk;
}

int run_classify(const Options& o) {
  Inputs in = resolve(o, false);
  if (!in.tau) throw Error(ErrorCode::kInvalidArgument, "classify needs --tau");
  const RealTopology topo = classify_real(*in.tau);
  const ErgodicityDecision erg = ergodicity_decision(*in.tau);
  Json j = header(in);
  j["topology"] = to_json(topo);
  j["ergodicity"] = to_json(erg);
  std::ostringstream s;
  s << mu_line(in) << "n_in_segment " << topo.n_in_segment << "\n"
    << "topology " << to_string(topo.topology) << "\n"
    << "euler " << topo.euler_note << "\n"
    << "action " << to_string(erg.verdict) << "\n"
    << "  " << erg.rationale << "\n";
  emit(o, j, s.str());
  return kExitOk;
}

int run_seed(const Options& o) {
  const Inputs in = resolve(o, true);
  std::optional<double> y = o.y;
  if (!y && in.config.contains("y")) y = in.config.at("y").get<double>();
  const RealSeed seed = y ? construct_real_seed(in.mu, *y) : construct_real_seed(in.mu);
  const BqVerdict v = bq_test(seed.triple, in.mu, in.tol, in.budget);
  Json j = header(in);
  j["seed"] = to_json(seed);
  j["result"] = to_json(v);
  std::ostringstream s;
  s << mu_line(in) << "triple " << format_complex(seed.triple.x) << "," << format_complex(seed.triple.y) << ","
    << format_complex(seed.triple.z) << "\n"
    << "small color " << index_of(seed.small_color) + 1 << (seed.mirrored ? " (mirrored)" : "") << "\n"
    << "epsilon " << format_double(seed.epsilon) << "\n"
    << "y " << format_double(seed.y) << "\n"
    << verdict_text(v);
  emit(o, j, s.str());
  return kExitOk;
}

int run_constants(const Options& o) {
  const Inputs in = resolve(o, true);
  const DerivedConstants c = derived_constants(in.mu);
  Json j = header(in);
  j["constants"] = to_json(c);
  Json degenerate = Json::array();
  std::ostringstream s;
  s << mu_line(in) << "alpha " << format_double(c.alpha) << "\n"
    << "m " << format_double(c.m) << "\n"
    << "M " << format_double(c.big_m) << "\n"
    << "L " << format_double(c.big_l) << "\n";
  for (Color col : kColors) {
    const DegenerateData d = degenerate_data(in.mu, col);
    degenerate.push_back(to_json(d));
    s << "S_mu color " << index_of(col) + 1 << ":";
    for (const auto& r : d.roots) s << " " << format_complex(r);
    s << "\n";
  }
  j["degenerate"] = degenerate;
  emit(o, j, s.str());
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonFiniteInput:
    case ErrorCode::kResidualTooLarge:
    case ErrorCode::kNonRealInput:
    case ErrorCode::kSeedNotAvailable:
    case ErrorCode::kInvalidSpec:
    case ErrorCode::kInvalidArgument:
      return kExitInvalid;
    default:
      return kExitFailure;
  }
}

void report(const Options& o, std::string_view code, const std::string& message) {
  if (o.json) {
    std::cerr << Json{{"error", {{"code", code}, {"message", message}}}}.dump() << "\n";
  } else {
    std::cerr << "fourhole: error [" << code << "] " << message << "\n";
  }
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "JSON config file");
  cmd->add_option("--mu", o.mu, "p,q,r,s (complex as re or re+imi)");
  cmd->add_option("--tau", o.tau, "boundary traces a,b,c,d");
  cmd->add_flag("--json", o.json, "print JSON");
  cmd->add_option("--eps-segment", o.eps_segment);
  cmd->add_option("--eps-degenerate", o.eps_degenerate);
  cmd->add_option("--eps-tie", o.eps_tie);
  cmd->add_option("--max-descent-steps", o.max_descent_steps);
  cmd->add_option("--max-vertices", o.max_vertices);
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Markoff maps on the four-holed sphere"};
  app.require_subcommand(1);

  auto* trace = app.add_subcommand("trace", "value of one region");
  add_common(trace, o);
  trace->add_option("--triple", o.triple, "x,y,z");
  trace->add_option("--slope", o.slope, "p/q or inf");

  auto* bq = app.add_subcommand("bq", "BQ test");
  add_common(bq, o);
  bq->add_option("--triple", o.triple, "x,y,z");

  auto* omega = app.add_subcommand("omega", "regions with modulus <= k");
  add_common(omega, o);
  omega->add_option("--triple", o.triple, "x,y,z");
  omega->add_option("--k", o.k, "level (default 2 + alpha)");

  auto* slice = app.add_subcommand("slice", "render a slice to PPM");
  add_common(slice, o);
  slice->add_option("--mode", o.mode, "xy_plane or line");
  slice->add_option("--x", o.x, "fixed x (xy_plane)");
  slice->add_option("--z-branch", o.z_branch, "plus or minus (xy_plane)");
  slice->add_option("--base", o.base, "x,y,z or 'seed' (line)");
  slice->add_option("--direction", o.direction, "dx,dy,dz (line)");
  slice->add_option("--window", o.window, "re_min,re_max,im_min,im_max");
  slice->add_option("--width", o.width);
  slice->add_option("--height", o.height);
  slice->add_option("--threads", o.threads, "workers (default FOURHOLE_THREADS or all cores)");
  slice->add_option("--ppm", o.ppm, "output image");
  slice->add_option("--sidecar", o.sidecar, "output JSON with per-pixel verdicts");

  auto* classify = app.add_subcommand("classify", "topology and dynamics of a real slice");
  add_common(classify, o);

  auto* seed = app.add_subcommand("seed", "explicit real triple passing the BQ test");
  add_common(seed, o);
  seed->add_option("--y", o.y, "height of the two large coordinates");

  auto* constants = app.add_subcommand("constants", "alpha, m, M, L and the degenerate values");
  add_common(constants, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    report(o, "InvalidArgument", e.what());
    return kExitInvalid;
  }

  try {
    if (*trace) return run_trace(o);
    if (*bq) return run_bq(o);
    if (*omega) return run_omega(o);
    if (*slice) return run_slice(o);
    if (*classify) return run_classify(o);
    if (*seed) return run_seed(o);
    if (*constants) return run_constants(o);
  } catch (const Error& e) {
    const std::string what = e.what();
    const std::string_view name = error_code_name(e.code());
    report(o, name, what.substr(std::min(what.size(), name.size() + 2)));
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    report(o, "InvalidSpec", e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    report(o, "Internal", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}
