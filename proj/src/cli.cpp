#include "frameweave/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <random>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "frameweave/errors.hpp"
#include "frameweave/report.hpp"

namespace frameweave {

namespace {

struct Outcome {
  Json certificate = Json::object();
  Json tolerances = Json::object();
  std::string summary;
  bool certified = true;
  std::vector<std::pair<std::string, std::string>> csv;  // file name, content
};

Json pattern_json(const PatternSpec& p) {
  return Json{{"kind", p.kind},
              {"value", p.value},
              {"first", p.first},
              {"choices", p.choices},
              {"window_first", p.window_first},
              {"window_last", p.window_last}};
}

Json resolved_inputs(const RunConfig& c) {
  const auto& g = c.generator;
  return Json{
      {"generator",
       {{"kind", g.kind},
        {"alpha", g.alpha},
        {"cutoff", g.cutoff},
        {"lo", g.lo},
        {"hi", g.hi},
        {"height", g.height},
        {"length", g.length}}},
      {"system", {{"a", c.a}, {"b", c.b}, {"N", c.N}}},
      {"pattern", pattern_json(c.pattern)},
      {"fallback", pattern_json(c.fallback)},
      {"sweep",
       {{"grid_points", c.grid_points},
        {"refine_points", c.refine_points},
        {"tail_relative", c.tail_relative}}},
      {"weave", {{"window_first", c.window.first}, {"window_last", c.window.last}}},
      {"signal",
       {{"J_hi", c.J_hi}, {"intervals", c.intervals}, {"m_lo", c.m_lo}, {"m_hi", c.m_hi},
        {"mode", c.mode}}},
      {"erasure",
       {{"erased", c.erased},
        {"period", c.erased_period ? Json(*c.erased_period) : Json(nullptr)}}},
      {"packet",
       {{"file", c.packet_file},
        {"sizes", c.sizes},
        {"trials", c.trials},
        {"ambient", c.ambient},
        {"subspaces", c.subspaces},
        {"dim", c.dim}}},
      {"count", c.count},
      {"seed", c.seed}};
}

SweepOptions sweep_options(const RunConfig& c) {
  SweepOptions o;
  o.grid_points = c.grid_points;
  o.refine_points = c.refine_points;
  o.tail_relative = c.tail_relative;
  return o;
}

SystemParams system_params(const RunConfig& c) { return SystemParams{c.a, c.b, c.N}; }

/// A_analytic ≤ L_weave ≤ A_num ≤ B_num ≤ U_weave ≤ B_analytic over the
/// entries that are present.
Json ordering_chain(const BoundsCertificate& cert, double tol) {
  std::vector<std::pair<std::string, double>> chain;
  if (cert.A_analytic) chain.emplace_back("A_analytic", *cert.A_analytic);
  if (cert.L_weave) chain.emplace_back("L_weave", *cert.L_weave);
  chain.emplace_back("A_num", cert.A_num);
  chain.emplace_back("B_num", cert.B_num);
  if (cert.U_weave) chain.emplace_back("U_weave", *cert.U_weave);
  if (cert.B_analytic) chain.emplace_back("B_analytic", *cert.B_analytic);
  bool holds = true;
  Json names = Json::array();
  for (std::size_t i = 0; i < chain.size(); ++i) {
    names.push_back(chain[i].first);
    if (i > 0 && chain[i - 1].second > chain[i].second + tol) holds = false;
  }
  return Json{{"order", names}, {"holds", holds}, {"tolerance", tol}};
}

Outcome cmd_bounds(const RunConfig& c) {
  const auto gen = make_wavelet(c.generator);
  const auto params = system_params(c);
  const auto pattern = make_pattern(c.pattern, c.N);
  const auto opts = sweep_options(c);
  BoundsCertificate cert = frame_bounds(gen, params, pattern, opts);
  const WeaveCertificate weave = weave_certificate(gen, params, opts);
  cert.L_weave = weave.L_weave;
  cert.U_weave = weave.U_weave;
  const double tol = std::max(grid_tolerance(cert), grid_tolerance(weave));

  Outcome o;
  o.certificate = to_json(cert);
  o.certificate["ordering_chain"] = ordering_chain(cert, tol);
  o.tolerances = Json{{"grid_tolerance", grid_tolerance(cert)},
                      {"weave_grid_tolerance", grid_tolerance(weave)},
                      {"tail_bound", cert.tail_bound}};
  o.certified = cert.certified;
  o.summary = fmt::format("A_num = {:.10g}, B_num = {:.10g}", cert.A_num, cert.B_num);
  const Curve curve = multiplier_curve(gen, params, pattern, c.grid_points);
  o.csv.emplace_back("bounds_curve.csv", curve_csv(curve.abscissae, curve.values, "gamma"));
  return o;
}

Outcome cmd_weave_certify(const RunConfig& c) {
  const auto gen = make_wavelet(c.generator);
  const auto params = system_params(c);
  const WeaveCertificate cert = weave_certificate(gen, params, sweep_options(c));
  Outcome o;
  o.certificate = to_json(cert);
  o.tolerances = Json{{"grid_tolerance", grid_tolerance(cert)}, {"tail_bound", cert.tail_bound}};
  o.certified = cert.certified;
  o.summary = fmt::format("L_weave = {:.10g}, U_weave = {:.10g}", cert.L_weave, cert.U_weave);
  o.csv.emplace_back("weave_witness.csv",
                     witness_csv(weave_witness_curve(gen, params, c.grid_points)));
  return o;
}

Outcome cmd_weave_sample(const RunConfig& c) {
  const auto gen = make_wavelet(c.generator);
  const SamplingReport rep =
      sample_patterns(gen, system_params(c), c.count, c.seed, c.window, sweep_options(c));
  Outcome o;
  o.certificate = to_json(rep, true);
  o.tolerances = Json{{"pattern_tolerance", rep.tolerance},
                      {"grid_tolerance", grid_tolerance(rep.certificate)}};
  o.certified = rep.certificate.certified && rep.all_within;
  o.summary = fmt::format("{} patterns, min A = {:.10g}, max B = {:.10g}, {} violations",
                          rep.count, rep.min_A, rep.max_B, rep.violations);
  return o;
}

Outcome cmd_weave_enumerate(const RunConfig& c) {
  const auto gen = make_wavelet(c.generator);
  const EnumerationReport rep =
      enumerate_patterns(gen, system_params(c), c.window, sweep_options(c));
  Outcome o;
  o.certificate = to_json(rep);
  o.tolerances = Json{{"pattern_tolerance", rep.tolerance},
                      {"grid_tolerance", grid_tolerance(rep.certificate)}};
  o.certified = rep.certificate.certified && rep.all_within;
  o.summary = fmt::format("{} patterns, min A = {:.10g}, max B = {:.10g}, {} violations",
                          rep.pattern_count, rep.min_A, rep.max_B, rep.violations);
  return o;
}

GaborSystem gabor_system(const RunConfig& c) {
  GaborSystem s{make_gabor(c.generator), c.a, c.b, c.N, make_pattern(c.pattern, c.N), {}};
  return s;
}

Outcome cmd_gabor_bounds(const RunConfig& c) {
  const GaborSystem sys = gabor_system(c);
  const DensityGate gate = density_gate(c.a, c.b, c.N);
  const BoundsCertificate cert = gabor_frame_bounds(sys, c.grid_points);
  Outcome o;
  o.certificate = to_json(cert);
  o.certificate["density_gate"] = to_json(gate);
  o.tolerances = Json{{"grid_tolerance", grid_tolerance(cert)}};
  o.certified = cert.certified;
  o.summary = fmt::format("A_num = {:.10g}, B_num = {:.10g} ({})", cert.A_num, cert.B_num,
                          gate.message);
  const Curve curve = gabor_multiplier_curve(sys, c.grid_points);
  o.csv.emplace_back("gabor_curve.csv", curve_csv(curve.abscissae, curve.values, "x"));
  return o;
}

Outcome cmd_gabor_certify(const RunConfig& c) {
  const GaborGenerator gen = make_gabor(c.generator);
  const DensityGate gate = density_gate(c.a, c.b, c.N);
  const WeaveCertificate cert = gabor_weave_certificate(gen, c.a, c.b, c.N, c.grid_points);
  const CoverReport cover = verify_cover(gen, c.a, c.N);
  const SamplingReport rep =
      gabor_sample_patterns(gen, c.a, c.b, c.N, c.count, c.seed, c.window, c.grid_points);
  Outcome o;
  o.certificate = to_json(cert);
  o.certificate["density_gate"] = to_json(gate);
  o.certificate["cover"] = to_json(cover);
  o.certificate["sampling"] = to_json(rep, false);
  o.tolerances = Json{{"grid_tolerance", grid_tolerance(cert)}, {"pattern_tolerance", rep.tolerance}};
  o.certified = cert.certified && rep.all_within;
  o.summary = fmt::format("L_weave = {:.10g}, U_weave = {:.10g}, {} violations", cert.L_weave,
                          cert.U_weave, rep.violations);
  return o;
}

Outcome cmd_density_gate(const RunConfig& c) {
  const DensityGate gate = density_gate(c.a, c.b, c.N);
  Outcome o;
  o.certificate = to_json(gate);
  o.tolerances = Json{{"slack", 1e-12}};
  o.certified = gate.ok;
  o.summary = gate.message;
  return o;
}

ApplyMode apply_mode(const RunConfig& c) {
  return c.mode == "coefficients" ? ApplyMode::Coefficients : ApplyMode::Pointwise;
}

FreqSignal config_signal(const RunConfig& c, const WaveletGenerator& gen, const SystemParams& p,
                         std::uint64_t seed) {
  const FreqGrid grid = default_grid(gen, p, c.J_hi, c.intervals);
  return random_bump_signal(grid, gen.outer_radius(), c.a, c.m_lo, c.m_hi, seed);
}

Outcome cmd_reconstruct(const RunConfig& c) {
  const auto gen = make_wavelet(c.generator);
  const auto params = system_params(c);
  const auto pattern = make_pattern(c.pattern, c.N);
  const ApplyMode mode = apply_mode(c);
  Outcome o;
  double max_err = 0.0;
  double sum_err = 0.0;
  double min_m = std::numeric_limits<double>::infinity();
  Json j_range = nullptr;
  for (int i = 0; i < c.count; ++i) {
    const FreqSignal f = config_signal(c, gen, params, c.seed + static_cast<std::uint64_t>(i));
    ReconstructResult r;
    try {
      r = reconstruct_painless(gen, params, pattern, f, mode);
    } catch (const NotInvertibleError& e) {
      o.certified = false;
      o.certificate = Json{{"invertible", false}, {"message", e.what()}, {"failed_signal", i}};
      o.summary = e.what();
      return o;
    }
    max_err = std::max(max_err, r.relative_error);
    sum_err += r.relative_error;
    min_m = std::min(min_m, r.min_multiplier_on_support);
    if (mode == ApplyMode::Coefficients) j_range = to_json(r.j_range);
    if (i == 0) o.csv.emplace_back("reconstruct_signal.csv", r.signal.to_csv());
  }
  o.certificate = Json{{"invertible", true},
                       {"mode", c.mode},
                       {"signals", c.count},
                       {"max_relative_error", max_err},
                       {"mean_relative_error", sum_err / c.count},
                       {"min_multiplier_on_support", min_m},
                       {"j_range", j_range}};
  o.tolerances = Json{{"relative_error", 1e-10}};
  o.summary = fmt::format("{} signals, max relative error {:.3g}", c.count, max_err);
  return o;
}

Outcome cmd_erasure(const RunConfig& c) {
  const auto gen = make_wavelet(c.generator);
  const auto params = system_params(c);
  const WeavingPattern fallback = make_pattern(c.fallback, c.N);
  const FreqSignal f0 = config_signal(c, gen, params, c.seed);
  const ErasureReport rep =
      erasure_experiment(gen, params, f0, c.erased, fallback, c.erased_period, c.grid_points);
  double max_err = rep.relative_error;
  for (int i = 1; i < c.count; ++i) {
    const FreqSignal f = config_signal(c, gen, params, c.seed + static_cast<std::uint64_t>(i));
    max_err = std::max(max_err, reconstruct_painless(gen, params, rep.mixed, f).relative_error);
  }
  Outcome o;
  o.certificate = to_json(rep);
  o.certificate["signals"] = c.count;
  o.certificate["max_relative_error"] = max_err;
  o.tolerances = Json{{"bounds_tolerance", rep.tolerance}, {"relative_error", 1e-10}};
  o.certified = rep.certificate.certified && rep.within_certificate;
  o.summary = fmt::format("A = {:.10g}, B = {:.10g} within [{:.10g}, {:.10g}]: {}",
                          rep.bounds.A_num, rep.bounds.B_num, rep.certificate.L_weave,
                          rep.certificate.U_weave, rep.within_certificate);
  return o;
}

Eigen::VectorXd random_vector(int M, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(M);
  for (int i = 0; i < M; ++i) v(i) = nd(rng);
  return v;
}

Outcome cmd_fusion_demo(const RunConfig& c) {
  const FinitePacket packet = c.packet_file.empty()
                                  ? random_packet(c.ambient, c.subspaces, c.dim, c.seed)
                                  : load_packet(c.packet_file);
  std::mt19937_64 rng(c.seed);
  Outcome o;
  Json cert{{"ambient_dim", packet.ambient_dim}, {"subspaces", packet.size()}};
  Json dims = Json::array();
  for (const auto& s : packet.spans) dims.push_back(orthonormal_basis(s).cols());
  cert["subspace_dims"] = dims;

  double expand_res = 0.0;
  bool is_packet = true;
  std::string message;
  try {
    for (int i = 0; i < c.count; ++i) {
      expand_res = std::max(expand_res,
                            expand_in_packet(packet, random_vector(packet.ambient_dim, rng)).residual_norm);
    }
  } catch (const NotAnInformationPacketError& e) {
    is_packet = false;
    message = e.what();
  }
  cert["information_packet"] = is_packet;
  cert["max_expansion_residual"] = is_packet ? Json(expand_res) : Json(nullptr);

  if (packet.weights) {
    const FusionBounds fb = fusion_bounds(packet, c.trials, c.seed);
    cert["fusion_bounds"] = to_json(fb);
    double dec_res = 0.0;
    bool fusion = true;
    try {
      for (int i = 0; i < c.count; ++i) {
        dec_res = std::max(dec_res,
                           fusion_decompose(packet, random_vector(packet.ambient_dim, rng)).residual_norm);
      }
    } catch (const NotAFusionFrameError& e) {
      fusion = false;
      if (message.empty()) message = e.what();
    }
    cert["fusion_frame"] = fusion;
    cert["max_decompose_residual"] = fusion ? Json(dec_res) : Json(nullptr);
    o.summary = fmt::format("fusion bounds ({:.10g}, {:.10g})", fb.A, fb.B);
    o.certified = is_packet && fusion;
  } else {
    cert["fusion_bounds"] = nullptr;
    o.summary = is_packet ? "information packet (no weights)" : message;
    o.certified = is_packet;
  }
  cert["message"] = message;
  o.certificate = std::move(cert);
  o.tolerances = Json{{"residual", 1e-10}};
  return o;
}

Outcome cmd_counterexample(const RunConfig& c) {
  Outcome o;
  Json rows = Json::array();
  std::mt19937_64 rng(c.seed);
  bool all_match = true;
  for (const int M : c.sizes) {
    const CounterexampleGrowth g = counterexample_growth(M);
    const FinitePacket packet = counterexample_packet(M);
    const FusionBounds fb = fusion_bounds(packet, c.trials, c.seed);
    const double res = expand_in_packet(packet, random_vector(M, rng)).residual_norm;
    const bool match = std::abs(g.ratio - M) <= 1e-12 * M;
    all_match = all_match && match;
    Json row = to_json(g);
    row["M"] = M;
    row["ratio_equals_M"] = match;
    row["fusion_bounds"] = to_json(fb);
    row["expansion_residual"] = res;
    rows.push_back(std::move(row));
  }
  o.certificate = Json{
      {"sizes", rows},
      {"all_ratios_match", all_match},
      {"note",
       "each finite truncation is a fusion frame with bounds (1, M); only the ratio B/A = M "
       "grows without bound as M increases"}};
  o.tolerances = Json{{"ratio_relative", 1e-12}};
  o.certified = all_match;
  o.summary = fmt::format("{} sizes, ratios match M: {}", c.sizes.size(), all_match);
  return o;
}

Outcome dispatch(const RunConfig& c) {
  const std::string& cmd = c.command;
  if (cmd == "bounds") return cmd_bounds(c);
  if (cmd == "weave-certify") return cmd_weave_certify(c);
  if (cmd == "weave-sample") return cmd_weave_sample(c);
  if (cmd == "weave-enumerate") return cmd_weave_enumerate(c);
  if (cmd == "gabor-bounds") return cmd_gabor_bounds(c);
  if (cmd == "gabor-certify") return cmd_gabor_certify(c);
  if (cmd == "density-gate") return cmd_density_gate(c);
  if (cmd == "reconstruct") return cmd_reconstruct(c);
  if (cmd == "erasure") return cmd_erasure(c);
  if (cmd == "fusion-demo") return cmd_fusion_demo(c);
  if (cmd == "counterexample") return cmd_counterexample(c);
  throw ConfigError(fmt::format("unknown command '{}'", cmd));
}

void apply_thread_env() {
  const char* env = std::getenv("FRAMEWEAVE_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) {
    throw ConfigError(fmt::format("FRAMEWEAVE_THREADS must be a positive integer, got '{}'", env));
  }
  kernels::omp::set_thread_cap(static_cast<int>(n));
}

}  // namespace

int run_command(const RunConfig& config, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  const Outcome o = dispatch(config);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  Json report{{"command", config.command},
              {"inputs", {{"config", config.raw}, {"resolved", resolved_inputs(config)}}},
              {"certificate", o.certificate},
              {"tolerances", o.tolerances},
              {"certified", o.certified},
              {"summary", o.summary},
              {"seed", config.seed},
              {"wall_time_s", config.timing ? Json(wall) : Json(nullptr)}};
  Json files = Json::array();
  if (config.csv) {
    for (const auto& [name, content] : o.csv) {
      write_text_file((dir / name).string(), content);
      files.push_back(name);
    }
  }
  report["csv_files"] = files;
  write_text_file((dir / (config.command + ".json")).string(), dump_json(report));
  std::cout << config.command << ": " << o.summary << '\n';
  return o.certified ? kExitOk : kExitNotCertified;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Frame bounds and weaving certificates for wavelet and Gabor systems"};
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
  app.add_option("command", command, "one of: " + fmt::format("{}", fmt::join(known_commands(), ", ")))
      ->required();
  app.add_option("--config", config_path, "INI config file")->required();
  app.add_option("--out", out_dir, "output directory (default: current directory)");
  app.add_option("--seed", seed, "override the configured seed");
  app.add_option("--grid", grid, "override sweep.grid_points");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    apply_thread_env();
    if (std::find(known_commands().begin(), known_commands().end(), command) ==
        known_commands().end()) {
      throw ConfigError(fmt::format("unknown command '{}'", command));
    }
    RunConfig config = load_config(config_path, command);
    if (seed) config.seed = *seed;
    if (grid) {
      if (*grid < 16) throw ConfigError("--grid must be >= 16");
      config.grid_points = *grid;
    }
    return run_command(config, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace frameweave
