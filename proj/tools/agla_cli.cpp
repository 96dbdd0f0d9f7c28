// agla: magnitude-only reconstruction from the command line.
//
//   agla solve     --generator chirp,seed=3 --algorithm agla --alpha 0.09 --beta 1.1 --gamma 0.2
//   agla compare   --wav in.wav --algorithms gla,fgla,agla,raar,dm --out-dir traces
//   agla gate      --alpha 0.09 --beta 1.1 --gamma 0.2
//   agla paramgrid --step 0.05 --out grid.csv
//   agla oracle descent --trace run.csv --alpha 0.09 --beta 1.1 --gamma 0.2
//   agla oracle projection --samples 10000 --grid 16384
//
// Exit codes: 0 success, 1 error, 2 gate failed under --require-guarantee,
// 3 non-finite iterate.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "agla/guarantees.hpp"
#include "agla/io.hpp"
#include "agla/linops.hpp"
#include "agla/magproj.hpp"
#include "agla/metrics.hpp"
#include "agla/solvers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitError = 1;
constexpr int kExitGate = 2;
constexpr int kExitNonFinite = 3;

class GateRefused : public agla::Error {
public:
  using Error::Error;
};

struct TransformOptions {
  std::string dense_csv;
  std::size_t length = 4096;
  std::size_t hop = 32;
  std::size_t channels = 256;
  std::string window = "gaussian";
};

struct InputOptions {
  std::string wav;
  std::string generator;
  std::string magnitudes;
  std::uint64_t seed = 0;
};

struct InitOptions {
  std::string mode = "zero";
  std::string csv;
  std::uint64_t seed = 0;
};

struct ParamOptions {
  double alpha = 0.99;
  double beta = 0.0;
  double gamma = 1.0;
  double lambda = 0.9;
  double rho = 0.8;
  std::size_t iters = 100;
  std::optional<double> stop_delta_t;
  bool require_guarantee = false;
};

void add_transform_options(CLI::App* app, TransformOptions& o) {
  app->add_option("--dense-csv", o.dense_csv, "Dense transform: one row per line of re,im pairs");
  app->add_option("-L,--length", o.length, "Gabor signal length")->capture_default_str();
  app->add_option("-a,--hop", o.hop, "Gabor hop size")->capture_default_str();
  app->add_option("-M,--channels", o.channels, "Gabor frequency channels")->capture_default_str();
  app->add_option("--window", o.window, "Gabor window")
      ->check(CLI::IsMember({"gaussian", "rectangular"}))
      ->capture_default_str();
}

void add_input_options(CLI::App* app, InputOptions& o) {
  auto* wav = app->add_option("--wav", o.wav, "Input WAV file")->check(CLI::ExistingFile);
  auto* gen = app->add_option("--generator", o.generator,
                              "Synthetic signal: chirp|multitone|noise-burst[,seed=S][,L=N]");
  auto* mag = app->add_option("--magnitudes", o.magnitudes, "Target magnitudes file")
                  ->check(CLI::ExistingFile);
  wav->excludes(gen)->excludes(mag);
  gen->excludes(mag);
  app->add_option("--signal-seed", o.seed, "Default generator seed")->capture_default_str();
}

void add_init_options(CLI::App* app, InitOptions& o) {
  app->add_option("--init", o.mode, "Initialization")
      ->check(CLI::IsMember({"zero", "random", "csv"}))
      ->capture_default_str();
  app->add_option("--init-csv", o.csv, "Initial coefficients as re,im pairs")->check(CLI::ExistingFile);
  app->add_option("--init-seed", o.seed, "Seed of the random-phase initialization")->capture_default_str();
}

void add_param_options(CLI::App* app, ParamOptions& o) {
  app->add_option("--alpha", o.alpha)->capture_default_str();
  app->add_option("--beta", o.beta)->capture_default_str();
  app->add_option("--gamma", o.gamma)->capture_default_str();
  app->add_option("--lambda", o.lambda, "RAAR relaxation")->capture_default_str();
  app->add_option("--rho", o.rho, "Difference-map parameter")->capture_default_str();
  app->add_option("-n,--iters", o.iters, "Iterations")->capture_default_str();
  app->add_option("--stop-delta-t", o.stop_delta_t, "Stop once delta_t falls below this");
  app->add_flag("--require-guarantee", o.require_guarantee,
                "Refuse FGLA/AGLA parameters outside the descent guarantee");
}

agla::LinearTransform build_transform(const TransformOptions& o) {
  if (!o.dense_csv.empty()) return agla::io::load_dense_transform(o.dense_csv);
  const auto window = o.window == "rectangular" ? agla::WindowKind::rectangular
                                                : agla::WindowKind::gaussian;
  return agla::make_gabor(o.length, o.hop, o.channels, window);
}

struct Problem {
  agla::LinearTransform transform;
  agla::MagnitudeSpec target;
  std::optional<agla::SignalVec> reference;
  std::uint32_t sample_rate = 16000;
};

Problem build_problem(const TransformOptions& to, const InputOptions& in) {
  agla::LinearTransform t = build_transform(to);
  if (!in.magnitudes.empty()) {
    agla::MagnitudeSpec s = agla::io::load_magnitudes(in.magnitudes);
    agla::require_length("magnitudes", t.coefficient_count(), s.size());
    return {t, std::move(s), std::nullopt};
  }
  std::string source = !in.wav.empty() ? in.wav : in.generator;
  if (source.empty()) throw agla::InvalidParameter("one of --wav, --generator, --magnitudes is required");
  std::uint32_t rate = 16000;
  if (!in.wav.empty()) rate = agla::io::read_wav(in.wav).sample_rate;
  agla::SignalVec x = agla::io::ingest_signal(source, t.signal_length(), in.seed);
  agla::MagnitudeSpec s = agla::io::make_target(t, x);
  return {t, std::move(s), std::move(x), rate};
}

agla::CoefVec build_init(const InitOptions& o, const agla::MagnitudeSpec& s) {
  if (o.mode == "zero") return agla::io::init_coeffs(agla::io::InitMode::zero_phase, s);
  if (o.mode == "random") return agla::io::init_coeffs(agla::io::InitMode::random_phase, s, o.seed);
  if (o.csv.empty()) throw agla::InvalidParameter("--init csv needs --init-csv");
  const agla::CoefVec c = agla::io::load_complex_vector(o.csv);
  return agla::io::init_coeffs(agla::io::InitMode::provided, s, 0, c);
}

agla::SolverParams build_params(const std::string& algorithm, const ParamOptions& o) {
  agla::SolverParams p;
  p.algorithm = agla::parse_algorithm(algorithm);
  p.alpha = o.alpha;
  p.beta = o.beta;
  p.gamma = o.gamma;
  p.lambda = o.lambda;
  p.rho = o.rho;
  p.max_iters = o.iters;
  p.stop_delta_t = o.stop_delta_t;
  p.validate();
  return p;
}

void enforce_guarantee(const agla::SolverParams& p, bool required) {
  if (!required) return;
  if (p.algorithm != agla::Algorithm::fgla && p.algorithm != agla::Algorithm::agla) {
    throw GateRefused(agla::to_string(p.algorithm) + " has no descent guarantee");
  }
  const double beta = p.algorithm == agla::Algorithm::fgla ? 0.0 : p.beta;
  const double gamma = p.algorithm == agla::Algorithm::fgla ? 1.0 : p.gamma;
  if (!agla::gate(p.alpha, beta, gamma).passes()) {
    std::ostringstream os;
    os << "gate failed for (alpha, beta, gamma) = (" << p.alpha << ", " << beta << ", " << gamma << ")";
    throw GateRefused(os.str());
  }
}

agla::io::TraceFormat format_for(const fs::path& path, const std::string& requested) {
  if (requested == "json") return agla::io::TraceFormat::json;
  if (requested == "csv") return agla::io::TraceFormat::csv;
  return path.extension() == ".json" ? agla::io::TraceFormat::json : agla::io::TraceFormat::csv;
}

json summarize(const agla::SolverParams& p, const agla::RunResult& r, const Problem& prob) {
  const agla::TraceRecord& last = r.trace.back();
  json j = {{"algorithm", agla::to_string(p.algorithm)},
            {"iterations", r.iterations},
            {"stopped_early", r.stopped_early},
            {"d2", last.d2},
            {"delta_t", last.delta_t},
            {"residual", last.residual},
            {"ssnr_c", last.ssnr_c},
            {"ssnr_y", last.ssnr_y}};
  j["ssnr_signal"] = agla::ssnr(prob.transform, r.signal, prob.target);
  return j;
}

void write_signal(const fs::path& path, const agla::SignalVec& x, std::uint32_t rate) {
  std::vector<double> re(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) re[i] = x[i].real();
  agla::io::write_wav(path, re, rate);
}

// --- solve -----------------------------------------------------------------

struct SolveCommand {
  TransformOptions transform;
  InputOptions input;
  InitOptions init;
  ParamOptions params;
  std::string algorithm = "agla";
  std::string trace;
  std::string format = "auto";
  std::string out_wav;
  std::string out_coeffs;

  void attach(CLI::App* app) {
    add_transform_options(app, transform);
    add_input_options(app, input);
    add_init_options(app, init);
    add_param_options(app, params);
    app->add_option("--algorithm", algorithm, "gla|fgla|agla|raar|dm")->capture_default_str();
    app->add_option("--trace", trace, "Trace output path (.csv or .json)");
    app->add_option("--format", format)->check(CLI::IsMember({"auto", "csv", "json"}));
    app->add_option("--out-wav", out_wav, "Reconstructed signal (float32 WAV)");
    app->add_option("--out-coeffs", out_coeffs, "Final coefficients as re,im lines");
  }

  int execute() const {
    const agla::SolverParams p = build_params(algorithm, params);
    enforce_guarantee(p, params.require_guarantee);
    const Problem prob = build_problem(transform, input);
    const agla::CoefVec c0 = build_init(init, prob.target);
    const agla::RunResult r = agla::run(prob.transform, prob.target, p, c0);
    if (!trace.empty()) agla::io::export_trace(r.trace, trace, format_for(trace, format));
    if (!out_wav.empty()) write_signal(out_wav, r.signal, prob.sample_rate);
    if (!out_coeffs.empty()) {
      std::ofstream os(out_coeffs);
      if (!os) throw agla::io::IoError("cannot write " + out_coeffs);
      char buf[80];
      for (const agla::cplx& z : r.coefficients) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", z.real(), z.imag());
        os << buf;
      }
    }
    std::cout << summarize(p, r, prob).dump(2) << '\n';
    return 0;
  }
};

// --- compare ---------------------------------------------------------------

struct CompareCommand {
  TransformOptions transform;
  InputOptions input;
  InitOptions init;
  ParamOptions params;
  std::vector<std::string> algorithms{"gla", "fgla", "agla", "raar", "dm"};
  std::string out_dir = ".";
  std::string format = "csv";

  void attach(CLI::App* app) {
    add_transform_options(app, transform);
    add_input_options(app, input);
    add_init_options(app, init);
    add_param_options(app, params);
    app->add_option("--algorithms", algorithms, "Algorithms to run")->delimiter(',');
    app->add_option("--out-dir", out_dir, "Directory receiving <algorithm>.<format>")
        ->capture_default_str();
    app->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  }

  int execute() const {
    std::vector<agla::SolverParams> ps;
    for (const std::string& a : algorithms) {
      ps.push_back(build_params(a, params));
      if (ps.back().algorithm == agla::Algorithm::fgla || ps.back().algorithm == agla::Algorithm::agla)
        enforce_guarantee(ps.back(), params.require_guarantee);
    }
    const Problem prob = build_problem(transform, input);
    const agla::CoefVec c0 = build_init(init, prob.target);
    fs::create_directories(out_dir);

    const int count = static_cast<int>(ps.size());
    std::vector<json> summaries(ps.size());
    std::vector<std::string> errors(ps.size());
    std::vector<int> codes(ps.size(), 0);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) {
      try {
        const agla::RunResult r = agla::run(prob.transform, prob.target, ps[i], c0);
        const fs::path path = fs::path(out_dir) / (agla::to_string(ps[i].algorithm) + "." + format);
        agla::io::export_trace(r.trace, path, format_for(path, format));
        summaries[i] = summarize(ps[i], r, prob);
        summaries[i]["trace"] = path.string();
      } catch (const agla::NonFiniteIterate& e) {
        errors[i] = e.what();
        codes[i] = kExitNonFinite;
      } catch (const std::exception& e) {
        errors[i] = e.what();
        codes[i] = kExitError;
      }
    }
    int code = 0;
    json out = json::array();
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (codes[i] != 0) {
        std::cerr << "agla compare: " << agla::to_string(ps[i].algorithm) << ": " << errors[i] << '\n';
        code = std::max(code, codes[i]);
        continue;
      }
      out.push_back(summaries[i]);
    }
    std::cout << out.dump(2) << '\n';
    return code;
  }
};

// --- gate ------------------------------------------------------------------

json verdict_json(double alpha, double beta, double gamma, const agla::GateVerdict& v) {
  auto opt = [](const std::optional<double>& x) { return x ? json(*x) : json(nullptr); };
  return {{"alpha", alpha},
          {"beta", beta},
          {"gamma", gamma},
          {"regime", agla::to_string(v.regime)},
          {"cond1", v.cond1_ok},
          {"alpha_bound", opt(v.alpha_bound)},
          {"alpha_ok", v.alpha_ok},
          {"passes", v.passes()},
          {"k1", opt(v.k1)},
          {"k2", opt(v.k2)}};
}

struct GateCommand {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 1.0;
  bool allow_zero_alpha = false;
  bool require_guarantee = false;

  void attach(CLI::App* app) {
    app->add_option("--alpha", alpha)->required();
    app->add_option("--beta", beta)->required();
    app->add_option("--gamma", gamma)->required();
    app->add_flag("--allow-zero-alpha", allow_zero_alpha);
    app->add_flag("--require-guarantee", require_guarantee, "Exit 2 when the gate fails");
  }

  int execute() const {
    const agla::GateVerdict v = agla::gate(alpha, beta, gamma, {allow_zero_alpha});
    std::cout << verdict_json(alpha, beta, gamma, v).dump(2) << '\n';
    return require_guarantee && !v.passes() ? kExitGate : 0;
  }
};

// --- paramgrid -------------------------------------------------------------

struct ParamGridCommand {
  double beta_lo = 0.0, beta_hi = 5.0;
  double gamma_lo = 0.1, gamma_hi = 1.5;
  double step = 0.05;
  std::string out;

  void attach(CLI::App* app) {
    app->add_option("--beta-lo", beta_lo)->capture_default_str();
    app->add_option("--beta-hi", beta_hi)->capture_default_str();
    app->add_option("--gamma-lo", gamma_lo)->capture_default_str();
    app->add_option("--gamma-hi", gamma_hi)->capture_default_str();
    app->add_option("--step", step)->capture_default_str();
    app->add_option("--out", out, "CSV path (stdout when omitted)");
  }

  int execute() const {
    const agla::AlphaGrid g = agla::alpha_grid({beta_lo, beta_hi}, {gamma_lo, gamma_hi}, step);
    if (out.empty()) {
      g.write_csv(std::cout);
      return 0;
    }
    std::ofstream os(out);
    if (!os) throw agla::io::IoError("cannot write " + out);
    g.write_csv(os);
    return 0;
  }
};

// --- oracle ----------------------------------------------------------------

struct DescentOracleCommand {
  std::string trace;
  std::optional<double> k1, k2;
  std::optional<double> alpha, beta, gamma;
  std::size_t first_row = 1;
  double tolerance = 1e-9;

  void attach(CLI::App* app) {
    app->add_option("--trace", trace, "Trace file (.csv or .json)")->required()->check(CLI::ExistingFile);
    app->add_option("--k1", k1);
    app->add_option("--k2", k2);
    app->add_option("--alpha", alpha);
    app->add_option("--beta", beta);
    app->add_option("--gamma", gamma);
    app->add_option("--first-row", first_row, "First audited row")->capture_default_str();
    app->add_option("--tolerance", tolerance)->capture_default_str();
  }

  int execute() const {
    double c1 = 0.0, c2 = 0.0;
    if (k1 && k2) {
      c1 = *k1;
      c2 = *k2;
    } else if (alpha && beta && gamma) {
      std::tie(c1, c2) = agla::descent_constants(*alpha, *beta, *gamma);
    } else {
      throw agla::InvalidParameter("oracle descent needs --k1/--k2 or --alpha/--beta/--gamma");
    }
    const auto records = agla::io::load_trace(trace);
    const agla::DescentAudit a = agla::descent_audit(records, c1, c2, tolerance, first_row);
    std::cout << a.to_json() << '\n';
    return a.passed ? 0 : kExitError;
  }
};

struct ProjectionOracleCommand {
  std::size_t samples = 10000;
  std::size_t grid = 16384;
  std::uint64_t seed = 1;

  void attach(CLI::App* app) {
    app->add_option("--samples", samples)->capture_default_str();
    app->add_option("--grid", grid, "Phase grid points")->capture_default_str();
    app->add_option("--seed", seed)->capture_default_str();
  }

  int execute() const {
    agla::io::Rng rng(seed);
    agla::CoefVec c(samples);
    agla::RealVec sv(samples);
    for (std::size_t i = 0; i < samples; ++i) {
      c[i] = {rng.normal(), rng.normal()};
      sv[i] = 2.0 * rng.uniform();
    }
    const agla::MagnitudeSpec s(sv);
    const agla::CoefVec closed = agla::project_magnitude(c, s);
    const agla::CoefVec brute = agla::oracle_nearest_c2(c, s, grid);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples; ++i)
      worst = std::max(worst, std::abs(closed[i] - c[i]) - std::abs(brute[i] - c[i]));
    const bool ok = worst <= 1e-6;
    json j = {{"samples", samples}, {"grid", grid}, {"max_excess", worst}, {"passed", ok}};
    std::cout << j.dump(2) << '\n';
    return ok ? 0 : kExitError;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase retrieval with the Griffin-Lim family, RAAR and the difference map"};
  app.require_subcommand(1);

  SolveCommand solve;
  CompareCommand compare;
  GateCommand gate_cmd;
  ParamGridCommand grid;
  DescentOracleCommand descent;
  ProjectionOracleCommand projection;

  auto* solve_app = app.add_subcommand("solve", "Run one algorithm");
  solve.attach(solve_app);
  auto* compare_app = app.add_subcommand("compare", "Run several algorithms from a shared init");
  compare.attach(compare_app);
  auto* gate_app = app.add_subcommand("gate", "Convergence-guarantee verdict for (alpha, beta, gamma)");
  gate_cmd.attach(gate_app);
  auto* grid_app = app.add_subcommand("paramgrid", "Largest admissible alpha over a (beta, gamma) grid");
  grid.attach(grid_app);
  auto* oracle_app = app.add_subcommand("oracle", "Brute-force audits");
  oracle_app->require_subcommand(1);
  auto* descent_app = oracle_app->add_subcommand("descent", "Audit a trace for the descent inequality");
  descent.attach(descent_app);
  auto* projection_app =
      oracle_app->add_subcommand("projection", "Closed-form magnitude projection vs a phase grid");
  projection.attach(projection_app);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_app) return solve.execute();
    if (*compare_app) return compare.execute();
    if (*gate_app) return gate_cmd.execute();
    if (*grid_app) return grid.execute();
    if (*descent_app) return descent.execute();
    if (*projection_app) return projection.execute();
  } catch (const GateRefused& e) {
    std::cerr << "agla: " << e.what() << '\n';
    return kExitGate;
  } catch (const agla::NonFiniteIterate& e) {
    std::cerr << "agla: " << e.what() << '\n';
    return kExitNonFinite;
  } catch (const std::exception& e) {
    std::cerr << "agla: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
