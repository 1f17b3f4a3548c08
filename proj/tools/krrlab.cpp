// krrlab command-line harness: synth, sweep, eig-compare, bounds, plot.

#include "krrlab/errors.hpp"
#include "krrlab/harness/config.hpp"
#include "krrlab/harness/csv.hpp"
#include "krrlab/harness/eig_compare.hpp"
#include "krrlab/harness/libsvm.hpp"
#include "krrlab/harness/plot.hpp"
#include "krrlab/harness/sweep.hpp"
#include "krrlab/random.hpp"
#include "krrlab/spectral.hpp"
#include "krrlab/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace krrlab;
using namespace krrlab::harness;

namespace {

struct Flags {
  std::string config_path;
  std::string mode = "synth";
  std::string decay = "harmonic";
  std::string n_grid;
  std::optional<double> gamma_override;
  std::optional<int> n;
};

void add_config_flags(CLI::App* cmd, ExperimentConfig& cfg, Flags& f) {
  cmd->add_option("--config", f.config_path, "JSON config; its keys override flags");
  cmd->add_option("--mode", f.mode, "synth | real");
  cmd->add_option("--kernel", cfg.kernel, "linear | polynomial | exponential_inner | gaussian");
  cmd->add_option("--degree", cfg.degree, "polynomial degree");
  cmd->add_flag("--linearized", cfg.use_linearized, "use K^lin instead of K");
  cmd->add_option("--gamma-override", f.gamma_override, "replace gamma in K^lin");
  cmd->add_option("--decay", f.decay, "harmonic | polynomial | exponential");
  cmd->add_option("--decay-a", cfg.decay_a, "decay parameter a");
  cmd->add_option("--d", cfg.d, "feature dimension (real mode: 0 infers)");
  cmd->add_option("--n-grid", f.n_grid, "start:stop:step");
  cmd->add_option("--cbar", cfg.cbar, "lambda = cbar * n^-theta");
  cmd->add_option("--theta", cfg.theta, "schedule exponent");
  cmd->add_option("--sigma", cfg.sigma, "noise standard deviation");
  cmd->add_option("--trials", cfg.trials);
  cmd->add_option("--seed", cfg.seed);
  cmd->add_option("--test-points", cfg.test_points);
  cmd->add_option("--noise-draws", cfg.noise_draws);
  cmd->add_option("--input", cfg.input_path, "libsvm file (real mode)");
  cmd->add_option("--output", cfg.output_path, "output file");
  cmd->add_flag("--standardize", cfg.standardize, "z-score features (real mode)");
  cmd->add_option("--r", cfg.r, "source exponent of the bias reference");
  cmd->add_option("--moment-m", cfg.moment_m, "moment surplus m for V2");
  cmd->add_option("--epsilon", cfg.epsilon, "log slack for V2");
  cmd->add_option("--workers", cfg.workers, "worker threads");
  cmd->add_option("--top-k", cfg.top_k, "eigenvalues to report");
}

ExperimentConfig finish_config(ExperimentConfig cfg, const Flags& f) {
  cfg.mode = mode_from_string(f.mode);
  try {
    cfg.decay = decay_kind_from_string(f.decay);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (!f.n_grid.empty()) cfg.n_grid = parse_grid(f.n_grid);
  if (f.gamma_override) cfg.gamma_override = f.gamma_override;
  if (!f.config_path.empty()) cfg = load_config(f.config_path, cfg);
  cfg.validate();
  return cfg;
}

void require_output(const ExperimentConfig& cfg) {
  if (cfg.output_path.empty()) throw ConfigError("--output is required");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_rescale(const std::vector<std::string>& v) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& item : v) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--rescale expects series=reference");
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

int run_synth(const ExperimentConfig& cfg, std::optional<int> n) {
  require_output(cfg);
  const CovModel cov = make_covariance(cfg.d, cfg.decay, cfg.decay_a);
  const int rows = n.value_or(cfg.n_grid.front());
  const auto sample =
      sample_dataset(cov, rows, TargetSpec::sin_sqnorm(cfg.sigma), derive_seed(cfg.seed, {0x5e}));
  write_libsvm(sample.data, cfg.output_path);
  std::cout << "wrote " << rows << " x " << cfg.d << " samples to " << cfg.output_path << '\n';
  return 0;
}

int run_sweep_cmd(const ExperimentConfig& cfg, const std::string& plot_path, bool quiet) {
  require_output(cfg);
  ProgressFn progress;
  if (!quiet) progress = [](const std::string& msg) { std::cerr << msg << '\n'; };
  const auto points = run_sweep(cfg, progress);
  write_text_file(cfg.output_path, risk_csv(points));
  std::cout << "wrote " << points.size() << " rows to " << cfg.output_path << '\n';
  if (!plot_path.empty()) {
    PlotOptions opts;
    opts.title = cfg.kernel + (cfg.use_linearized ? " (linearized)" : "");
    opts.rescale = {{"v1_bound", "var_emp"}};
    emit_plot(cfg.output_path, {"risk_emp", "var_emp", "v1_bound", "bias_emp", "bias_ref"},
              plot_path, opts);
    std::cout << "wrote " << plot_path << '\n';
  }
  return 0;
}

int run_eig(const ExperimentConfig& cfg) {
  require_output(cfg);
  const auto result = eig_compare(cfg);
  write_text_file(cfg.output_path, eig_csv(result));
  std::cout << "n=" << result.n << " d=" << result.d << " alpha=" << result.params.alpha
            << " beta=" << result.params.beta << " gamma=" << result.gamma_used << '\n'
            << "interlacing (i >= " << result.start_index
            << "): " << result.interlacing.violations.size() << " violations, max "
            << result.interlacing.max_violation << '\n'
            << "spearman beyond top 5: " << result.spearman_beyond_top5 << '\n';
  return 0;
}

struct BoundsArgs {
  int n = 1000;
  double b = 1.0;
  int r_star = 0;  // 0: use d
  double beta = 1.0;
  double gamma = 0.0;
};

int run_bounds(const ExperimentConfig& cfg, const BoundsArgs& a) {
  using nlohmann::json;
  const DecaySpec decay{cfg.decay, cfg.decay_a, a.r_star > 0 ? a.r_star : cfg.d};
  decay.validate();
  json out;
  out["decay"] = to_string(decay.kind);
  out["a"] = decay.a;
  out["r_star"] = decay.r_star;
  out["n"] = a.n;
  out["b"] = a.b;
  out["bound_N"] = bound_N(decay, a.n, a.b);
  out["quantity_N"] = quantity_N(generate_decay_spectrum(decay, a.n), a.b);
  if (decay.kind == DecayKind::polynomial) out["C_tilde"] = polynomial_bound_constant(decay.a);
  if (decay.kind == DecayKind::exponential) {
    out["exp_monotone_condition"] =
        exp_monotone_condition(cfg.cbar, cfg.theta, a.gamma, decay.a, decay.r_star);
  } else {
    out["theta_threshold"] = peak_theta_threshold(decay, cfg.cbar);
    try {
      out["peak_point"] = peak_point(decay, cfg.cbar, cfg.theta, a.gamma);
    } catch (const OutOfRegimeError& e) {
      out["peak_point"] = nullptr;
      out["peak_point_note"] = e.what();
    }
  }
  try {
    const PeakResult peak = numeric_peak(decay, cfg.n_grid, cfg.d, cfg.cbar, cfg.theta, a.gamma,
                                         a.beta, cfg.sigma);
    out["numeric_peak"] = {{"n_at_max", peak.n_at_max}, {"max_value", peak.max_value}};
  } catch (const DomainError& e) {
    out["numeric_peak"] = nullptr;
    out["numeric_peak_note"] = e.what();
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"krrlab: kernel ridge regression risk-curve laboratory"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  Flags flags;

  auto* synth = app.add_subcommand("synth", "write a synthetic dataset in libsvm format");
  add_config_flags(synth, cfg, flags);
  synth->add_option("--n", flags.n, "rows (default: first n of the grid)");

  auto* sweep = app.add_subcommand("sweep", "risk curve over the n grid, written as CSV");
  add_config_flags(sweep, cfg, flags);
  std::string plot_path;
  bool quiet = false;
  sweep->add_option("--plot", plot_path, "also write an SVG of the curves");
  sweep->add_flag("--quiet", quiet, "no progress on stderr");

  auto* eig = app.add_subcommand("eig-compare", "top-k eigenvalues of K, K^lin and beta XX^T/d");
  add_config_flags(eig, cfg, flags);

  auto* bounds = app.add_subcommand("bounds", "closed-form bound values as JSON");
  add_config_flags(bounds, cfg, flags);
  BoundsArgs bargs;
  bounds->add_option("--n", bargs.n, "n for bound_N");
  bounds->add_option("--b", bargs.b, "b for bound_N");
  bounds->add_option("--r-star", bargs.r_star, "rank (default d)");
  bounds->add_option("--beta", bargs.beta, "beta for V1");
  bounds->add_option("--gamma", bargs.gamma, "gamma for n_* and V1");

  auto* plot = app.add_subcommand("plot", "SVG line chart from a CSV");
  std::string csv_path, columns, out_path, x_column = "n", title;
  std::vector<std::string> rescale;
  plot->add_option("--csv", csv_path)->required();
  plot->add_option("--columns", columns, "comma-separated")->required();
  plot->add_option("--out", out_path)->required();
  plot->add_option("--x", x_column);
  plot->add_option("--title", title);
  plot->add_option("--rescale", rescale, "series=reference, scales series to the reference max");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*plot) {
      PlotOptions opts{x_column, title, parse_rescale(rescale)};
      emit_plot(csv_path, split_list(columns), out_path, opts);
      std::cout << "wrote " << out_path << '\n';
      return 0;
    }
    const ExperimentConfig final_cfg = finish_config(cfg, flags);
    if (*synth) return run_synth(final_cfg, flags.n);
    if (*sweep) return run_sweep_cmd(final_cfg, plot_path, quiet);
    if (*eig) return run_eig(final_cfg);
    if (*bounds) return run_bounds(final_cfg, bargs);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const ShapeError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
