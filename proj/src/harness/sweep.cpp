#include "krrlab/harness/sweep.hpp"

#include "krrlab/errors.hpp"
#include "krrlab/harness/csv.hpp"
#include "krrlab/harness/libsvm.hpp"
#include "krrlab/random.hpp"
#include "krrlab/synth.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace krrlab::harness {

namespace {

[[noreturn]] void rethrow_with_context(std::exception_ptr ep, const std::string& context) {
  try {
    std::rethrow_exception(ep);
  } catch (const ConfigError& e) {
    throw ConfigError(context + e.what());
  } catch (const DomainError& e) {
    throw DomainError(context + e.what());
  } catch (const DataError& e) {
    throw DataError(context + e.what());
  } catch (const SingularityError& e) {
    throw SingularityError(context + e.what(), e.smallest_eigenvalue());
  } catch (const NumericalError& e) {
    throw NumericalError(context + e.what());
  } catch (const ShapeError& e) {
    throw ShapeError(context + e.what());
  } catch (const std::exception& e) {
    throw Error(context + e.what());
  }
}

struct CellResult {
  double bias = 0.0;
  double var = 0.0;
  double risk = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double lambda = 0.0;
  double mc_stderr = 0.0;
};

// Spectrum of beta XX^T/d + alpha 11^T.
Spectrum lin_spectrum(const LinParams& p, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd m = p.beta * scaled_gram(x);
  m.array() += p.alpha;
  return Spectrum::of_psd_matrix(m);
}

class SweepRunner {
 public:
  explicit SweepRunner(const ExperimentConfig& cfg)
      : cfg_(cfg), spec_(make_kernel(cfg.kernel, cfg.degree)),
        moments_{cfg.moment_m, cfg.epsilon} {}

  std::vector<RiskPoint> run(const ProgressFn& progress) {
    const std::size_t grid = cfg_.n_grid.size();
    const std::size_t trials = static_cast<std::size_t>(cfg_.trials);
    if (cfg_.mode == Mode::synth) prepare_synth();
    else prepare_real();

    std::vector<CellResult> cells(grid * trials);
    std::mutex progress_mutex;
    std::atomic<std::size_t> done{0};
    parallel_for(
        cells.size(), cfg_.workers,
        [&](std::size_t idx) {
          const int n = cfg_.n_grid[idx / trials];
          const int trial = static_cast<int>(idx % trials);
          cells[idx] = cfg_.mode == Mode::synth ? synth_cell(n, trial) : real_cell(n, trial);
          if (progress) {
            const std::size_t k = ++done;
            std::lock_guard<std::mutex> lock(progress_mutex);
            progress("cell " + std::to_string(k) + "/" + std::to_string(cells.size()) +
                     " (n=" + std::to_string(n) + ", trial=" + std::to_string(trial) + ")");
          }
        },
        [&](std::size_t idx) {
          return "cell n=" + std::to_string(cfg_.n_grid[idx / trials]) +
                 ", trial=" + std::to_string(idx % trials) + ": ";
        });

    std::vector<RiskPoint> out;
    const double t = static_cast<double>(trials);
    for (std::size_t g = 0; g < grid; ++g) {
      RiskPoint p;
      p.n = cfg_.n_grid[g];
      p.trial_count = cfg_.trials;
      double se2 = 0.0;
      std::vector<double> risks;
      for (std::size_t k = 0; k < trials; ++k) {
        const CellResult& c = cells[g * trials + k];
        p.lambda = c.lambda;
        p.bias_emp += c.bias;
        p.var_emp += c.var;
        p.risk_emp += c.risk;
        p.v1_bound += c.v1;
        p.v2_bound += c.v2;
        se2 += c.mc_stderr * c.mc_stderr;
        risks.push_back(c.risk);
      }
      p.bias_emp /= t;
      p.var_emp /= t;
      p.risk_emp /= t;
      p.v1_bound /= t;
      p.v2_bound /= t;
      p.bias_ref = bias_ref(p.n, cfg_.theta, cfg_.r);
      if (cfg_.mode == Mode::synth) {
        p.mc_stderr = std::sqrt(se2) / t;
      } else if (trials > 1) {
        double ss = 0.0;
        for (double r : risks) ss += (r - p.risk_emp) * (r - p.risk_emp);
        p.mc_stderr = std::sqrt(ss / (t - 1.0) / t);
      }
      out.push_back(p);
    }
    return out;
  }

 private:
  void prepare_synth() {
    cov_ = make_covariance(cfg_.d, cfg_.decay, cfg_.decay_a);
    lin_ = linearize_params(spec_, cov_.tau(), cov_.trace_ratio());
    test_ = sample_points(cov_, cfg_.test_points, derive_seed(cfg_.seed, {0x7e57}));
    clean_test_ = TargetSpec::sin_sqnorm(cfg_.sigma).evaluate(test_);
  }

  void prepare_real() {
    data_ = std::make_unique<Dataset>(parse_libsvm(cfg_.input_path, cfg_.d));
    if (cfg_.standardize) data_ = std::make_unique<Dataset>(standardize_columns(*data_));
    const int total = static_cast<int>(data_->n());
    const int n_max = cfg_.n_grid.back();
    if (n_max >= total) {
      throw ConfigError("largest n = " + std::to_string(n_max) + " leaves no held-out rows in " +
                        std::to_string(total) + " records");
    }
    test_count_ = std::min(cfg_.test_points, total - n_max);
  }

  LinParams real_params(const Eigen::MatrixXd& x) const {
    return linearize_params(spec_, estimate_tau(x), estimate_trace_ratio(x));
  }

  KernelChoice choice(const LinParams& params) const {
    if (cfg_.use_linearized) return LinearizedKernel{params, cfg_.gamma_override};
    return spec_;
  }

  CellResult synth_cell(int n, int trial) const {
    const std::uint64_t cell_seed =
        derive_seed(cfg_.seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial)});
    const TargetSpec target = TargetSpec::sin_sqnorm(cfg_.sigma);
    const SyntheticSample sample = sample_dataset(cov_, n, target, cell_seed);
    CellResult c;
    c.lambda = schedule_lambda(RegSchedule{cfg_.cbar, cfg_.theta, std::nullopt}, n);
    const RiskEstimate est =
        excess_risk_mc(sample.data, sample.clean, choice(lin_), c.lambda, cfg_.sigma, test_,
                       clean_test_, cfg_.noise_draws, derive_seed(cell_seed, {0xe5}));
    c.bias = est.bias;
    c.var = est.variance;
    c.risk = est.risk;
    c.mc_stderr = est.mc_stderr;
    fill_bounds(c, lin_, sample.data.features(), n);
    return c;
  }

  CellResult real_cell(int n, int trial) const {
    const int total = static_cast<int>(data_->n());
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(total));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    Rng rng = make_rng(cfg_.seed, {0x5bu, static_cast<std::uint64_t>(trial)});
    std::shuffle(perm.begin(), perm.end(), rng);
    const std::vector<Eigen::Index> train_rows(perm.begin(), perm.begin() + n);
    const std::vector<Eigen::Index> test_rows(perm.end() - test_count_, perm.end());
    const Dataset train = data_->subset(train_rows);
    const Dataset test = data_->subset(test_rows);

    const LinParams params = real_params(train.features());
    CellResult c;
    c.lambda = schedule_lambda(RegSchedule{cfg_.cbar, cfg_.theta, std::nullopt}, n);
    const Eigen::MatrixXd w = smoother_weights(train, choice(params), c.lambda, test.features());
    const double m = static_cast<double>(test_count_);
    c.risk = (w.transpose() * train.responses() - test.responses()).squaredNorm() / m;
    c.bias = c.risk;
    c.var = cfg_.sigma * cfg_.sigma * w.squaredNorm() / m;
    fill_bounds(c, params, train.features(), n);
    return c;
  }

  void fill_bounds(CellResult& c, const LinParams& params, const Eigen::MatrixXd& x,
                   int n) const {
    const int d = static_cast<int>(x.cols());
    const double gamma = cfg_.gamma_override.value_or(params.gamma);
    if (static_cast<double>(n) * c.lambda + gamma > 0.0) {
      c.v1 = bound_v1(lin_spectrum(params, x), params.beta, d, n, c.lambda, gamma, cfg_.sigma);
      c.v2 = d >= 2 ? bound_v2(params.family, n, c.lambda, gamma, d, moments_, cfg_.sigma)
                    : std::nan("");
    } else {
      c.v1 = std::numeric_limits<double>::infinity();
      c.v2 = std::numeric_limits<double>::infinity();
    }
  }

  const ExperimentConfig& cfg_;
  KernelSpec spec_;
  MomentParams moments_;
  CovModel cov_;
  LinParams lin_;
  Eigen::MatrixXd test_;
  Eigen::VectorXd clean_test_;
  std::unique_ptr<Dataset> data_;
  int test_count_ = 0;
};

}  // namespace

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn,
                  const std::function<std::string(std::size_t)>& label) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < count; ++i)
    if (errors[i]) rethrow_with_context(errors[i], label ? label(i) : std::string());
}

std::vector<RiskPoint> run_sweep(const ExperimentConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  SweepRunner runner(cfg);
  return runner.run(progress);
}

std::string risk_csv(const std::vector<RiskPoint>& points) {
  std::ostringstream out;
  out << kRiskCsvHeader << '\n';
  for (const auto& p : points) {
    out << p.n << ',' << format_number(p.lambda) << ',' << format_number(p.bias_emp) << ','
        << format_number(p.var_emp) << ',' << format_number(p.risk_emp) << ','
        << format_number(p.v1_bound) << ',' << format_number(p.v2_bound) << ','
        << format_number(p.bias_ref) << ',' << format_number(p.mc_stderr) << '\n';
  }
  return out.str();
}

}  // namespace krrlab::harness
