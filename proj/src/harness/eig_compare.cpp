#include "krrlab/harness/eig_compare.hpp"

#include "krrlab/errors.hpp"
#include "krrlab/harness/csv.hpp"
#include "krrlab/harness/curve.hpp"
#include "krrlab/harness/libsvm.hpp"
#include "krrlab/random.hpp"
#include "krrlab/spectral.hpp"
#include "krrlab/synth.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace krrlab::harness {

namespace {

struct Sample {
  Eigen::MatrixXd x;
  double tau = 0.0;
  double trace_ratio = 0.0;
};

Sample draw_sample(const ExperimentConfig& cfg) {
  const int n = cfg.n_grid.front();
  Sample s;
  if (cfg.mode == Mode::synth) {
    const CovModel cov = make_covariance(cfg.d, cfg.decay, cfg.decay_a);
    s.x = sample_dataset(cov, n, TargetSpec::sin_sqnorm(0.0), derive_seed(cfg.seed, {0xe1}))
              .data.features();
    s.tau = cov.tau();
    s.trace_ratio = cov.trace_ratio();
    return s;
  }
  Dataset data = parse_libsvm(cfg.input_path, cfg.d);
  if (cfg.standardize) data = standardize_columns(data);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(data.n()));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  Rng rng = make_rng(cfg.seed, {0x5bu, 0});
  std::shuffle(perm.begin(), perm.end(), rng);
  perm.resize(static_cast<std::size_t>(std::min<Eigen::Index>(n, data.n())));
  s.x = data.subset(perm).features();
  s.tau = estimate_tau(s.x);
  s.trace_ratio = estimate_trace_ratio(s.x);
  return s;
}

}  // namespace

EigCompareResult eig_compare(const ExperimentConfig& cfg) {
  cfg.validate();
  const KernelSpec spec = make_kernel(cfg.kernel, cfg.degree);
  const Sample s = draw_sample(cfg);

  EigCompareResult result;
  result.n = static_cast<int>(s.x.rows());
  result.d = static_cast<int>(s.x.cols());
  result.params = linearize_params(spec, s.tau, s.trace_ratio);
  result.gamma_used = cfg.gamma_override.value_or(result.params.gamma);
  result.start_index = spec.family() == KernelFamily::radial ? 6 : 2;

  const std::vector<double> eig_k = sorted_eigenvalues(kernel_matrix(spec, s.x));
  const std::vector<double> eig_klin =
      sorted_eigenvalues(build_lin_kernel(result.params, s.x, cfg.gamma_override).matrix());
  const std::vector<double> eig_xx = sorted_eigenvalues(scaled_gram(s.x));
  result.interlacing = interlacing_check(eig_klin, eig_xx, result.params.beta,
                                         result.gamma_used, result.start_index);

  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(cfg.top_k), eig_k.size());
  std::vector<double> tail_k, tail_xx;
  for (std::size_t i = 0; i < k; ++i) {
    EigRow row;
    row.i = static_cast<int>(i + 1);
    row.eig_k = eig_k[i];
    row.eig_klin = eig_klin[i];
    row.scaled_xx = result.params.beta * eig_xx[i] + result.gamma_used;
    row.excluded = i == 0;
    result.rows.push_back(row);
    if (i >= 5) {
      tail_k.push_back(row.eig_k);
      tail_xx.push_back(row.scaled_xx);
    }
  }
  if (tail_k.size() >= 2) {
    try {
      result.spearman_beyond_top5 = spearman(tail_k, tail_xx);
    } catch (const DomainError&) {
      result.spearman_beyond_top5 = 0.0;
    }
  }
  return result;
}

std::string eig_csv(const EigCompareResult& result) {
  std::ostringstream out;
  out << kEigCsvHeader << '\n';
  for (const auto& r : result.rows) {
    out << r.i << ',' << format_number(r.eig_k) << ',' << format_number(r.eig_klin) << ','
        << format_number(r.scaled_xx) << ',' << (r.excluded ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace krrlab::harness
