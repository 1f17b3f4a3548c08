#include "krrlab/linearize.hpp"

#include "krrlab/errors.hpp"
#include "krrlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace krrlab {

namespace {

LinParams general_params(const KernelSpec& spec, double tau, double tr) {
  LinParams p;
  p.family = spec.family();
  if (spec.family() == KernelFamily::inner_product) {
    p.h_pivot = spec.h(0.0);
    p.dh_pivot = spec.dh(0.0);
    p.d2h_pivot = spec.d2h(0.0);
    p.alpha = p.h_pivot + 0.5 * p.d2h_pivot * tr;
    p.beta = p.dh_pivot;
    p.gamma = spec.h(tau) - p.h_pivot - tau * p.dh_pivot;
  } else {
    const double pivot = 2.0 * tau;
    p.h_pivot = spec.h(pivot);
    p.dh_pivot = spec.dh(pivot);
    p.d2h_pivot = spec.d2h(pivot);
    p.alpha = p.h_pivot + 2.0 * p.d2h_pivot * tr;
    p.beta = -2.0 * p.dh_pivot;
    p.gamma = spec.h(0.0) + 2.0 * tau * p.dh_pivot - p.h_pivot;
  }
  return p;
}

void tabulated_params(const KernelSpec& spec, double tau, double tr, LinParams& p) {
  switch (spec.variant()) {
    case KernelVariant::linear:
      p.alpha = 0.0;
      p.beta = 1.0;
      p.gamma = 0.0;
      break;
    case KernelVariant::polynomial: {
      const double deg = spec.degree();
      p.alpha = 1.0 + deg * (deg - 1.0) * tr / 2.0;
      p.beta = deg;
      p.gamma = std::pow(1.0 + tau, deg) - 1.0 - deg * tau;
      break;
    }
    case KernelVariant::exponential_inner:
      p.alpha = 1.0 + 2.0 * tr;
      p.beta = 2.0;
      p.gamma = std::exp(2.0 * tau) - 1.0 - 2.0 * tau;
      break;
    case KernelVariant::gaussian: {
      const double e = std::exp(-2.0 * tau);
      p.alpha = e * (1.0 + 2.0 * tr);
      p.beta = 2.0 * e;
      p.gamma = 1.0 - 2.0 * tau * e - e;
      break;
    }
    case KernelVariant::custom:
      break;
  }
}

}  // namespace

double estimate_tau(const Eigen::MatrixXd& features) {
  return features.rowwise().squaredNorm().mean() / static_cast<double>(features.cols());
}

double estimate_trace_ratio(const Eigen::MatrixXd& features) {
  const double n = static_cast<double>(features.rows());
  const double d = static_cast<double>(features.cols());
  if (features.rows() < 2) return 0.0;
  const Eigen::MatrixXd xc = features.rowwise() - features.colwise().mean();
  // tr(S^2) = ||Xc^T Xc||_F^2 / (n-1)^2; use the smaller Gram.
  const double tr_s2 = (features.rows() <= features.cols() ? (xc * xc.transpose()).squaredNorm()
                                                           : (xc.transpose() * xc).squaredNorm()) /
                       ((n - 1.0) * (n - 1.0));
  const double tr_s = xc.squaredNorm() / (n - 1.0);
  return std::max(0.0, tr_s2 - tr_s * tr_s / n) / (d * d);
}

LinParams linearize_params(const KernelSpec& spec, double tau, double trace_ratio) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError("tau must be finite and >= 0");
  if (!(trace_ratio >= 0.0) || !std::isfinite(trace_ratio)) {
    throw DomainError("trace_ratio must be finite and >= 0");
  }
  LinParams p = general_params(spec, tau, trace_ratio);
  if (!std::isfinite(p.h_pivot) || !std::isfinite(p.dh_pivot) || !std::isfinite(p.d2h_pivot)) {
    throw DomainError("kernel '" + spec.name() + "' is not finite at its pivot");
  }
  tabulated_params(spec, tau, trace_ratio, p);
  p.tau = tau;
  p.trace_ratio = trace_ratio;
  // Round-off can push an exact zero slightly negative.
  const double slack = 1e-14 * std::max({1.0, std::abs(p.h_pivot), std::abs(p.dh_pivot)});
  if (p.gamma < 0.0 && p.gamma > -slack) p.gamma = 0.0;
  if (!(p.alpha >= 0.0) || !(p.beta > 0.0) || !(p.gamma >= 0.0)) {
    throw ValidityError("kernel '" + spec.name() + "' linearizes to alpha = " +
                        std::to_string(p.alpha) + ", beta = " + std::to_string(p.beta) +
                        ", gamma = " + std::to_string(p.gamma) +
                        "; need alpha >= 0, beta > 0, gamma >= 0");
  }
  return p;
}

Eigen::MatrixXd psi_outer_sum(const Eigen::VectorXd& psi) {
  const Eigen::Index n = psi.size();
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = psi(i) + psi(j);
  return a;
}

LinKernel build_lin_kernel(const LinParams& params, const Dataset& data,
                           std::optional<double> gamma_override) {
  return build_lin_kernel(params, data.features(), gamma_override);
}

LinKernel build_lin_kernel(const LinParams& params, const Eigen::MatrixXd& features,
                           std::optional<double> gamma_override) {
  if (gamma_override && !(*gamma_override >= 0.0)) {
    throw DomainError("gamma override must be >= 0");
  }
  const Eigen::Index n = features.rows();
  const double d = static_cast<double>(features.cols());
  LinKernel lin;
  lin.gamma = gamma_override.value_or(params.gamma);
  lin.base = params.beta * scaled_gram(features);
  lin.base.array() += params.alpha;
  lin.base.diagonal().array() += lin.gamma;
  lin.psi = features.rowwise().squaredNorm() / d;
  lin.psi.array() -= params.tau;
  if (params.family == KernelFamily::radial) {
    const Eigen::MatrixXd a = psi_outer_sum(lin.psi);
    lin.t_matrix = params.dh_pivot * a + 0.5 * params.d2h_pivot * a.cwiseProduct(a);
  } else {
    lin.t_matrix = Eigen::MatrixXd::Zero(n, n);
  }
  return lin;
}

Eigen::VectorXd lin_cross_kernel(const LinParams& params, const Dataset& data,
                                 const Eigen::VectorXd& query) {
  if (query.size() != data.d()) {
    throw ShapeError("query length " + std::to_string(query.size()) +
                     " does not match d = " + std::to_string(data.d()));
  }
  return lin_cross_kernel_matrix(params, data.features(), query.transpose()).row(0).transpose();
}

Eigen::MatrixXd lin_cross_kernel_matrix(const LinParams& params,
                                        const Eigen::MatrixXd& train_features,
                                        const Eigen::MatrixXd& queries) {
  if (queries.cols() != train_features.cols()) {
    throw ShapeError("query width " + std::to_string(queries.cols()) +
                     " does not match feature dimension " +
                     std::to_string(train_features.cols()));
  }
  const double d = static_cast<double>(train_features.cols());
  Eigen::MatrixXd c = (params.beta / d) * (queries * train_features.transpose());
  c.array() += params.h_pivot;
  if (params.family == KernelFamily::radial) {
    Eigen::VectorXd psi_q = queries.rowwise().squaredNorm() / d;
    psi_q.array() -= params.tau;
    Eigen::VectorXd psi_x = train_features.rowwise().squaredNorm() / d;
    psi_x.array() -= params.tau;
    c.colwise() -= 0.5 * params.beta * psi_q;
    c.rowwise() -= 0.5 * params.beta * psi_x.transpose();
  }
  return c;
}

double approx_error(const Eigen::MatrixXd& k, const Eigen::MatrixXd& klin) {
  if (k.rows() != klin.rows() || k.cols() != klin.cols()) {
    throw ShapeError("approx_error: matrices differ in shape");
  }
  const std::vector<double> ev = sorted_eigenvalues(k - klin);
  if (ev.empty()) return 0.0;
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

InterlacingReport interlacing_check(std::span<const double> eig_klin,
                                    std::span<const double> eig_xx, double beta,
                                    double gamma, int start_index) {
  if (eig_klin.size() != eig_xx.size()) {
    throw ShapeError("interlacing_check: spectra differ in length (" +
                     std::to_string(eig_klin.size()) + " vs " +
                     std::to_string(eig_xx.size()) + ")");
  }
  if (start_index < 2) throw DomainError("interlacing start index must be >= 2");
  InterlacingReport report;
  if (eig_klin.empty()) return report;
  const double tol = 1e-8 * std::max(std::abs(eig_klin[0]), std::abs(beta * eig_xx[0] + gamma));
  for (std::size_t i = static_cast<std::size_t>(start_index); i <= eig_klin.size(); ++i) {
    const double value = eig_klin[i - 1];
    const double lower = beta * eig_xx[i - 1] + gamma;
    const double upper = beta * eig_xx[i - 2] + gamma;
    const double excess = std::max(lower - value, value - upper);
    if (excess > tol) {
      report.violations.push_back({static_cast<int>(i), value, lower, upper});
      report.max_violation = std::max(report.max_violation, excess);
    }
  }
  return report;
}

MomentReport moment_diagnostics(const Dataset& data,
                                const std::optional<Eigen::VectorXd>& sigma_d, double tau,
                                const Eigen::MatrixXd& queries) {
  if (queries.rows() < 100) {
    throw InsufficientSampleError("moment diagnostics need at least 100 query points, got " +
                                  std::to_string(queries.rows()));
  }
  if (queries.cols() != data.d()) throw ShapeError("query width does not match d");
  const Eigen::MatrixXd& x = data.features();
  const Eigen::Index n = data.n();
  const double d = static_cast<double>(data.d());

  Eigen::VectorXd scale(data.d());
  if (sigma_d) {
    if (sigma_d->size() != data.d()) throw ShapeError("sigma_d length does not match d");
    scale = sigma_d->cwiseSqrt();
  } else {
    const Eigen::RowVectorXd mean = x.colwise().mean();
    const double denom = std::max<double>(1.0, static_cast<double>(n - 1));
    scale = ((x.rowwise() - mean).colwise().squaredNorm() / denom).cwiseSqrt().transpose();
  }
  double m3 = 0.0, m4 = 0.0;
  Eigen::Index count = 0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (!(scale(j) > 0.0)) continue;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double t = x(i, j) / scale(j);
      m3 += t * t * t;
      m4 += t * t * t * t;
      ++count;
    }
  }
  MomentReport report;
  if (count > 0) {
    report.mu3_hat = m3 / static_cast<double>(count);
    report.mu4_hat = m4 / static_cast<double>(count);
  }

  Eigen::VectorXd psi = x.rowwise().squaredNorm() / d;
  psi.array() -= tau;
  Eigen::VectorXd psi_q = queries.rowwise().squaredNorm() / d;
  psi_q.array() -= tau;
  const double m = static_cast<double>(queries.rows());
  const double e1 = psi_q.mean();
  const double e2 = psi_q.squaredNorm() / m;
  // E[(psi_x 1 + psi)(psi_x 1 + psi)^T] expanded in the query moments.
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::MatrixXd est = e2 * ones * ones.transpose() +
                              e1 * (ones * psi.transpose() + psi * ones.transpose()) +
                              psi * psi.transpose();
  const std::vector<double> ev = sorted_eigenvalues(est);
  report.lambda1 = ev.size() > 0 ? ev[0] : 0.0;
  report.lambda2 = ev.size() > 1 ? ev[1] : 0.0;
  report.rank1_ratio = report.lambda1 > 0.0 ? report.lambda2 / report.lambda1 : 0.0;
  report.max_entry = est.cwiseAbs().maxCoeff();
  return report;
}

}  // namespace krrlab
