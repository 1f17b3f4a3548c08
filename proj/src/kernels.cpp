#include "krrlab/kernels.hpp"

#include "krrlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace krrlab {

KernelSpec::KernelSpec(KernelFamily family, KernelVariant variant, int degree,
                       std::string name)
    : family_(family), variant_(variant), degree_(degree), name_(std::move(name)) {}

KernelSpec KernelSpec::linear() {
  return KernelSpec(KernelFamily::inner_product, KernelVariant::linear, 0, "linear");
}

KernelSpec KernelSpec::polynomial(int degree) {
  if (degree < 1) {
    throw DomainError("polynomial kernel degree must be >= 1, got " + std::to_string(degree));
  }
  return KernelSpec(KernelFamily::inner_product, KernelVariant::polynomial, degree,
                    "polynomial" + std::to_string(degree));
}

KernelSpec KernelSpec::exponential_inner() {
  return KernelSpec(KernelFamily::inner_product, KernelVariant::exponential_inner, 0,
                    "exponential_inner");
}

KernelSpec KernelSpec::gaussian() {
  return KernelSpec(KernelFamily::radial, KernelVariant::gaussian, 0, "gaussian");
}

KernelSpec KernelSpec::custom(KernelFamily family, std::string name, Profile h,
                              Profile dh, Profile d2h) {
  if (!h || !dh || !d2h) throw DomainError("custom kernel needs h, h' and h''");
  KernelSpec spec(family, KernelVariant::custom, 0, std::move(name));
  spec.h_ = std::move(h);
  spec.dh_ = std::move(dh);
  spec.d2h_ = std::move(d2h);
  if (family == KernelFamily::inner_product) {
    if (!std::isfinite(spec.h(0.0)) || !std::isfinite(spec.dh(0.0)) ||
        !std::isfinite(spec.d2h(0.0))) {
      throw DomainError("custom kernel '" + spec.name_ + "': h, h', h'' not finite at 0");
    }
  }
  return spec;
}

double KernelSpec::h(double t) const {
  switch (variant_) {
    case KernelVariant::linear:
      return t;
    case KernelVariant::polynomial:
      return std::pow(1.0 + t, degree_);
    case KernelVariant::exponential_inner:
      return std::exp(2.0 * t);
    case KernelVariant::gaussian:
      return std::exp(-t);
    case KernelVariant::custom:
      return h_(t);
  }
  return 0.0;
}

double KernelSpec::dh(double t) const {
  switch (variant_) {
    case KernelVariant::linear:
      return 1.0;
    case KernelVariant::polynomial:
      return degree_ * std::pow(1.0 + t, degree_ - 1);
    case KernelVariant::exponential_inner:
      return 2.0 * std::exp(2.0 * t);
    case KernelVariant::gaussian:
      return -std::exp(-t);
    case KernelVariant::custom:
      return dh_(t);
  }
  return 0.0;
}

double KernelSpec::d2h(double t) const {
  switch (variant_) {
    case KernelVariant::linear:
      return 0.0;
    case KernelVariant::polynomial:
      return degree_ < 2 ? 0.0
                         : static_cast<double>(degree_) * (degree_ - 1) *
                               std::pow(1.0 + t, degree_ - 2);
    case KernelVariant::exponential_inner:
      return 4.0 * std::exp(2.0 * t);
    case KernelVariant::gaussian:
      return std::exp(-t);
    case KernelVariant::custom:
      return d2h_(t);
  }
  return 0.0;
}

namespace {

// Fills the upper triangle from the lower one.
void mirror_lower(Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i) m(i, j) = m(j, i);
}

Eigen::MatrixXd lower_gram(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(x.rows(), x.rows());
  g.selfadjointView<Eigen::Lower>().rankUpdate(x);
  return g;
}

}  // namespace

Eigen::MatrixXd scaled_gram(const Eigen::MatrixXd& features) {
  Eigen::MatrixXd g = lower_gram(features);
  const double inv_d = 1.0 / static_cast<double>(features.cols());
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = j; i < g.rows(); ++i) g(i, j) *= inv_d;
  mirror_lower(g);
  return g;
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Dataset& data) {
  return kernel_matrix(spec, data.features());
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  const double d = static_cast<double>(x.cols());
  Eigen::MatrixXd k = lower_gram(x);

  if (spec.family() == KernelFamily::inner_product) {
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = j; i < n; ++i) k(i, j) = spec.h(k(i, j) / d);
  } else {
    const Eigen::VectorXd sq = k.diagonal();
    for (Eigen::Index j = 0; j < n; ++j) {
      k(j, j) = spec.h(0.0);
      for (Eigen::Index i = j + 1; i < n; ++i) {
        const double dist = std::max(0.0, sq(i) + sq(j) - 2.0 * k(i, j)) / d;
        k(i, j) = spec.h(dist);
      }
    }
  }
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j; i < n; ++i)
      if (!std::isfinite(k(i, j))) {
        throw EvaluationError("non-finite kernel value", static_cast<std::size_t>(i),
                              static_cast<std::size_t>(j));
      }
  mirror_lower(k);
  return k;
}

Eigen::MatrixXd cross_kernel_matrix(const KernelSpec& spec,
                                    const Eigen::MatrixXd& train,
                                    const Eigen::MatrixXd& queries) {
  if (queries.cols() != train.cols()) {
    throw ShapeError("query width " + std::to_string(queries.cols()) +
                     " does not match feature dimension " + std::to_string(train.cols()));
  }
  const double d = static_cast<double>(train.cols());
  Eigen::MatrixXd c = queries * train.transpose();
  if (spec.family() == KernelFamily::inner_product) {
    c = c.unaryExpr([&](double v) { return spec.h(v / d); });
  } else {
    const Eigen::VectorXd sq_q = queries.rowwise().squaredNorm();
    const Eigen::VectorXd sq_x = train.rowwise().squaredNorm();
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      for (Eigen::Index i = 0; i < c.rows(); ++i)
        c(i, j) = spec.h(std::max(0.0, sq_q(i) + sq_x(j) - 2.0 * c(i, j)) / d);
  }
  for (Eigen::Index j = 0; j < c.cols(); ++j)
    for (Eigen::Index i = 0; i < c.rows(); ++i)
      if (!std::isfinite(c(i, j))) {
        throw EvaluationError("non-finite cross-kernel value", static_cast<std::size_t>(i),
                              static_cast<std::size_t>(j));
      }
  return c;
}

Eigen::VectorXd cross_kernel(const KernelSpec& spec, const Dataset& data,
                             const Eigen::VectorXd& query) {
  if (query.size() != data.d()) {
    throw ShapeError("query length " + std::to_string(query.size()) +
                     " does not match d = " + std::to_string(data.d()));
  }
  return cross_kernel_matrix(spec, data.features(), query.transpose()).row(0).transpose();
}

RidgeSystem::RidgeSystem(const Eigen::MatrixXd& gram, double n_lambda) : size_(gram.rows()) {
  if (gram.rows() != gram.cols()) throw ShapeError("ridge system needs a square matrix");
  if (!(n_lambda >= 0.0) || !std::isfinite(n_lambda)) {
    throw DomainError("ridge shift n*lambda must be finite and >= 0");
  }
  Eigen::MatrixXd shifted = gram;
  shifted.diagonal().array() += n_lambda;
  llt_.compute(shifted);
  if (llt_.info() == Eigen::Success) return;

  double base = 1e-12 * std::abs(gram.trace()) / static_cast<double>(size_);
  if (!(base > 0.0) || !std::isfinite(base)) base = 1e-12;
  double jitter = base;
  for (int attempt = 0; attempt < 4; ++attempt, jitter *= 10.0) {
    Eigen::MatrixXd retry = shifted;
    retry.diagonal().array() += jitter;
    llt_.compute(retry);
    if (llt_.info() == Eigen::Success) {
      jitter_ = jitter;
      return;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(shifted, Eigen::EigenvaluesOnly);
  const double smallest = eig.eigenvalues()(0);
  throw SingularityError("K + n*lambda*I is not positive definite (smallest eigenvalue " +
                             std::to_string(smallest) + ") after jitter retries",
                         smallest);
}

Eigen::MatrixXd RidgeSystem::solve(const Eigen::MatrixXd& rhs) const {
  if (rhs.rows() != size_) throw ShapeError("ridge solve: right-hand side has wrong height");
  return llt_.solve(rhs);
}

Eigen::VectorXd RidgeSystem::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != size_) throw ShapeError("ridge solve: right-hand side has wrong length");
  return llt_.solve(rhs);
}

KrrModel krr_fit(const KernelSpec& spec, const Dataset& data, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("lambda must be finite and >= 0");
  }
  const Eigen::MatrixXd k = kernel_matrix(spec, data);
  const RidgeSystem system(k, static_cast<double>(data.n()) * lambda);
  return KrrModel{system.solve(data.responses()), data.features(), lambda, system.jitter()};
}

Eigen::VectorXd krr_predict(const KrrModel& model, const KernelSpec& spec,
                            const Eigen::MatrixXd& queries) {
  return cross_kernel_matrix(spec, model.train_features, queries) * model.coefficients;
}

}  // namespace krrlab
