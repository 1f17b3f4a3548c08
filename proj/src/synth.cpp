#include "krrlab/synth.hpp"

#include "krrlab/errors.hpp"
#include "krrlab/random.hpp"

#include <cmath>
#include <string>

namespace krrlab {

CovModel make_covariance(int d, DecayKind kind, double a) {
  if (d < 1) throw DomainError("covariance dimension d must be >= 1");
  DecaySpec{kind, a, d}.validate();
  CovModel cov;
  cov.d = d;
  cov.kind = kind;
  cov.a = a;
  cov.diag.resize(d);
  for (int i = 1; i <= d; ++i) {
    const double di = static_cast<double>(i);
    double v = 0.0;
    switch (kind) {
      case DecayKind::harmonic:
        v = 1.0 / di;
        break;
      case DecayKind::polynomial:
        v = std::pow(di, -2.0 * a);
        break;
      case DecayKind::exponential:
        v = std::exp(-a * (di - 1.0));  // shifted so the leading entry cannot underflow
        break;
    }
    cov.diag(i - 1) = v;
  }
  cov.diag *= static_cast<double>(d) / cov.diag.sum();
  return cov;
}

Eigen::MatrixXd random_orthogonal_rows(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw DomainError("random_orthogonal_rows needs n, d >= 1");
  Rng rng = make_rng(seed, {0x7157});
  if (n > d) return standard_normal(n, d, rng);
  const Eigen::MatrixXd g = standard_normal(d, n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, n);
  // Fix column signs so Q does not depend on the Householder sign convention.
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return std::sqrt(static_cast<double>(d)) * q.transpose();
}

TargetSpec TargetSpec::sin_sqnorm(double noise_sigma) {
  if (!(noise_sigma >= 0.0)) throw DomainError("noise sigma must be >= 0");
  TargetSpec t;
  t.kind = Kind::sin_sqnorm;
  t.noise_sigma = noise_sigma;
  return t;
}

TargetSpec TargetSpec::custom(std::function<double(const Eigen::VectorXd&)> fn,
                              double noise_sigma) {
  if (!fn) throw DomainError("custom target needs a callable");
  if (!(noise_sigma >= 0.0)) throw DomainError("noise sigma must be >= 0");
  TargetSpec t;
  t.kind = Kind::custom;
  t.fn = std::move(fn);
  t.noise_sigma = noise_sigma;
  return t;
}

Eigen::VectorXd TargetSpec::evaluate(const Eigen::MatrixXd& points) const {
  if (kind == Kind::sin_sqnorm) return points.rowwise().squaredNorm().array().sin().matrix();
  Eigen::VectorXd out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) out(i) = fn(points.row(i).transpose());
  return out;
}

SyntheticSample sample_dataset(const CovModel& cov, int n, const TargetSpec& target,
                               std::uint64_t seed) {
  if (!(target.noise_sigma >= 0.0)) throw DomainError("noise sigma must be >= 0");
  const Eigen::MatrixXd t = random_orthogonal_rows(n, cov.d, derive_seed(seed, {1}));
  const Eigen::MatrixXd x = t * cov.diag.cwiseSqrt().asDiagonal();
  Eigen::VectorXd clean = target.evaluate(x);
  Eigen::VectorXd y = clean;
  if (target.noise_sigma > 0.0) {
    Rng rng = make_rng(seed, {2});
    y += target.noise_sigma * standard_normal(n, 1, rng).col(0);
  }
  return SyntheticSample{Dataset(x, std::move(y)), std::move(clean)};
}

Eigen::MatrixXd sample_points(const CovModel& cov, int m, std::uint64_t seed) {
  if (m < 1) throw DomainError("sample_points needs m >= 1");
  Rng rng = make_rng(seed, {3});
  return standard_normal(m, cov.d, rng) * cov.diag.cwiseSqrt().asDiagonal();
}

}  // namespace krrlab
