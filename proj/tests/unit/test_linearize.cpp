#include "krrlab/errors.hpp"
#include "krrlab/linearize.hpp"
#include "krrlab/spectral.hpp"
#include "krrlab/synth.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace krrlab;

namespace {

// General linearization formulas evaluated from hand-written profiles.
struct Ref {
  double alpha, beta, gamma;
};

Ref general_inner(double h0, double dh0, double d2h0, double h_tau, double tau, double tr) {
  return {h0 + d2h0 * tr / 2.0, dh0, h_tau - h0 - tau * dh0};
}

Ref general_radial(double h0, double h2t, double dh2t, double d2h2t, double tau, double tr) {
  return {h2t + 2.0 * d2h2t * tr, -2.0 * dh2t, h0 + 2.0 * tau * dh2t - h2t};
}

void check_close(double a, double b) {
  CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
}

}  // namespace

TEST_CASE("tabulated linearizations") {
  const LinParams lin = linearize_params(KernelSpec::linear(), 0.7, 0.3);
  CHECK(lin.alpha == 0.0);
  CHECK(lin.beta == 1.0);
  CHECK(lin.gamma == 0.0);

  const double s = 0.37;
  const LinParams poly = linearize_params(KernelSpec::polynomial(3), 1.0, s);
  check_close(poly.alpha, 1.0 + 3.0 * s);
  check_close(poly.beta, 3.0);
  check_close(poly.gamma, 4.0);

  const LinParams g = linearize_params(KernelSpec::gaussian(), 0.5, 0.0);
  CHECK(g.beta == doctest::Approx(0.735759).epsilon(1e-6));
  CHECK(g.gamma == doctest::Approx(0.264241).epsilon(1e-5));
}

TEST_CASE("tabulated rows agree with the general formulas") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int k = 0; k < 20; ++k) {
    const double tau = u(rng), tr = u(rng);
    for (int p = 1; p <= 4; ++p) {
      const LinParams got = linearize_params(KernelSpec::polynomial(p), tau, tr);
      const Ref want = general_inner(1.0, p, p * (p - 1.0), std::pow(1.0 + tau, p), tau, tr);
      check_close(got.alpha, want.alpha);
      check_close(got.beta, want.beta);
      check_close(got.gamma, want.gamma);
    }
    {
      const LinParams got = linearize_params(KernelSpec::exponential_inner(), tau, tr);
      const Ref want = general_inner(1.0, 2.0, 4.0, std::exp(2.0 * tau), tau, tr);
      check_close(got.alpha, want.alpha);
      check_close(got.beta, want.beta);
      check_close(got.gamma, want.gamma);
    }
    {
      const LinParams got = linearize_params(KernelSpec::gaussian(), tau, tr);
      const double e = std::exp(-2.0 * tau);
      const Ref want = general_radial(1.0, e, -e, e, tau, tr);
      check_close(got.alpha, want.alpha);
      check_close(got.beta, want.beta);
      check_close(got.gamma, want.gamma);
    }
  }
}

TEST_CASE("custom kernels use the general formulas and are sign-checked") {
  // h(t) = exp(t) inner-product: alpha = 1 + tr/2, beta = 1, gamma = e^tau - 1 - tau.
  const KernelSpec ex = KernelSpec::custom(
      KernelFamily::inner_product, "exp", [](double t) { return std::exp(t); },
      [](double t) { return std::exp(t); }, [](double t) { return std::exp(t); });
  const LinParams p = linearize_params(ex, 0.8, 0.2);
  check_close(p.alpha, 1.1);
  check_close(p.beta, 1.0);
  check_close(p.gamma, std::exp(0.8) - 1.8);

  // Decreasing inner-product profile gives beta < 0.
  const KernelSpec bad = KernelSpec::custom(
      KernelFamily::inner_product, "neg", [](double t) { return std::exp(-t); },
      [](double t) { return -std::exp(-t); }, [](double t) { return std::exp(-t); });
  CHECK_THROWS_AS(linearize_params(bad, 1.0, 0.1), ValidityError);
  CHECK_THROWS_AS(linearize_params(KernelSpec::gaussian(), -1.0, 0.1), DomainError);
}

TEST_CASE("build_lin_kernel structure") {
  std::mt19937_64 rng(12);
  const Eigen::MatrixXd x = oracle::gaussian_matrix(15, 40, rng);
  const Dataset data(x, Eigen::VectorXd::Zero(15));

  SUBCASE("inner-product T is zero") {
    const LinParams p = linearize_params(KernelSpec::polynomial(2), 1.0, 0.05);
    const LinKernel lin = build_lin_kernel(p, data);
    CHECK(lin.t_matrix.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("alpha = gamma = 0, T = 0 reduces to beta XX^T/d") {
    LinParams p;
    p.beta = 2.5;
    const LinKernel lin = build_lin_kernel(p, data);
    const Eigen::MatrixXd want = 2.5 * x * x.transpose() / 40.0;
    CHECK((lin.matrix() - want).cwiseAbs().maxCoeff() <= 1e-12 * want.cwiseAbs().maxCoeff());
  }
  SUBCASE("gamma override shifts by exactly gamma I") {
    const LinParams p = linearize_params(KernelSpec::gaussian(), 1.0, 0.03);
    const Eigen::MatrixXd a = build_lin_kernel(p, data).matrix();
    const Eigen::MatrixXd b = build_lin_kernel(p, data, 0.0).matrix();
    const Eigen::MatrixXd diff = a - b;
    for (int i = 0; i < 15; ++i)
      for (int j = 0; j < 15; ++j)
        CHECK(diff(i, j) == doctest::Approx(i == j ? p.gamma : 0.0).epsilon(1e-12));
  }
  SUBCASE("radial with psi = 0 has T = 0") {
    Eigen::MatrixXd eq = x;
    for (int i = 0; i < 15; ++i) eq.row(i) *= std::sqrt(40.0) / eq.row(i).norm();
    const LinParams p = linearize_params(KernelSpec::gaussian(), 1.0, 0.03);
    const LinKernel lin = build_lin_kernel(p, eq);
    CHECK(lin.psi.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(lin.t_matrix.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("A has rank 2 with eigenvalues 1'psi +- sqrt(n)||psi||; A.*A has rank 3") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 20 + 3 * trial;
    const Eigen::MatrixXd x = oracle::gaussian_matrix(n, 30, rng);
    Eigen::VectorXd psi = x.rowwise().squaredNorm() / 30.0;
    psi.array() -= 1.0;
    const Eigen::MatrixXd a = psi_outer_sum(psi);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd_a(a);
    CHECK(svd_a.singularValues()(2) <= 1e-8 * svd_a.singularValues()(0));
    const Eigen::MatrixXd aa = a.cwiseProduct(a);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd_aa(aa);
    CHECK(svd_aa.singularValues()(3) <= 1e-8 * svd_aa.singularValues()(0));

    const std::vector<double> ev = sorted_eigenvalues(a);
    const double s = psi.sum(), r = std::sqrt(static_cast<double>(n)) * psi.norm();
    CHECK(ev.front() == doctest::Approx(s + r).epsilon(1e-8));
    CHECK(ev.back() == doctest::Approx(s - r).epsilon(1e-8));
  }
}

TEST_CASE("lin_cross_kernel") {
  std::mt19937_64 rng(14);
  const Eigen::MatrixXd x = oracle::gaussian_matrix(10, 20, rng);
  const Dataset data(x, Eigen::VectorXd::Zero(10));
  const Eigen::VectorXd q = oracle::gaussian_matrix(20, 1, rng).col(0);

  const LinParams lin = linearize_params(KernelSpec::linear(), 1.0, 0.05);
  CHECK((lin_cross_kernel(lin, data, q) - x * q / 20.0).cwiseAbs().maxCoeff() < 1e-14);

  // Radial, explicit formula.
  const LinParams g = linearize_params(KernelSpec::gaussian(), 1.0, 0.05);
  Eigen::VectorXd psi = x.rowwise().squaredNorm() / 20.0;
  psi.array() -= 1.0;
  const double psi_q = q.squaredNorm() / 20.0 - 1.0;
  Eigen::VectorXd want = x * q * (g.beta / 20.0);
  want.array() += std::exp(-2.0) - 0.5 * g.beta * psi_q;
  want -= 0.5 * g.beta * psi;
  CHECK((lin_cross_kernel(g, data, q) - want).cwiseAbs().maxCoeff() < 1e-13);

  // Cross kernel on the training rows reproduces the off-diagonal of K^lin.
  const Eigen::MatrixXd klin = build_lin_kernel(g, data).matrix();
  const Eigen::MatrixXd cross = lin_cross_kernel_matrix(g, x, x);
  Eigen::MatrixXd off = klin - cross.transpose();
  off.diagonal().setZero();
  // K^lin also carries 2 h''(2tau) tr in alpha and the A.*A term; drop both.
  const Eigen::MatrixXd a = psi_outer_sum(psi);
  off -= 0.5 * g.d2h_pivot * a.cwiseProduct(a);
  off.array() -= g.alpha - g.h_pivot;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(lin_cross_kernel(g, data, Eigen::VectorXd::Zero(3)), ShapeError);
}

TEST_CASE("lin_cross_kernel deviation from the true cross kernel shrinks with d") {
  double prev = INFINITY;
  for (int d : {100, 400, 1600}) {
    const CovModel cov = make_covariance(d, DecayKind::exponential, 1e-9);
    const auto sample = sample_dataset(cov, 50, TargetSpec::sin_sqnorm(0.0), 17);
    const Eigen::MatrixXd q = sample_points(cov, 20, 18);
    const LinParams g = linearize_params(KernelSpec::gaussian(), cov.tau(), cov.trace_ratio());
    const Eigen::MatrixXd exact = cross_kernel_matrix(KernelSpec::gaussian(),
                                                      sample.data.features(), q);
    const Eigen::MatrixXd lin = lin_cross_kernel_matrix(g, sample.data.features(), q);
    const double dev = (exact - lin).cwiseAbs().maxCoeff();
    CHECK(dev < prev);
    prev = dev;
  }
}

TEST_CASE("approx_error") {
  Eigen::MatrixXd k = Eigen::MatrixXd::Identity(4, 4);
  CHECK(approx_error(k, k) == 0.0);
  Eigen::MatrixXd kl = k;
  kl(3, 3) -= 0.25;
  CHECK(approx_error(k, kl) == doctest::Approx(0.25));
  CHECK_THROWS_AS(approx_error(k, Eigen::MatrixXd::Identity(3, 3)), ShapeError);
}

TEST_CASE("interlacing_check") {
  std::mt19937_64 rng(15);
  const Eigen::MatrixXd x = oracle::gaussian_matrix(30, 60, rng);
  const std::vector<double> xx = sorted_eigenvalues(x * x.transpose() / 60.0);

  SUBCASE("alpha = 0 is an exact shift-scale") {
    std::vector<double> klin;
    for (double v : xx) klin.push_back(2.0 * v + 0.5);
    CHECK(interlacing_check(klin, xx, 2.0, 0.5, 2).ok());
  }
  SUBCASE("a real inner-product K^lin with alpha > 0") {
    const LinParams p = linearize_params(KernelSpec::polynomial(3), 1.0, 1.0 / 60.0);
    const auto klin = sorted_eigenvalues(build_lin_kernel(p, x).matrix());
    CHECK(interlacing_check(klin, xx, p.beta, p.gamma, 2).ok());
  }
  SUBCASE("swapping two entries is caught") {
    std::vector<double> corrupt = xx;
    std::swap(corrupt[3], corrupt[20]);
    const auto report = interlacing_check(corrupt, xx, 1.0, 0.0, 2);
    CHECK_FALSE(report.ok());
    CHECK(report.max_violation > 0.0);
  }
  CHECK_THROWS_AS(interlacing_check(std::vector<double>{1.0}, xx, 1.0, 0.0, 2), ShapeError);
}

TEST_CASE("moment_diagnostics") {
  std::mt19937_64 rng(16);
  const int n = 200, d = 100;
  const Eigen::MatrixXd x = oracle::gaussian_matrix(n, d, rng);
  const Dataset data(x, Eigen::VectorXd::Zero(n));
  const Eigen::MatrixXd q = oracle::gaussian_matrix(500, d, rng);
  const MomentReport r = moment_diagnostics(data, Eigen::VectorXd::Ones(d), 1.0, q);
  const double count = static_cast<double>(n) * d;
  CHECK(std::abs(r.mu3_hat) <= 5.0 * std::sqrt(15.0 / count));
  CHECK(std::abs(r.mu4_hat - 3.0) <= 5.0 * std::sqrt(96.0 / count));

  SUBCASE("psi = 0 data") {
    Eigen::MatrixXd eq = x;
    for (int i = 0; i < n; ++i) eq.row(i) *= std::sqrt(double(d)) / eq.row(i).norm();
    Eigen::MatrixXd qe = q;
    for (int i = 0; i < q.rows(); ++i) qe.row(i) *= std::sqrt(double(d)) / qe.row(i).norm();
    const MomentReport z = moment_diagnostics(Dataset(eq, Eigen::VectorXd::Zero(n)),
                                              std::nullopt, 1.0, qe);
    CHECK(z.max_entry <= 10.0 / d);
  }
  CHECK_THROWS_AS(moment_diagnostics(data, std::nullopt, 1.0, q.topRows(99)),
                  InsufficientSampleError);
}
