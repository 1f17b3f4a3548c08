#include "krrlab/errors.hpp"
#include "krrlab/risk.hpp"
#include "krrlab/synth.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace krrlab;

TEST_CASE("schedule_lambda") {
  CHECK(schedule_lambda({0.3, 0.7, std::nullopt}, 1) == doctest::Approx(0.3));
  CHECK(schedule_lambda({0.3, 0.0, std::nullopt}, 977) == doctest::Approx(0.3));
  CHECK(schedule_lambda({0.01, 2.0 / 3.0, std::nullopt}, 1000) == doctest::Approx(1e-4));
  CHECK_THROWS_AS(schedule_lambda({0.1, 0.9, 0.5}, 10), DomainError);
  CHECK_NOTHROW(schedule_lambda({0.1, 0.6, 0.5}, 10));
  CHECK_THROWS_AS(schedule_lambda({1.5, 0.1, std::nullopt}, 10), DomainError);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 30; ++k) {
    const double c = u(rng), t = u(rng);
    const int n = 1 + static_cast<int>(5000 * u(rng));
    CHECK(std::abs(schedule_lambda({c, t, std::nullopt}, n) - c / std::pow(n, t)) <=
          1e-12 * c / std::pow(n, t) + 1e-300);
  }
}

namespace {

struct Toy {
  Dataset data;
  Eigen::VectorXd clean;
  Eigen::MatrixXd test;
  Eigen::VectorXd clean_test;
};

Toy toy(int n, int d, int m, std::uint64_t seed) {
  const CovModel cov = make_covariance(d, DecayKind::harmonic, 1.0);
  const TargetSpec target = TargetSpec::custom(
      [](const Eigen::VectorXd& x) { return std::sin(x(0)) + 0.5 * x(1); }, 1.0);
  auto s = sample_dataset(cov, n, target, seed);
  Eigen::MatrixXd q = sample_points(cov, m, seed + 1);
  Eigen::VectorXd fq = target.evaluate(q);
  return Toy{std::move(s.data), std::move(s.clean), std::move(q), std::move(fq)};
}

}  // namespace

TEST_CASE("empirical bias and variance closed-form toys") {
  SUBCASE("n = 1 scalar bias") {
    Eigen::MatrixXd x(1, 2);
    x << 2.0, 0.0;  // s = 2
    Dataset data(x, Eigen::VectorXd::Zero(1));
    Eigen::MatrixXd q(1, 2);
    q << 1.0, 1.0;  // k(x, x1) = 1
    const double c = 3.0, fx = 0.25, lambda = 0.5;
    const double bias = empirical_bias(data, Eigen::VectorXd::Constant(1, c),
                                       KernelSpec::linear(), lambda, q,
                                       Eigen::VectorXd::Constant(1, fx));
    CHECK(bias == doctest::Approx(std::pow(1.0 * c / (2.0 + lambda) - fx, 2)));
  }
  SUBCASE("n = 2 diagonal kernel variance") {
    // Linear kernel on orthogonal rows with ||x||^2/d = 1 gives K = I; nlambda = 1.
    Eigen::MatrixXd x(2, 2);
    x << std::sqrt(2.0), 0, 0, std::sqrt(2.0);
    Dataset data(x, Eigen::VectorXd::Zero(2));
    Eigen::MatrixXd q(1, 2);
    q << std::sqrt(2.0), 0;  // k(q, X) = (1, 0)
    const double sigma = 1.7;
    CHECK(empirical_variance(data, KernelSpec::linear(), 0.5, sigma, q) ==
          doctest::Approx(sigma * sigma / 4.0));
  }
  SUBCASE("zero target, zero noise") {
    const Toy t = toy(30, 20, 100, 1);
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(30), zq = Eigen::VectorXd::Zero(100);
    CHECK(empirical_bias(t.data, z, KernelSpec::gaussian(), 1e-2, t.test, zq) == 0.0);
    const RiskEstimate r = excess_risk_mc(t.data, z, KernelSpec::gaussian(), 1e-2, 0.0, t.test,
                                          zq, 5, 2);
    CHECK(r.risk == 0.0);
    CHECK(empirical_variance(t.data, KernelSpec::gaussian(), 1e-2, 0.0, t.test) == 0.0);
  }
  SUBCASE("huge lambda: bias tends to the mean square of f") {
    const Toy t = toy(30, 20, 100, 3);
    const double b = empirical_bias(t.data, t.clean, KernelSpec::gaussian(), 1e12, t.test,
                                    t.clean_test);
    CHECK(b == doctest::Approx(t.clean_test.squaredNorm() / 100.0).epsilon(1e-8));
  }
}

TEST_CASE("bias and variance agree with a direct-inverse oracle") {
  const Toy t = toy(25, 10, 120, 5);
  const double lambda = 3e-3, sigma = 0.8;
  const KernelSpec k = KernelSpec::polynomial(2);
  Eigen::MatrixXd s = kernel_matrix(k, t.data);
  s.diagonal().array() += 25 * lambda;
  const Eigen::MatrixXd inv = s.inverse();
  const Eigen::MatrixXd cross = cross_kernel_matrix(k, t.data.features(), t.test);
  double bias = 0.0, var = 0.0;
  for (int q = 0; q < 120; ++q) {
    const Eigen::VectorXd w = inv * cross.row(q).transpose();
    bias += std::pow(w.dot(t.clean) - t.clean_test(q), 2);
    var += w.squaredNorm();
  }
  bias /= 120;
  var *= sigma * sigma / 120;
  CHECK(empirical_bias(t.data, t.clean, k, lambda, t.test, t.clean_test) ==
        doctest::Approx(bias).epsilon(1e-9));
  CHECK(empirical_variance(t.data, k, lambda, sigma, t.test) == doctest::Approx(var).epsilon(1e-9));
}

TEST_CASE("variance scales with sigma^2 and is nonincreasing in lambda") {
  const Toy t = toy(40, 30, 150, 7);
  const KernelSpec k = KernelSpec::gaussian();
  const double v1 = empirical_variance(t.data, k, 1e-3, 1.0, t.test);
  CHECK(empirical_variance(t.data, k, 1e-3, 2.0, t.test) == doctest::Approx(4.0 * v1));
  double prev = INFINITY;
  for (double lambda : {0.0, 1e-4, 1e-2, 1.0}) {
    const double v = empirical_variance(t.data, k, lambda, 1.0, t.test);
    CHECK(v <= prev * (1.0 + 1e-12));
    prev = v;
  }
}

TEST_CASE("risk matches bias plus variance within Monte-Carlo error") {
  const Toy t = toy(60, 40, 300, 9);
  for (const KernelChoice& choice :
       {KernelChoice{KernelSpec::gaussian()},
        KernelChoice{LinearizedKernel{linearize_params(KernelSpec::polynomial(3), 1.0,
                                                       make_covariance(40, DecayKind::harmonic, 1.0)
                                                           .trace_ratio()),
                                      0.0}}}) {
    const RiskEstimate r =
        excess_risk_mc(t.data, t.clean, choice, 1e-3, 1.0, t.test, t.clean_test, 50, 11);
    CHECK(r.mc_stderr > 0.0);
    CHECK(std::abs(r.risk - r.bias - r.variance) <= 4.0 * r.mc_stderr);
  }
  const RiskEstimate quiet = excess_risk_mc(t.data, t.clean, KernelSpec::gaussian(), 1e-3, 0.0,
                                            t.test, t.clean_test, 3, 1);
  CHECK(quiet.risk == quiet.bias);
  CHECK_THROWS_AS(excess_risk_mc(t.data, t.clean, KernelSpec::gaussian(), 1e-3, 1.0, t.test,
                                 t.clean_test, 1, 1),
                  DomainError);
}

TEST_CASE("bound_v1") {
  const Spectrum s({3.0, 2.0, 0.5, 0.0});
  CHECK(bound_v1(s, 2.0, 10, 5, 0.1, 0.2, 0.0) == 0.0);
  const double b = 5 * 0.1 + 0.2;
  const double want = 1.5 * 1.5 * 2.0 / 10.0 * oracle::quantity_n_sum(s.values(), b);
  CHECK(bound_v1(s, 2.0, 10, 5, 0.1, 0.2, 1.5) == doctest::Approx(want).epsilon(1e-14));
  CHECK(bound_v1(s, 2.0, 10, 5, 0.1, 0.2, 1.5) <= 1.5 * 1.5 * 2.0 * 3.0 / (4.0 * b * 10.0));
  CHECK_THROWS_AS(bound_v1(s, 2.0, 10, 5, 0.0, 0.0, 1.0), DomainError);
}

TEST_CASE("bound_v2 and bias_ref") {
  const MomentParams m8{8.0, 0.01};
  CHECK(m8.theta_moment() == doctest::Approx(0.375));
  CHECK(bound_v2(KernelFamily::radial, 100, 0.01, 0.0, 500, m8, 0.0) == 0.0);
  double prev = INFINITY;
  for (int d : {50, 100, 500, 1000, 5000}) {
    const double v = bound_v2(KernelFamily::radial, 100, 0.01, 0.5, d, m8, 1.0);
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(bound_v2(KernelFamily::radial, 100, 0.0, 0.0, 500, m8, 1.0), DomainError);
  CHECK_THROWS_AS(bound_v2(KernelFamily::radial, 100, 0.1, 0.0, 1, m8, 1.0), DomainError);

  CHECK(bias_ref(1, 0.7, 0.4) == 1.0);
  CHECK(bias_ref(8, 0.5, 1.0) == doctest::Approx(0.125));
  CHECK(std::log(bias_ref(1000, 2.0 / 3.0, 1.0) / bias_ref(10, 2.0 / 3.0, 1.0)) / std::log(100.0) ==
        doctest::Approx(-4.0 / 3.0));
  CHECK_THROWS_AS(bias_ref(10, 0.5, 0.0), DomainError);

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 30; ++k) {
    const int n = 1 + static_cast<int>(3000 * u(rng)), d = 2 + static_cast<int>(3000 * u(rng));
    const double lambda = u(rng), gamma = u(rng), sigma = 2 * u(rng), theta = u(rng);
    const double r = 0.01 + 0.99 * u(rng);
    const MomentParams mp{0.5 + 20 * u(rng), 0.001 + 0.1 * u(rng)};
    const double th = 0.5 - 2.0 / (8.0 + mp.m);
    const double bb = n * lambda + gamma, ld = std::log(static_cast<double>(d));
    const double inner = sigma * sigma * std::pow(ld, 2 + 4 * mp.epsilon) /
                         (bb * bb * std::pow(static_cast<double>(d), 4 * th - 1));
    const double radial = sigma * sigma * std::pow(static_cast<double>(d), -2 * th) *
                          std::pow(ld, 1 + mp.epsilon) / (bb * bb);
    CHECK(bound_v2(KernelFamily::inner_product, n, lambda, gamma, d, mp, sigma) ==
          doctest::Approx(inner).epsilon(1e-12));
    CHECK(bound_v2(KernelFamily::radial, n, lambda, gamma, d, mp, sigma) ==
          doctest::Approx(radial).epsilon(1e-12));
    CHECK(bias_ref(n, theta, r) == doctest::Approx(std::exp(-2 * theta * r * std::log(n))).epsilon(1e-12));
  }
}
