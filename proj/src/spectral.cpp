#include "krrlab/spectral.hpp"

#include "krrlab/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace krrlab {

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      throw DomainError("spectrum entries must be finite and >= 0 (index " +
                        std::to_string(i) + ")");
    }
    if (i > 0 && values_[i] > values_[i - 1]) {
      throw DomainError("spectrum must be sorted descending (index " + std::to_string(i) + ")");
    }
  }
}

Spectrum Spectrum::of_psd_matrix(const Eigen::MatrixXd& m, double tol) {
  std::vector<double> ev = sorted_eigenvalues(m);
  const double scale = ev.empty() ? 0.0 : std::max(std::abs(ev.front()), std::abs(ev.back()));
  for (double& v : ev) {
    if (v < 0.0) {
      if (v < -tol * scale) {
        throw DomainError("matrix is not positive semidefinite (eigenvalue " +
                          std::to_string(v) + ")");
      }
      v = 0.0;
    }
  }
  return Spectrum(std::move(ev));
}

std::size_t Spectrum::nonzero_count() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](double v) { return v > 0.0; }));
}

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() != symmetric.cols()) throw ShapeError("eigenvalues need a square matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetric, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  std::vector<double> ev(eig.eigenvalues().data(),
                         eig.eigenvalues().data() + eig.eigenvalues().size());
  std::reverse(ev.begin(), ev.end());
  return ev;
}

const char* to_string(DecayKind kind) {
  switch (kind) {
    case DecayKind::harmonic:
      return "harmonic";
    case DecayKind::polynomial:
      return "polynomial";
    case DecayKind::exponential:
      return "exponential";
  }
  return "?";
}

DecayKind decay_kind_from_string(const std::string& name) {
  if (name == "harmonic") return DecayKind::harmonic;
  if (name == "polynomial") return DecayKind::polynomial;
  if (name == "exponential") return DecayKind::exponential;
  throw DomainError("unknown decay kind '" + name + "'");
}

void DecaySpec::validate() const {
  if (r_star < 1) throw DomainError("decay rank r_star must be >= 1");
  if (kind == DecayKind::polynomial && !(a > 0.5)) {
    throw DomainError("polynomial decay needs a > 1/2");
  }
  if (kind == DecayKind::exponential && !(a > 0.0)) {
    throw DomainError("exponential decay needs a > 0");
  }
  if (!std::isfinite(a)) throw DomainError("decay parameter a must be finite");
}

Spectrum generate_decay_spectrum(const DecaySpec& decay, int n) {
  decay.validate();
  if (n < 1) throw DomainError("spectrum length n must be >= 1");
  const int rank = std::min(decay.r_star, n);
  std::vector<double> values(static_cast<std::size_t>(n), 0.0);
  const double nn = static_cast<double>(n);
  for (int i = 1; i <= rank; ++i) {
    const double di = static_cast<double>(i);
    double v = 0.0;
    switch (decay.kind) {
      case DecayKind::harmonic:
        v = nn / di;
        break;
      case DecayKind::polynomial:
        v = nn * std::pow(di, -2.0 * decay.a);
        break;
      case DecayKind::exponential:
        v = nn * std::exp(-decay.a * di);
        break;
    }
    values[static_cast<std::size_t>(i - 1)] = v;
  }
  return Spectrum(std::move(values));
}

double quantity_N(const Spectrum& spectrum, double b) {
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("quantity_N needs b > 0");
  double sum = 0.0;
  for (double v : spectrum.values()) sum += v / ((b + v) * (b + v));
  return sum;
}

double effective_dimension(const Spectrum& spectrum, double lam) {
  if (!(lam > 0.0) || !std::isfinite(lam)) throw DomainError("effective_dimension needs lam > 0");
  double sum = 0.0;
  for (double v : spectrum.values()) sum += v / (v + lam);
  return sum;
}

double polynomial_bound_constant(double a) {
  if (!(a > 0.5)) throw DomainError("polynomial bound constant needs a > 1/2");
  const double s = 1.0 / (2.0 * a);
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [s](double u) { return std::pow(u, s) / ((1.0 + u) * (1.0 + u)); };
  return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-13);
}

double bound_N(const DecaySpec& decay, int n, double b) {
  decay.validate();
  if (n < 1) throw DomainError("bound_N needs n >= 1");
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("bound_N needs b > 0");
  const double nn = static_cast<double>(n);
  const double r = static_cast<double>(std::min(decay.r_star, n));
  switch (decay.kind) {
    case DecayKind::harmonic:
      // ln((n + (r+1)b) / (n + b)) written as log1p for small rb/n.
      return nn / (b * b) * std::log1p(r * b / (nn + b));
    case DecayKind::polynomial: {
      const double c = polynomial_bound_constant(decay.a);
      return c / (2.0 * decay.a * b) * std::pow(nn / b, 1.0 / (2.0 * decay.a));
    }
    case DecayKind::exponential:
      return (1.0 / decay.a) * (1.0 / (b + nn * std::exp(-decay.a * (r + 1.0))) -
                                1.0 / (b + nn * std::exp(-decay.a)));
  }
  return 0.0;
}

namespace {

void check_schedule(double cbar, double theta, double gamma) {
  if (!(cbar > 0.0 && cbar <= 1.0)) throw DomainError("cbar must lie in (0, 1]");
  if (!(theta >= 0.0 && theta < 1.0)) throw DomainError("theta must lie in [0, 1)");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be >= 0");
}

void check_grid(std::span<const int> n_grid) {
  if (n_grid.empty()) throw DomainError("n grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw DomainError("n grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
      throw DomainError("n grid must be strictly increasing");
    }
  }
}

}  // namespace

double peak_point(const DecaySpec& decay, double cbar, double theta, double gamma) {
  decay.validate();
  check_schedule(cbar, theta, gamma);
  double denominator = 0.0;
  switch (decay.kind) {
    case DecayKind::harmonic:
      denominator = 2.0 - 2.0 * theta - cbar;
      break;
    case DecayKind::polynomial:
      denominator = 2.0 * decay.a * cbar * (1.0 - (1.0 + 1.0 / (2.0 * decay.a)) * theta);
      break;
    case DecayKind::exponential:
      throw DomainError("exponential decay has no closed-form peak; use numeric_peak");
  }
  if (!(denominator > 0.0)) {
    throw OutOfRegimeError("peak formula denominator " + std::to_string(denominator) +
                           " is not positive for theta = " + std::to_string(theta));
  }
  return std::pow(gamma / denominator, 1.0 / (1.0 - theta));
}

double peak_theta_threshold(const DecaySpec& decay, double cbar) {
  decay.validate();
  switch (decay.kind) {
    case DecayKind::harmonic:
      return 1.0 / (2.0 * (2.0 - cbar));
    case DecayKind::polynomial:
      return 1.0 / (1.0 + 1.0 / (2.0 * decay.a));
    case DecayKind::exponential:
      throw DomainError("exponential decay has no tabulated threshold");
  }
  return 0.0;
}

std::vector<double> v1_decay_curve(const DecaySpec& decay, std::span<const int> n_grid,
                                   int d, double cbar, double theta, double gamma,
                                   double beta, double sigma, bool use_closed_form) {
  decay.validate();
  check_grid(n_grid);
  if (d < 1) throw DomainError("d must be >= 1");
  DecaySpec capped = decay;
  capped.r_star = std::min(decay.r_star, d);
  std::vector<double> out;
  out.reserve(n_grid.size());
  for (int n : n_grid) {
    const double nn = static_cast<double>(n);
    const double b = nn * cbar * std::pow(nn, -theta) + gamma;
    const double n_value = use_closed_form ? bound_N(capped, n, b)
                                           : quantity_N(generate_decay_spectrum(capped, n), b);
    out.push_back(sigma * sigma * beta / static_cast<double>(d) * n_value);
  }
  return out;
}

PeakResult numeric_peak(const DecaySpec& decay, std::span<const int> n_grid, int d,
                        double cbar, double theta, double gamma, double beta,
                        double sigma) {
  const auto curve = v1_decay_curve(decay, n_grid, d, cbar, theta, gamma, beta, sigma, false);
  PeakResult best{n_grid[0], curve[0]};
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i] > best.max_value) best = PeakResult{n_grid[i], curve[i]};
  }
  return best;
}

bool exp_monotone_condition(double cbar, double theta, double gamma, double a, int r_star) {
  const double lhs = (theta * cbar + gamma) * (theta * cbar + gamma);
  const double rhs = (std::exp(-a) + (1.0 - theta) * cbar) *
                     (std::exp(-a * (r_star + 1.0)) + (1.0 - theta) * cbar);
  return lhs <= rhs;
}

}  // namespace krrlab
