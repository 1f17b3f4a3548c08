#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace krrlab {

// Nonnegative eigenvalues sorted in descending order.
class Spectrum {
 public:
  Spectrum() = default;
  // Values must already be sorted descending, finite and >= 0.
  explicit Spectrum(std::vector<double> values);

  // Eigenvalues of a symmetric PSD matrix. Negative round-off below
  // -tol * max|eigenvalue| is rejected; anything above is clipped to 0.
  static Spectrum of_psd_matrix(const Eigen::MatrixXd& m, double tol = 1e-8);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t nonzero_count() const;

 private:
  std::vector<double> values_;
};

// All eigenvalues of a symmetric matrix, descending (may be negative).
std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& symmetric);

enum class DecayKind { harmonic, polynomial, exponential };

const char* to_string(DecayKind kind);
DecayKind decay_kind_from_string(const std::string& name);

// Parametric spectrum: n/i, n*i^(-2a) or n*exp(-a*i) for i <= r_star, 0 after.
struct DecaySpec {
  DecayKind kind = DecayKind::harmonic;
  double a = 1.0;  // unused for harmonic
  int r_star = 1;

  void validate() const;
};

Spectrum generate_decay_spectrum(const DecaySpec& decay, int n);

// sum_i lambda_i / (b + lambda_i)^2
double quantity_N(const Spectrum& spectrum, double b);

// sum_i lambda_i / (lambda_i + lam)
double effective_dimension(const Spectrum& spectrum, double lam);

// int_0^inf u^(1/(2a)) / (1+u)^2 du, by adaptive quadrature.
double polynomial_bound_constant(double a);

// Closed-form upper bound on quantity_N for the parametric decays.
double bound_N(const DecaySpec& decay, int n, double b);

// Closed-form peak position n_* for harmonic and polynomial decay.
// Throws OutOfRegimeError when the denominator is not positive and
// DomainError for exponential decay (see numeric_peak).
double peak_point(const DecaySpec& decay, double cbar, double theta, double gamma);

// Schedule exponent above which V1 no longer has an interior peak in the
// n < d regime: 1/(2(2 - cbar)) for harmonic, (1 + 1/(2a))^-1 for polynomial.
double peak_theta_threshold(const DecaySpec& decay, double cbar);

struct PeakResult {
  int n_at_max = 0;
  double max_value = 0.0;
};

// Grid argmax of V1(n) = sigma^2 * beta / d * N^(n*lambda + gamma) over the
// decay's exact spectrum with rank min(r_star, d). Ties go to the smaller n.
PeakResult numeric_peak(const DecaySpec& decay, std::span<const int> n_grid, int d,
                        double cbar, double theta, double gamma, double beta,
                        double sigma);

// V1 evaluated along a grid, either from the exact decay spectrum or from
// the closed-form bound_N. Rank is min(r_star, d, n).
std::vector<double> v1_decay_curve(const DecaySpec& decay, std::span<const int> n_grid,
                                   int d, double cbar, double theta, double gamma,
                                   double beta, double sigma, bool use_closed_form);

// (theta*cbar + gamma)^2 <= [e^-a + (1-theta)cbar][e^-a(r*+1) + (1-theta)cbar]
bool exp_monotone_condition(double cbar, double theta, double gamma, double a, int r_star);

}  // namespace krrlab
