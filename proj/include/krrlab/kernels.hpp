#pragma once

#include "krrlab/dataset.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace krrlab {

enum class KernelFamily { inner_product, radial };

enum class KernelVariant { linear, polynomial, exponential_inner, gaussian, custom };

// Scalar nonlinearity profile h and its first two derivatives.
using Profile = std::function<double(double)>;

// A kernel k(x, x') = h(<x, x'>/d) (inner-product family) or
// h(||x - x'||^2 / d) (radial family).
//
// Tabulated variants:
//   linear             h(t) = t
//   polynomial(p)      h(t) = (1 + t)^p
//   exponential_inner  h(t) = exp(2t)
//   gaussian           h(t) = exp(-t)      (radial)
class KernelSpec {
 public:
  static KernelSpec linear();
  static KernelSpec polynomial(int degree);
  static KernelSpec exponential_inner();
  static KernelSpec gaussian();
  // h, h', h'' must be callable anywhere the kernel is evaluated. For the
  // inner-product family they are checked for finiteness at the pivot 0 here;
  // radial pivots depend on tau and are checked at linearization time.
  static KernelSpec custom(KernelFamily family, std::string name, Profile h,
                           Profile dh, Profile d2h);

  KernelFamily family() const { return family_; }
  KernelVariant variant() const { return variant_; }
  int degree() const { return degree_; }
  const std::string& name() const { return name_; }

  double h(double t) const;
  double dh(double t) const;
  double d2h(double t) const;

 private:
  KernelSpec(KernelFamily family, KernelVariant variant, int degree, std::string name);

  KernelFamily family_;
  KernelVariant variant_;
  int degree_ = 0;
  std::string name_;
  Profile h_, dh_, d2h_;
};

// X X^T / d, exactly symmetric (lower triangle computed, then mirrored).
Eigen::MatrixXd scaled_gram(const Eigen::MatrixXd& features);

// n x n Gram matrix K[i][j] = k(x_i, x_j); exactly symmetric.
// Throws EvaluationError naming (i, j) on a non-finite entry.
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Dataset& data);
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& features);

// Vector of k(query, x_i) over the training rows.
Eigen::VectorXd cross_kernel(const KernelSpec& spec, const Dataset& data,
                             const Eigen::VectorXd& query);

// m x n matrix whose row q is k(queries_q, X)^T.
Eigen::MatrixXd cross_kernel_matrix(const KernelSpec& spec,
                                    const Eigen::MatrixXd& train_features,
                                    const Eigen::MatrixXd& queries);

// Cholesky factorization of K + n*lambda*I with the jitter policy:
// on failure retry with 1e-12 * tr(K)/n added to the diagonal, escalating
// x10 up to three more times, then throw SingularityError carrying the
// smallest eigenvalue of K + n*lambda*I.
class RidgeSystem {
 public:
  RidgeSystem(const Eigen::MatrixXd& gram, double n_lambda);

  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  Eigen::Index size() const { return size_; }
  // Extra diagonal shift that was needed for the factorization (0 if none).
  double jitter() const { return jitter_; }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::Index size_ = 0;
  double jitter_ = 0.0;
};

struct KrrModel {
  Eigen::VectorXd coefficients;     // (K + n*lambda*I)^{-1} y
  Eigen::MatrixXd train_features;
  double lambda = 0.0;
  double jitter = 0.0;
};

KrrModel krr_fit(const KernelSpec& spec, const Dataset& data, double lambda);

Eigen::VectorXd krr_predict(const KrrModel& model, const KernelSpec& spec,
                            const Eigen::MatrixXd& queries);

}  // namespace krrlab
