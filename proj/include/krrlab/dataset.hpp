#pragma once

#include <Eigen/Dense>

#include <vector>

namespace krrlab {

// Training set: an n x d feature matrix with one response per row.
// Immutable after construction; construction validates shape and finiteness.
class Dataset {
 public:
  Dataset(Eigen::MatrixXd features, Eigen::VectorXd responses);

  const Eigen::MatrixXd& features() const { return features_; }
  const Eigen::VectorXd& responses() const { return responses_; }
  Eigen::Index n() const { return features_.rows(); }
  Eigen::Index d() const { return features_.cols(); }

  // Same features, different responses (used for clean targets and for
  // linearity checks in y).
  Dataset with_responses(Eigen::VectorXd responses) const;

  // Rows selected by index, in the order given.
  Dataset subset(const std::vector<Eigen::Index>& rows) const;

 private:
  Eigen::MatrixXd features_;
  Eigen::VectorXd responses_;
};

}  // namespace krrlab
