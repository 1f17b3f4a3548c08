#include "krrlab/dataset.hpp"

#include "krrlab/errors.hpp"

#include <string>
#include <vector>

namespace krrlab {

Dataset::Dataset(Eigen::MatrixXd features, Eigen::VectorXd responses)
    : features_(std::move(features)), responses_(std::move(responses)) {
  if (features_.rows() < 1 || features_.cols() < 1) {
    throw ShapeError("dataset needs n >= 1 and d >= 1, got " +
                     std::to_string(features_.rows()) + "x" +
                     std::to_string(features_.cols()));
  }
  if (responses_.size() != features_.rows()) {
    throw ShapeError("dataset has " + std::to_string(features_.rows()) +
                     " rows but " + std::to_string(responses_.size()) +
                     " responses");
  }
  if (!features_.allFinite()) throw DataError("dataset features contain NaN or Inf");
  if (!responses_.allFinite()) throw DataError("dataset responses contain NaN or Inf");
}

Dataset Dataset::with_responses(Eigen::VectorXd responses) const {
  return Dataset(features_, std::move(responses));
}

Dataset Dataset::subset(const std::vector<Eigen::Index>& rows) const {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), d());
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto r = rows[k];
    if (r < 0 || r >= n()) throw ShapeError("subset row index out of range");
    x.row(static_cast<Eigen::Index>(k)) = features_.row(r);
    y(static_cast<Eigen::Index>(k)) = responses_(r);
  }
  return Dataset(std::move(x), std::move(y));
}

}  // namespace krrlab
