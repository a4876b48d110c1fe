#include "qpad/linalg.hpp"

namespace qpad {

Centered center(const Dataset& ds) {
  Vector mean = ds.vectors.colwise().mean();
  Matrix data = ds.vectors.rowwise() - mean.transpose();
  return Centered{std::move(data), std::move(mean)};
}

Vector project_scalar(const Matrix& x, const Vector& w) {
  if (w.size() != x.cols()) {
    throw ArgumentError("project_scalar: direction has dimension " + std::to_string(w.size()) +
                        ", data has " + std::to_string(x.cols()));
  }
  return x * w;
}

Matrix transform(const ProjectionModel& model, const Matrix& rows) {
  if (rows.cols() != model.input_dim()) {
    throw ArgumentError("transform: data dimension " + std::to_string(rows.cols()) +
                        " does not match model input dimension " +
                        std::to_string(model.input_dim()));
  }
  return (rows.rowwise() - model.mean.transpose()) * model.directions.transpose();
}

}  // namespace qpad
