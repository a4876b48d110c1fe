#pragma once

#include "qpad/dataset.hpp"
#include "qpad/model.hpp"

namespace qpad {

struct Centered {
  Matrix data;  // column means ~ 0
  Vector mean;
};

Centered center(const Dataset& ds);

/// p_i = <row_i, w>. Throws ArgumentError on dimension mismatch.
Vector project_scalar(const Matrix& x, const Vector& w);

/// rows -> directions * (row - mean), one output row per input row.
Matrix transform(const ProjectionModel& model, const Matrix& rows);

}  // namespace qpad
