#pragma once

#include <cstdint>

#include "qpad/common.hpp"

namespace qpad {

/// Immutable set of input vectors, one per row. Safe to share across threads
/// once constructed.
struct Dataset {
  Matrix vectors;

  Index rows() const { return vectors.rows(); }
  Index dim() const { return vectors.cols(); }

  /// Validates finiteness and minimum shape. Readers require at least two
  /// rows; split() may hand back smaller query sets.
  static Dataset from_matrix(Matrix m, Index min_rows = 2);
};

struct SplitSpec {
  Index query_count = 0;
  std::uint64_t seed = 0;
};

}  // namespace qpad
