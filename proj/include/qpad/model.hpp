#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "qpad/common.hpp"

namespace qpad {

struct QpadConfig {
  int m = 8;                  // target dimension
  double b_percent = 70.0;    // in (0,100]: share of smallest pairwise projected distances kept in the objective
  double alpha = 1.0;         // >= 0: soft orthogonality penalty weight
  int max_iters_per_axis = 100;
  double grad_tol = 1e-6;     // tangent-gradient stop threshold, relative to the data diameter scale
  std::uint64_t seed = 0;
  int restarts_per_axis = 3;

  void validate() const;  // throws ArgumentError
};

/// Linear projection x -> directions * (x - mean). Rows of `directions` are
/// the fitted axes. `rows_unit` is false for baselines whose rows are not
/// unit vectors (Gaussian/sparse random projection).
struct ProjectionModel {
  Matrix directions;  // m x n
  Vector mean;        // length n
  bool rows_unit = true;
  std::string method = "qpad-fast";
  QpadConfig config;

  Index target_dim() const { return directions.rows(); }
  Index input_dim() const { return directions.cols(); }
};

// Container format "QPADv1": magic line, one JSON metadata line, then
// row-major little-endian float64 directions followed by the float64 mean.
// Saved bytes depend only on the model contents.
void save_model(const std::filesystem::path& path, const ProjectionModel& model);
ProjectionModel load_model(const std::filesystem::path& path);

}  // namespace qpad
