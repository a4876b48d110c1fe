#pragma once

#include <utility>
#include <vector>

#include "qpad/dataset.hpp"
#include "qpad/model.hpp"

namespace qpad {

/// Number of pairs in the lower tail: floor of b% of N(N-1)/2. Multiplies
/// before dividing so integer-valued budgets stay exact in floating point.
/// Throws ArgumentError when the budget floors to zero (raise b or N).
long long pair_budget(Index n_rows, double b_percent);

/// The B selected pairs, smallest projected distances first. Ties are broken
/// by (distance, i, j) lexicographic order, so the selection is deterministic
/// and independent of thread count.
struct PairSelection {
  long long pair_count = 0;                    // B
  std::vector<std::pair<Index, Index>> pairs;  // i < j, original indices
  std::vector<double> distances;               // aligned with pairs, non-decreasing
  double mean = 0.0;
};

/// Reference objective: materialize all pairwise projected distances, sort,
/// average the smallest b%. O(N^2 log N); the transparent ground truth the
/// sub-quadratic path is checked against.
PairSelection tail_mean_naive(const Matrix& x_c, const Vector& w, double b_percent);

/// Selected-pair mean minus alpha * sum_j (prev_j . w)^2.
double objective_naive(const Matrix& x_c, const Vector& w, const Matrix& prev_axes,
                       double b_percent, double alpha);

/// Subgradient of the selection mean, assembled pair by pair:
/// (1/B) * sum over selected (i,j) of sign(p_i - p_j) (x_i - x_j).
Vector tail_mean_gradient_naive(const Matrix& x_c, const Vector& p, const PairSelection& sel);

struct NaiveGuard {
  long long max_rows = 2000;  // refuse larger inputs unless forced
  bool force = false;
};

/// Full fit on the naive objective via the shared optimizer. Refuses
/// datasets above guard.max_rows unless guard.force is set (--force-naive).
ProjectionModel fit_naive(const Dataset& ds, const QpadConfig& config,
                          const NaiveGuard& guard = {});

}  // namespace qpad
