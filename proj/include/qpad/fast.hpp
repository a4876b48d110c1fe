#pragma once

#include <cstdint>
#include <vector>

#include "qpad/common.hpp"

namespace qpad {

/// Projected values sorted ascending, the permutation back to original
/// indices, and prefix sums for O(1) contiguous range sums.
struct SortedProjection {
  std::vector<double> values;       // non-decreasing
  std::vector<Index> order;         // sorted position -> original index (stable)
  std::vector<long double> prefix;  // prefix[t] = sum of values[0..t)

  Index size() const { return static_cast<Index>(values.size()); }
};

SortedProjection sort_projection(const Vector& p);

/// #{(i,j): i<j, s_j - s_i <= delta}. Monotone non-decreasing in delta;
/// single two-pointer pass.
long long count_pairs_leq(const SortedProjection& sp, double delta);

struct StrictTail {
  long long count = 0;  // pairs with difference strictly below delta
  double sum = 0.0;     // total of those differences
};

/// Count and sum of pairs with s_j - s_i < delta in one pass over the
/// prefix sums.
StrictTail sum_pairs_lt(const SortedProjection& sp, double delta);

struct Threshold {
  double value = 0.0;            // the B-th smallest pairwise difference (an achieved value)
  long long boundary_count = 0;  // pairs at exactly this value needed to reach B
};

/// Exact order-statistic selection: bisect on the value range, then snap to
/// the smallest achieved difference that meets the count. `value` is always
/// a realized pairwise difference, never a bisection midpoint.
Threshold select_threshold(const SortedProjection& sp, long long pair_count);

/// Net endpoint count per point over the selected pairs, original index
/// order. Strict-interior pairs enter via contiguous difference-array
/// ranges; boundary pairs are consumed in ascending (i, j) scan order until
/// the boundary budget is spent. Entries always sum to zero.
std::vector<std::int64_t> assemble_coefficients(const SortedProjection& sp, const Threshold& th);

struct AxisEvaluation {
  double value = 0.0;            // mean of the B smallest pairwise projected distances
  double threshold = 0.0;        // selection threshold
  long long boundary_count = 0;  // pairs taken at exactly the threshold
  long long pair_count = 0;      // B
  std::vector<std::int64_t> coeffs;  // original order; sums to zero
};

/// Sub-quadratic evaluation of the lower-tail mean: sort projections, select
/// the threshold, sum the strict interior with prefix sums, add the boundary
/// contribution. Matches tail_mean_naive exactly up to summation order.
AxisEvaluation tail_mean_fast(const Matrix& x_c, const Vector& w, double b_percent);

/// Value-only variant for line searches: identical arithmetic for the mean,
/// skips coefficient assembly.
double tail_mean_fast_value(const Matrix& x_c, const Vector& w, double b_percent);

/// (X^T c) / B.
Vector tail_mean_gradient(const Matrix& x_c, const AxisEvaluation& eval);

}  // namespace qpad
