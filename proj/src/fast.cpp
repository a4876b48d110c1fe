#include "qpad/fast.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

#include "qpad/linalg.hpp"
#include "qpad/naive.hpp"

namespace qpad {

SortedProjection sort_projection(const Vector& p) {
  const Index n = p.size();
  if (n < 2) throw ArgumentError("sort_projection: need at least 2 values");

  SortedProjection sp;
  sp.order.resize(n);
  std::iota(sp.order.begin(), sp.order.end(), Index{0});
  // Stable: equal values keep their original relative order.
  std::stable_sort(sp.order.begin(), sp.order.end(),
                   [&p](Index a, Index b) { return p[a] < p[b]; });

  sp.values.resize(n);
  for (Index t = 0; t < n; ++t) sp.values[t] = p[sp.order[t]];

  sp.prefix.resize(n + 1);
  sp.prefix[0] = 0.0L;
  for (Index t = 0; t < n; ++t) sp.prefix[t + 1] = sp.prefix[t] + sp.values[t];
  return sp;
}

// The scans below rely on IEEE subtraction being weakly monotone: for sorted
// s, the difference s[j] - s[i] is non-decreasing in j and non-increasing in
// i even after rounding, so every two-pointer frontier moves one way only.

long long count_pairs_leq(const SortedProjection& sp, double delta) {
  if (delta < 0.0) return 0;
  const auto& s = sp.values;
  const Index n = sp.size();
  long long total = 0;
  Index j = 0;
  for (Index i = 0; i < n; ++i) {
    if (j < i) j = i;
    while (j + 1 < n && s[j + 1] - s[i] <= delta) ++j;
    total += j - i;
  }
  return total;
}

StrictTail sum_pairs_lt(const SortedProjection& sp, double delta) {
  const auto& s = sp.values;
  const Index n = sp.size();
  StrictTail out;
  long double sum = 0.0L;
  Index j = 0;
  for (Index i = 0; i < n; ++i) {
    if (j < i) j = i;
    while (j + 1 < n && s[j + 1] - s[i] < delta) ++j;
    if (j > i) {
      out.count += j - i;
      sum += (sp.prefix[j + 1] - sp.prefix[i + 1]) - static_cast<long double>(j - i) * s[i];
    }
  }
  out.sum = static_cast<double>(sum);
  return out;
}

namespace {

// Smallest achieved pairwise difference strictly above `floor`. Caller
// guarantees one exists.
double next_achieved_difference(const SortedProjection& sp, double floor_value) {
  const auto& s = sp.values;
  const Index n = sp.size();
  double best = std::numeric_limits<double>::infinity();
  Index j = 1;
  for (Index i = 0; i < n; ++i) {
    if (j < i + 1) j = i + 1;
    while (j < n && s[j] - s[i] <= floor_value) ++j;
    if (j >= n) break;
    best = std::min(best, s[j] - s[i]);
  }
  return best;
}

}  // namespace

Threshold select_threshold(const SortedProjection& sp, long long pair_count) {
  const Index n = sp.size();
  const long long total_pairs = static_cast<long long>(n) * (n - 1) / 2;
  if (pair_count < 1 || pair_count > total_pairs) {
    throw ArgumentError("select_threshold: pair count " + std::to_string(pair_count) +
                        " outside [1, " + std::to_string(total_pairs) + "]");
  }

  Threshold th;
  if (count_pairs_leq(sp, 0.0) >= pair_count) {
    // At least B zero differences; the B-th order statistic is 0.
    th.value = 0.0;
  } else {
    // Bracket the order statistic on the value range, keeping
    // count(lo) < B <= count(hi).
    double lo = 0.0;
    double hi = sp.values[n - 1] - sp.values[0];
    for (int iter = 0; iter < 64; ++iter) {
      const double mid = lo + (hi - lo) * 0.5;
      if (mid <= lo || mid >= hi) break;
      if (count_pairs_leq(sp, mid) >= pair_count) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    // Snap onto achieved values: walk to the next realized difference until
    // the count is met. The bracket is ulp-tight after bisection, so this
    // almost always takes a single step, but the loop makes exactness
    // unconditional.
    for (;;) {
      const double v = next_achieved_difference(sp, lo);
      assert(std::isfinite(v));
      if (count_pairs_leq(sp, v) >= pair_count) {
        th.value = v;
        break;
      }
      lo = v;
    }
  }

  th.boundary_count = pair_count - sum_pairs_lt(sp, th.value).count;
  return th;
}

std::vector<std::int64_t> assemble_coefficients(const SortedProjection& sp, const Threshold& th) {
  const auto& s = sp.values;
  const Index n = sp.size();
  const double delta = th.value;

  std::vector<std::int64_t> c_sorted(n, 0);
  std::vector<std::int64_t> right_gain(n + 1, 0);  // difference array over j positions

  // Strict interior: for each i the qualifying j form the contiguous block
  // (i, j_hi]; each pair adds +1 at j and -1 at i.
  {
    Index j = 0;
    for (Index i = 0; i < n; ++i) {
      if (j < i) j = i;
      while (j + 1 < n && s[j + 1] - s[i] < delta) ++j;
      if (j > i) {
        right_gain[i + 1] += 1;
        right_gain[j + 1] -= 1;
        c_sorted[i] -= j - i;
      }
    }
  }

  // Boundary layer: consume exactly R pairs with difference == delta, by
  // ascending i then ascending j. The equality block per i is contiguous, so
  // a prefix of it is again a contiguous j range.
  {
    long long remaining = th.boundary_count;
    Index first = 1;  // first j > i with s[j] - s[i] >= delta
    Index last = 0;   // last j with s[j] - s[i] <= delta
    for (Index i = 0; i < n && remaining > 0; ++i) {
      if (first < i + 1) first = i + 1;
      while (first < n && s[first] - s[i] < delta) ++first;
      if (last < i) last = i;
      while (last + 1 < n && s[last + 1] - s[i] <= delta) ++last;
      if (first >= n || last < first) continue;
      const long long available = last - first + 1;
      const long long take = std::min<long long>(available, remaining);
      right_gain[first] += 1;
      right_gain[first + take] -= 1;
      c_sorted[i] -= take;
      remaining -= take;
    }
    assert(remaining == 0 && "threshold multiplicity must cover the boundary budget");
  }

  std::int64_t run = 0;
  for (Index t = 0; t < n; ++t) {
    run += right_gain[t];
    c_sorted[t] += run;
  }

  std::vector<std::int64_t> c(n, 0);
  for (Index t = 0; t < n; ++t) c[sp.order[t]] = c_sorted[t];
  return c;
}

namespace {

struct ThresholdEvaluation {
  SortedProjection sp;
  Threshold th;
  long long pair_count = 0;
  double value = 0.0;
};

ThresholdEvaluation evaluate_threshold(const Matrix& x_c, const Vector& w, double b_percent) {
  ThresholdEvaluation ev;
  const Vector p = project_scalar(x_c, w);
  ev.pair_count = pair_budget(p.size(), b_percent);
  ev.sp = sort_projection(p);
  ev.th = select_threshold(ev.sp, ev.pair_count);
  const StrictTail strict = sum_pairs_lt(ev.sp, ev.th.value);
  ev.value = static_cast<double>(
      (static_cast<long double>(strict.sum) +
       static_cast<long double>(ev.th.boundary_count) * ev.th.value) /
      static_cast<long double>(ev.pair_count));
  return ev;
}

}  // namespace

AxisEvaluation tail_mean_fast(const Matrix& x_c, const Vector& w, double b_percent) {
  ThresholdEvaluation ev = evaluate_threshold(x_c, w, b_percent);
  AxisEvaluation out;
  out.value = ev.value;
  out.threshold = ev.th.value;
  out.boundary_count = ev.th.boundary_count;
  out.pair_count = ev.pair_count;
  out.coeffs = assemble_coefficients(ev.sp, ev.th);
  return out;
}

double tail_mean_fast_value(const Matrix& x_c, const Vector& w, double b_percent) {
  return evaluate_threshold(x_c, w, b_percent).value;
}

Vector tail_mean_gradient(const Matrix& x_c, const AxisEvaluation& eval) {
  if (static_cast<Index>(eval.coeffs.size()) != x_c.rows()) {
    throw ArgumentError("tail_mean_gradient: coefficient length does not match data rows");
  }
  Vector c(x_c.rows());
  for (Index i = 0; i < x_c.rows(); ++i) c[i] = static_cast<double>(eval.coeffs[i]);
  return (x_c.transpose() * c) / static_cast<double>(eval.pair_count);
}

}  // namespace qpad
