#include "qpad/naive.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "qpad/linalg.hpp"
#include "qpad/optimize.hpp"

namespace qpad {

long long pair_budget(Index n_rows, double b_percent) {
  if (n_rows < 2) throw ArgumentError("pair_budget: need at least 2 vectors");
  if (!(b_percent > 0.0 && b_percent <= 100.0))
    throw ArgumentError("pair_budget: b must lie in (0, 100]");
  const long long total = static_cast<long long>(n_rows) * (n_rows - 1) / 2;
  // b * total is exact for integral operands; dividing last keeps
  // integer-valued budgets (e.g. b=60 of 5 pairs) from flooring down.
  const long long budget =
      static_cast<long long>(std::floor(b_percent * static_cast<double>(total) / 100.0));
  if (budget < 1) {
    throw ArgumentError("pair_budget: b=" + format_number(b_percent) + " of " +
                        std::to_string(total) + " pairs floors to zero; raise b or N");
  }
  return budget;
}

PairSelection tail_mean_naive(const Matrix& x_c, const Vector& w, double b_percent) {
  const Vector p = project_scalar(x_c, w);
  const Index n = p.size();
  const long long budget = pair_budget(n, b_percent);

  struct Entry {
    double d;
    Index i;
    Index j;
  };
  std::vector<Entry> all;
  all.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      all.push_back(Entry{std::abs(p[i] - p[j]), i, j});
    }
  }
  auto less = [](const Entry& a, const Entry& b) {
    return std::tie(a.d, a.i, a.j) < std::tie(b.d, b.i, b.j);
  };
  // All keys are distinct under the (d, i, j) order, so the partition is exact.
  std::nth_element(all.begin(), all.begin() + (budget - 1), all.end(), less);
  std::sort(all.begin(), all.begin() + budget, less);

  PairSelection sel;
  sel.pair_count = budget;
  sel.pairs.reserve(budget);
  sel.distances.reserve(budget);
  long double sum = 0.0L;
  for (long long t = 0; t < budget; ++t) {
    sel.pairs.emplace_back(all[t].i, all[t].j);
    sel.distances.push_back(all[t].d);
    sum += all[t].d;
  }
  sel.mean = static_cast<double>(sum / static_cast<long double>(budget));
  return sel;
}

double objective_naive(const Matrix& x_c, const Vector& w, const Matrix& prev_axes,
                       double b_percent, double alpha) {
  const double mean = tail_mean_naive(x_c, w, b_percent).mean;
  return mean - orthogonality_penalty(w, prev_axes, alpha).value;
}

Vector tail_mean_gradient_naive(const Matrix& x_c, const Vector& p, const PairSelection& sel) {
  Vector c = Vector::Zero(x_c.rows());
  for (const auto& [i, j] : sel.pairs) {
    const double s = p[i] > p[j] ? 1.0 : (p[i] < p[j] ? -1.0 : 0.0);
    c[i] += s;
    c[j] -= s;
  }
  return (x_c.transpose() * c) / static_cast<double>(sel.pair_count);
}

ProjectionModel fit_naive(const Dataset& ds, const QpadConfig& config, const NaiveGuard& guard) {
  FitOptions options;
  options.naive_guard = guard;
  return fit(ds, config, Engine::naive, options).model;
}

}  // namespace qpad
