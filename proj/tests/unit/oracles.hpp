#pragma once

// Test-only brute-force oracles. These deliberately use plain loops and full
// enumeration so they stay independent of the library's evaluation paths.

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

#include "qpad/common.hpp"

namespace qpad::testing {

// Every pairwise difference s_j - s_i (i < j) of the sorted values, ascending.
inline std::vector<double> enumerate_sorted_diffs(const Vector& p) {
  std::vector<double> s(p.data(), p.data() + p.size());
  std::sort(s.begin(), s.end());
  std::vector<double> diffs;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) diffs.push_back(s[j] - s[i]);
  std::sort(diffs.begin(), diffs.end());
  return diffs;
}

struct BruteSelection {
  std::vector<std::tuple<double, Index, Index>> selected;  // (d, i, j) ascending
  double mean = 0.0;
};

// Smallest `budget` projected distances with (d, i, j) lexicographic ties.
inline BruteSelection brute_tail_mean(const Vector& p, long long budget) {
  std::vector<std::tuple<double, Index, Index>> all;
  for (Index i = 0; i < p.size(); ++i)
    for (Index j = i + 1; j < p.size(); ++j) all.emplace_back(std::abs(p[i] - p[j]), i, j);
  std::sort(all.begin(), all.end());
  BruteSelection out;
  long double sum = 0.0L;
  for (long long t = 0; t < budget; ++t) {
    out.selected.push_back(all[t]);
    sum += std::get<0>(all[t]);
  }
  out.mean = static_cast<double>(sum / static_cast<long double>(budget));
  return out;
}

// Central finite differences of a scalar function of w.
template <typename Fn>
Vector finite_difference_gradient(Fn&& f, const Vector& w, double h) {
  Vector g(w.size());
  for (Index t = 0; t < w.size(); ++t) {
    Vector lo = w, hi = w;
    lo[t] -= h;
    hi[t] += h;
    g[t] = (f(hi) - f(lo)) / (2.0 * h);
  }
  return g;
}

// Argmax of f over unit directions (cos t, sin t), t in [0, pi).
template <typename Fn>
Vector grid_search_direction_2d(Fn&& f, double resolution) {
  double best_value = -std::numeric_limits<double>::infinity();
  Vector best(2);
  for (double t = 0.0; t < M_PI; t += resolution) {
    Vector w(2);
    w << std::cos(t), std::sin(t);
    const double v = f(w);
    if (v > best_value) {
      best_value = v;
      best = w;
    }
  }
  return best;
}

}  // namespace qpad::testing
