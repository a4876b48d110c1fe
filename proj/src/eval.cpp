#include "qpad/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <tuple>

#include "qpad/linalg.hpp"
#include "qpad/parallel.hpp"
#include "qpad/rng.hpp"

namespace qpad {

NeighborTable exact_knn(const Matrix& base, const Matrix& queries, int k, int workers) {
  if (base.cols() != queries.cols()) {
    throw ArgumentError("exact_knn: base dimension " + std::to_string(base.cols()) +
                        " does not match query dimension " + std::to_string(queries.cols()));
  }
  if (k < 1 || k > base.rows()) {
    throw ArgumentError("exact_knn: k=" + std::to_string(k) + " outside [1, " +
                        std::to_string(base.rows()) + "]");
  }

  NeighborTable table;
  table.ids.resize(queries.rows(), k);
  table.distances.resize(queries.rows(), k);

  const int n_workers = resolve_workers(workers);
  parallel_for(0, queries.rows(), n_workers, [&](std::int64_t q) {
    // Select on squared distance; ties broken by ascending base index.
    std::vector<std::pair<double, std::int32_t>> scored(base.rows());
    for (Index i = 0; i < base.rows(); ++i) {
      const double d2 = (base.row(i) - queries.row(q)).squaredNorm();
      scored[i] = {d2, static_cast<std::int32_t>(i)};
    }
    std::nth_element(scored.begin(), scored.begin() + (k - 1), scored.end());
    std::sort(scored.begin(), scored.begin() + k);
    for (int j = 0; j < k; ++j) {
      table.ids(q, j) = scored[j].second;
      table.distances(q, j) = std::sqrt(scored[j].first);
    }
  });
  return table;
}

double recall_at_k(const IdMatrix& truth_ids, const IdMatrix& reduced_ids, int k) {
  if (truth_ids.rows() != reduced_ids.rows()) {
    throw ArgumentError("recall_at_k: tables disagree on query count");
  }
  if (k < 1 || k > truth_ids.cols() || k > reduced_ids.cols()) {
    throw ArgumentError("recall_at_k: k=" + std::to_string(k) +
                        " exceeds a table's neighbor count");
  }
  if (truth_ids.rows() == 0) throw ArgumentError("recall_at_k: empty tables");

  double total = 0.0;
  std::vector<std::int32_t> truth_row(k);
  for (Index q = 0; q < truth_ids.rows(); ++q) {
    for (int j = 0; j < k; ++j) truth_row[j] = truth_ids(q, j);
    std::sort(truth_row.begin(), truth_row.end());
    int hits = 0;
    for (int j = 0; j < k; ++j) {
      if (std::binary_search(truth_row.begin(), truth_row.end(), reduced_ids(q, j))) ++hits;
    }
    total += static_cast<double>(hits) / k;
  }
  return total / static_cast<double>(truth_ids.rows());
}

double recall_at_k(const NeighborTable& truth, const NeighborTable& reduced, int k) {
  return recall_at_k(truth.ids, reduced.ids, k);
}

RpVariant rp_variant_from_string(const std::string& name) {
  if (name == "gaussian") return RpVariant::gaussian;
  if (name == "sparse") return RpVariant::sparse;
  throw ArgumentError("unknown random projection variant '" + name +
                      "' (expected gaussian or sparse)");
}

ProjectionModel random_projection_fit(Index n, Index m, std::uint64_t seed, RpVariant variant) {
  if (m < 1 || m > n) {
    throw ArgumentError("random_projection_fit: m=" + std::to_string(m) + " outside [1, " +
                        std::to_string(n) + "]");
  }
  ProjectionModel model;
  model.directions.resize(m, n);
  model.mean = Vector::Zero(n);
  model.rows_unit = false;
  model.config.m = static_cast<int>(m);
  model.config.seed = seed;

  auto rng = make_rng(mix_seed(seed, {0x9bULL, static_cast<std::uint64_t>(variant)}));
  if (variant == RpVariant::gaussian) {
    model.method = "rp-gaussian";
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j) model.directions(i, j) = normal(rng) * scale;
  } else {
    model.method = "rp-sparse";
    const double magnitude = std::sqrt(3.0 / static_cast<double>(m));
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < n; ++j) {
        const std::uint64_t u = bounded(rng, 6);  // {+,-} w.p. 1/6 each, 0 otherwise
        model.directions(i, j) = u == 0 ? magnitude : (u == 1 ? -magnitude : 0.0);
      }
    }
  }
  return model;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct FitCell {
  std::string method;
  std::size_t drr_index = 0;
  std::size_t alpha_index = 0;  // qpad only
  std::size_t b_index = 0;      // qpad only
};

struct CellOutcome {
  bool recall_by_k_valid = false;
  std::vector<double> recall_by_k;
  double fit_seconds = 0.0;
  double transform_seconds = 0.0;
  std::string error;
};

}  // namespace

RecallReport run_sweep(const Dataset& train, const Dataset& queries, const SweepGrid& grid,
                       const SweepOptions& options) {
  if (grid.drr.empty() || grid.k.empty()) {
    throw ArgumentError("run_sweep: drr and k lists must be non-empty");
  }
  const bool has_qpad =
      std::find(options.methods.begin(), options.methods.end(), "qpad") != options.methods.end();
  const bool has_rp =
      std::find(options.methods.begin(), options.methods.end(), "rp") != options.methods.end();
  if (!has_qpad && !has_rp) throw ArgumentError("run_sweep: no known methods requested");
  if (has_qpad && (grid.alpha.empty() || grid.b.empty())) {
    throw ArgumentError("run_sweep: qpad needs non-empty alpha and b lists");
  }
  for (double drr : grid.drr) {
    if (!(drr > 0.0 && drr <= 1.0)) throw ArgumentError("run_sweep: drr must lie in (0, 1]");
  }
  const int k_max = *std::max_element(grid.k.begin(), grid.k.end());

  const int workers = resolve_workers(options.workers);
  const NeighborTable truth = exact_knn(train.vectors, queries.vectors, k_max, workers);

  std::vector<FitCell> cells;
  if (has_qpad) {
    for (std::size_t d = 0; d < grid.drr.size(); ++d)
      for (std::size_t a = 0; a < grid.alpha.size(); ++a)
        for (std::size_t b = 0; b < grid.b.size(); ++b) cells.push_back({"qpad", d, a, b});
  }
  if (has_rp) {
    for (std::size_t d = 0; d < grid.drr.size(); ++d) cells.push_back({"rp", d, 0, 0});
  }

  std::vector<CellOutcome> outcomes(cells.size());
  parallel_for(0, static_cast<std::int64_t>(cells.size()), workers, [&](std::int64_t ci) {
    const FitCell& cell = cells[ci];
    CellOutcome& out = outcomes[ci];
    try {
      const double drr = grid.drr[cell.drr_index];
      const Index target_dim =
          std::max<Index>(1, static_cast<Index>(std::lround(drr * train.dim())));

      ProjectionModel model;
      const auto fit_start = std::chrono::steady_clock::now();
      if (cell.method == "qpad") {
        QpadConfig config = options.base_config;
        config.m = static_cast<int>(target_dim);
        config.alpha = grid.alpha[cell.alpha_index];
        config.b_percent = grid.b[cell.b_index];
        config.seed = mix_seed(options.seed, {0x9acdULL, cell.drr_index, cell.alpha_index,
                                              cell.b_index});
        FitOptions fit_options;
        fit_options.naive_guard = options.naive_guard;
        model = fit(train, config, options.engine, fit_options).model;
      } else {
        model = random_projection_fit(train.dim(), target_dim,
                                      mix_seed(options.seed, {0x2bULL, cell.drr_index}),
                                      options.rp_variant);
      }
      out.fit_seconds = seconds_since(fit_start);

      const auto transform_start = std::chrono::steady_clock::now();
      const Matrix train_reduced = transform(model, train.vectors);
      const Matrix query_reduced = transform(model, queries.vectors);
      out.transform_seconds = seconds_since(transform_start);

      // Inner k-NN stays single-threaded; the sweep already parallelizes
      // across cells.
      const NeighborTable reduced = exact_knn(train_reduced, query_reduced, k_max, 1);
      out.recall_by_k.reserve(grid.k.size());
      for (int k : grid.k) out.recall_by_k.push_back(recall_at_k(truth, reduced, k));
      out.recall_by_k_valid = true;
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  });

  RecallReport report;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const FitCell& cell = cells[ci];
    const CellOutcome& out = outcomes[ci];
    for (std::size_t ki = 0; ki < grid.k.size(); ++ki) {
      RecallRow row;
      row.method = cell.method;
      row.drr = grid.drr[cell.drr_index];
      row.k = grid.k[ki];
      row.alpha = cell.method == "qpad" ? grid.alpha[cell.alpha_index] : 0.0;
      row.b = cell.method == "qpad" ? grid.b[cell.b_index] : 0.0;
      row.recall = out.recall_by_k_valid ? out.recall_by_k[ki] : nan;
      row.fit_seconds = out.fit_seconds;
      row.transform_seconds = out.transform_seconds;
      row.error = out.error;
      report.rows.push_back(std::move(row));
    }
  }

  // Winner tallies: one comparison cell per (drr, k, alpha, b) combination;
  // rp's recall per (drr, k) is reused across the qpad-only axes.
  {
    std::map<std::string, WinnerTally> tally;
    for (const auto& method : options.methods) tally[method] = WinnerTally{method, 0, 0};

    auto rp_recall = [&](std::size_t d, std::size_t ki) -> double {
      for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        if (cells[ci].method == "rp" && cells[ci].drr_index == d &&
            outcomes[ci].recall_by_k_valid)
          return outcomes[ci].recall_by_k[ki];
      }
      return std::numeric_limits<double>::quiet_NaN();
    };

    const std::size_t alpha_count = has_qpad ? grid.alpha.size() : 1;
    const std::size_t b_count = has_qpad ? grid.b.size() : 1;
    for (std::size_t d = 0; d < grid.drr.size(); ++d) {
      for (std::size_t ki = 0; ki < grid.k.size(); ++ki) {
        for (std::size_t a = 0; a < alpha_count; ++a) {
          for (std::size_t b = 0; b < b_count; ++b) {
            std::vector<std::pair<double, std::string>> ranked;
            if (has_qpad) {
              for (std::size_t ci = 0; ci < cells.size(); ++ci) {
                const FitCell& cell = cells[ci];
                if (cell.method == "qpad" && cell.drr_index == d && cell.alpha_index == a &&
                    cell.b_index == b && outcomes[ci].recall_by_k_valid) {
                  ranked.emplace_back(outcomes[ci].recall_by_k[ki], "qpad");
                }
              }
            }
            if (has_rp) {
              const double r = rp_recall(d, ki);
              if (!std::isnan(r)) ranked.emplace_back(r, "rp");
            }
            std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
              return std::tie(y.first, x.second) < std::tie(x.first, y.second);
            });
            if (!ranked.empty()) ++tally[ranked[0].second].wins_first;
            if (ranked.size() > 1) ++tally[ranked[1].second].wins_second;
          }
        }
      }
    }
    for (auto& [name, t] : tally) report.winners.push_back(t);
  }

  return report;
}

namespace {

std::string csv_value(double v) {
  if (std::isnan(v)) return "nan";
  return format_number(v);
}

}  // namespace

void write_recall_csv(const std::filesystem::path& path, const std::vector<RecallRow>& rows,
                      bool include_timings) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open file for writing: " + path.string());
  out << "method,drr,k,alpha,b,recall,fit_seconds,transform_seconds\n";
  for (const RecallRow& row : rows) {
    out << row.method << ',' << csv_value(row.drr) << ',' << row.k << ',' << csv_value(row.alpha)
        << ',' << csv_value(row.b) << ',' << csv_value(row.recall) << ','
        << (include_timings ? csv_value(row.fit_seconds) : "0") << ','
        << (include_timings ? csv_value(row.transform_seconds) : "0") << '\n';
  }
  if (!out) throw FormatError("write failed: " + path.string());
}

void write_winners_csv(const std::filesystem::path& path, const std::vector<WinnerTally>& winners) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open file for writing: " + path.string());
  out << "method,wins_first,wins_second\n";
  for (const WinnerTally& t : winners) {
    out << t.method << ',' << t.wins_first << ',' << t.wins_second << '\n';
  }
  if (!out) throw FormatError("write failed: " + path.string());
}

}  // namespace qpad
