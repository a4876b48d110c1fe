#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qpad/dataset.hpp"
#include "qpad/model.hpp"
#include "qpad/optimize.hpp"

namespace qpad {

/// Row i holds the k nearest base vectors to query i, ascending by distance.
/// Ties at equal distance are broken by ascending base index.
struct NeighborTable {
  IdMatrix ids;
  Matrix distances;
};

/// Exact brute-force Euclidean k-NN, parallel over queries.
NeighborTable exact_knn(const Matrix& base, const Matrix& queries, int k, int workers = 0);

/// Mean over queries of |truth ∩ reduced| / k using the first k columns of
/// each table (set semantics per row).
double recall_at_k(const IdMatrix& truth_ids, const IdMatrix& reduced_ids, int k);
double recall_at_k(const NeighborTable& truth, const NeighborTable& reduced, int k);

enum class RpVariant { gaussian, sparse };

RpVariant rp_variant_from_string(const std::string& name);

/// Gaussian: i.i.d. N(0,1)/sqrt(m) entries, rows left unnormalized.
/// Sparse: +/-sqrt(3/m) with probability 1/6 each, zero otherwise.
ProjectionModel random_projection_fit(Index n, Index m, std::uint64_t seed, RpVariant variant);

struct SweepGrid {
  std::vector<double> drr;  // target dim = max(1, round(drr * n)), drr in (0,1]
  std::vector<int> k;
  std::vector<double> alpha;  // qpad only
  std::vector<double> b;      // qpad only
};

struct RecallRow {
  std::string method;
  double drr = 0.0;
  int k = 0;
  double alpha = 0.0;
  double b = 0.0;
  double recall = 0.0;  // NaN when the cell failed
  double fit_seconds = 0.0;
  double transform_seconds = 0.0;
  std::string error;  // failure marker, empty on success
};

struct WinnerTally {
  std::string method;
  long long wins_first = 0;
  long long wins_second = 0;
};

struct RecallReport {
  std::vector<RecallRow> rows;
  std::vector<WinnerTally> winners;
};

struct SweepOptions {
  QpadConfig base_config;  // m/alpha/b_percent/seed overridden per cell
  Engine engine = Engine::fast;
  NaiveGuard naive_guard;
  std::uint64_t seed = 0;
  int workers = 0;
  std::vector<std::string> methods = {"qpad", "rp"};
  RpVariant rp_variant = RpVariant::gaussian;
};

/// Runs the full (method x drr x alpha x b) grid: fit on train, transform
/// train and queries, exact k-NN in original and reduced spaces, Recall@k
/// per k. Cell failures are recorded in the report and the sweep continues.
/// Each cell seeds its own RNG from (seed, cell coordinates), so results are
/// independent of worker count and scheduling.
RecallReport run_sweep(const Dataset& train, const Dataset& queries, const SweepGrid& grid,
                       const SweepOptions& options);

// Schema: method,drr,k,alpha,b,recall,fit_seconds,transform_seconds.
// With include_timings off the timing columns are written as 0 so repeated
// runs produce byte-identical files.
void write_recall_csv(const std::filesystem::path& path, const std::vector<RecallRow>& rows,
                      bool include_timings = true);
void write_winners_csv(const std::filesystem::path& path, const std::vector<WinnerTally>& winners);

}  // namespace qpad
