#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "qpad/dataset.hpp"

namespace qpad {

// fvecs: per record, a little-endian int32 dimension header followed by that
// many float32 values. bvecs: header then unsigned bytes. ivecs: header then
// int32 values. All records in a file must share the same dimension.
Dataset read_fvecs(const std::filesystem::path& path);
Dataset read_bvecs(const std::filesystem::path& path);
void write_fvecs(const std::filesystem::path& path, const Matrix& rows);

IdMatrix read_ivecs(const std::filesystem::path& path);
void write_ivecs(const std::filesystem::path& path, const IdMatrix& rows);

enum class CsvDelimiter { comma, whitespace };

Dataset read_csv(const std::filesystem::path& path, bool has_header = false,
                 CsvDelimiter delimiter = CsvDelimiter::comma);

struct NormalizeResult {
  Dataset data;
  Index zero_rows = 0;  // rows left untouched because their norm is zero
};

/// Scales every nonzero row to unit Euclidean norm. Zero rows pass through
/// unchanged and are counted so callers can warn.
NormalizeResult l2_normalize(const Dataset& ds);

/// Deterministic disjoint partition into (train, queries). Rows keep their
/// original relative order within each part; equal (ds, spec) always yields
/// equal outputs.
std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec);

/// Random column subset without replacement, for runs on a reduced ambient
/// dimension. Selected columns keep their original order.
Dataset subsample_columns(const Dataset& ds, Index count, std::uint64_t seed);

}  // namespace qpad
