#include "qpad/dataset_io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "qpad/rng.hpp"

namespace qpad {

Dataset Dataset::from_matrix(Matrix m, Index min_rows) {
  if (m.cols() < 1) throw ArgumentError("dataset must have at least one dimension");
  if (m.rows() < min_rows) {
    throw ArgumentError("dataset must contain at least " + std::to_string(min_rows) +
                        " vectors, got " + std::to_string(m.rows()));
  }
  if (!m.allFinite()) throw ArgumentError("dataset contains non-finite values");
  return Dataset{std::move(m)};
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open file: " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open file for writing: " + path.string());
  return out;
}

// Shared record walker for the *vecs family: little-endian int32 dimension
// header, then `dim * value_size` payload bytes per record.
template <typename ReadRow>
Index read_vecs_records(std::ifstream& in, const std::filesystem::path& path, int value_size,
                        Index& dim_out, ReadRow&& read_row) {
  Index record = 0;
  std::int64_t offset = 0;
  Index dim = -1;
  while (true) {
    std::int32_t d = 0;
    in.read(reinterpret_cast<char*>(&d), sizeof(d));
    if (in.gcount() == 0 && in.eof()) break;
    if (in.gcount() != sizeof(d)) {
      throw FormatError(path.string() + ": truncated dimension header at byte offset " +
                        std::to_string(offset));
    }
    if (d <= 0) {
      throw FormatError(path.string() + ": non-positive dimension " + std::to_string(d) +
                        " in record " + std::to_string(record) + " at byte offset " +
                        std::to_string(offset));
    }
    if (dim < 0) {
      dim = d;
    } else if (d != dim) {
      throw FormatError(path.string() + ": inconsistent dimensions: record 0 has " +
                        std::to_string(dim) + ", record " + std::to_string(record) + " has " +
                        std::to_string(d));
    }
    offset += static_cast<std::int64_t>(sizeof(d));
    if (!read_row(in, d)) {
      throw FormatError(path.string() + ": truncated record " + std::to_string(record) +
                        " at byte offset " + std::to_string(offset) + " (expected " +
                        std::to_string(static_cast<std::int64_t>(d) * value_size) +
                        " payload bytes)");
    }
    offset += static_cast<std::int64_t>(d) * value_size;
    ++record;
  }
  dim_out = dim;
  return record;
}

}  // namespace

Dataset read_fvecs(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<float> buffer;
  std::vector<double> values;
  Index dim = -1;
  Index rows = read_vecs_records(in, path, 4, dim, [&](std::ifstream& s, std::int32_t d) {
    buffer.resize(d);
    s.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(d) * 4);
    if (s.gcount() != static_cast<std::streamsize>(d) * 4) return false;
    values.insert(values.end(), buffer.begin(), buffer.end());
    return true;
  });
  Matrix m(rows, std::max<Index>(dim, 0));
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < dim; ++j) m(i, j) = values[i * dim + j];
  return Dataset::from_matrix(std::move(m));
}

Dataset read_bvecs(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<unsigned char> buffer;
  std::vector<double> values;
  Index dim = -1;
  Index rows = read_vecs_records(in, path, 1, dim, [&](std::ifstream& s, std::int32_t d) {
    buffer.resize(d);
    s.read(reinterpret_cast<char*>(buffer.data()), d);
    if (s.gcount() != static_cast<std::streamsize>(d)) return false;
    for (unsigned char b : buffer) values.push_back(static_cast<double>(b));
    return true;
  });
  Matrix m(rows, std::max<Index>(dim, 0));
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < dim; ++j) m(i, j) = values[i * dim + j];
  return Dataset::from_matrix(std::move(m));
}

void write_fvecs(const std::filesystem::path& path, const Matrix& rows) {
  auto out = open_output(path);
  const std::int32_t d = static_cast<std::int32_t>(rows.cols());
  std::vector<float> buffer(rows.cols());
  for (Index i = 0; i < rows.rows(); ++i) {
    out.write(reinterpret_cast<const char*>(&d), sizeof(d));
    for (Index j = 0; j < rows.cols(); ++j) buffer[j] = static_cast<float>(rows(i, j));
    out.write(reinterpret_cast<const char*>(buffer.data()),
              static_cast<std::streamsize>(buffer.size()) * 4);
  }
  if (!out) throw FormatError("write failed: " + path.string());
}

IdMatrix read_ivecs(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::int32_t> values;
  std::vector<std::int32_t> buffer;
  Index dim = -1;
  Index rows = read_vecs_records(in, path, 4, dim, [&](std::ifstream& s, std::int32_t d) {
    buffer.resize(d);
    s.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(d) * 4);
    if (s.gcount() != static_cast<std::streamsize>(d) * 4) return false;
    values.insert(values.end(), buffer.begin(), buffer.end());
    return true;
  });
  IdMatrix m(rows, std::max<Index>(dim, 0));
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < dim; ++j) m(i, j) = values[i * dim + j];
  return m;
}

void write_ivecs(const std::filesystem::path& path, const IdMatrix& rows) {
  auto out = open_output(path);
  const std::int32_t d = static_cast<std::int32_t>(rows.cols());
  for (Index i = 0; i < rows.rows(); ++i) {
    out.write(reinterpret_cast<const char*>(&d), sizeof(d));
    out.write(reinterpret_cast<const char*>(rows.row(i).data()),
              static_cast<std::streamsize>(rows.cols()) * 4);
  }
  if (!out) throw FormatError("write failed: " + path.string());
}

Dataset read_csv(const std::filesystem::path& path, bool has_header, CsvDelimiter delimiter) {
  auto in = open_input(path);
  std::vector<std::vector<double>> parsed;
  std::string line;
  Index line_number = 0;
  Index cols = -1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (has_header && line_number == 1) continue;
    // Skip blank lines (typically a trailing newline).
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    std::vector<std::string> fields;
    if (delimiter == CsvDelimiter::comma) {
      std::stringstream ss(line);
      std::string field;
      while (std::getline(ss, field, ',')) fields.push_back(field);
      if (!line.empty() && line.back() == ',') fields.emplace_back();
    } else {
      std::stringstream ss(line);
      std::string field;
      while (ss >> field) fields.push_back(field);
    }

    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::string& f = fields[c];
      std::size_t consumed = 0;
      double v = 0.0;
      try {
        v = std::stod(f, &consumed);
      } catch (const std::exception&) {
        consumed = 0;
      }
      if (consumed == 0 || f.find_first_not_of(" \t", consumed) != std::string::npos) {
        throw FormatError(path.string() + ": non-numeric field '" + f + "' at row " +
                          std::to_string(line_number) + ", column " + std::to_string(c + 1));
      }
      row.push_back(v);
    }
    if (cols < 0) {
      cols = static_cast<Index>(row.size());
    } else if (static_cast<Index>(row.size()) != cols) {
      throw FormatError(path.string() + ": ragged row at row " + std::to_string(line_number) +
                        " (expected " + std::to_string(cols) + " fields, got " +
                        std::to_string(row.size()) + ")");
    }
    parsed.push_back(std::move(row));
  }

  Matrix m(static_cast<Index>(parsed.size()), std::max<Index>(cols, 0));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = parsed[i][j];
  return Dataset::from_matrix(std::move(m));
}

NormalizeResult l2_normalize(const Dataset& ds) {
  Matrix out = ds.vectors;
  Index zero_rows = 0;
  for (Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm == 0.0) {
      ++zero_rows;
    } else {
      out.row(i) /= norm;
    }
  }
  return NormalizeResult{Dataset{std::move(out)}, zero_rows};
}

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
  const Index n = ds.rows();
  if (spec.query_count < 1) throw ArgumentError("split: query_count must be at least 1");
  if (spec.query_count >= n - 1) {
    throw ArgumentError("split: query_count " + std::to_string(spec.query_count) +
                        " too large for " + std::to_string(n) +
                        " vectors (train side needs at least 2)");
  }

  std::vector<Index> idx(n);
  std::iota(idx.begin(), idx.end(), Index{0});
  auto rng = make_rng(mix_seed(spec.seed, {0x5917ULL, static_cast<std::uint64_t>(n)}));
  // Fisher-Yates with an explicit draw so the permutation is pinned down.
  for (Index i = n - 1; i > 0; --i) {
    const Index j = static_cast<Index>(bounded(rng, static_cast<std::uint64_t>(i) + 1));
    std::swap(idx[i], idx[j]);
  }

  std::vector<Index> query_idx(idx.begin(), idx.begin() + spec.query_count);
  std::vector<Index> train_idx(idx.begin() + spec.query_count, idx.end());
  std::sort(query_idx.begin(), query_idx.end());
  std::sort(train_idx.begin(), train_idx.end());

  Matrix queries(spec.query_count, ds.dim());
  for (Index i = 0; i < spec.query_count; ++i) queries.row(i) = ds.vectors.row(query_idx[i]);
  Matrix train(n - spec.query_count, ds.dim());
  for (Index i = 0; i < train.rows(); ++i) train.row(i) = ds.vectors.row(train_idx[i]);

  return {Dataset::from_matrix(std::move(train)),
          Dataset::from_matrix(std::move(queries), /*min_rows=*/1)};
}

Dataset subsample_columns(const Dataset& ds, Index count, std::uint64_t seed) {
  if (count < 1 || count > ds.dim()) {
    throw ArgumentError("subsample_columns: count must be in [1, " + std::to_string(ds.dim()) +
                        "], got " + std::to_string(count));
  }
  std::vector<Index> cols(ds.dim());
  std::iota(cols.begin(), cols.end(), Index{0});
  auto rng = make_rng(mix_seed(seed, {0xc01u, static_cast<std::uint64_t>(ds.dim())}));
  for (Index i = ds.dim() - 1; i > 0; --i) {
    const Index j = static_cast<Index>(bounded(rng, static_cast<std::uint64_t>(i) + 1));
    std::swap(cols[i], cols[j]);
  }
  cols.resize(count);
  std::sort(cols.begin(), cols.end());

  Matrix out(ds.rows(), count);
  for (Index j = 0; j < count; ++j) out.col(j) = ds.vectors.col(cols[j]);
  return Dataset::from_matrix(std::move(out));
}

}  // namespace qpad
