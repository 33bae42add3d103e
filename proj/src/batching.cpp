#include "toi/batching.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace toi {

std::string_view to_string(BatchLayout layout) {
  return layout == BatchLayout::Distributed ? "distributed" : "sequential";
}

BatchMatrix::BatchMatrix(std::size_t rows, std::size_t k, BatchLayout layout,
                         std::size_t dropped, std::vector<DataPointRef> cells)
    : k_(k),
      rows_(rows),
      layout_(layout),
      dropped_(dropped),
      cells_(std::move(cells)) {
  if (cells_.size() != rows_ * k_) {
    throw std::invalid_argument("cell count does not match L x K");
  }
}

BatchMatrix BatchMatrix::with_row_order(
    std::span<const std::size_t> order) const {
  if (order.size() != rows_) {
    throw std::invalid_argument("row order has wrong length");
  }
  std::vector<DataPointRef> cells;
  cells.reserve(cells_.size());
  for (const std::size_t source : order) {
    const auto r = row(source);
    cells.insert(cells.end(), r.begin(), r.end());
  }
  return BatchMatrix(rows_, k_, layout_, dropped_, std::move(cells));
}

BatchMatrix build_distributed(std::span<const DataPointRef> points,
                              std::size_t k) {
  if (k == 0) throw std::invalid_argument("batch size K must be positive");
  const std::size_t rows = points.size() / k;
  std::vector<DataPointRef> cells(rows * k);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < k; ++j) cells[i * k + j] = points[j * rows + i];
  }
  return BatchMatrix(rows, k, BatchLayout::Distributed,
                     points.size() - rows * k, std::move(cells));
}

BatchMatrix build_sequential(std::span<const DataPointRef> points,
                             std::size_t k) {
  if (k == 0) throw std::invalid_argument("batch size K must be positive");
  const std::size_t rows = points.size() / k;
  std::vector<DataPointRef> cells(points.begin(),
                                  points.begin() + rows * k);
  return BatchMatrix(rows, k, BatchLayout::Sequential,
                     points.size() - rows * k, std::move(cells));
}

PeriodReport period_analysis(std::size_t p, std::size_t k) {
  if (p == 0 || k == 0) {
    throw std::invalid_argument("P and K must be positive");
  }
  const std::size_t g = std::gcd(p, k);
  return {p, k, g, k / g, g, p / g};
}

DuplicateStats detect_row_duplicates(const BatchMatrix& matrix,
                                     std::size_t n) {
  DuplicateStats stats;
  stats.rows.reserve(matrix.num_batches());
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < matrix.num_batches(); ++i) {
    starts.clear();
    for (const auto& cell : matrix.row(i)) starts.push_back(cell.start);
    std::sort(starts.begin(), starts.end());

    RowDuplicates row;
    std::size_t cluster = 0;
    std::size_t window_begin = 0;
    for (std::size_t b = 0; b < starts.size(); ++b) {
      if (b > 0 && starts[b] - starts[b - 1] < n) {
        ++cluster;
      } else {
        if (cluster) row.cluster_sizes.push_back(cluster);
        cluster = 1;
      }
      while (starts[b] - starts[window_begin] >= n) ++window_begin;
      row.overlapping_pairs += b - window_begin;
    }
    if (cluster) row.cluster_sizes.push_back(cluster);
    for (const std::size_t size : row.cluster_sizes) {
      row.max_cluster = std::max(row.max_cluster, size);
    }

    stats.max_cluster = std::max(stats.max_cluster, row.max_cluster);
    stats.total_overlapping_pairs += row.overlapping_pairs;
    if (row.max_cluster > 1) ++stats.rows_with_overlap;
    stats.rows.push_back(std::move(row));
  }
  return stats;
}

void write_batch_manifest(const BatchMatrix& matrix, std::ostream& out) {
  out << "TOIBM01 " << to_string(matrix.layout()) << ' '
      << matrix.batch_size() << ' ' << matrix.num_batches() << '\n';
  for (std::size_t i = 0; i < matrix.num_batches(); ++i) {
    for (std::size_t j = 0; j < matrix.batch_size(); ++j) {
      const auto& cell = matrix.cell(i, j);
      out << i << ' ' << j << ' ' << cell.seq_id << ' ' << cell.rank << ' '
          << cell.start << '\n';
    }
  }
}

BatchMatrix read_batch_manifest(std::istream& in, std::size_t n) {
  std::string magic, layout_name;
  std::size_t k = 0, rows = 0;
  if (!(in >> magic >> layout_name >> k >> rows) || magic != "TOIBM01") {
    throw std::invalid_argument("bad batch manifest header");
  }
  BatchLayout layout;
  if (layout_name == "distributed") {
    layout = BatchLayout::Distributed;
  } else if (layout_name == "sequential") {
    layout = BatchLayout::Sequential;
  } else {
    throw std::invalid_argument("unknown batch layout '" + layout_name + "'");
  }
  std::vector<DataPointRef> cells(rows * k);
  for (std::size_t idx = 0; idx < cells.size(); ++idx) {
    std::size_t i = 0, j = 0;
    DataPointRef ref;
    if (!(in >> i >> j >> ref.seq_id >> ref.rank >> ref.start)) {
      throw std::invalid_argument("batch manifest truncated at record " +
                                  std::to_string(idx));
    }
    if (i * k + j != idx || j >= k) {
      throw std::invalid_argument("batch manifest records out of order");
    }
    ref.length = n;
    cells[idx] = ref;
  }
  // The manifest does not record how many points were dropped.
  return BatchMatrix(rows, k, layout, 0, std::move(cells));
}

}  // namespace toi
