#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "toi/discretize.hpp"

namespace toi {

enum class BatchLayout { Sequential, Distributed };

std::string_view to_string(BatchLayout layout);

/// L x K grid of data points; row i is batch i.
class BatchMatrix {
 public:
  BatchMatrix() = default;
  BatchMatrix(std::size_t rows, std::size_t k, BatchLayout layout,
              std::size_t dropped, std::vector<DataPointRef> cells);

  std::size_t batch_size() const { return k_; }
  std::size_t num_batches() const { return rows_; }
  std::size_t dropped() const { return dropped_; }
  BatchLayout layout() const { return layout_; }
  bool empty() const { return cells_.empty(); }

  const DataPointRef& cell(std::size_t row, std::size_t col) const {
    return cells_[row * k_ + col];
  }
  std::span<const DataPointRef> row(std::size_t i) const {
    return {cells_.data() + i * k_, k_};
  }
  /// Row-major cells.
  std::span<const DataPointRef> cells() const { return cells_; }

  /// Returns a copy whose row i is this matrix's row order[i].
  BatchMatrix with_row_order(std::span<const std::size_t> order) const;

  bool operator==(const BatchMatrix&) const = default;

 private:
  std::size_t k_ = 0;
  std::size_t rows_ = 0;
  BatchLayout layout_ = BatchLayout::Distributed;
  std::size_t dropped_ = 0;
  std::vector<DataPointRef> cells_;
};

/// Splits the points into K contiguous parts of L = floor(M'/K) points;
/// batch i takes element i of every part: cell(i, j) = points[j * L + i].
BatchMatrix build_distributed(std::span<const DataPointRef> points,
                              std::size_t k);
/// Row-major chunking: cell(i, j) = points[i * K + j].
BatchMatrix build_sequential(std::span<const DataPointRef> points,
                             std::size_t k);

inline BatchMatrix build_distributed(const DataPointSequence& sequence,
                                     std::size_t k) {
  return build_distributed(sequence.points, k);
}
inline BatchMatrix build_sequential(const DataPointSequence& sequence,
                                    std::size_t k) {
  return build_sequential(sequence.points, k);
}

/// Within-batch repetition period for P overlapped sequences and batch
/// size K: the minimal q with (P * q) % K == 0 is K / gcd(P, K), and each
/// repeated data point occurs gcd(P, K) times per batch.
struct PeriodReport {
  std::size_t p = 0;
  std::size_t k = 0;
  std::size_t gcd = 0;
  std::size_t period_q = 0;
  std::size_t repetitions = 0;
  std::size_t n_at_period = 0;

  bool operator==(const PeriodReport&) const = default;
};

PeriodReport period_analysis(std::size_t p, std::size_t k);

struct RowDuplicates {
  /// Sizes of the overlap clusters in the row, in ascending start order.
  std::vector<std::size_t> cluster_sizes;
  std::size_t max_cluster = 0;
  std::size_t overlapping_pairs = 0;
};

struct DuplicateStats {
  std::vector<RowDuplicates> rows;
  std::size_t max_cluster = 0;
  std::size_t total_overlapping_pairs = 0;
  /// Rows whose max cluster exceeds one.
  std::size_t rows_with_overlap = 0;
};

/// Two cells of a row overlap when their token ranges intersect
/// (|start_a - start_b| < N); clusters are the transitive closure.
DuplicateStats detect_row_duplicates(const BatchMatrix& matrix, std::size_t n);

// Manifest: "TOIBM01 layout K L" then "row col seq_id rank start" per cell.
void write_batch_manifest(const BatchMatrix& matrix, std::ostream& out);
/// `n` restores DataPointRef::length, which the manifest does not carry.
BatchMatrix read_batch_manifest(std::istream& in, std::size_t n);

}  // namespace toi
