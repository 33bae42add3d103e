#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "toi/corpus.hpp"

namespace toi {

/// Configuration of P overlapped data-point sequences of N tokens each.
///
/// Sequence c starts at token offsets[c] = c * step. With strict
/// divisibility step * P == N; otherwise step = floor(N / P) and the gap
/// between the last offset and N absorbs the slack.
struct OverlapPlan {
  std::size_t n_tokens_per_point = 1;
  std::size_t n_overlaps = 1;
  std::size_t step = 1;
  std::vector<std::size_t> offsets{0};
  bool strict = true;
  /// Non-empty when the plan was built from a non-divisible (N, P).
  std::string warning;

  bool operator==(const OverlapPlan&) const = default;
};

/// Throws std::invalid_argument for P == 0, N == 0, P > N, or N % P != 0
/// without `allow_nondivisible`.
OverlapPlan make_plan(std::size_t n, std::size_t p,
                      bool allow_nondivisible = false);

/// A window of `length` tokens starting at `start`; never owns tokens.
struct DataPointRef {
  std::uint32_t seq_id = 0;
  std::size_t rank = 0;
  std::size_t start = 0;
  std::size_t length = 0;

  std::size_t end() const { return start + length; }
  auto operator<=>(const DataPointRef&) const = default;
};

/// Data points of all overlapped sequences, concatenated in offset order.
struct DataPointSequence {
  OverlapPlan plan;
  std::size_t stream_length = 0;
  std::vector<DataPointRef> points;
  std::vector<std::size_t> per_sequence_counts;

  std::size_t size() const { return points.size(); }
};

/// floor((T - offset) / N) consecutive windows starting at `offset`; the
/// trailing remainder is dropped. Empty when offset >= T.
std::vector<DataPointRef> split_with_offset(std::size_t t, std::size_t n,
                                            std::size_t offset,
                                            std::uint32_t seq_id = 0);

inline std::vector<DataPointRef> split_with_offset(const TokenStream& stream,
                                                   std::size_t n,
                                                   std::size_t offset) {
  return split_with_offset(stream.size(), n, offset);
}

/// Throws std::invalid_argument when N > T.
DataPointSequence alleviated_split(std::size_t t, const OverlapPlan& plan);

inline DataPointSequence alleviated_split(const TokenStream& stream,
                                          const OverlapPlan& plan) {
  return alleviated_split(stream.size(), plan);
}

/// Closed form of alleviated_split(...).size().
std::size_t count_points(std::size_t t, const OverlapPlan& plan);

// Plan document: one `key=value` per line with keys n, p, step, offsets,
// strict.
void write_plan(const OverlapPlan& plan, std::ostream& out);
OverlapPlan read_plan(std::istream& in);

// Point manifest: "TOIDP01 N P T count" then "seq_id rank start" per point.
void write_point_manifest(const DataPointSequence& sequence, std::ostream& out);
DataPointSequence read_point_manifest(std::istream& in);

}  // namespace toi
