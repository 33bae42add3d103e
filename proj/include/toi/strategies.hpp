#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "toi/batching.hpp"
#include "toi/corpus.hpp"
#include "toi/discretize.hpp"

namespace toi {

enum class ToiKind { Extreme, InterBatch, Standard, Alleviated };

/// One of the four batching regimes. Use the factories; they enforce that
/// Alleviated has p >= 2 and that the shuffling regimes carry a seed.
struct ToiStrategy {
  ToiKind kind = ToiKind::Standard;
  std::size_t p = 1;
  std::uint64_t seed = 0;

  static ToiStrategy standard() { return {}; }
  static ToiStrategy extreme(std::uint64_t seed) {
    return {ToiKind::Extreme, 1, seed};
  }
  static ToiStrategy inter_batch(std::uint64_t seed) {
    return {ToiKind::InterBatch, 1, seed};
  }
  static ToiStrategy alleviated(std::size_t p);

  bool operator==(const ToiStrategy&) const = default;
};

/// Parses `standard`, `extreme:<seed>`, `interbatch:<seed>`,
/// `alleviated:<P>`.
ToiStrategy parse_strategy(std::string_view text);
std::string to_string(const ToiStrategy& strategy);
/// Short name without parameters, e.g. "interbatch".
std::string_view kind_name(ToiKind kind);

/// Overlap configuration a strategy feeds to the splitter (P = 1 except for
/// Alleviated).
OverlapPlan strategy_plan(std::size_t n, const ToiStrategy& strategy);

/// Distributed batches of alleviated_split(stream, plan). Accepts P = 1.
BatchMatrix build_overlapped_batches(const TokenStream& stream,
                                     const OverlapPlan& plan, std::size_t k);

/// - Standard: distributed batches over the offset-0 split.
/// - Alleviated(P): distributed batches over the P-way overlapped split.
/// - Extreme: the L*K points Standard keeps, shuffled, then distributed.
/// - InterBatch: Standard's matrix with its rows shuffled.
BatchMatrix apply_strategy(const TokenStream& stream, std::size_t n,
                           std::size_t k, const ToiStrategy& strategy);

}  // namespace toi
