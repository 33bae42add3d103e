#include "toi/strategies.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "toi/rng.hpp"

namespace toi {

namespace {

template <typename Int>
Int parse_number(std::string_view text, std::string_view what) {
  Int value{};
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("malformed " + std::string(what) + " '" +
                                std::string(text) + "'");
  }
  return value;
}

}  // namespace

ToiStrategy ToiStrategy::alleviated(std::size_t p) {
  if (p == 1) {
    throw std::invalid_argument(
        "alleviated:1 is identical to the standard split; use 'standard'");
  }
  if (p < 2) throw std::invalid_argument("alleviated P must be >= 2");
  return {ToiKind::Alleviated, p, 0};
}

std::string_view kind_name(ToiKind kind) {
  switch (kind) {
    case ToiKind::Extreme:
      return "extreme";
    case ToiKind::InterBatch:
      return "interbatch";
    case ToiKind::Standard:
      return "standard";
    case ToiKind::Alleviated:
      return "alleviated";
  }
  return "unknown";
}

ToiStrategy parse_strategy(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const bool has_arg = colon != std::string_view::npos;
  const std::string_view arg = has_arg ? text.substr(colon + 1) : "";

  if (name == "standard") {
    if (has_arg) throw std::invalid_argument("'standard' takes no argument");
    return ToiStrategy::standard();
  }
  if (name == "extreme" || name == "interbatch") {
    if (!has_arg) {
      throw std::invalid_argument("'" + std::string(name) +
                                  "' requires a seed, e.g. " +
                                  std::string(name) + ":42");
    }
    const auto seed = parse_number<std::uint64_t>(arg, "seed");
    return name == "extreme" ? ToiStrategy::extreme(seed)
                             : ToiStrategy::inter_batch(seed);
  }
  if (name == "alleviated") {
    if (!has_arg) {
      throw std::invalid_argument("'alleviated' requires P, e.g. alleviated:10");
    }
    return ToiStrategy::alleviated(parse_number<std::size_t>(arg, "P"));
  }
  throw std::invalid_argument("unknown strategy '" + std::string(text) + "'");
}

std::string to_string(const ToiStrategy& strategy) {
  std::string name(kind_name(strategy.kind));
  switch (strategy.kind) {
    case ToiKind::Extreme:
    case ToiKind::InterBatch:
      return name + ":" + std::to_string(strategy.seed);
    case ToiKind::Alleviated:
      return name + ":" + std::to_string(strategy.p);
    case ToiKind::Standard:
      break;
  }
  return name;
}

OverlapPlan strategy_plan(std::size_t n, const ToiStrategy& strategy) {
  return make_plan(n, strategy.kind == ToiKind::Alleviated ? strategy.p : 1);
}

BatchMatrix build_overlapped_batches(const TokenStream& stream,
                                     const OverlapPlan& plan, std::size_t k) {
  return build_distributed(alleviated_split(stream, plan), k);
}

BatchMatrix apply_strategy(const TokenStream& stream, std::size_t n,
                           std::size_t k, const ToiStrategy& strategy) {
  if (k == 0) throw std::invalid_argument("batch size K must be positive");
  const OverlapPlan plan = strategy_plan(n, strategy);

  switch (strategy.kind) {
    case ToiKind::Standard:
    case ToiKind::Alleviated:
      return build_overlapped_batches(stream, plan, k);

    case ToiKind::Extreme: {
      const DataPointSequence sequence = alleviated_split(stream, plan);
      const std::size_t kept = sequence.size() / k * k;
      std::vector<DataPointRef> points(sequence.points.begin(),
                                       sequence.points.begin() + kept);
      Xorshift64Star rng(strategy.seed);
      fisher_yates_shuffle(std::span<DataPointRef>(points), rng);
      points.insert(points.end(), sequence.points.begin() + kept,
                    sequence.points.end());
      return build_distributed(points, k);
    }

    case ToiKind::InterBatch: {
      const BatchMatrix standard = build_overlapped_batches(stream, plan, k);
      std::vector<std::size_t> order(standard.num_batches());
      std::iota(order.begin(), order.end(), std::size_t{0});
      Xorshift64Star rng(strategy.seed);
      fisher_yates_shuffle(std::span<std::size_t>(order), rng);
      return standard.with_row_order(order);
    }
  }
  throw std::logic_error("unhandled strategy kind");
}

}  // namespace toi
