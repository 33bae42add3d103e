#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "toi/batching.hpp"
#include "toi/discretize.hpp"

namespace toi {

/// Exact non-negative rational kept in lowest terms.
class Ratio {
 public:
  constexpr Ratio() = default;
  Ratio(std::uint64_t num, std::uint64_t den);

  std::uint64_t num() const { return num_; }
  std::uint64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / den_; }

  bool operator==(const Ratio&) const = default;
  std::strong_ordering operator<=>(const Ratio& other) const;

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& out, const Ratio& ratio);

/// (P - 1) / P: inclusions of a split token pair relative to an unsplit one.
Ratio toi_ratio(std::size_t p);

/// counts[i] is the number of data points holding both token i and i + 1.
struct PairCoverageReport {
  std::size_t t = 0;
  OverlapPlan plan;
  std::vector<std::uint32_t> counts;
  std::size_t num_at_p = 0;
  std::size_t num_at_p_minus_1 = 0;
  std::size_t num_below = 0;
  Ratio ratio;

  bool operator==(const PairCoverageReport&) const = default;
};

/// Closed form: pair i is held by sequence c iff i >= offsets[c],
/// (i - offsets[c]) % N != N - 1, and the enclosing data point was kept.
PairCoverageReport pair_coverage(std::size_t t, const OverlapPlan& plan);

/// Counts pairs by walking every data point.
PairCoverageReport brute_force_pair_coverage(const DataPointSequence& points,
                                             std::size_t t);

/// Half-open range [first, last) of pair positions where every offset
/// sequence has started and none has reached its dropped tail. Interior
/// counts are always P or P - 1. Empty (first == last) for short streams.
std::pair<std::size_t, std::size_t> interior_pairs(std::size_t t,
                                                   const OverlapPlan& plan);

bool is_prime(std::uint64_t value);

/// Largest prime <= K. Throws for K < 2.
std::uint64_t suggest_prime(std::uint64_t k);

struct CoprimeCheck {
  bool coprime = false;
  PeriodReport period;
};

CoprimeCheck coprime_check(std::size_t p, std::size_t k);

/// A baseline run of E epochs matches floor(E / P) epochs over the P-fold
/// augmented dataset; `remainder` is E mod P.
struct EpochBudget {
  std::size_t alleviated_epochs = 0;
  std::size_t remainder = 0;
};

EpochBudget epoch_budget(std::size_t baseline_epochs, std::size_t p);

/// `position,count` rows, a blank line, then the summary block
/// `p,ratio_num,ratio_den,num_at_p,num_at_p_minus_1,num_below`.
void write_coverage_csv(const PairCoverageReport& report, std::ostream& out);

}  // namespace toi
