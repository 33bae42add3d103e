#include "toi/analysis.hpp"

#include <numeric>
#include <ostream>
#include <stdexcept>

namespace toi {

namespace {
__extension__ using Wide = unsigned __int128;
}  // namespace

Ratio::Ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw std::invalid_argument("ratio denominator is zero");
  const std::uint64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::strong_ordering Ratio::operator<=>(const Ratio& other) const {
  const auto lhs = static_cast<Wide>(num_) * other.den_;
  const auto rhs = static_cast<Wide>(other.num_) * den_;
  return lhs <=> rhs;
}

std::ostream& operator<<(std::ostream& out, const Ratio& ratio) {
  return out << ratio.num() << '/' << ratio.den();
}

Ratio toi_ratio(std::size_t p) {
  if (p == 0) throw std::invalid_argument("P must be positive");
  return Ratio(p - 1, p);
}

namespace {

void summarize(PairCoverageReport& report) {
  const std::size_t p = report.plan.n_overlaps;
  report.num_at_p = report.num_at_p_minus_1 = report.num_below = 0;
  for (const std::uint32_t count : report.counts) {
    if (count == p) {
      ++report.num_at_p;
    } else if (count + 1 == p) {
      ++report.num_at_p_minus_1;
    } else {
      ++report.num_below;
    }
  }
  report.ratio = toi_ratio(p);
}

PairCoverageReport empty_report(std::size_t t, const OverlapPlan& plan) {
  PairCoverageReport report;
  report.t = t;
  report.plan = plan;
  report.counts.assign(t > 0 ? t - 1 : 0, 0);
  return report;
}

}  // namespace

PairCoverageReport pair_coverage(std::size_t t, const OverlapPlan& plan) {
  const std::size_t n = plan.n_tokens_per_point;
  if (n > t) {
    throw std::invalid_argument("N (" + std::to_string(n) +
                                ") exceeds stream length " +
                                std::to_string(t));
  }
  PairCoverageReport report = empty_report(t, plan);
  for (const std::size_t offset : plan.offsets) {
    if (offset >= t) continue;
    const std::size_t covered_end = offset + (t - offset) / n * n;
    for (std::size_t i = offset; i < covered_end; ++i) {
      if ((i - offset) % n != n - 1) ++report.counts[i];
    }
  }
  summarize(report);
  return report;
}

PairCoverageReport brute_force_pair_coverage(const DataPointSequence& points,
                                             std::size_t t) {
  PairCoverageReport report = empty_report(t, points.plan);
  for (const auto& point : points.points) {
    if (point.end() > t) {
      throw std::invalid_argument("data point extends past stream end");
    }
    for (std::size_t i = point.start; i + 1 < point.end(); ++i) {
      ++report.counts[i];
    }
  }
  summarize(report);
  return report;
}

std::pair<std::size_t, std::size_t> interior_pairs(std::size_t t,
                                                   const OverlapPlan& plan) {
  const std::size_t first = plan.offsets.back();
  const std::size_t n = plan.n_tokens_per_point;
  const std::size_t last = t + 1 > n ? t + 1 - n : 0;
  if (last <= first) return {first, first};
  return {first, last};
}

bool is_prime(std::uint64_t value) {
  if (value < 2) return false;
  if (value % 2 == 0) return value == 2;
  if (value % 3 == 0) return value == 3;
  for (std::uint64_t d = 5; d <= value / d; d += 6) {
    if (value % d == 0 || value % (d + 2) == 0) return false;
  }
  return true;
}

std::uint64_t suggest_prime(std::uint64_t k) {
  if (k < 2) throw std::invalid_argument("K must be at least 2");
  while (!is_prime(k)) --k;
  return k;
}

CoprimeCheck coprime_check(std::size_t p, std::size_t k) {
  const PeriodReport period = period_analysis(p, k);
  return {period.gcd == 1, period};
}

EpochBudget epoch_budget(std::size_t baseline_epochs, std::size_t p) {
  if (p == 0) throw std::invalid_argument("P must be positive");
  if (baseline_epochs == 0) {
    throw std::invalid_argument("baseline epochs must be positive");
  }
  return {baseline_epochs / p, baseline_epochs % p};
}

void write_coverage_csv(const PairCoverageReport& report, std::ostream& out) {
  out << "position,count\n";
  for (std::size_t i = 0; i < report.counts.size(); ++i) {
    out << i << ',' << report.counts[i] << '\n';
  }
  out << '\n'
      << "p,ratio_num,ratio_den,num_at_p,num_at_p_minus_1,num_below\n"
      << report.plan.n_overlaps << ',' << report.ratio.num() << ','
      << report.ratio.den() << ',' << report.num_at_p << ','
      << report.num_at_p_minus_1 << ',' << report.num_below << '\n';
}

}  // namespace toi
