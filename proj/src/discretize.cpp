#include "toi/discretize.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace toi {

OverlapPlan make_plan(std::size_t n, std::size_t p, bool allow_nondivisible) {
  if (n == 0) throw std::invalid_argument("N must be positive");
  if (p == 0) throw std::invalid_argument("P must be positive");
  if (p > n) {
    throw std::invalid_argument("P (" + std::to_string(p) +
                                ") exceeds N (" + std::to_string(n) + ")");
  }
  OverlapPlan plan;
  plan.n_tokens_per_point = n;
  plan.n_overlaps = p;
  plan.step = n / p;
  plan.strict = n % p == 0;
  if (!plan.strict) {
    if (!allow_nondivisible) {
      throw std::invalid_argument("N (" + std::to_string(n) +
                                  ") is not divisible by P (" +
                                  std::to_string(p) + ")");
    }
    plan.warning = "N=" + std::to_string(n) + " not divisible by P=" +
                   std::to_string(p) + "; step floored to " +
                   std::to_string(plan.step);
  }
  plan.offsets.resize(p);
  for (std::size_t c = 0; c < p; ++c) plan.offsets[c] = c * plan.step;
  return plan;
}

std::vector<DataPointRef> split_with_offset(std::size_t t, std::size_t n,
                                            std::size_t offset,
                                            std::uint32_t seq_id) {
  std::vector<DataPointRef> refs;
  if (n == 0 || offset >= t) return refs;
  const std::size_t count = (t - offset) / n;
  refs.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    refs.push_back({seq_id, r, offset + r * n, n});
  }
  return refs;
}

DataPointSequence alleviated_split(std::size_t t, const OverlapPlan& plan) {
  const std::size_t n = plan.n_tokens_per_point;
  if (n > t) {
    throw std::invalid_argument("N (" + std::to_string(n) +
                                ") exceeds stream length " +
                                std::to_string(t));
  }
  DataPointSequence sequence;
  sequence.plan = plan;
  sequence.stream_length = t;
  sequence.points.reserve(count_points(t, plan));
  for (std::size_t c = 0; c < plan.offsets.size(); ++c) {
    auto part = split_with_offset(t, n, plan.offsets[c],
                                  static_cast<std::uint32_t>(c));
    sequence.per_sequence_counts.push_back(part.size());
    sequence.points.insert(sequence.points.end(), part.begin(), part.end());
  }
  return sequence;
}

std::size_t count_points(std::size_t t, const OverlapPlan& plan) {
  std::size_t total = 0;
  for (const std::size_t offset : plan.offsets) {
    if (offset < t) total += (t - offset) / plan.n_tokens_per_point;
  }
  return total;
}

void write_plan(const OverlapPlan& plan, std::ostream& out) {
  out << "n=" << plan.n_tokens_per_point << '\n'
      << "p=" << plan.n_overlaps << '\n'
      << "step=" << plan.step << '\n'
      << "offsets=";
  for (std::size_t c = 0; c < plan.offsets.size(); ++c) {
    out << (c ? "," : "") << plan.offsets[c];
  }
  out << '\n' << "strict=" << (plan.strict ? 1 : 0) << '\n';
}

namespace {

std::size_t parse_size(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-') {
    throw std::invalid_argument("malformed " + what + " '" + text + "'");
  }
  return static_cast<std::size_t>(value);
}

}  // namespace

OverlapPlan read_plan(std::istream& in) {
  std::map<std::string, std::string> values;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("plan line without '=': " + line);
    }
    values[line.substr(0, eq)] = line.substr(eq + 1);
  }
  for (const char* key : {"n", "p", "step", "offsets", "strict"}) {
    if (!values.contains(key)) {
      throw std::invalid_argument(std::string("plan is missing key '") + key +
                                  "'");
    }
  }
  const bool strict = parse_size(values["strict"], "strict") != 0;
  OverlapPlan plan = make_plan(parse_size(values["n"], "n"),
                               parse_size(values["p"], "p"), !strict);
  std::vector<std::size_t> offsets;
  std::istringstream list(values["offsets"]);
  std::string item;
  while (std::getline(list, item, ',')) {
    offsets.push_back(parse_size(item, "offset"));
  }
  if (parse_size(values["step"], "step") != plan.step ||
      offsets != plan.offsets || strict != plan.strict) {
    throw std::invalid_argument("plan fields are inconsistent with n and p");
  }
  return plan;
}

void write_point_manifest(const DataPointSequence& sequence,
                          std::ostream& out) {
  out << "TOIDP01 " << sequence.plan.n_tokens_per_point << ' '
      << sequence.plan.n_overlaps << ' ' << sequence.stream_length << ' '
      << sequence.points.size() << '\n';
  for (const auto& point : sequence.points) {
    out << point.seq_id << ' ' << point.rank << ' ' << point.start << '\n';
  }
}

DataPointSequence read_point_manifest(std::istream& in) {
  std::string magic;
  std::size_t n = 0, p = 0, t = 0, count = 0;
  if (!(in >> magic >> n >> p >> t >> count) || magic != "TOIDP01") {
    throw std::invalid_argument("bad point manifest header");
  }
  DataPointSequence sequence;
  sequence.plan = make_plan(n, p, true);
  sequence.stream_length = t;
  sequence.per_sequence_counts.assign(p, 0);
  sequence.points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    DataPointRef ref;
    if (!(in >> ref.seq_id >> ref.rank >> ref.start)) {
      throw std::invalid_argument("point manifest truncated at record " +
                                  std::to_string(i));
    }
    if (ref.seq_id >= p) {
      throw std::invalid_argument("point manifest seq_id out of range");
    }
    ref.length = n;
    ++sequence.per_sequence_counts[ref.seq_id];
    sequence.points.push_back(ref);
  }
  return sequence;
}

}  // namespace toi
