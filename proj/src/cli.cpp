#include "toi/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "toi/analysis.hpp"
#include "toi/batching.hpp"
#include "toi/corpus.hpp"
#include "toi/discretize.hpp"
#include "toi/render.hpp"

namespace toi {

namespace fs = std::filesystem;

ToiStrategy resolve_strategy(std::string_view text,
                             std::optional<std::uint64_t> seed) {
  const bool seeded_kind = text == "extreme" || text == "interbatch";
  if (seeded_kind) {
    if (!seed) {
      throw std::invalid_argument("strategy '" + std::string(text) +
                                  "' needs an explicit --seed");
    }
    return parse_strategy(std::string(text) + ":" + std::to_string(*seed));
  }
  ToiStrategy strategy = parse_strategy(text);
  const bool randomized = strategy.kind == ToiKind::Extreme ||
                          strategy.kind == ToiKind::InterBatch;
  if (randomized && seed && *seed != strategy.seed) {
    throw std::invalid_argument("inline seed of '" + std::string(text) +
                                "' conflicts with --seed " +
                                std::to_string(*seed));
  }
  return strategy;
}

namespace {

// Removes every registered output unless commit() is reached.
class OutputGuard {
 public:
  OutputGuard() = default;
  OutputGuard(const OutputGuard&) = delete;
  OutputGuard& operator=(const OutputGuard&) = delete;
  ~OutputGuard() {
    if (committed_) return;
    std::error_code ec;
    for (auto it = paths_.rbegin(); it != paths_.rend(); ++it) {
      fs::remove_all(*it, ec);
    }
  }

  /// Registers `path` for cleanup if it does not exist yet.
  void track(const fs::path& path) {
    if (!fs::exists(path)) paths_.push_back(path);
  }
  void commit() { committed_ = true; }

 private:
  std::vector<fs::path> paths_;
  bool committed_ = false;
};

std::ofstream open_output(const fs::path& path, OutputGuard& guard) {
  guard.track(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() +
                             "' for writing");
  }
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write error on '" + path.string() + "'");
}

struct InputOptions {
  std::string tokens;
  std::string text;
  std::string mode = "whitespace";
};

void add_input(CLI::App& cmd, InputOptions& input) {
  auto* tokens = cmd.add_option("--tokens", input.tokens,
                                "Token id file (binary or one id per line)");
  auto* text = cmd.add_option("--text", input.text, "UTF-8 text corpus");
  tokens->excludes(text);
  text->excludes(tokens);
  cmd.add_option("--mode", input.mode,
                 "Text tokenization: whitespace | char")
      ->check(CLI::IsMember({"whitespace", "ws", "char", "character"}));
}

TokenStream load_input(const InputOptions& input) {
  if (!input.tokens.empty()) return ingest_ids(input.tokens);
  if (!input.text.empty()) {
    return ingest_text(input.text, parse_text_mode(input.mode));
  }
  throw std::invalid_argument("one of --tokens or --text is required");
}

struct BatchOptions {
  InputOptions input;
  std::size_t n = 0;
  std::size_t k = 0;
  std::string strategy = "standard";
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_batch_options(CLI::App& cmd, BatchOptions& opts) {
  add_input(cmd, opts.input);
  cmd.add_option("--n", opts.n, "Tokens per data point")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--k", opts.k, "Batch size")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--strategy", opts.strategy,
                 "standard | extreme[:seed] | interbatch[:seed] | "
                 "alleviated:<P>");
  cmd.add_option("--seed", opts.seed, "Seed for extreme / interbatch");
}

std::string fixed(double value, int digits = 3) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << value;
  return s.str();
}

// Table with aligned text rendering and CSV rendering of the same cells.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write_csv(std::ostream& out) const {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        out << (i ? "," : "") << cells[i];
      }
      out << '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
  }

  void write_text(std::ostream& out) const {
    std::vector<std::size_t> width(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        width[i] = std::max(width[i], row[i].size());
      }
    }
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << "  ";
        out << (i ? std::right : std::left)
            << std::setw(static_cast<int>(width[i])) << cells[i];
      }
      out << std::left << '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
  }
};

std::string bool_word(bool value) { return value ? "true" : "false"; }

// --- subcommands ----------------------------------------------------------

struct IngestOptions {
  std::string text;
  std::string ids;
  std::string mode = "whitespace";
  std::string out;
  std::string vocab;
};

int cmd_ingest(const IngestOptions& opts, std::ostream& out) {
  if (opts.text.empty() == opts.ids.empty()) {
    throw std::invalid_argument("exactly one of --text or --ids is required");
  }
  const TokenStream stream = opts.text.empty()
                                 ? ingest_ids(opts.ids)
                                 : ingest_text(opts.text,
                                               parse_text_mode(opts.mode));
  OutputGuard guard;
  const fs::path out_path = opts.out;
  auto file = open_output(out_path, guard);
  write_ids(stream, file);
  finish(file, out_path);
  if (stream.vocab) {
    const fs::path vocab_path =
        opts.vocab.empty() ? fs::path(opts.out + ".vocab") : fs::path(opts.vocab);
    guard.track(vocab_path);
    write_vocab(*stream.vocab, vocab_path);
    out << "vocab=" << stream.vocab->size() << '\n';
  }
  out << "T=" << stream.size() << '\n';
  guard.commit();
  return 0;
}

struct PlanOptions {
  std::uint64_t k = 0;
  std::vector<std::size_t> ps;
};

int cmd_plan(const PlanOptions& opts, std::ostream& out) {
  const std::uint64_t prime = suggest_prime(opts.k);
  out << "suggested_prime," << prime << '\n';
  if (opts.ps.empty()) return 0;

  std::vector<std::uint64_t> ks{opts.k};
  if (prime != opts.k) ks.push_back(prime);
  out << "k,p,gcd,coprime,period_q,repetitions\n";
  for (const std::uint64_t k : ks) {
    for (const std::size_t p : opts.ps) {
      const CoprimeCheck check = coprime_check(p, k);
      out << k << ',' << p << ',' << check.period.gcd << ','
          << bool_word(check.coprime) << ',' << check.period.period_q << ','
          << check.period.repetitions << '\n';
    }
  }
  return 0;
}

struct SplitOptions {
  InputOptions input;
  std::size_t n = 0;
  std::size_t p = 1;
  bool allow_nondivisible = false;
  std::string out;
  std::string plan_out;
};

int cmd_split(const SplitOptions& opts, std::ostream& out,
              std::ostream& err) {
  const TokenStream stream = load_input(opts.input);
  const OverlapPlan plan = make_plan(opts.n, opts.p, opts.allow_nondivisible);
  if (!plan.warning.empty()) err << "warning: " << plan.warning << '\n';
  const DataPointSequence sequence = alleviated_split(stream, plan);

  OutputGuard guard;
  const fs::path out_path = opts.out;
  auto file = open_output(out_path, guard);
  write_point_manifest(sequence, file);
  finish(file, out_path);
  if (!opts.plan_out.empty()) {
    const fs::path plan_path = opts.plan_out;
    auto plan_file = open_output(plan_path, guard);
    write_plan(plan, plan_file);
    finish(plan_file, plan_path);
  }
  out << "T=" << stream.size() << " N=" << plan.n_tokens_per_point
      << " P=" << plan.n_overlaps << " step=" << plan.step
      << " points=" << sequence.size() << " per_sequence=";
  for (std::size_t c = 0; c < sequence.per_sequence_counts.size(); ++c) {
    out << (c ? "," : "") << sequence.per_sequence_counts[c];
  }
  out << '\n';
  guard.commit();
  return 0;
}

struct BatchCmdOptions {
  BatchOptions batch;
  std::string layout = "distributed";
};

int cmd_batch(const BatchCmdOptions& opts, std::ostream& out) {
  const BatchOptions& b = opts.batch;
  const TokenStream stream = load_input(b.input);
  const ToiStrategy strategy = resolve_strategy(b.strategy, b.seed);

  BatchMatrix matrix;
  if (opts.layout == "sequential") {
    if (strategy.kind != ToiKind::Standard &&
        strategy.kind != ToiKind::Alleviated) {
      throw std::invalid_argument(
          "sequential layout applies to standard and alleviated only");
    }
    matrix = build_sequential(
        alleviated_split(stream, strategy_plan(b.n, strategy)), b.k);
  } else {
    matrix = apply_strategy(stream, b.n, b.k, strategy);
  }

  OutputGuard guard;
  const fs::path out_path = b.out;
  auto file = open_output(out_path, guard);
  write_batch_manifest(matrix, file);
  finish(file, out_path);

  const DuplicateStats dups = detect_row_duplicates(matrix, b.n);
  out << "strategy=" << to_string(strategy)
      << " layout=" << to_string(matrix.layout())
      << " K=" << matrix.batch_size() << " L=" << matrix.num_batches()
      << " dropped=" << matrix.dropped()
      << " rows_with_overlap=" << dups.rows_with_overlap
      << " max_cluster=" << dups.max_cluster
      << " overlapping_pairs=" << dups.total_overlapping_pairs << '\n';
  guard.commit();
  return 0;
}

struct AnalyzeOptions {
  InputOptions input;
  std::optional<std::size_t> t;
  std::size_t n = 0;
  std::size_t p = 1;
  bool allow_nondivisible = false;
  bool verify = false;
  std::string out;
};

int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out,
                std::ostream& err) {
  std::size_t t = 0;
  if (opts.t) {
    if (!opts.input.tokens.empty() || !opts.input.text.empty()) {
      throw std::invalid_argument("--t cannot be combined with an input file");
    }
    t = *opts.t;
  } else {
    t = load_input(opts.input).size();
  }
  const OverlapPlan plan = make_plan(opts.n, opts.p, opts.allow_nondivisible);
  if (!plan.warning.empty()) err << "warning: " << plan.warning << '\n';
  const PairCoverageReport report = pair_coverage(t, plan);

  if (opts.verify) {
    const auto oracle = brute_force_pair_coverage(alleviated_split(t, plan), t);
    if (!(oracle == report)) {
      throw std::runtime_error(
          "closed-form coverage disagrees with brute-force count");
    }
    out << "verified=true\n";
  }

  OutputGuard guard;
  if (!opts.out.empty()) {
    const fs::path out_path = opts.out;
    auto file = open_output(out_path, guard);
    write_coverage_csv(report, file);
    finish(file, out_path);
  }
  const auto [first, last] = interior_pairs(t, plan);
  out << "T=" << t << " N=" << plan.n_tokens_per_point
      << " P=" << plan.n_overlaps << " ratio=" << report.ratio
      << " num_at_p=" << report.num_at_p
      << " num_at_p_minus_1=" << report.num_at_p_minus_1
      << " num_below=" << report.num_below << " interior=[" << first << ","
      << last << ")\n";
  guard.commit();
  return 0;
}

int cmd_render(const BatchOptions& opts, std::ostream& out) {
  const TokenStream stream = load_input(opts.input);
  const ToiStrategy strategy = resolve_strategy(opts.strategy, opts.seed);
  const BatchMatrix matrix = apply_strategy(stream, opts.n, opts.k, strategy);

  OutputGuard guard;
  guard.track(opts.out);
  render_pgm(matrix, stream.size(), opts.out);
  const DiversityReport diversity = row_diversity(matrix, stream.size());
  out << "strategy=" << to_string(strategy) << " width=" << matrix.batch_size()
      << " height=" << matrix.num_batches()
      << " mean_distinct=" << fixed(diversity.mean_distinct)
      << " mean_abs_diff=" << fixed(diversity.mean_abs_diff) << '\n';
  guard.commit();
  return 0;
}

struct CompareOptions {
  InputOptions input;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t alleviated = 0;
  std::optional<std::uint64_t> seed;
  std::size_t epochs = 1000;
  std::string out;
};

int cmd_compare(const CompareOptions& opts, std::ostream& out) {
  if (opts.alleviated == 1) {
    throw std::invalid_argument(
        "--alleviated 1 is the standard split; it is already included as "
        "'standard', choose P >= 2");
  }
  if (!opts.seed) {
    throw std::invalid_argument("compare needs an explicit --seed");
  }
  const TokenStream stream = load_input(opts.input);
  const std::size_t t = stream.size();
  const std::vector<ToiStrategy> strategies{
      ToiStrategy::extreme(*opts.seed), ToiStrategy::inter_batch(*opts.seed),
      ToiStrategy::standard(), ToiStrategy::alleviated(opts.alleviated)};

  OutputGuard guard;
  const fs::path dir = opts.out;
  guard.track(dir);
  fs::create_directories(dir);

  Table table;
  table.header = {"strategy",  "points",     "batches",      "dropped",
                  "p",         "step",       "ratio",        "gcd",
                  "period_q",  "repetitions", "rows_with_overlap",
                  "max_cluster", "overlapping_pairs", "mean_distinct",
                  "epochs",    "epoch_remainder"};

  for (const ToiStrategy& strategy : strategies) {
    const std::string name(kind_name(strategy.kind));
    const OverlapPlan plan = strategy_plan(opts.n, strategy);
    const BatchMatrix matrix = apply_strategy(stream, opts.n, opts.k, strategy);
    const PairCoverageReport coverage = pair_coverage(t, plan);
    const PeriodReport period = period_analysis(plan.n_overlaps, opts.k);
    const DuplicateStats dups = detect_row_duplicates(matrix, opts.n);
    const EpochBudget budget = epoch_budget(opts.epochs, plan.n_overlaps);

    {
      const fs::path path = dir / (name + ".manifest");
      auto file = open_output(path, guard);
      write_batch_manifest(matrix, file);
      finish(file, path);
    }
    {
      const fs::path path = dir / (name + ".coverage.csv");
      auto file = open_output(path, guard);
      write_coverage_csv(coverage, file);
      finish(file, path);
    }
    std::string mean_distinct = "n/a";
    if (!matrix.empty()) {
      const fs::path path = dir / (name + ".pgm");
      guard.track(path);
      render_pgm(matrix, t, path);
      mean_distinct = fixed(row_diversity(matrix, t).mean_distinct);
    }

    std::ostringstream ratio;
    ratio << coverage.ratio;
    table.rows.push_back({to_string(strategy),
                          std::to_string(count_points(t, plan)),
                          std::to_string(matrix.num_batches()),
                          std::to_string(matrix.dropped()),
                          std::to_string(plan.n_overlaps),
                          std::to_string(plan.step),
                          ratio.str(),
                          std::to_string(period.gcd),
                          std::to_string(period.period_q),
                          std::to_string(period.repetitions),
                          std::to_string(dups.rows_with_overlap),
                          std::to_string(dups.max_cluster),
                          std::to_string(dups.total_overlapping_pairs),
                          mean_distinct,
                          std::to_string(budget.alleviated_epochs),
                          std::to_string(budget.remainder)});
  }

  {
    const fs::path path = dir / "summary.csv";
    auto file = open_output(path, guard);
    table.write_csv(file);
    finish(file, path);
  }
  std::ostringstream text;
  text << "T=" << t << " N=" << opts.n << " K=" << opts.k << " seed="
       << *opts.seed << "\n";
  table.write_text(text);
  {
    const fs::path path = dir / "summary.txt";
    auto file = open_output(path, guard);
    file << text.str();
    finish(file, path);
  }
  out << text.str();
  guard.commit();
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Token order imbalance toolkit: overlapped data points, "
               "batch matrices and coverage analysis",
               "toi"};
  app.require_subcommand(1);

  IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Tokenize a corpus");
  ingest_cmd->add_option("--text", ingest.text, "UTF-8 text corpus");
  ingest_cmd->add_option("--ids", ingest.ids, "Token id file");
  ingest_cmd->add_option("--mode", ingest.mode, "whitespace | char")
      ->check(CLI::IsMember({"whitespace", "ws", "char", "character"}));
  ingest_cmd->add_option("--out", ingest.out, "Binary token file")
      ->required();
  ingest_cmd->add_option("--vocab", ingest.vocab,
                         "Vocabulary sidecar (default <out>.vocab)");

  PlanOptions plan;
  auto* plan_cmd =
      app.add_subcommand("plan", "Suggest a prime batch size and check P");
  plan_cmd->add_option("--k", plan.k, "Batch size")->required();
  plan_cmd->add_option("--p", plan.ps, "Comma-separated overlap counts")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);

  SplitOptions split;
  auto* split_cmd =
      app.add_subcommand("split", "Write the overlapped data-point manifest");
  add_input(*split_cmd, split.input);
  split_cmd->add_option("--n", split.n, "Tokens per data point")
      ->required()
      ->check(CLI::PositiveNumber);
  split_cmd->add_option("--p", split.p, "Number of overlapped sequences")
      ->check(CLI::PositiveNumber);
  split_cmd->add_flag("--allow-nondivisible", split.allow_nondivisible);
  split_cmd->add_option("--out", split.out, "Point manifest")->required();
  split_cmd->add_option("--plan-out", split.plan_out, "Plan document");

  BatchCmdOptions batch;
  auto* batch_cmd = app.add_subcommand("batch", "Write a batch manifest");
  add_batch_options(*batch_cmd, batch.batch);
  batch_cmd->add_option("--layout", batch.layout, "distributed | sequential")
      ->check(CLI::IsMember({"distributed", "sequential"}));
  batch_cmd->add_option("--out", batch.batch.out, "Batch manifest")
      ->required();

  AnalyzeOptions analyze;
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Token pair coverage report");
  add_input(*analyze_cmd, analyze.input);
  analyze_cmd->add_option("--t", analyze.t, "Stream length without a file");
  analyze_cmd->add_option("--n", analyze.n, "Tokens per data point")
      ->required()
      ->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--p", analyze.p, "Number of overlapped sequences")
      ->check(CLI::PositiveNumber);
  analyze_cmd->add_flag("--allow-nondivisible", analyze.allow_nondivisible);
  analyze_cmd->add_flag("--verify", analyze.verify,
                        "Cross-check against the brute-force count");
  analyze_cmd->add_option("--out", analyze.out, "Coverage CSV");

  BatchOptions render;
  auto* render_cmd =
      app.add_subcommand("render", "Render the batch matrix as a PGM");
  add_batch_options(*render_cmd, render);
  render_cmd->add_option("--out", render.out, "PGM file")->required();

  CompareOptions compare;
  auto* compare_cmd =
      app.add_subcommand("compare", "Run all four batching regimes");
  add_input(*compare_cmd, compare.input);
  compare_cmd->add_option("--n", compare.n, "Tokens per data point")
      ->required()
      ->check(CLI::PositiveNumber);
  compare_cmd->add_option("--k", compare.k, "Batch size")
      ->required()
      ->check(CLI::PositiveNumber);
  compare_cmd->add_option("--alleviated", compare.alleviated,
                          "Overlap count P for the alleviated regime")
      ->required();
  compare_cmd->add_option("--seed", compare.seed,
                          "Seed for extreme / interbatch")
      ->required();
  compare_cmd->add_option("--epochs", compare.epochs,
                          "Baseline epoch count for the budget column")
      ->check(CLI::PositiveNumber);
  compare_cmd->add_option("--out", compare.out, "Output directory")
      ->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*ingest_cmd) return cmd_ingest(ingest, out);
    if (*plan_cmd) return cmd_plan(plan, out);
    if (*split_cmd) return cmd_split(split, out, err);
    if (*batch_cmd) return cmd_batch(batch, out);
    if (*analyze_cmd) return cmd_analyze(analyze, out, err);
    if (*render_cmd) return cmd_render(render, out);
    if (*compare_cmd) return cmd_compare(compare, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace toi
