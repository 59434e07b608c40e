//
// Copyright 2026 The mrqa-prep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "mrqa/augmenter.h"
#include "mrqa/cli.h"
#include "mrqa/evaluator.h"
#include "mrqa/format.h"
#include "mrqa/kernels.h"
#include "mrqa/parallel.h"
#include "mrqa/sampler.h"
#include "mrqa/segmenter.h"
#include "mrqa/span_select.h"

namespace mrqa::cli {
namespace {

namespace fs = std::filesystem;

class Progress {
 public:
  Progress(std::ostream& err, std::string stage)
      : err_(err), stage_(std::move(stage)), start_(std::chrono::steady_clock::now()) {}

  void done(std::size_t items) const {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    err_ << "progress stage=" << stage_ << " items=" << items << " seconds=" << std::fixed
         << std::setprecision(3) << secs << " rate=" << std::setprecision(1)
         << (secs > 0 ? static_cast<double>(items) / secs : 0.0) << "/s\n"
         << std::defaultfloat;
  }

 private:
  std::ostream& err_;
  std::string stage_;
  std::chrono::steady_clock::time_point start_;
};

struct InputOptions {
  std::string dataset;
  std::string offsets = "byte";

  ReadOptions read_options() const {
    ReadOptions r;
    if (!dataset.empty()) r.dataset_override = dataset;
    if (offsets == "codepoint") r.offsets = OffsetUnit::kCodepoint;
    return r;
  }
};

void add_input_options(CLI::App* sub, InputOptions& opts, bool with_dataset) {
  if (with_dataset) {
    sub->add_option("--dataset", opts.dataset, "Override the dataset name from the file header");
  }
  sub->add_option("--offsets", opts.offsets, "Unit of token and answer offsets in the input")
      ->check(CLI::IsMember({"byte", "codepoint"}))
      ->capture_default_str();
}

struct SegmentFlags {
  std::int64_t max_seq_len = 512;
  std::int64_t doc_stride = 128;
  std::string window_mode = "model-budget";
  bool include_negatives = true;
  std::string answers = "one";

  SegmentOptions options() const {
    SegmentOptions o;
    o.max_seq_len = max_seq_len;
    o.doc_stride = doc_stride;
    o.mode = window_mode == "literal" ? WindowMode::kLiteral : WindowMode::kModelBudget;
    o.include_negatives = include_negatives;
    o.answers = answers == "all" ? AnswersPerExample::kAll : AnswersPerExample::kOne;
    return o;
  }

  void check() const {
    if (doc_stride > max_seq_len) {
      throw UsageError("--doc-stride (" + std::to_string(doc_stride) +
                       ") exceeds --max-seq-length (" + std::to_string(max_seq_len) + ")");
    }
  }
};

void add_window_options(CLI::App* sub, SegmentFlags& f) {
  sub->add_option("--max-seq-length", f.max_seq_len, "Maximum packed sequence length M")
      ->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 30))
      ->capture_default_str();
  sub->add_option("--doc-stride", f.doc_stride, "Document stride D between window starts")
      ->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 30))
      ->capture_default_str();
  sub->add_option("--window-mode", f.window_mode,
                  "model-budget: window = M - question - 3; literal: window = M")
      ->check(CLI::IsMember({"model-budget", "literal"}))
      ->capture_default_str();
}

// ---------------------------------------------------------------- validate

int cmd_validate(const std::vector<std::string>& paths, const InputOptions& in, std::size_t max_report,
                 std::ostream& out, std::ostream& err) {
  Progress progress(err, "validate");
  std::size_t examples = 0, bad_examples = 0, reported = 0;
  bool failed = false;
  for (const std::string& path : paths) {
    try {
      DatasetReader reader(path, in.read_options());
      while (auto e = reader.next()) {
        ++examples;
        const auto violations = validate_example(*e);
        if (violations.empty()) continue;
        ++bad_examples;
        for (const std::string& v : violations) {
          if (reported++ < max_report) out << path << ": " << e->example_uid << ": " << v << "\n";
        }
      }
    } catch (const FormatError& e) {
      out << e.what() << "\n";
      failed = true;
    }
  }
  if (reported > max_report) out << "... " << (reported - max_report) << " more violations\n";
  out << "validated " << examples << " examples, " << bad_examples << " with violations\n";
  progress.done(examples);
  return failed || bad_examples > 0 ? kExitFailure : kExitOk;
}

// ------------------------------------------------------------------- stats

nlohmann::ordered_json stats_json(const DatasetStats& s) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["dataset"] = s.dataset;
  j["n_examples"] = s.n_examples;
  j["n_segments"] = s.n_segments;
  j["na_segments"] = s.na_segments;
  j["na_fraction"] = s.na_fraction;
  return j;
}

int cmd_stats(const std::vector<std::string>& paths, const InputOptions& in, const SegmentFlags& flags,
              const std::string& records_path, std::ostream& out, std::ostream& err) {
  flags.check();
  Progress progress(err, "stats");
  const SegmentOptions opts = flags.options();
  std::vector<DatasetStats> all;
  DatasetStats total;
  total.dataset = "Total";
  for (const std::string& path : paths) {
    DatasetReader reader(path, in.read_options());
    DatasetStats s;
    s.dataset = reader.dataset();
    while (auto e = reader.next()) accumulate_stats(s, *e, opts);
    finalize_stats(s);
    total.n_examples += s.n_examples;
    total.n_segments += s.n_segments;
    total.na_segments += s.na_segments;
    all.push_back(s);
  }
  finalize_stats(total);

  std::size_t width = 7;
  for (const auto& s : all) width = std::max(width, s.dataset.size());
  auto row = [&](const DatasetStats& s) {
    out << std::left << std::setw(static_cast<int>(width)) << s.dataset << std::right << "  "
        << std::setw(10) << s.n_examples << "  " << std::setw(10) << s.n_segments << "  "
        << std::setw(7) << std::fixed << std::setprecision(1) << 100.0 * s.na_fraction
        << std::defaultfloat << "\n";
  };
  out << std::left << std::setw(static_cast<int>(width)) << "Dataset" << std::right << "  "
      << std::setw(10) << "Examples" << "  " << std::setw(10) << "Segments" << "  " << std::setw(7)
      << "NA (%)" << "\n";
  for (const auto& s : all) row(s);
  if (all.size() > 1) row(total);

  std::ostringstream records;
  for (const auto& s : all) records << stats_json(s).dump() << "\n";
  if (records_path.empty()) {
    out << records.str();
  } else {
    write_text_file(records_path, records.str());
  }
  progress.done(static_cast<std::size_t>(total.n_examples));
  return kExitOk;
}

// ----------------------------------------------------------------- segment

int cmd_segment(const std::string& in_path, const std::string& out_path, const InputOptions& in,
                const SegmentFlags& flags, int jobs, std::ostream& err) {
  flags.check();
  Progress progress(err, "segment");
  const SegmentOptions opts = flags.options();
  DatasetReader reader(in_path, in.read_options());
  LineWriter writer(out_path);

  constexpr std::size_t kBatch = 1024;
  std::vector<Example> batch;
  std::vector<std::string> lines;
  std::size_t examples = 0, segments = 0;
  auto flush = [&] {
    lines.assign(batch.size(), std::string());
    std::vector<std::size_t> counts(batch.size());
    parallel_for(batch.size(), jobs, [&](std::size_t i) {
      std::string buf;
      const auto segs = segment_example(batch[i], opts);
      counts[i] = segs.size();
      for (const Segment& s : segs) {
        buf += segment_to_json(s).dump();
        buf.push_back('\n');
      }
      if (!buf.empty()) buf.pop_back();
      lines[i] = std::move(buf);
    });
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (counts[i] > 0) writer.write(lines[i]);
      segments += counts[i];
    }
    examples += batch.size();
    batch.clear();
  };
  while (auto e = reader.next()) {
    batch.push_back(std::move(*e));
    if (batch.size() == kBatch) flush();
  }
  flush();
  writer.close();
  err << "segment examples=" << examples << " segments=" << segments << "\n";
  progress.done(examples);
  return kExitOk;
}

// ------------------------------------------------------------------ sample

int cmd_sample(const std::vector<std::string>& paths, const std::string& out_dir,
               std::int64_t default_cap, const std::vector<std::string>& caps, std::uint64_t seed,
               const InputOptions& in, std::ostream& err) {
  Progress progress(err, "sample");
  CapConfig cfg;
  cfg.default_cap = default_cap;
  cfg.seed = seed;
  for (const std::string& c : caps) {
    const auto eq = c.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--cap expects NAME=COUNT, got '" + c + "'");
    try {
      std::size_t used = 0;
      const long long v = std::stoll(c.substr(eq + 1), &used);
      if (used != c.size() - eq - 1 || v < 0) throw std::invalid_argument("");
      cfg.per_dataset_caps[c.substr(0, eq)] = v;
    } catch (const std::exception&) {
      throw UsageError("--cap expects NAME=COUNT, got '" + c + "'");
    }
  }
  std::set<std::string> names;
  for (const std::string& p : paths) {
    if (!names.insert(fs::path(p).filename().string()).second) {
      throw UsageError("two inputs share the file name '" + fs::path(p).filename().string() + "'");
    }
  }

  CapSelector selector(cfg);
  for (const std::string& p : paths) {
    DatasetReader reader(p, in.read_options());
    while (auto e = reader.next()) selector.add(e->dataset, e->example_uid);
  }
  selector.finalize();

  fs::create_directories(out_dir);
  std::size_t total_in = 0, total_out = 0;
  for (const std::string& p : paths) {
    DatasetReader reader(p, in.read_options());
    const fs::path target = fs::path(out_dir) / fs::path(p).filename();
    DatasetWriter writer(target.string(), reader.header());
    std::size_t n_in = 0;
    while (auto e = reader.next()) {
      ++n_in;
      if (selector.keep(e->dataset, e->example_uid)) writer.write(*e);
    }
    const std::size_t n_out = writer.close();
    err << "sample dataset=" << reader.dataset() << " cap=" << cfg.cap_for(reader.dataset())
        << " in=" << n_in << " kept=" << n_out << "\n";
    total_in += n_in;
    total_out += n_out;
  }
  progress.done(total_in);
  return kExitOk;
}

// ----------------------------------------------------------------- augment

struct AugmentFlags {
  std::string paraphrases;
  std::string sentences;
  std::string difficulty;
  double pq = 0.2;
  double pc = 0.4;
  std::string mode = "random";
  double epsilon = 0.01;
  double threshold = kDefaultJaccardThreshold;
  std::int64_t slack = kDefaultSpanSlack;
  std::uint64_t seed = 0;
};

int cmd_augment(const std::string& in_path, const std::string& out_path, const InputOptions& in,
                const AugmentFlags& f, std::ostream& err) {
  Progress progress(err, "augment");
  DatasetReader reader(in_path, in.read_options());
  const DatasetHeader header = reader.header();
  std::vector<Example> data;
  while (auto e = reader.next()) data.push_back(std::move(*e));

  ParaphraseIndex paraphrases;
  if (!f.paraphrases.empty()) paraphrases = read_paraphrases(f.paraphrases);
  std::optional<SentenceIndex> sentences;
  if (!f.sentences.empty()) sentences = read_sentences(f.sentences);
  std::optional<DifficultyTable> difficulty;
  if (!f.difficulty.empty()) difficulty = read_difficulty(f.difficulty);

  AugmentConfig cfg;
  cfg.p_query = f.pq;
  cfg.p_context = f.pc;
  cfg.mode.kind = parse_score_kind(f.mode);
  cfg.mode.epsilon = f.epsilon;
  cfg.jaccard_threshold = f.threshold;
  cfg.max_span_slack = f.slack;
  cfg.seed = f.seed;
  if (cfg.mode.kind != ScoreKind::kRandom && !difficulty) {
    err << "warning: --mode " << f.mode << " without --difficulty; every example counts as f1=0\n";
  }

  const AugmentResult r = merge_augmentations(data, paraphrases, sentences ? &*sentences : nullptr,
                                              difficulty ? &*difficulty : nullptr, cfg);
  write_dataset(r.examples, out_path, header);
  const AugmentStats& s = r.stats;
  err << "augment originals=" << s.originals << " augmented=" << s.augmented
      << " query_applied=" << s.query_applied << " context_applied=" << s.context_applied
      << " context_without_answer=" << s.context_without_answer
      << " query_unavailable=" << s.query_chosen_unavailable
      << " context_unavailable=" << s.context_chosen_unavailable
      << " kept_original_paraphrases=" << paraphrases.kept_original << "\n";
  if (s.unknown_targets > 0) {
    err << "warning: " << s.unknown_targets << " paraphrase records reference unknown examples\n";
  }
  progress.done(s.originals);
  return kExitOk;
}

// ------------------------------------------------------------------ select

struct SelectFlags {
  std::vector<std::string> segments;
  std::vector<std::string> logits;
  std::string out;
  std::string nbest;
  SelectOptions options;
  std::string isa = "auto";
};

int cmd_select(const SelectFlags& f, int jobs, std::ostream& err) {
  Progress progress(err, "select");
  if (f.isa != "auto") kernels::force_isa(kernels::parse_isa(f.isa));
  std::vector<Segment> segments;
  for (const auto& p : f.segments) {
    auto s = read_segments(p);
    segments.insert(segments.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
  }
  std::vector<LogitsRecord> logits;
  for (const auto& p : f.logits) {
    auto l = read_logits(p);
    logits.insert(logits.end(), std::make_move_iterator(l.begin()), std::make_move_iterator(l.end()));
  }
  const auto predictions = select_predictions(segments, logits, f.options, jobs);
  write_text_file(f.out, predictions_to_json(predictions).dump(1) + "\n");
  if (!f.nbest.empty()) write_text_file(f.nbest, nbest_to_json(predictions).dump(1) + "\n");
  if (f.isa != "auto") kernels::reset_isa();
  err << "select segments=" << segments.size() << " scored=" << logits.size()
      << " predictions=" << predictions.size() << " isa=" << kernels::isa_name(kernels::active().isa)
      << "\n";
  progress.done(logits.size());
  return kExitOk;
}

// -------------------------------------------------------------------- eval

int cmd_eval(const std::string& predictions_path, const std::vector<std::string>& gold_paths,
             const std::string& report_path, const std::string& difficulty_path,
             const InputOptions& in, std::ostream& out, std::ostream& err) {
  Progress progress(err, "eval");
  const Predictions predictions = read_predictions(predictions_path);
  std::vector<Example> gold;
  for (const auto& p : gold_paths) {
    DatasetReader reader(p, in.read_options());
    while (auto e = reader.next()) gold.push_back(std::move(*e));
  }
  const EvalReport report = evaluate(predictions, gold);
  out << format_report_table(report);
  if (report.missing_predictions > 0) {
    err << "warning: " << report.missing_predictions << " questions have no prediction (scored 0)\n";
  }
  if (report.unknown_predictions > 0) {
    err << "warning: " << report.unknown_predictions << " predictions for unknown qids ignored\n";
  }
  if (!report_path.empty()) write_text_file(report_path, report_to_json(report).dump(1) + "\n");
  if (!difficulty_path.empty()) export_difficulty(report, difficulty_path);
  progress.done(gold.size());
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Preprocessing, sampling, augmentation and scoring for multi-domain extractive QA",
               "mrqa-prep");
  app.require_subcommand(1);
  app.fallthrough(false);
  std::function<int()> action;

  // validate
  std::vector<std::string> v_paths;
  InputOptions v_in;
  std::size_t v_max = 20;
  auto* validate = app.add_subcommand("validate", "Check every example against the data invariants");
  validate->add_option("path", v_paths, "MRQA JSONL(.gz) files")->required();
  add_input_options(validate, v_in, true);
  validate->add_option("--max-report", v_max, "Violations to print")->capture_default_str();
  validate->callback([&] { action = [&] { return cmd_validate(v_paths, v_in, v_max, out, err); }; });

  // stats
  std::vector<std::string> st_paths;
  InputOptions st_in;
  SegmentFlags st_flags;
  std::string st_records;
  auto* stats = app.add_subcommand("stats", "Count examples, segments and no-answer segments");
  stats->add_option("path", st_paths, "MRQA JSONL(.gz) files")->required();
  add_input_options(stats, st_in, true);
  add_window_options(stats, st_flags);
  stats->add_option("--records", st_records, "Write JSONL records here instead of stdout");
  stats->callback([&] {
    action = [&] { return cmd_stats(st_paths, st_in, st_flags, st_records, out, err); };
  });

  // segment
  std::string sg_in, sg_out;
  InputOptions sg_in_opts;
  SegmentFlags sg_flags;
  int sg_jobs = 1;
  auto* segment = app.add_subcommand("segment", "Cut examples into labeled overlapping segments");
  segment->add_option("in", sg_in, "MRQA JSONL(.gz) input")->required();
  segment->add_option("out", sg_out, "Segments JSONL output (.gz to compress)")->required();
  add_input_options(segment, sg_in_opts, true);
  add_window_options(segment, sg_flags);
  segment->add_flag("--include-negatives,!--no-include-negatives", sg_flags.include_negatives,
                    "Keep no-answer segments labeled at the abstain position (default: true)");
  segment->add_option("--answers-per-example", sg_flags.answers,
                      "one: keep only the earliest detected answer; all: every occurrence")
      ->check(CLI::IsMember({"one", "all"}))
      ->capture_default_str();
  segment->add_option("--jobs", sg_jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  segment->callback([&] {
    action = [&] { return cmd_segment(sg_in, sg_out, sg_in_opts, sg_flags, sg_jobs, err); };
  });

  // sample
  std::vector<std::string> sm_paths;
  std::int64_t sm_default = kDefaultDatasetCap;
  std::vector<std::string> sm_caps{"SearchQA=" + std::to_string(kSearchQaCap)};
  std::uint64_t sm_seed = 0;
  InputOptions sm_in;
  auto* sample = app.add_subcommand("sample", "Cap the number of examples per dataset");
  sample->add_option("paths", sm_paths, "Input files followed by the output directory")
      ->required()
      ->expected(2, CLI::detail::expected_max_vector_size);
  sample->add_option("--default-cap", sm_default, "Cap for datasets without an explicit --cap")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sample->add_option("--cap", sm_caps, "Per-dataset cap NAME=COUNT (repeatable)")->capture_default_str();
  sample->add_option("--seed", sm_seed, "Random seed")->capture_default_str();
  add_input_options(sample, sm_in, false);
  sample->callback([&] {
    action = [&] {
      std::vector<std::string> inputs(sm_paths.begin(), sm_paths.end() - 1);
      return cmd_sample(inputs, sm_paths.back(), sm_default, sm_caps, sm_seed, sm_in, err);
    };
  });

  // augment
  std::string au_in, au_out;
  InputOptions au_in_opts;
  AugmentFlags au;
  auto* augment = app.add_subcommand("augment", "Merge back-translated paraphrases into a dataset");
  augment->add_option("in", au_in, "MRQA JSONL(.gz) input")->required();
  augment->add_option("out", au_out, "MRQA JSONL(.gz) output: originals then augmented copies")->required();
  add_input_options(augment, au_in_opts, true);
  augment->add_option("--paraphrases", au.paraphrases, "Paraphrase JSONL");
  augment->add_option("--sentences", au.sentences,
                      "Sentence sidecar JSONL (default: split on . ! ? followed by space)");
  augment->add_option("--pq", au.pq, "Query paraphrase probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  augment->add_option("--pc", au.pc, "Context paraphrase probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  augment->add_option("--mode", au.mode, "Sampling distribution")
      ->check(CLI::IsMember({"random", "soft", "moderate", "hard"}))
      ->capture_default_str();
  augment->add_option("--difficulty", au.difficulty, "Per-question F1 JSONL for weighted modes");
  augment->add_option("--epsilon", au.epsilon, "Hard-mode epsilon")->check(CLI::PositiveNumber)->capture_default_str();
  augment->add_option("--threshold", au.threshold, "Minimum combined 2-gram Jaccard score")->capture_default_str();
  augment->add_option("--max-span-slack", au.slack, "Extra tokens allowed beyond the answer length")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  augment->add_option("--seed", au.seed, "Random seed")->capture_default_str();
  augment->callback([&] { action = [&] { return cmd_augment(au_in, au_out, au_in_opts, au, err); }; });

  // select
  SelectFlags se;
  int se_jobs = 1;
  auto* select = app.add_subcommand("select", "Pick the best answer span per question from model logits");
  select->add_option("--segments", se.segments, "Segments JSONL file(s)")->required();
  select->add_option("--logits", se.logits, "Logits JSONL file(s)")->required();
  select->add_option("--out", se.out, "Predictions JSON output")->required();
  select->add_option("--nbest", se.nbest, "Optional n-best JSON output");
  select->add_option("--beam", se.options.beam, "Candidates kept per segment and per question")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  select->add_option("--max-answer-length", se.options.max_answer_len, "Longest span in tokens")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  select->add_flag("--raw-logit-scores", se.options.raw_logit_scores,
                   "Score spans by raw logit sums instead of log-softmax (default: false)");
  select->add_option("--isa", se.isa, "Kernel variant")
      ->check(CLI::IsMember({"auto", "scalar", "avx2", "neon"}))
      ->capture_default_str();
  select->add_option("--jobs", se_jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  select->callback([&] { action = [&] { return cmd_select(se, se_jobs, err); }; });

  // eval
  std::string ev_pred, ev_report, ev_diff;
  std::vector<std::string> ev_gold;
  InputOptions ev_in;
  auto* eval = app.add_subcommand("eval", "Exact match and F1 per dataset with macro averages");
  eval->add_option("--predictions", ev_pred, "Predictions JSON {qid: text}")->required();
  eval->add_option("--gold", ev_gold, "Gold MRQA JSONL(.gz) file(s)")->required();
  eval->add_option("--report", ev_report, "Machine-readable JSON report output");
  eval->add_option("--export-difficulty", ev_diff, "Per-question {qid, f1} JSONL output");
  add_input_options(eval, ev_in, false);
  eval->callback([&] {
    action = [&] { return cmd_eval(ev_pred, ev_gold, ev_report, ev_diff, ev_in, out, err); };
  });

  // pipeline
  std::string pl_config;
  auto* pipeline = app.add_subcommand("pipeline", "Run a chain of subcommands from a config file");
  pipeline->add_option("config", pl_config, "Pipeline config (key = value lines)")->required();
  pipeline->callback([&] { action = [&] { return run_pipeline(pl_config, out, err); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run 'mrqa-prep --help' or 'mrqa-prep <command> --help' for usage\n";
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace mrqa::cli
