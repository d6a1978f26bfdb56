// Command-line driver for the AD-detection pipeline.

#include <glob.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "adprompt/chat.hpp"
#include "adprompt/corpus.hpp"
#include "adprompt/error.hpp"
#include "adprompt/evaluation.hpp"
#include "adprompt/pause.hpp"
#include "adprompt/pipeline.hpp"
#include "adprompt/records.hpp"
#include "adprompt/report.hpp"
#include "adprompt/synthetic.hpp"
#include "adprompt/text.hpp"
#include "adprompt/wer.hpp"

namespace fs = std::filesystem;
using namespace adprompt;

namespace {

std::vector<fs::path> files_with_extension(const fs::path& dir, std::string_view ext) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<fs::path> expand_glob(const std::string& pattern) {
  glob_t g{};
  std::vector<fs::path> out;
  if (::glob(pattern.c_str(), 0, nullptr, &g) == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  globfree(&g);
  std::sort(out.begin(), out.end());
  return out;
}

int cmd_normalize(const fs::path& in, const fs::path& out, const std::string& speakers) {
  const auto filter = speakers == "all" ? SpeakerFilter::ParticipantAndInterviewer
                                        : SpeakerFilter::ParticipantOnly;
  std::size_t files = 0;
  for (const auto& path : files_with_extension(in, ".cha")) {
    const auto doc = parse_chat(text::read_file(path), path.stem().string());
    if (doc.replaced_bytes > 0) {
      std::cerr << "warning: " << path.filename().string() << ": replaced " << doc.replaced_bytes
                << " undecodable byte(s)\n";
    }
    if (doc.dropped_codes > 0) {
      std::cerr << "warning: " << path.filename().string() << ": dropped " << doc.dropped_codes
                << " bracketed code(s)\n";
    }
    const auto transcript = extract_transcript(doc, filter);
    text::write_file_atomic(out / (path.stem().string() + ".txt"), transcript.text() + "\n");
    ++files;
  }
  std::cerr << "normalized " << files << " file(s)\n";
  return 0;
}

int cmd_pause_encode(const fs::path& transcripts, const fs::path& alignments, const fs::path& out,
                     const std::string& format) {
  const auto fmt = format == "ctm" ? AlignmentFormat::Ctm : AlignmentFormat::Tsv;
  const std::string ext = fmt == AlignmentFormat::Ctm ? ".ctm" : ".tsv";
  std::size_t files = 0;
  for (const auto& path : files_with_extension(transcripts, ".cha")) {
    const auto id = path.stem().string();
    const auto align_path = alignments / (id + ext);
    if (!fs::exists(align_path)) throw Error("no alignment for " + id + " at " + align_path.string());
    const auto doc = parse_chat(text::read_file(path), id);
    const auto transcript = extract_transcript(doc, SpeakerFilter::ParticipantOnly);
    const auto encoded = encode_pauses(transcript, load_alignment(text::read_file(align_path), fmt));
    text::write_file_atomic(out / (id + ".txt"), encoded.text() + "\n");
    ++files;
  }
  std::cerr << "pause-encoded " << files << " file(s)\n";
  return 0;
}

std::vector<std::string> reference_words(const Sample& s, PunctuationMode mode) {
  const auto raw = text::read_file(s.transcript_path);
  if (s.transcript_path.extension() == ".cha") {
    const auto doc = parse_chat(raw, s.sample_id);
    return normalize_for_wer(extract_transcript(doc, SpeakerFilter::ParticipantAndInterviewer).text(),
                             mode);
  }
  return normalize_for_wer(raw, mode);
}

int cmd_wer(const fs::path& manifest, const fs::path& hyp_dir, const fs::path& report,
            bool split_punct, bool pooled) {
  const auto samples = load_manifest_file(manifest, true);
  const auto mode = split_punct ? PunctuationMode::SplitOnSpace : PunctuationMode::Delete;
  std::map<std::string, std::vector<std::string>> refs;
  std::map<std::string, std::vector<std::string>> hyps;
  for (const auto& s : samples) {
    refs[s.sample_id] = reference_words(s, mode);
    const auto hyp_path = hyp_dir / (s.sample_id + ".txt");
    if (fs::exists(hyp_path)) hyps[s.sample_id] = normalize_for_wer(text::read_file(hyp_path), mode);
  }
  const auto result =
      group_wer(samples, refs, hyps, pooled ? WerAveraging::Pooled : WerAveraging::PerSample);
  text::write_file_atomic(report, result.to_csv());
  std::cout << result.to_csv();
  return 0;
}

int cmd_folds(const fs::path& manifest, int k, std::uint64_t seed, const fs::path& out) {
  const auto samples = load_manifest_file(manifest, false);
  const auto folds = make_folds(samples, k, seed);
  text::write_file_atomic(out, folds.to_json());
  std::cerr << "assigned " << folds.assignment.size() << " training samples to " << k
            << " folds\n";
  return 0;
}

int cmd_train(const fs::path& config, const fs::path& manifest, const fs::path& folds_path,
              const fs::path& out) {
  const auto job = TrainJob::from_config(text::read_file(config));
  const auto samples = load_manifest_file(manifest, true);
  const auto folds = FoldAssignment::from_json(text::read_file(folds_path));
  const auto inputs = load_variant_inputs(samples, job.variant);
  const auto records = run_train_job(job, samples, folds, inputs);
  text::write_file_atomic(out, to_jsonl(records));
  std::cerr << "run " << job.identity().run_id() << ": " << records.size() << " record(s)\n";
  return 0;
}

int cmd_evaluate(const std::string& pattern, const fs::path& manifest, const std::string& scheme,
                 int last_k, bool population_std, const fs::path& out) {
  const auto samples = load_manifest_file(manifest, false);
  const auto paths = expand_glob(pattern);
  if (paths.empty()) throw Error("no record files match '" + pattern + "'");
  std::vector<PredictionRecord> records;
  for (const auto& p : paths) {
    auto recs = parse_jsonl(text::read_file(p));
    records.insert(records.end(), recs.begin(), recs.end());
  }
  const auto rows = evaluate_records(records, samples, parse_scheme(scheme), last_k,
                                     population_std ? StdConvention::Population
                                                    : StdConvention::Sample);
  const auto csv = summary_to_csv(rows);
  text::write_file_atomic(out, csv);
  std::cout << csv;
  return 0;
}

int cmd_report(const fs::path& summary, const fs::path& out_text, const fs::path& out_csv) {
  const auto rows = summary_from_csv(text::read_file(summary));
  const auto report = render_report(rows);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  if (!out_text.empty()) text::write_file_atomic(out_text, report.text);
  if (!out_csv.empty()) text::write_file_atomic(out_csv, report.csv);
  std::cout << report.text;
  return 0;
}

int cmd_sweep(const fs::path& config, const fs::path& manifest, const fs::path& folds_path,
              const fs::path& out) {
  const auto spec = SweepSpec::from_config(text::read_file(config));
  const auto samples = load_manifest_file(manifest, true);
  const auto folds = folds_path.empty() ? make_folds(samples, spec.k, spec.fold_seed)
                                        : FoldAssignment::from_json(text::read_file(folds_path));
  const auto result = run_sweep(spec, samples, folds, out);
  std::cerr << "sweep: " << result.runs_executed << " of " << result.runs_total
            << " run(s) executed, the rest resumed from disk\n";
  std::cout << text::read_file(out / "report.txt");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transcript-based AD detection: preprocessing, fine-tuning sweeps, and evaluation"};
  app.require_subcommand(1);

  fs::path in_dir, out_dir, transcripts, alignments, manifest, hyp_dir, report, out_file, config,
      folds_path, summary, out_text, out_csv;
  std::string speakers = "par", format = "tsv", scheme = "all", records_glob;
  int k = 10, last_k = 3;
  std::uint64_t seed = 0;
  bool split_punct = false, pooled = false, population_std = false;
  SyntheticCorpusOptions synth;

  auto* normalize = app.add_subcommand("normalize", "Normalize CHAT transcripts to plain text");
  normalize->add_option("--in", in_dir, "Directory of .cha files")->required();
  normalize->add_option("--out", out_dir, "Output directory")->required();
  normalize->add_option("--speakers", speakers, "par or all")
      ->check(CLI::IsMember({"par", "all"}));

  auto* pause = app.add_subcommand("pause-encode", "Insert pause marks from forced alignments");
  pause->add_option("--transcripts", transcripts, "Directory of .cha files")->required();
  pause->add_option("--alignments", alignments, "Directory of alignment files")->required();
  pause->add_option("--out", out_dir, "Output directory")->required();
  pause->add_option("--format", format, "tsv or ctm")->check(CLI::IsMember({"tsv", "ctm"}));

  auto* wer = app.add_subcommand("wer", "Word error rate of ASR transcripts by group");
  wer->add_option("--manifest", manifest)->required();
  wer->add_option("--hyp-dir", hyp_dir, "Directory of <sample_id>.txt hypotheses")->required();
  wer->add_option("--report", report, "Output CSV")->required();
  wer->add_flag("--split-punctuation", split_punct,
                "Treat apostrophes and hyphens as word breaks instead of deleting them");
  wer->add_flag("--pooled", pooled, "Pool errors over words instead of averaging samples");

  auto* folds = app.add_subcommand("folds", "Stratified k-fold assignment of the training split");
  folds->add_option("--manifest", manifest)->required();
  folds->add_option("--k", k)->check(CLI::Range(2, 1000));
  folds->add_option("--seed", seed);
  folds->add_option("--out", out_file)->required();

  auto* train = app.add_subcommand("train", "Run one fine-tuning job");
  train->add_option("--config", config, "key=value run config")->required();
  train->add_option("--manifest", manifest)->required();
  train->add_option("--folds", folds_path)->required();
  train->add_option("--out-records", out_file, "Output JSONL")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Vote, fuse, and summarize prediction records");
  evaluate->add_option("--records", records_glob, "Glob of JSONL record files")->required();
  evaluate->add_option("--manifest", manifest)->required();
  evaluate->add_option("--scheme", scheme)
      ->check(CLI::IsMember({"last-epochs", "cross-position", "cross-model", "combined", "all"}));
  evaluate->add_option("--last-k", last_k, "Epochs per majority vote");
  evaluate->add_flag("--population-std", population_std, "Use the n denominator for std");
  evaluate->add_option("--out", out_file, "Summary CSV")->required();

  auto* rep = app.add_subcommand("report", "Render a summary CSV as a results table");
  rep->add_option("--summary", summary)->required();
  rep->add_option("--out-text", out_text);
  rep->add_option("--out-csv", out_csv);

  auto* sweep = app.add_subcommand("sweep", "Run, evaluate, and report a full experiment grid");
  sweep->add_option("--config", config, "key=value sweep spec")->required();
  sweep->add_option("--manifest", manifest)->required();
  sweep->add_option("--folds", folds_path, "Fold file (generated from the spec when omitted)");
  sweep->add_option("--out", out_dir)->required();

  auto* synthc = app.add_subcommand("synth", "Write a small synthetic corpus for smoke runs");
  synthc->add_option("--out", out_dir)->required();
  synthc->add_option("--seed", synth.seed);
  synthc->add_option("--ad-train", synth.ad_train);
  synthc->add_option("--control-train", synth.control_train);
  synthc->add_option("--ad-test", synth.ad_test);
  synthc->add_option("--control-test", synth.control_test);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*normalize) return cmd_normalize(in_dir, out_dir, speakers);
    if (*pause) return cmd_pause_encode(transcripts, alignments, out_dir, format);
    if (*wer) return cmd_wer(manifest, hyp_dir, report, split_punct, pooled);
    if (*folds) return cmd_folds(manifest, k, seed, out_file);
    if (*train) return cmd_train(config, manifest, folds_path, out_file);
    if (*evaluate) return cmd_evaluate(records_glob, manifest, scheme, last_k, population_std, out_file);
    if (*rep) return cmd_report(summary, out_text, out_csv);
    if (*sweep) return cmd_sweep(config, manifest, folds_path, out_dir);
    if (*synthc) {
      const auto samples = write_synthetic_corpus(out_dir, synth);
      std::cerr << "wrote " << samples.size() << " samples to " << out_dir.string() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
