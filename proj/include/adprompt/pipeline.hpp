#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adprompt/backend.hpp"
#include "adprompt/corpus.hpp"
#include "adprompt/evaluation.hpp"
#include "adprompt/pause.hpp"
#include "adprompt/prompt.hpp"
#include "adprompt/records.hpp"
#include "adprompt/training.hpp"

namespace adprompt {

enum class InputVariant {
  Subjects,     // participant speech only
  Pauses,       // participant speech with pause marks
  Interviewer,  // participant and interviewer speech
  Asr,          // ASR hypothesis text
};
std::string_view variant_name(InputVariant v);  // subjects, pauses, interviewer, asr
InputVariant parse_variant(std::string_view s);

// Model input items (words and pause marks) per sample_id.
using VariantInputs = std::map<std::string, std::vector<std::string>>;

// Throws ValidationError listing every sample that lacks a file required by
// one of the variants.
void check_variant_inputs(std::span<const Sample> samples, std::span<const InputVariant> variants);

VariantInputs load_variant_inputs(std::span<const Sample> samples, InputVariant variant,
                                  AlignmentFormat alignment_format = AlignmentFormat::Tsv);

// Backend factory. "toy" builds a BagOfTokensBackend over the vocabulary of
// `inputs` plus the prompt words. Pre-trained checkpoints are served by the
// Python adapter; asking for one here raises ConfigurationError.
std::unique_ptr<EncoderBackend> make_backend(std::string_view name, const VariantInputs& inputs,
                                             const PromptSpec& prompt, std::uint64_t seed,
                                             double init_scale);

// One training run as described by a run config file.
struct TrainJob {
  Paradigm paradigm = Paradigm::PBFT;
  std::string backend = "toy";
  PromptSpec prompt;
  TrainConfig train;
  int fold = kTestFold;
  InputVariant variant = InputVariant::Subjects;
  double init_scale = 0.0;

  RunIdentity identity() const;
  // Keys: paradigm, backend, template, position, epochs, lr, weight_decay,
  // batch_size, max_len, seed, fold, variant, init_scale. fold is an integer
  // or "test".
  static TrainJob from_config(std::string_view text);
};

// Splits the manifest by fold: fold f trains on the other training folds and
// predicts fold f; kTestFold trains on the whole training split and predicts
// the test split.
void split_for_fold(std::span<const Sample> samples, const FoldAssignment& folds, int fold,
                    const VariantInputs& inputs, std::vector<LabeledExample>& train,
                    std::vector<LabeledExample>& eval);

std::vector<PredictionRecord> run_train_job(const TrainJob& job, std::span<const Sample> samples,
                                            const FoldAssignment& folds,
                                            const VariantInputs& inputs);

struct SweepSpec {
  std::vector<Paradigm> paradigms{Paradigm::PBFT};
  std::vector<std::string> backends{"toy"};
  std::vector<PromptPosition> positions{PromptPosition::Before, PromptPosition::After};
  std::vector<std::uint64_t> seeds = default_seeds();
  std::vector<InputVariant> variants{InputVariant::Subjects};
  int k = 10;
  std::uint64_t fold_seed = 0;
  int epochs = 20;
  double learning_rate = 1e-5;
  double weight_decay = 0.01;
  int batch_size_tft = 4;
  int batch_size_pbft = 1;
  std::size_t max_len = kDefaultMaxLen;
  std::string template_text{kDefaultTemplate};
  int last_k = 3;
  int workers = 1;
  double init_scale = 0.0;

  void validate() const;  // throws ConfigurationError
  static SweepSpec from_config(std::string_view text);

  // Runs per (paradigm, backend, position, seed, variant, fold) cell, with
  // k folds plus the test run.
  std::size_t run_count() const;
};

struct PlannedRun {
  RunIdentity identity;
  TrainJob job;
};

std::vector<PlannedRun> plan_runs(const SweepSpec& spec);

struct SweepResult {
  std::size_t runs_total = 0;
  std::size_t runs_executed = 0;  // the rest were already on disk
  std::vector<SummaryRow> summary;
};

// Executes every planned run not yet present under out_dir/records, then
// evaluates all planned runs and writes out_dir/summary.csv,
// out_dir/report.txt and out_dir/report.csv. Missing input files abort
// before any training.
SweepResult run_sweep(const SweepSpec& spec, std::span<const Sample> samples,
                      const FoldAssignment& folds, const std::filesystem::path& out_dir);

}  // namespace adprompt
