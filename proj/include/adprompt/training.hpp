#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "adprompt/backend.hpp"
#include "adprompt/corpus.hpp"
#include "adprompt/prompt.hpp"
#include "adprompt/records.hpp"

namespace adprompt {

struct TrainConfig {
  int epochs = 20;
  double learning_rate = 1e-5;
  double weight_decay = 0.01;
  int batch_size = 4;
  std::size_t max_len = kDefaultMaxLen;
  std::uint64_t seed = 0;

  // Batch size 4 for TFT and 1 for PBFT; everything else shared.
  static TrainConfig defaults_for(Paradigm paradigm);
  void validate() const;  // throws ConfigurationError
};

struct LabeledExample {
  std::string sample_id;
  std::vector<std::string> items;  // words and pause marks
  Label label = Label::NonAD;
};

// Fine-tunes `backend` on `train` and predicts `eval` after every epoch.
// Each epoch shuffles the training order with a generator seeded once from
// config.seed, averages per-example gradients over each batch, and steps the
// optimizer once per batch. With epochs == 0 the untrained model's
// predictions are returned as epoch 0. `prompt` is required for PBFT.
//
// Throws NumericError naming epoch and batch when a loss is non-finite.
std::vector<PredictionRecord> train_run(const TrainConfig& config, const RunIdentity& identity,
                                        const PromptSpec* prompt,
                                        std::span<const LabeledExample> train,
                                        std::span<const LabeledExample> eval,
                                        EncoderBackend& backend);

}  // namespace adprompt
