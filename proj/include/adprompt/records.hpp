#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adprompt/backend.hpp"
#include "adprompt/corpus.hpp"
#include "adprompt/prompt.hpp"

namespace adprompt {

// Fold value of runs that train on the whole training split and predict the
// test split.
inline constexpr int kTestFold = -1;

struct RunIdentity {
  Paradigm paradigm = Paradigm::PBFT;
  std::string backend;
  std::optional<PromptPosition> position;  // empty for TFT
  std::uint64_t seed = 0;
  int fold = kTestFold;
  std::string variant;

  std::string position_text() const;  // "before", "after" or "-"
  // 16 hex digits of FNV-1a 64 over the identity fields.
  std::string run_id() const;
};

struct PredictionRecord {
  std::string run_id;
  Paradigm paradigm = Paradigm::PBFT;
  std::string backend;
  std::string position;  // "before", "after" or "-"
  std::uint64_t seed = 0;
  int fold = kTestFold;
  int epoch = 0;
  std::string sample_id;
  double p_ad = 0.5;
  Label pred = Label::AD;
  std::string variant;
};

// One JSON object per line with keys in the order
// run_id, paradigm, backend, position, seed, fold, epoch, sample_id, p_ad,
// pred, variant.
std::string to_jsonl(std::span<const PredictionRecord> records);
std::vector<PredictionRecord> parse_jsonl(std::string_view jsonl);

}  // namespace adprompt
