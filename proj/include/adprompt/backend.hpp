#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace adprompt {

using TokenId = std::int32_t;

enum class Paradigm { TFT, PBFT };
std::string_view paradigm_name(Paradigm p);  // "TFT" / "PBFT"
Paradigm parse_paradigm(std::string_view s);

enum class SpecialToken { Cls, Sep, Mask, Pad, Unknown };

struct ModelInput {
  std::vector<TokenId> token_ids;
  std::optional<std::size_t> mask_index;  // PBFT only
  Paradigm paradigm = Paradigm::TFT;
};

struct OptimizerSettings {
  double learning_rate = 1e-5;
  double weight_decay = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// A trainable masked-language-model encoder with a sequence-classification
// head. Training is driven from outside: the caller computes the loss
// gradient with respect to the scores, hands it to backward_*, and calls
// step() once per batch. Outputs must be deterministic given the parameters.
class EncoderBackend {
 public:
  virtual ~EncoderBackend() = default;

  virtual std::string name() const = 0;
  virtual std::size_t vocab_size() const = 0;
  // Token ids for plain text, without special tokens.
  virtual std::vector<TokenId> tokenize(std::string_view text) const = 0;
  virtual std::optional<TokenId> special_token(SpecialToken which) const = 0;

  // Vocabulary scores at `position` of the input.
  virtual std::vector<double> mlm_logits(const ModelInput& input, std::size_t position) const = 0;
  // Scores for (NonAD, AD).
  virtual std::array<double, 2> cls_logits(const ModelInput& input) const = 0;

  // Accumulate d(loss)/d(parameters) given d(loss)/d(scores).
  virtual void backward_mlm(const ModelInput& input, std::size_t position,
                            std::span<const double> score_grad) = 0;
  virtual void backward_cls(const ModelInput& input, std::array<double, 2> score_grad) = 0;

  virtual void start_training(const OptimizerSettings& settings, std::uint64_t seed) = 0;
  // Applies one optimizer update from the accumulated gradients and clears them.
  virtual void step() = 0;

  virtual std::size_t parameter_count() const = 0;
};

}  // namespace adprompt
