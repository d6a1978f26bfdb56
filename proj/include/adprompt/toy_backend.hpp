#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "adprompt/adamw.hpp"
#include "adprompt/backend.hpp"

namespace adprompt {

// Deterministic trainable bag-of-tokens scorer for desk-scale runs and tests.
//
// Vocabulary: [PAD] [UNK] [CLS] [SEP] [MASK] followed by the given words in
// sorted order. tokenize() splits on whitespace and lowercases; the bracketed
// special spellings map to their special ids; anything else unknown maps to
// [UNK].
//
// Both heads are affine functions of the token-count vector of the input,
// where special tokens and the scored position are not counted:
//   mlm_logits = W_mlm * counts + b_mlm   (V x V, V)
//   cls_logits = W_cls * counts + b_cls   (2 x V, 2)
class BagOfTokensBackend final : public EncoderBackend {
 public:
  explicit BagOfTokensBackend(std::vector<std::string> words, std::uint64_t init_seed = 0,
                              double init_scale = 0.0);

  // Vocabulary of every whitespace token in `documents` plus `extra_text`.
  static BagOfTokensBackend from_corpus(std::span<const std::vector<std::string>> documents,
                                        std::span<const std::string> extra_text,
                                        std::uint64_t init_seed = 0, double init_scale = 0.0);

  std::string name() const override { return "toy"; }
  std::size_t vocab_size() const override { return vocab_.size(); }
  std::vector<TokenId> tokenize(std::string_view text) const override;
  std::optional<TokenId> special_token(SpecialToken which) const override;

  std::vector<double> mlm_logits(const ModelInput& input, std::size_t position) const override;
  std::array<double, 2> cls_logits(const ModelInput& input) const override;
  void backward_mlm(const ModelInput& input, std::size_t position,
                    std::span<const double> score_grad) override;
  void backward_cls(const ModelInput& input, std::array<double, 2> score_grad) override;
  void start_training(const OptimizerSettings& settings, std::uint64_t seed) override;
  void step() override;
  std::size_t parameter_count() const override { return params_.size(); }

  const std::vector<std::string>& vocabulary() const { return vocab_; }
  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }
  std::span<const double> gradients() const { return grads_; }

 private:
  // Sparse counts over non-special tokens, skipping `skip` when set.
  std::vector<std::pair<TokenId, double>> features(const ModelInput& input,
                                                   std::optional<std::size_t> skip) const;
  bool is_special(TokenId id) const { return id < kSpecialCount; }

  static constexpr TokenId kSpecialCount = 5;

  std::vector<std::string> vocab_;
  std::map<std::string, TokenId, std::less<>> index_;
  // Layout: W_mlm (V*V), b_mlm (V), W_cls (2*V), b_cls (2).
  std::vector<double> params_;
  std::vector<double> grads_;
  AdamW optimizer_;
  bool training_ = false;
  std::size_t mlm_bias_ = 0;
  std::size_t cls_weight_ = 0;
  std::size_t cls_bias_ = 0;
};

}  // namespace adprompt
