#pragma once

#include <array>
#include <span>

#include "adprompt/backend.hpp"
#include "adprompt/corpus.hpp"

namespace adprompt {

struct LossResult {
  double loss = 0.0;
  double p_ad = 0.5;
  // d(loss)/d(score) for the (NonAD, AD) scores that entered the softmax.
  std::array<double, 2> grad{};
};

// Two-way softmax cross-entropy over the label-word scores at the mask
// position. Only the two verbalizer ids take part in the softmax.
// Throws NumericError for non-finite scores and ValidationError for ids
// outside the score vector.
LossResult pbft_loss(std::span<const double> mask_scores, Label gold, TokenId nonad_word,
                     TokenId ad_word);

// Softmax cross-entropy over the (NonAD, AD) class scores.
LossResult tft_loss(std::array<double, 2> class_scores, Label gold);

}  // namespace adprompt
