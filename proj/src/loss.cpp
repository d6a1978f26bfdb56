#include "adprompt/loss.hpp"

#include <cmath>
#include <string>

#include "adprompt/error.hpp"

namespace adprompt {
namespace {

// log(1 + exp(x)) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

LossResult pairwise(double nonad_score, double ad_score, Label gold) {
  if (!std::isfinite(nonad_score) || !std::isfinite(ad_score)) {
    throw NumericError("non-finite label scores (" + std::to_string(nonad_score) + ", " +
                       std::to_string(ad_score) + ")");
  }
  const double margin = ad_score - nonad_score;
  LossResult r;
  r.p_ad = logistic(margin);
  const double p_nonad = logistic(-margin);
  // -log p(gold) = softplus(other - gold)
  r.loss = gold == Label::AD ? softplus(-margin) : softplus(margin);
  r.grad[static_cast<std::size_t>(Label::AD)] = r.p_ad - (gold == Label::AD ? 1.0 : 0.0);
  r.grad[static_cast<std::size_t>(Label::NonAD)] = p_nonad - (gold == Label::NonAD ? 1.0 : 0.0);
  return r;
}

}  // namespace

LossResult pbft_loss(std::span<const double> mask_scores, Label gold, TokenId nonad_word,
                     TokenId ad_word) {
  const auto n = static_cast<TokenId>(mask_scores.size());
  if (nonad_word < 0 || nonad_word >= n || ad_word < 0 || ad_word >= n) {
    throw ValidationError("label word id outside the score vector");
  }
  return pairwise(mask_scores[static_cast<std::size_t>(nonad_word)],
                  mask_scores[static_cast<std::size_t>(ad_word)], gold);
}

LossResult tft_loss(std::array<double, 2> class_scores, Label gold) {
  return pairwise(class_scores[static_cast<std::size_t>(Label::NonAD)],
                  class_scores[static_cast<std::size_t>(Label::AD)], gold);
}

}  // namespace adprompt
