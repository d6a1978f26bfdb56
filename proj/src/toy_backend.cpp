#include "adprompt/toy_backend.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "adprompt/error.hpp"
#include "adprompt/random.hpp"
#include "adprompt/text.hpp"

namespace adprompt {
namespace {

constexpr std::array<std::string_view, 5> kSpecialSpellings = {"[PAD]", "[UNK]", "[CLS]", "[SEP]",
                                                               "[MASK]"};

}  // namespace

BagOfTokensBackend::BagOfTokensBackend(std::vector<std::string> words, std::uint64_t init_seed,
                                       double init_scale) {
  std::set<std::string> unique;
  for (auto& w : words) {
    auto lower = text::ascii_lower(w);
    if (lower.empty() || std::find(kSpecialSpellings.begin(), kSpecialSpellings.end(), w) !=
                             kSpecialSpellings.end()) {
      continue;
    }
    unique.insert(std::move(lower));
  }
  for (auto s : kSpecialSpellings) vocab_.emplace_back(s);
  vocab_.insert(vocab_.end(), unique.begin(), unique.end());
  for (std::size_t i = 0; i < vocab_.size(); ++i) index_[vocab_[i]] = static_cast<TokenId>(i);

  const std::size_t v = vocab_.size();
  mlm_bias_ = v * v;
  cls_weight_ = mlm_bias_ + v;
  cls_bias_ = cls_weight_ + 2 * v;
  params_.assign(cls_bias_ + 2, 0.0);
  grads_.assign(params_.size(), 0.0);
  if (init_scale > 0.0) {
    std::mt19937_64 rng(init_seed);
    for (auto& p : params_) p = init_scale * (2.0 * uniform_unit(rng) - 1.0);
  }
}

BagOfTokensBackend BagOfTokensBackend::from_corpus(
    std::span<const std::vector<std::string>> documents, std::span<const std::string> extra_text,
    std::uint64_t init_seed, double init_scale) {
  std::vector<std::string> words;
  for (const auto& doc : documents) {
    for (const auto& item : doc) {
      auto pieces = text::split_whitespace(item);
      words.insert(words.end(), pieces.begin(), pieces.end());
    }
  }
  for (const auto& t : extra_text) {
    auto pieces = text::split_whitespace(t);
    words.insert(words.end(), pieces.begin(), pieces.end());
  }
  return BagOfTokensBackend(std::move(words), init_seed, init_scale);
}

std::vector<TokenId> BagOfTokensBackend::tokenize(std::string_view input) const {
  std::vector<TokenId> ids;
  for (const auto& piece : text::split_whitespace(input)) {
    if (const auto it = std::find(kSpecialSpellings.begin(), kSpecialSpellings.end(), piece);
        it != kSpecialSpellings.end()) {
      ids.push_back(static_cast<TokenId>(it - kSpecialSpellings.begin()));
      continue;
    }
    const auto found = index_.find(text::ascii_lower(piece));
    ids.push_back(found == index_.end() ? 1 : found->second);
  }
  return ids;
}

std::optional<TokenId> BagOfTokensBackend::special_token(SpecialToken which) const {
  switch (which) {
    case SpecialToken::Pad:
      return 0;
    case SpecialToken::Unknown:
      return 1;
    case SpecialToken::Cls:
      return 2;
    case SpecialToken::Sep:
      return 3;
    case SpecialToken::Mask:
      return 4;
  }
  return std::nullopt;
}

std::vector<std::pair<TokenId, double>> BagOfTokensBackend::features(
    const ModelInput& input, std::optional<std::size_t> skip) const {
  std::map<TokenId, double> counts;
  for (std::size_t i = 0; i < input.token_ids.size(); ++i) {
    const TokenId id = input.token_ids[i];
    if (skip && *skip == i) continue;
    if (id < 0 || static_cast<std::size_t>(id) >= vocab_.size()) {
      throw ValidationError("token id " + std::to_string(id) + " outside the toy vocabulary");
    }
    // [UNK] is counted; it carries information about out-of-vocabulary words.
    if (is_special(id) && id != 1) continue;
    counts[id] += 1.0;
  }
  return {counts.begin(), counts.end()};
}

std::vector<double> BagOfTokensBackend::mlm_logits(const ModelInput& input,
                                                   std::size_t position) const {
  if (position >= input.token_ids.size()) throw ValidationError("mlm position out of range");
  const std::size_t v = vocab_.size();
  const auto x = features(input, position);
  std::vector<double> scores(params_.begin() + static_cast<std::ptrdiff_t>(mlm_bias_),
                             params_.begin() + static_cast<std::ptrdiff_t>(mlm_bias_ + v));
  for (std::size_t row = 0; row < v; ++row) {
    const double* w = params_.data() + row * v;
    double s = 0.0;
    for (const auto& [id, c] : x) s += w[id] * c;
    scores[row] += s;
  }
  return scores;
}

std::array<double, 2> BagOfTokensBackend::cls_logits(const ModelInput& input) const {
  const std::size_t v = vocab_.size();
  const auto x = features(input, std::nullopt);
  std::array<double, 2> scores{params_[cls_bias_], params_[cls_bias_ + 1]};
  for (std::size_t row = 0; row < 2; ++row) {
    const double* w = params_.data() + cls_weight_ + row * v;
    for (const auto& [id, c] : x) scores[row] += w[id] * c;
  }
  return scores;
}

void BagOfTokensBackend::backward_mlm(const ModelInput& input, std::size_t position,
                                      std::span<const double> score_grad) {
  const std::size_t v = vocab_.size();
  if (score_grad.size() != v) throw ValidationError("mlm gradient has wrong size");
  if (position >= input.token_ids.size()) throw ValidationError("mlm position out of range");
  const auto x = features(input, position);
  for (std::size_t row = 0; row < v; ++row) {
    const double g = score_grad[row];
    if (g == 0.0) continue;
    double* dw = grads_.data() + row * v;
    for (const auto& [id, c] : x) dw[id] += g * c;
    grads_[mlm_bias_ + row] += g;
  }
}

void BagOfTokensBackend::backward_cls(const ModelInput& input, std::array<double, 2> score_grad) {
  const std::size_t v = vocab_.size();
  const auto x = features(input, std::nullopt);
  for (std::size_t row = 0; row < 2; ++row) {
    double* dw = grads_.data() + cls_weight_ + row * v;
    for (const auto& [id, c] : x) dw[id] += score_grad[row] * c;
    grads_[cls_bias_ + row] += score_grad[row];
  }
}

void BagOfTokensBackend::start_training(const OptimizerSettings& settings, std::uint64_t) {
  optimizer_ = AdamW(params_.size(), settings);
  training_ = true;
  std::fill(grads_.begin(), grads_.end(), 0.0);
}

void BagOfTokensBackend::step() {
  if (!training_) throw ConfigurationError("start_training must be called before step");
  optimizer_.step(params_, grads_);
  std::fill(grads_.begin(), grads_.end(), 0.0);
}

}  // namespace adprompt
