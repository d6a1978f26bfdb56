#include "adprompt/training.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "adprompt/error.hpp"
#include "adprompt/loss.hpp"
#include "adprompt/random.hpp"

namespace adprompt {

TrainConfig TrainConfig::defaults_for(Paradigm paradigm) {
  TrainConfig c;
  c.batch_size = paradigm == Paradigm::TFT ? 4 : 1;
  return c;
}

void TrainConfig::validate() const {
  if (epochs < 0) throw ConfigurationError("epochs must be non-negative");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigurationError("learning rate must be positive");
  }
  if (weight_decay < 0.0 || !std::isfinite(weight_decay)) {
    throw ConfigurationError("weight decay must be non-negative");
  }
  if (batch_size <= 0) throw ConfigurationError("batch size must be positive");
  if (max_len < 3) throw ConfigurationError("max_len must be at least 3");
}

namespace {

struct Prepared {
  ModelInput input;
  Label label;
};

class Scorer {
 public:
  Scorer(Paradigm paradigm, const PromptSpec* prompt, EncoderBackend& backend, std::size_t max_len)
      : paradigm_(paradigm), prompt_(prompt), backend_(backend), max_len_(max_len) {
    if (paradigm_ == Paradigm::PBFT) {
      if (prompt_ == nullptr) throw ConfigurationError("PBFT runs need a prompt spec");
      nonad_ = verbalize(Label::NonAD, backend_, *prompt_);
      ad_ = verbalize(Label::AD, backend_, *prompt_);
      if (nonad_ == ad_) throw ConfigurationError("label words map to the same token");
    }
  }

  Prepared prepare(const LabeledExample& ex) const {
    return {paradigm_ == Paradigm::PBFT ? build_input_pbft(ex.items, *prompt_, backend_, max_len_)
                                        : build_input_tft(ex.items, backend_, max_len_),
            ex.label};
  }

  LossResult loss(const Prepared& p) const {
    if (paradigm_ == Paradigm::PBFT) {
      return pbft_loss(backend_.mlm_logits(p.input, *p.input.mask_index), p.label, nonad_, ad_);
    }
    return tft_loss(backend_.cls_logits(p.input), p.label);
  }

  void backward(const Prepared& p, const LossResult& r, double scale) {
    if (paradigm_ == Paradigm::PBFT) {
      std::vector<double> grad(backend_.vocab_size(), 0.0);
      grad[static_cast<std::size_t>(nonad_)] = scale * r.grad[0];
      grad[static_cast<std::size_t>(ad_)] = scale * r.grad[1];
      backend_.backward_mlm(p.input, *p.input.mask_index, grad);
    } else {
      backend_.backward_cls(p.input, {scale * r.grad[0], scale * r.grad[1]});
    }
  }

 private:
  Paradigm paradigm_;
  const PromptSpec* prompt_;
  EncoderBackend& backend_;
  std::size_t max_len_;
  TokenId nonad_ = 0;
  TokenId ad_ = 0;
};

}  // namespace

std::vector<PredictionRecord> train_run(const TrainConfig& config, const RunIdentity& identity,
                                        const PromptSpec* prompt,
                                        std::span<const LabeledExample> train,
                                        std::span<const LabeledExample> eval,
                                        EncoderBackend& backend) {
  config.validate();
  if (eval.empty()) throw ValidationError("no evaluation samples");
  if (config.epochs > 0 && train.empty()) throw ValidationError("no training samples");

  Scorer scorer(identity.paradigm, prompt, backend, config.max_len);
  std::vector<Prepared> train_inputs;
  train_inputs.reserve(train.size());
  for (const auto& ex : train) train_inputs.push_back(scorer.prepare(ex));
  std::vector<Prepared> eval_inputs;
  eval_inputs.reserve(eval.size());
  for (const auto& ex : eval) eval_inputs.push_back(scorer.prepare(ex));

  const std::string run_id = identity.run_id();
  std::vector<PredictionRecord> records;
  auto predict = [&](int epoch) {
    for (std::size_t i = 0; i < eval.size(); ++i) {
      const double p_ad = scorer.loss(eval_inputs[i]).p_ad;
      PredictionRecord r;
      r.run_id = run_id;
      r.paradigm = identity.paradigm;
      r.backend = identity.backend;
      r.position = identity.position_text();
      r.seed = identity.seed;
      r.fold = identity.fold;
      r.epoch = epoch;
      r.sample_id = eval[i].sample_id;
      r.p_ad = p_ad;
      r.pred = p_ad >= 0.5 ? Label::AD : Label::NonAD;
      r.variant = identity.variant;
      records.push_back(std::move(r));
    }
  };

  if (config.epochs == 0) {
    predict(0);
    return records;
  }

  OptimizerSettings settings;
  settings.learning_rate = config.learning_rate;
  settings.weight_decay = config.weight_decay;
  backend.start_training(settings, config.seed);

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(train_inputs.size());
  const auto batch = static_cast<std::size_t>(config.batch_size);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    deterministic_shuffle(std::span<std::size_t>(order), rng);
    for (std::size_t start = 0, b = 1; start < order.size(); start += batch, ++b) {
      const std::size_t stop = std::min(order.size(), start + batch);
      const double scale = 1.0 / static_cast<double>(stop - start);
      for (std::size_t k = start; k < stop; ++k) {
        const auto& item = train_inputs[order[k]];
        LossResult r;
        try {
          r = scorer.loss(item);
        } catch (const NumericError& e) {
          throw NumericError("training diverged at epoch " + std::to_string(epoch) + ", batch " +
                             std::to_string(b) + ": " + e.what());
        }
        if (!std::isfinite(r.loss)) {
          throw NumericError("training diverged at epoch " + std::to_string(epoch) + ", batch " +
                             std::to_string(b) + ": non-finite loss");
        }
        scorer.backward(item, r, scale);
      }
      backend.step();
    }
    predict(epoch);
  }
  return records;
}

}  // namespace adprompt
