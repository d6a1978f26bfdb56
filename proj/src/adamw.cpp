#include "adprompt/adamw.hpp"

#include <cmath>

#include "adprompt/error.hpp"

namespace adprompt {

AdamW::AdamW(std::size_t parameter_count, const OptimizerSettings& settings)
    : settings_(settings), m_(parameter_count, 0.0), v_(parameter_count, 0.0) {}

void AdamW::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw ValidationError("AdamW: parameter/gradient size mismatch");
  }
  ++t_;
  const auto& s = settings_;
  const double bc1 = 1.0 - std::pow(s.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(s.beta2, static_cast<double>(t_));
  const double decay = 1.0 - s.learning_rate * s.weight_decay;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    if (g == 0.0 && m_[i] == 0.0 && v_[i] == 0.0 && params[i] == 0.0) continue;
    params[i] *= decay;
    m_[i] = s.beta1 * m_[i] + (1.0 - s.beta1) * g;
    v_[i] = s.beta2 * v_[i] + (1.0 - s.beta2) * g * g;
    const double m_hat = m_[i] / bc1;
    const double v_hat = v_[i] / bc2;
    params[i] -= s.learning_rate * m_hat / (std::sqrt(v_hat) + s.epsilon);
  }
}

}  // namespace adprompt
