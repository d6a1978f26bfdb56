#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "adprompt/backend.hpp"

namespace adprompt {

// Adam with decoupled weight decay, matching torch.optim.AdamW:
//   p <- p - lr * wd * p
//   p <- p - lr * m_hat / (sqrt(v_hat) + eps)
class AdamW {
 public:
  AdamW() = default;
  AdamW(std::size_t parameter_count, const OptimizerSettings& settings);

  // Updates `params` in place from `grads`. Entries whose gradient, moments,
  // and value are all zero are left untouched.
  void step(std::span<double> params, std::span<const double> grads);

  std::size_t steps_taken() const { return t_; }

 private:
  OptimizerSettings settings_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::size_t t_ = 0;
};

}  // namespace adprompt
