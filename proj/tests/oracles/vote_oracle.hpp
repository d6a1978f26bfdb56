#pragma once

// Exact majority vote for p_ad values on a k/20 grid: the tie rule compares
// integer sums, so no floating-point rounding is involved.

#include <cstddef>
#include <vector>

namespace oracle {

struct GridMember {
  bool ad;
  int twentieths;  // p_ad * 20
};

inline bool vote_is_ad(const std::vector<GridMember>& group) {
  std::size_t ad = 0;
  long sum = 0;
  for (const auto& m : group) {
    ad += m.ad;
    sum += m.twentieths;
  }
  const std::size_t non = group.size() - ad;
  if (ad != non) return ad > non;
  // mean >= 0.5  <=>  sum / (20 n) >= 1/2  <=>  2 sum >= 20 n
  return 2 * sum >= 20 * static_cast<long>(group.size());
}

}  // namespace oracle
