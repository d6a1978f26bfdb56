#pragma once

// Random alignment tracks on a 1/64 s grid, so silence durations add exactly
// in binary, together with their expected pause encoding computed in ticks.

#include <random>
#include <string>
#include <vector>

#include "adprompt/pause.hpp"
#include "adprompt/random.hpp"

namespace oracle {

struct RandomTrack {
  adprompt::AlignmentTrack track;
  std::vector<std::string> words;
  std::vector<std::string> expected;
  std::size_t interior_silence_runs = 0;
};

// Half a second is 32 ticks, two seconds 128.
inline std::string mark_for_ticks(long ticks) {
  if (ticks < 32) return ",";
  if (ticks <= 128) return ".";
  return "...";
}

inline RandomTrack random_track(std::mt19937_64& rng) {
  using adprompt::Speaker;
  using adprompt::uniform_index;
  static const std::vector<std::string> vocab = {"the", "boy", "cookie", "jar", "sink", "mother"};
  RandomTrack r;
  long tick = static_cast<long>(uniform_index(rng, 64));
  const auto n = 1 + uniform_index(rng, 25);
  long pending = -1;  // participant silence ticks since the last word; -1 before the first word
  auto place = [&](std::string t, long len, Speaker sp) {
    r.track.push_back({std::move(t), tick / 64.0, (tick + len) / 64.0, sp});
    tick += len;
  };
  for (std::uint64_t i = 0; i < n; ++i) {
    switch (uniform_index(rng, 5)) {
      case 0:
      case 1: {
        static const long near_bounds[] = {0, 31, 32, 33, 64, 127, 128, 129, 200, 1};
        const long len = uniform_index(rng, 2) ? near_bounds[uniform_index(rng, 10)]
                                               : static_cast<long>(uniform_index(rng, 300));
        // Interviewer-attributed silence goes with the other interviewer tokens.
        const bool inv = uniform_index(rng, 4) == 0;
        place("SIL", len, inv ? Speaker::Interviewer : Speaker::Participant);
        if (pending >= 0 && !inv) pending += len;
        break;
      }
      case 2:
        place("okay", 1 + static_cast<long>(uniform_index(rng, 40)), Speaker::Interviewer);
        break;
      default: {
        const auto& w = vocab[uniform_index(rng, vocab.size())];
        if (pending > 0) {
          r.expected.push_back(mark_for_ticks(pending));
          ++r.interior_silence_runs;
        }
        place(w, 1 + static_cast<long>(uniform_index(rng, 40)), Speaker::Participant);
        r.words.push_back(w);
        r.expected.push_back(w);
        pending = 0;
        break;
      }
    }
  }
  return r;
}

}  // namespace oracle
