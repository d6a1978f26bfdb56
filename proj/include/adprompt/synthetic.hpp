#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "adprompt/corpus.hpp"

namespace adprompt {

struct SyntheticCorpusOptions {
  int ad_train = 15;
  int control_train = 15;
  int ad_test = 5;
  int control_test = 5;
  std::uint64_t seed = 7;
};

// Writes a small picture-description corpus under `dir`: CHAT transcripts,
// TSV alignments, ASR-style text, and manifest.csv with relative paths.
//
// AD-like samples carry repeated fillers (`uh [x n]`, `um`) and at least
// four pauses longer than 2 s; controls carry neither, so the long-pause mark
// count separates the classes by a margin of four. Both classes share the same
// content sentences and CHAT annotation noise.
std::vector<Sample> write_synthetic_corpus(const std::filesystem::path& dir,
                                           const SyntheticCorpusOptions& options = {});

}  // namespace adprompt
