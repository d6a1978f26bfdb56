#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adprompt/corpus.hpp"

namespace adprompt {

// How apostrophes, hyphens and other punctuation inside a word are treated.
enum class PunctuationMode {
  Delete,         // "it's" -> "its"
  SplitOnSpace,   // "it's" -> "it", "s"
};

// Lowercases, removes punctuation, and splits on whitespace.
std::vector<std::string> normalize_for_wer(std::string_view text,
                                           PunctuationMode mode = PunctuationMode::Delete);

struct WerResult {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t reference_length = 0;
  double wer = 0.0;

  std::size_t errors() const { return substitutions + deletions + insertions; }
};

// Word-level Levenshtein alignment with unit costs. Counts come from one
// optimal alignment; backtracking prefers substitution (or match), then
// deletion, then insertion. Throws ValidationError on an empty reference.
WerResult word_error_rate(std::span<const std::string> reference,
                          std::span<const std::string> hypothesis);

enum class WerGroup { All, Healthy, Alzheimer, TrainingSet, TestSet };
inline constexpr std::array<WerGroup, 5> kWerGroups = {
    WerGroup::All, WerGroup::Healthy, WerGroup::Alzheimer, WerGroup::TrainingSet,
    WerGroup::TestSet};
std::string_view wer_group_name(WerGroup g);

enum class WerAveraging {
  PerSample,  // unweighted mean of per-sample WERs
  Pooled,     // total errors / total reference words
};

struct GroupStat {
  std::size_t n = 0;
  double mean_wer_pct = 0.0;
};

struct GroupWerReport {
  std::array<GroupStat, 5> groups{};  // indexed like kWerGroups
  std::map<std::string, WerResult> per_sample;

  const GroupStat& operator[](WerGroup g) const { return groups[static_cast<std::size_t>(g)]; }
  std::string to_csv() const;  // group,n,mean_wer_pct
};

// Per-sample WER of each hypothesis against its reference, then the mean
// within each group as a percentage. Both maps are keyed by sample_id and
// must cover every manifest sample; missing ids raise ValidationError listing
// them.
GroupWerReport group_wer(std::span<const Sample> manifest,
                         const std::map<std::string, std::vector<std::string>>& references,
                         const std::map<std::string, std::vector<std::string>>& hypotheses,
                         WerAveraging averaging = WerAveraging::PerSample);

}  // namespace adprompt
