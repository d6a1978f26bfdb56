#include "adprompt/wer.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "adprompt/error.hpp"
#include "adprompt/text.hpp"

namespace adprompt {

std::vector<std::string> normalize_for_wer(std::string_view input, PunctuationMode mode) {
  const std::string clean = text::sanitize_utf8(input);
  std::vector<std::string> out;
  for (const auto& piece : text::split_whitespace(clean)) {
    if (mode == PunctuationMode::Delete) {
      auto token = text::keep_word_chars_lower(piece);
      if (!token.empty()) out.push_back(std::move(token));
      continue;
    }
    // Split on every non-word character.
    std::string spaced;
    for (unsigned char c : piece) {
      if (c < 0x80 && !text::is_word_codepoint(c)) {
        spaced.push_back(' ');
      } else {
        spaced.push_back(static_cast<char>(c));
      }
    }
    for (const auto& part : text::split_whitespace(spaced)) {
      auto token = text::keep_word_chars_lower(part);
      if (!token.empty()) out.push_back(std::move(token));
    }
  }
  return out;
}

WerResult word_error_rate(std::span<const std::string> ref, std::span<const std::string> hyp) {
  if (ref.empty()) throw ValidationError("WER is undefined for an empty reference");
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  // cost[i][j]: edits turning ref[0..i) into hyp[0..j)
  std::vector<std::size_t> cost((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return cost[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  WerResult r;
  r.reference_length = n;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        if (!same) ++r.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++r.deletions;
      --i;
    } else {
      ++r.insertions;
      --j;
    }
  }
  r.wer = static_cast<double>(r.errors()) / static_cast<double>(n);
  return r;
}

std::string_view wer_group_name(WerGroup g) {
  switch (g) {
    case WerGroup::All:
      return "All";
    case WerGroup::Healthy:
      return "Healthy";
    case WerGroup::Alzheimer:
      return "Alzheimer";
    case WerGroup::TrainingSet:
      return "TrainingSet";
    case WerGroup::TestSet:
      return "TestSet";
  }
  return "All";
}

std::string GroupWerReport::to_csv() const {
  std::ostringstream out;
  out << "group,n,mean_wer_pct\n";
  for (auto g : kWerGroups) {
    const auto& stat = (*this)[g];
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", stat.mean_wer_pct);
    out << wer_group_name(g) << ',' << stat.n << ',' << buf << '\n';
  }
  return out.str();
}

GroupWerReport group_wer(std::span<const Sample> manifest,
                         const std::map<std::string, std::vector<std::string>>& references,
                         const std::map<std::string, std::vector<std::string>>& hypotheses,
                         WerAveraging averaging) {
  std::vector<std::string> missing;
  for (const auto& s : manifest) {
    if (!hypotheses.contains(s.sample_id)) missing.push_back(s.sample_id + " (hypothesis)");
    if (!references.contains(s.sample_id)) missing.push_back(s.sample_id + " (reference)");
  }
  if (!missing.empty()) {
    throw ValidationError("missing transcripts for: " + text::join(missing, ", "));
  }

  GroupWerReport report;
  struct Acc {
    double wer_sum = 0.0;
    std::size_t errors = 0;
    std::size_t ref_words = 0;
  };
  std::array<Acc, 5> acc{};
  for (const auto& s : manifest) {
    const auto r = word_error_rate(references.at(s.sample_id), hypotheses.at(s.sample_id));
    report.per_sample[s.sample_id] = r;
    const WerGroup groups[] = {
        WerGroup::All, s.label == Label::AD ? WerGroup::Alzheimer : WerGroup::Healthy,
        s.split == Split::Train ? WerGroup::TrainingSet : WerGroup::TestSet};
    for (auto g : groups) {
      auto& a = acc[static_cast<std::size_t>(g)];
      a.wer_sum += r.wer;
      a.errors += r.errors();
      a.ref_words += r.reference_length;
      ++report.groups[static_cast<std::size_t>(g)].n;
    }
  }
  for (std::size_t g = 0; g < acc.size(); ++g) {
    auto& stat = report.groups[g];
    if (stat.n == 0) continue;
    stat.mean_wer_pct =
        averaging == WerAveraging::PerSample
            ? 100.0 * acc[g].wer_sum / static_cast<double>(stat.n)
            : 100.0 * static_cast<double>(acc[g].errors) / static_cast<double>(acc[g].ref_words);
  }
  return report;
}

}  // namespace adprompt
