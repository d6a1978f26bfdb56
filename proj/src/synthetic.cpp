#include "adprompt/synthetic.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "adprompt/chat.hpp"
#include "adprompt/pause.hpp"
#include "adprompt/random.hpp"
#include "adprompt/text.hpp"

namespace adprompt {
namespace {

constexpr std::array<std::string_view, 10> kSentences = {
    "the boy is taking cookies from the jar",
    "the stool is falling over",
    "the mother is washing the dishes",
    "the water is overflowing from the sink",
    "the girl wants a cookie too",
    "she is drying a plate",
    "there are curtains at the window",
    "the boy is standing on the stool",
    "the kitchen floor is wet",
    "the lady does not see the children",
};

constexpr std::array<std::string_view, 4> kInterviewerLines = {
    "what do you see going on in the picture ?",
    "mhm .",
    "anything else ?",
    "okay good .",
};

struct Event {
  std::string token;
  Speaker speaker;
};

class Clock {
 public:
  void word(std::ostringstream& out, const std::string& w, Speaker s, double dur = 0.3) {
    emit(out, w, s, dur);
  }
  void silence(std::ostringstream& out, double dur, Speaker s = Speaker::Participant) {
    emit(out, std::string(kSilenceToken), s, dur);
  }

 private:
  void emit(std::ostringstream& out, const std::string& token, Speaker s, double dur) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s\t%.3f\t%.3f\t%s\n", token.c_str(), t_, t_ + dur,
                  std::string(speaker_code(s)).c_str());
    out << buf;
    t_ = std::round((t_ + dur) * 1000.0) / 1000.0;
  }
  double t_ = 0.0;
};

double between(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

// One participant utterance with CHAT annotations. AD-like utterances add
// fillers.
std::string participant_line(std::mt19937_64& rng, bool ad_like) {
  const auto sentence = text::split_whitespace(kSentences[uniform_index(rng, kSentences.size())]);
  std::string line;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (!line.empty()) line += ' ';
    if (ad_like && i == 1) {
      line += uniform_index(rng, 2) == 0 ? "&uh uh [x 2] " : "um &=sighs ";
    }
    if (i == 0 && uniform_index(rng, 3) == 0) line += "<" + sentence[0] + "> [/] ";
    line += sentence[i];
    if (i == 2 && uniform_index(rng, 4) == 0) line += " (.)";
  }
  switch (uniform_index(rng, 4)) {
    case 0:
      line += " &=laughs";
      break;
    case 1:
      line += " xxx";
      break;
    default:
      break;
  }
  line += " .";
  return line;
}

}  // namespace

std::vector<Sample> write_synthetic_corpus(const std::filesystem::path& dir,
                                           const SyntheticCorpusOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::vector<Sample> samples;
  struct Group {
    Label label;
    Split split;
    int count;
  };
  const Group groups[] = {{Label::AD, Split::Train, options.ad_train},
                          {Label::NonAD, Split::Train, options.control_train},
                          {Label::AD, Split::Test, options.ad_test},
                          {Label::NonAD, Split::Test, options.control_test}};
  int serial = 0;
  for (const auto& g : groups) {
    for (int n = 0; n < g.count; ++n, ++serial) {
      const bool ad_like = g.label == Label::AD;
      char id_buf[32];
      std::snprintf(id_buf, sizeof id_buf, "S%03d", serial);
      Sample s;
      s.sample_id = id_buf;
      s.label = g.label;
      s.split = g.split;
      s.transcript_path = std::filesystem::path("transcripts") / (s.sample_id + ".cha");
      s.alignment_path = std::filesystem::path("alignments") / (s.sample_id + ".tsv");
      s.asr_path = std::filesystem::path("asr") / (s.sample_id + ".txt");

      std::ostringstream cha;
      cha << "@UTF8\n@Begin\n@Languages:\teng\n@Participants:\tPAR Participant, INV "
             "Investigator\n@ID:\teng|synthetic|PAR|||||Participant|||\n";
      std::vector<std::pair<Speaker, std::string>> lines;
      lines.emplace_back(Speaker::Interviewer, std::string(kInterviewerLines[0]));
      const int n_utts = 5 + static_cast<int>(uniform_index(rng, 3));
      for (int u = 0; u < n_utts; ++u) {
        lines.emplace_back(Speaker::Participant, participant_line(rng, ad_like));
        if (uniform_index(rng, 3) == 0) {
          lines.emplace_back(Speaker::Interviewer,
                             std::string(kInterviewerLines[1 + uniform_index(rng, 3)]));
        }
      }
      for (const auto& [speaker, line] : lines) {
        cha << '*' << speaker_code(speaker) << ":\t" << line << '\n';
        if (speaker == Speaker::Participant && uniform_index(rng, 2) == 0) {
          cha << "%mor:\tdet|the n|boy .\n";
        }
      }
      cha << "@End\n";

      // Alignment over the normalized words.
      const auto doc = parse_chat(cha.str(), s.sample_id);
      std::ostringstream tsv;
      Clock clock;
      clock.silence(tsv, between(rng, 0.3, 1.5));
      std::size_t participant_words = 0;
      for (const auto& u : doc.utterances) {
        if (u.speaker == Speaker::Participant) participant_words += u.tokens.size();
      }
      // Long pauses: at least four for AD-like samples, none for controls.
      std::vector<bool> long_after(participant_words, false);
      if (ad_like && participant_words > 1) {
        const std::size_t wanted = 4 + uniform_index(rng, 4);
        std::size_t placed = 0;
        while (placed < wanted && placed + 1 < participant_words) {
          const auto at = static_cast<std::size_t>(uniform_index(rng, participant_words - 1));
          if (!long_after[at]) {
            long_after[at] = true;
            ++placed;
          }
        }
      }
      std::size_t w = 0;
      std::vector<std::string> all_words;
      for (std::size_t ui = 0; ui < doc.utterances.size(); ++ui) {
        const auto& u = doc.utterances[ui];
        for (std::size_t ti = 0; ti < u.tokens.size(); ++ti) {
          clock.word(tsv, u.tokens[ti], u.speaker, between(rng, 0.2, 0.5));
          all_words.push_back(u.tokens[ti]);
          if (u.speaker != Speaker::Participant) continue;
          const bool last_word = w + 1 == participant_words;
          if (!last_word) {
            if (long_after[w]) {
              clock.silence(tsv, between(rng, 2.2, 4.0));
            } else if (uniform_index(rng, 5) == 0) {
              clock.silence(tsv, ad_like ? between(rng, 0.6, 1.8) : between(rng, 0.1, 0.45));
            }
          }
          ++w;
        }
        if (ui + 1 < doc.utterances.size()) {
          clock.silence(tsv, between(rng, 0.05, 0.3), u.speaker);
        }
      }
      clock.silence(tsv, between(rng, 0.5, 2.0));

      // ASR-style text: casing, punctuation, and a few word errors.
      std::string asr;
      for (std::size_t i = 0; i < all_words.size(); ++i) {
        std::string word = all_words[i];
        const auto roll = uniform_index(rng, 20);
        if (roll == 0) continue;  // deletion
        if (roll == 1) word = "a";
        if (!asr.empty()) asr += ' ';
        if (i == 0) word[0] = static_cast<char>(word[0] - 32 * (word[0] >= 'a' && word[0] <= 'z'));
        asr += word;
        if (i % 9 == 8) asr += ',';
      }
      asr += ".\n";

      text::write_file_atomic(dir / s.transcript_path, cha.str());
      text::write_file_atomic(dir / *s.alignment_path, tsv.str());
      text::write_file_atomic(dir / *s.asr_path, asr);
      samples.push_back(std::move(s));
    }
  }
  text::write_file_atomic(dir / "manifest.csv", render_manifest(samples));
  for (auto& s : samples) {
    s.transcript_path = dir / s.transcript_path;
    s.alignment_path = dir / *s.alignment_path;
    s.asr_path = dir / *s.asr_path;
  }
  return samples;
}

}  // namespace adprompt
