#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace adprompt {

enum class Speaker { Participant, Interviewer };

std::string_view speaker_code(Speaker s);  // "PAR" / "INV"

struct Utterance {
  Speaker speaker = Speaker::Participant;
  std::string raw_text;             // tier content, verbatim
  std::vector<std::string> tokens;  // normalized words
};

struct TranscriptDoc {
  std::string sample_id;
  std::vector<Utterance> utterances;  // file order
  // Bracketed CHAT codes other than [x n] that were dropped.
  std::size_t dropped_codes = 0;
  // Undecodable bytes replaced with U+FFFD.
  std::size_t replaced_bytes = 0;
};

enum class SpeakerFilter { ParticipantOnly, ParticipantAndInterviewer };

struct NormalizedTranscript {
  std::string sample_id;
  std::vector<std::string> words;
  SpeakerFilter speaker_filter = SpeakerFilter::ParticipantOnly;

  std::string text() const;  // words joined by single spaces
};

// Speech-faithful token list for one tier's content:
//   1. behavioral noises (`&=laughs`) are removed,
//   2. the symbols & @ (.) (..) (...) < > / and the token xxx are removed,
//   3. `word [x n]` becomes n copies of word,
//   4. remaining punctuation is stripped,
//   5. tokens are lowercased.
// Words inside <...> spans are kept. Other bracketed codes are dropped and
// counted in `dropped_codes` when non-null. A form marker after @ (`ball@l`)
// goes with the @. Media bullets (\x15...\x15) are ignored.
// Throws NormalizationError for `[x n]` with n not a positive integer.
std::vector<std::string> normalize_tokens(std::string_view raw_text,
                                          std::size_t* dropped_codes = nullptr);

// Parses a CHAT file. Speaker tiers `*PAR:` and `*INV:` become utterances;
// `@` headers and `%` dependency tiers are skipped; tab-indented lines continue
// the previous tier. Throws ParseError naming the 1-based line for malformed
// speaker markers, unknown speaker codes, or bad `[x n]` codes.
TranscriptDoc parse_chat(std::string_view raw_file, std::string sample_id = {});

NormalizedTranscript extract_transcript(const TranscriptDoc& doc, SpeakerFilter filter);

}  // namespace adprompt
