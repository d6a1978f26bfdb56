#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "adprompt/chat.hpp"

namespace adprompt {

inline constexpr std::string_view kSilenceToken = "SIL";

struct AlignedToken {
  std::string token;  // a word, or kSilenceToken
  double start = 0.0;  // seconds
  double end = 0.0;
  Speaker speaker = Speaker::Participant;

  bool is_silence() const { return token == kSilenceToken; }
  double duration() const { return end - start; }
};

using AlignmentTrack = std::vector<AlignedToken>;

enum class AlignmentFormat {
  Tsv,  // token<TAB>start<TAB>end<TAB>speaker
  Ctm,  // file channel start duration token [confidence]
};

// Parses and validates an alignment file. Tokens must be sorted by start and
// must not overlap; times must be non-negative with end >= start. Violations
// throw ParseError naming the 1-based line.
//
// In CTM the channel column carries the speaker when it is PAR or INV; any
// other channel value is attributed to the participant.
AlignmentTrack load_alignment(std::string_view file, AlignmentFormat format = AlignmentFormat::Tsv);

// Drops interviewer tokens and zero-length silences, removes leading and
// trailing silence, and merges adjacent silences into one whose duration is
// the sum of the merged durations. Throws ValidationError("no speech content")
// when no participant word remains. Idempotent.
AlignmentTrack trim_and_merge(const AlignmentTrack& track);

enum class PauseBin { Short, Medium, Long };

// < 0.5 s Short, 0.5..2.0 s inclusive Medium, > 2.0 s Long.
PauseBin bin_pause(double seconds);
std::string_view pause_mark(PauseBin bin);  // "," "." "..."
bool is_pause_mark(std::string_view item);

struct PauseEncodedTranscript {
  std::string sample_id;
  std::vector<std::string> items;  // words interleaved with pause marks

  std::vector<std::string> words() const;  // items without pause marks
  std::string text() const;
};

// Emits the transcript words, inserting after each word the mark of the
// silence that follows it in the trimmed track. The track is trimmed and
// merged first. Words are compared case-insensitively; the first divergence
// raises AlignmentMismatchError.
PauseEncodedTranscript encode_pauses(const NormalizedTranscript& transcript,
                                     const AlignmentTrack& track);

}  // namespace adprompt
