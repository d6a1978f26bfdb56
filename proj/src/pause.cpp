#include "adprompt/pause.hpp"

#include <charconv>
#include <cmath>

#include "adprompt/error.hpp"
#include "adprompt/text.hpp"

namespace adprompt {
namespace {

double parse_seconds(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() ||
      !std::isfinite(value)) {
    throw ParseError("alignment line " + std::to_string(line) + ": bad time '" +
                     std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line, bool tabs_only) {
  std::vector<std::string_view> fields;
  if (tabs_only) {
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(text::trim(line.substr(start, tab - start)));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    return fields;
  }
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t s = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > s) fields.push_back(line.substr(s, i - s));
  }
  return fields;
}

Speaker parse_speaker(std::string_view code, std::size_t line) {
  if (text::iequals(code, "PAR")) return Speaker::Participant;
  if (text::iequals(code, "INV")) return Speaker::Interviewer;
  throw ParseError("alignment line " + std::to_string(line) + ": unknown speaker '" +
                   std::string(code) + "'");
}

}  // namespace

AlignmentTrack load_alignment(std::string_view file, AlignmentFormat format) {
  AlignmentTrack track;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < file.size()) {
    auto end = file.find('\n', pos);
    if (end == std::string_view::npos) end = file.size();
    std::string_view line = file.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty() || text::trim(line).front() == '#') continue;

    AlignedToken tok;
    if (format == AlignmentFormat::Tsv) {
      const auto f = split_fields(line, true);
      if (f.size() != 4) {
        throw ParseError("alignment line " + std::to_string(line_no) +
                         ": expected 4 tab-separated fields, got " + std::to_string(f.size()));
      }
      tok.token = std::string(f[0]);
      tok.start = parse_seconds(f[1], line_no);
      tok.end = parse_seconds(f[2], line_no);
      tok.speaker = parse_speaker(f[3], line_no);
    } else {
      const auto f = split_fields(line, false);
      if (f.size() != 5 && f.size() != 6) {
        throw ParseError("alignment line " + std::to_string(line_no) +
                         ": expected 5 or 6 CTM fields, got " + std::to_string(f.size()));
      }
      tok.token = std::string(f[4]);
      tok.start = parse_seconds(f[2], line_no);
      tok.end = tok.start + parse_seconds(f[3], line_no);
      tok.speaker = text::iequals(f[1], "INV") ? Speaker::Interviewer : Speaker::Participant;
    }
    if (tok.token.empty()) {
      throw ParseError("alignment line " + std::to_string(line_no) + ": empty token");
    }
    if (tok.start < 0.0 || tok.end < 0.0) {
      throw ParseError("alignment line " + std::to_string(line_no) + ": negative time");
    }
    if (tok.end < tok.start) {
      throw ParseError("alignment line " + std::to_string(line_no) + ": end precedes start");
    }
    if (!track.empty() && tok.start < track.back().end) {
      throw ParseError("alignment line " + std::to_string(line_no) +
                       ": interval is unsorted or overlaps the previous token");
    }
    track.push_back(std::move(tok));
  }
  return track;
}

AlignmentTrack trim_and_merge(const AlignmentTrack& track) {
  AlignmentTrack kept;
  for (const auto& tok : track) {
    if (tok.speaker != Speaker::Participant) continue;
    if (tok.is_silence() && !(tok.duration() > 0.0)) continue;
    if (tok.is_silence() && !kept.empty() && kept.back().is_silence()) {
      auto& merged = kept.back();
      merged.end = merged.start + (merged.duration() + tok.duration());
      continue;
    }
    kept.push_back(tok);
  }
  std::size_t first = 0;
  while (first < kept.size() && kept[first].is_silence()) ++first;
  std::size_t last = kept.size();
  while (last > first && kept[last - 1].is_silence()) --last;
  if (first == last) throw ValidationError("no speech content");
  return {kept.begin() + static_cast<std::ptrdiff_t>(first),
          kept.begin() + static_cast<std::ptrdiff_t>(last)};
}

PauseBin bin_pause(double seconds) {
  if (!(seconds > 0.0) || !std::isfinite(seconds)) {
    throw ValidationError("pause duration must be positive and finite, got " +
                          std::to_string(seconds));
  }
  if (seconds < 0.5) return PauseBin::Short;
  if (seconds <= 2.0) return PauseBin::Medium;
  return PauseBin::Long;
}

std::string_view pause_mark(PauseBin bin) {
  switch (bin) {
    case PauseBin::Short:
      return ",";
    case PauseBin::Medium:
      return ".";
    case PauseBin::Long:
      return "...";
  }
  return ",";
}

bool is_pause_mark(std::string_view item) { return item == "," || item == "." || item == "..."; }

std::vector<std::string> PauseEncodedTranscript::words() const {
  std::vector<std::string> out;
  for (const auto& item : items) {
    if (!is_pause_mark(item)) out.push_back(item);
  }
  return out;
}

std::string PauseEncodedTranscript::text() const { return text::join(items); }

PauseEncodedTranscript encode_pauses(const NormalizedTranscript& transcript,
                                     const AlignmentTrack& track) {
  const AlignmentTrack trimmed = trim_and_merge(track);
  PauseEncodedTranscript out;
  out.sample_id = transcript.sample_id;
  std::size_t word_index = 0;
  for (std::size_t i = 0; i < trimmed.size(); ++i) {
    const auto& tok = trimmed[i];
    if (tok.is_silence()) {
      // interior by construction: trimmed tracks start and end with words
      out.items.emplace_back(pause_mark(bin_pause(tok.duration())));
      continue;
    }
    if (word_index >= transcript.words.size() ||
        !text::iequals(tok.token, transcript.words[word_index])) {
      throw AlignmentMismatchError(
          "alignment and transcript diverge at word " + std::to_string(word_index) +
          ": alignment has '" + tok.token + "', transcript has '" +
          (word_index < transcript.words.size() ? transcript.words[word_index]
                                                : std::string("<end>")) +
          "'");
    }
    out.items.push_back(transcript.words[word_index]);
    ++word_index;
  }
  if (word_index != transcript.words.size()) {
    throw AlignmentMismatchError("alignment and transcript diverge at word " +
                                 std::to_string(word_index) + ": alignment ended, transcript has '" +
                                 transcript.words[word_index] + "'");
  }
  return out;
}

}  // namespace adprompt
