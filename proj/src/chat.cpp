#include "adprompt/chat.hpp"

#include <charconv>
#include <optional>

#include "adprompt/error.hpp"
#include "adprompt/text.hpp"

namespace adprompt {
namespace {

struct Item {
  bool bracket = false;
  std::string text;  // word text, or bracket content without [ ]
};

// Splits tier content into whitespace-separated words and [bracket] groups.
// Bracket groups may contain spaces and may be glued to a word.
std::vector<Item> lex(std::string_view s) {
  std::vector<Item> items;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) items.push_back({false, std::move(word)});
    word.clear();
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '\x15') {  // media bullet
      flush();
      const auto close = s.find('\x15', i + 1);
      i = close == std::string_view::npos ? s.size() : close;
      continue;
    }
    if (c == '[') {
      const auto close = s.find(']', i + 1);
      if (close != std::string_view::npos) {
        flush();
        items.push_back({true, std::string(s.substr(i + 1, close - i - 1))});
        i = close;
        continue;
      }
    }
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      flush();
      continue;
    }
    word.push_back(c);
  }
  flush();
  return items;
}

void erase_all(std::string& s, std::string_view needle) {
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos)) {
    s.erase(pos, needle.size());
  }
}

bool is_form_marker_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == ':' || c == '$' || c == '_';
}

// Steps 1, 2, 4 and 5 for one word. Returns the surviving token, possibly empty.
std::string clean_word(std::string w) {
  if (const auto noise = w.find("&="); noise != std::string::npos) w.erase(noise);
  erase_all(w, "(...)");
  erase_all(w, "(..)");
  erase_all(w, "(.)");
  std::string out;
  out.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const char c = w[i];
    if (c == '@') {
      while (i + 1 < w.size() && is_form_marker_char(w[i + 1])) ++i;
      continue;
    }
    if (c == '&' || c == '<' || c == '>' || c == '/') continue;
    out.push_back(c);
  }
  std::string token = text::keep_word_chars_lower(out);
  if (token == "xxx") token.clear();
  return token;
}

// Returns n for a `x n` repetition code, nullopt for any other code.
std::optional<int> repetition_count(std::string_view code) {
  const auto body = text::trim(code);
  if (body.empty() || body[0] != 'x') return std::nullopt;
  if (body.size() > 1 && body[1] != ' ' && body[1] != '\t') return std::nullopt;
  const auto arg = text::trim(body.substr(1));
  int n = 0;
  const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
  if (arg.empty() || ec != std::errc{} || ptr != arg.data() + arg.size() || n <= 0) {
    throw NormalizationError("invalid repetition code [" + std::string(code) +
                             "]: count must be a positive integer");
  }
  return n;
}

}  // namespace

std::string_view speaker_code(Speaker s) {
  return s == Speaker::Participant ? "PAR" : "INV";
}

std::string NormalizedTranscript::text() const { return text::join(words); }

std::vector<std::string> normalize_tokens(std::string_view raw_text,
                                          std::size_t* dropped_codes) {
  std::vector<std::string> tokens;
  std::size_t dropped = 0;
  std::optional<std::string> previous;
  for (auto& item : lex(raw_text)) {
    if (!item.bracket) {
      std::string token = clean_word(std::move(item.text));
      if (token.empty()) {
        previous.reset();
        continue;
      }
      previous = token;
      tokens.push_back(std::move(token));
      continue;
    }
    const auto n = repetition_count(item.text);
    if (!n) {
      ++dropped;
      continue;
    }
    if (!previous) {
      ++dropped;  // nothing to repeat
      continue;
    }
    tokens.insert(tokens.end(), static_cast<std::size_t>(*n - 1), *previous);
  }
  if (dropped_codes != nullptr) *dropped_codes += dropped;
  return tokens;
}

TranscriptDoc parse_chat(std::string_view raw_file, std::string sample_id) {
  TranscriptDoc doc;
  doc.sample_id = std::move(sample_id);
  const std::string content = text::sanitize_utf8(raw_file, &doc.replaced_bytes);

  struct Pending {
    std::size_t line = 0;
    Speaker speaker = Speaker::Participant;
    std::string raw;
  };
  std::optional<Pending> current;
  bool in_speaker_tier = false;

  auto finish = [&] {
    if (!current) return;
    Utterance u;
    u.speaker = current->speaker;
    u.raw_text = std::move(current->raw);
    try {
      u.tokens = normalize_tokens(u.raw_text, &doc.dropped_codes);
    } catch (const NormalizationError& e) {
      throw ParseError("line " + std::to_string(current->line) + ": " + e.what());
    }
    doc.utterances.push_back(std::move(u));
    current.reset();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto end = content.find('\n', pos);
    if (end == std::string::npos) end = content.size();
    std::string_view line(content.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (pos > content.size() && line.empty()) break;

    if (line.empty()) continue;
    const char lead = line.front();
    if (lead == '*') {
      finish();
      const auto colon = line.find(':');
      std::string_view code =
          colon == std::string_view::npos ? std::string_view{} : line.substr(1, colon - 1);
      bool valid = !code.empty();
      for (char c : code) {
        if (!((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
              c == '_')) {
          valid = false;
        }
      }
      if (!valid) {
        throw ParseError("line " + std::to_string(line_no) + ": malformed speaker marker '" +
                         std::string(line.substr(0, std::min<std::size_t>(line.size(), 16))) +
                         "'");
      }
      Speaker speaker;
      if (code == "PAR") {
        speaker = Speaker::Participant;
      } else if (code == "INV") {
        speaker = Speaker::Interviewer;
      } else {
        throw ParseError("line " + std::to_string(line_no) + ": unknown speaker code '" +
                         std::string(code) + "' (expected PAR or INV)");
      }
      std::string_view rest = line.substr(colon + 1);
      if (!rest.empty() && (rest.front() == '\t' || rest.front() == ' ')) rest.remove_prefix(1);
      current = Pending{line_no, speaker, std::string(rest)};
      in_speaker_tier = true;
    } else if (lead == '@' || lead == '%') {
      finish();
      in_speaker_tier = false;
    } else if (in_speaker_tier && current) {
      // continuation of the open speaker tier
      current->raw.push_back('\n');
      current->raw.append(line);
    }
  }
  finish();
  return doc;
}

NormalizedTranscript extract_transcript(const TranscriptDoc& doc, SpeakerFilter filter) {
  NormalizedTranscript out;
  out.sample_id = doc.sample_id;
  out.speaker_filter = filter;
  for (const auto& u : doc.utterances) {
    if (filter == SpeakerFilter::ParticipantOnly && u.speaker != Speaker::Participant) continue;
    out.words.insert(out.words.end(), u.tokens.begin(), u.tokens.end());
  }
  return out;
}

}  // namespace adprompt
