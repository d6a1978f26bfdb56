#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>

#include "adprompt/backend.hpp"
#include "adprompt/corpus.hpp"

namespace adprompt {

enum class PromptPosition { Before, After };
std::string_view position_name(PromptPosition p);  // "before" / "after"
PromptPosition parse_position(std::string_view s);

inline constexpr std::string_view kDefaultTemplate = "The diagnosis result is [MASK]";
inline constexpr std::string_view kMaskPlaceholder = "[MASK]";
inline constexpr std::size_t kDefaultMaxLen = 512;

struct PromptSpec {
  std::string template_text{kDefaultTemplate};
  PromptPosition position = PromptPosition::After;
  // Label words indexed by Label (NonAD, AD).
  std::array<std::string, 2> verbalizer{"healthy", "alzheimer"};

  const std::string& label_word(Label label) const {
    return verbalizer[static_cast<std::size_t>(label)];
  }
};

// [CLS] transcript [SEP], truncating the transcript so the result fits in
// max_len. Throws ValidationError for an empty transcript and
// ConfigurationError when the backend has no CLS/SEP.
ModelInput build_input_tft(std::span<const std::string> transcript, const EncoderBackend& backend,
                           std::size_t max_len = kDefaultMaxLen);

// [CLS] template transcript [SEP] (Before) or [CLS] transcript template [SEP]
// (After). The template always survives truncation intact; the transcript
// loses tokens from its end.
ModelInput build_input_pbft(std::span<const std::string> transcript, const PromptSpec& spec,
                            const EncoderBackend& backend, std::size_t max_len = kDefaultMaxLen);

// Token id of the label word. Throws ConfigurationError when the word is not
// exactly one known token for this backend.
TokenId verbalize(Label label, const EncoderBackend& backend, const PromptSpec& spec);

}  // namespace adprompt
