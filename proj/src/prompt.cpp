#include "adprompt/prompt.hpp"

#include <algorithm>

#include "adprompt/error.hpp"
#include "adprompt/text.hpp"

namespace adprompt {
namespace {

TokenId require_special(const EncoderBackend& backend, SpecialToken which, std::string_view what) {
  const auto id = backend.special_token(which);
  if (!id) {
    throw ConfigurationError("backend '" + backend.name() + "' has no " + std::string(what) +
                             " token");
  }
  return *id;
}

std::vector<TokenId> tokenize_transcript(std::span<const std::string> transcript,
                                         const EncoderBackend& backend) {
  if (transcript.empty()) return {};
  return backend.tokenize(text::join(transcript));
}

}  // namespace

std::string_view paradigm_name(Paradigm p) { return p == Paradigm::TFT ? "TFT" : "PBFT"; }

Paradigm parse_paradigm(std::string_view s) {
  if (text::iequals(s, "TFT")) return Paradigm::TFT;
  if (text::iequals(s, "PBFT")) return Paradigm::PBFT;
  throw ParseError("unknown paradigm '" + std::string(s) + "' (expected tft or pbft)");
}

std::string_view position_name(PromptPosition p) {
  return p == PromptPosition::Before ? "before" : "after";
}

PromptPosition parse_position(std::string_view s) {
  if (text::iequals(s, "before")) return PromptPosition::Before;
  if (text::iequals(s, "after")) return PromptPosition::After;
  throw ParseError("unknown prompt position '" + std::string(s) + "' (expected before or after)");
}

ModelInput build_input_tft(std::span<const std::string> transcript, const EncoderBackend& backend,
                           std::size_t max_len) {
  const TokenId cls = require_special(backend, SpecialToken::Cls, "CLS");
  const TokenId sep = require_special(backend, SpecialToken::Sep, "SEP");
  if (max_len < 3) throw ConfigurationError("max_len must be at least 3");
  auto body = tokenize_transcript(transcript, backend);
  if (body.empty()) throw ValidationError("cannot build a TFT input from an empty transcript");
  body.resize(std::min(body.size(), max_len - 2));

  ModelInput input;
  input.paradigm = Paradigm::TFT;
  input.token_ids.reserve(body.size() + 2);
  input.token_ids.push_back(cls);
  input.token_ids.insert(input.token_ids.end(), body.begin(), body.end());
  input.token_ids.push_back(sep);
  return input;
}

ModelInput build_input_pbft(std::span<const std::string> transcript, const PromptSpec& spec,
                            const EncoderBackend& backend, std::size_t max_len) {
  const TokenId cls = require_special(backend, SpecialToken::Cls, "CLS");
  const TokenId sep = require_special(backend, SpecialToken::Sep, "SEP");
  const TokenId mask = require_special(backend, SpecialToken::Mask, "mask");

  const auto& tmpl = spec.template_text;
  const auto at = tmpl.find(kMaskPlaceholder);
  if (at == std::string::npos ||
      tmpl.find(kMaskPlaceholder, at + kMaskPlaceholder.size()) != std::string::npos) {
    throw ConfigurationError("prompt template must contain exactly one " +
                             std::string(kMaskPlaceholder) + ": '" + tmpl + "'");
  }
  std::vector<TokenId> prompt = backend.tokenize(std::string_view(tmpl).substr(0, at));
  const std::size_t mask_offset = prompt.size();
  prompt.push_back(mask);
  const auto suffix = backend.tokenize(std::string_view(tmpl).substr(at + kMaskPlaceholder.size()));
  prompt.insert(prompt.end(), suffix.begin(), suffix.end());
  if (std::count(prompt.begin(), prompt.end(), mask) != 1) {
    throw ConfigurationError("prompt template tokenizes to more than one mask token");
  }
  if (prompt.size() + 2 > max_len) {
    throw ConfigurationError("prompt template needs " + std::to_string(prompt.size() + 2) +
                             " tokens, more than max_len " + std::to_string(max_len));
  }

  auto body = tokenize_transcript(transcript, backend);
  body.resize(std::min(body.size(), max_len - 2 - prompt.size()));

  ModelInput input;
  input.paradigm = Paradigm::PBFT;
  auto& ids = input.token_ids;
  ids.reserve(body.size() + prompt.size() + 2);
  ids.push_back(cls);
  if (spec.position == PromptPosition::Before) {
    input.mask_index = ids.size() + mask_offset;
    ids.insert(ids.end(), prompt.begin(), prompt.end());
    ids.insert(ids.end(), body.begin(), body.end());
  } else {
    ids.insert(ids.end(), body.begin(), body.end());
    input.mask_index = ids.size() + mask_offset;
    ids.insert(ids.end(), prompt.begin(), prompt.end());
  }
  ids.push_back(sep);
  return input;
}

TokenId verbalize(Label label, const EncoderBackend& backend, const PromptSpec& spec) {
  const auto& word = spec.label_word(label);
  const auto ids = backend.tokenize(word);
  const auto unk = backend.special_token(SpecialToken::Unknown);
  if (ids.size() != 1 || (unk && ids.front() == *unk)) {
    throw ConfigurationError("label word '" + word + "' for " + std::string(label_name(label)) +
                             " maps to " + std::to_string(ids.size()) +
                             (ids.size() == 1 ? " unknown token" : " tokens") + " in backend '" +
                             backend.name() +
                             "'; supply single-token label words for this backend");
  }
  return ids.front();
}

}  // namespace adprompt
