#pragma once

#include <span>
#include <string>
#include <vector>

#include "adprompt/evaluation.hpp"

namespace adprompt {

// Canonical left-to-right order of transcript variants inside a cell.
inline constexpr std::string_view kVariantOrder[] = {"subjects", "pauses", "interviewer", "asr"};

struct RenderedReport {
  std::string text;  // aligned table
  std::string csv;   // one row per (system, variant)
  std::vector<std::string> warnings;
};

// One table row per (paradigm, backend scheme, position scheme) with CV and
// test mean/std/max columns. Each cell holds the variants' values joined by
// "/" in the order of `variants` (defaults to the variants present, in
// canonical order). Missing values render as "-" and add a warning.
RenderedReport render_report(std::span<const SummaryRow> rows,
                             std::vector<std::string> variants = {});

}  // namespace adprompt
