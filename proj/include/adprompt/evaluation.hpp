#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adprompt/corpus.hpp"
#include "adprompt/ensemble.hpp"
#include "adprompt/records.hpp"

namespace adprompt {

// Which fused systems to report.
enum class EvaluationScheme {
  LastEpochs,     // one backend, one prompt position
  CrossPosition,  // one backend, prompt positions fused
  CrossModel,     // backends fused, one prompt position
  Combined,       // the most-fused system available per paradigm
  All,            // every row
};
EvaluationScheme parse_scheme(std::string_view s);

inline constexpr std::string_view kCvSplit = "CV";
inline constexpr std::string_view kTestSplit = "Test";

struct SummaryRow {
  std::string system;  // paradigm/backend_scheme/position_scheme
  Paradigm paradigm = Paradigm::PBFT;
  std::string position_scheme;  // "-", "before", "after", "before+after"
  std::string backend_scheme;   // "bert", "bert+roberta", ...
  std::string split;            // kCvSplit or kTestSplit
  MetricsSummary metrics;
  std::string variant;
};

// Aggregates prediction records into seed-level accuracy summaries.
//
// Each run is reduced by voting over its last `last_k` epochs. Out-of-fold
// votes of one seed are pooled into a single training-set accuracy (split
// "CV"); runs with fold == kTestFold give the test accuracy. Fusion happens
// within a seed: prompt positions first, then backends. Accuracies are then
// summarized across seeds.
std::vector<SummaryRow> evaluate_records(std::span<const PredictionRecord> records,
                                         std::span<const Sample> manifest,
                                         EvaluationScheme scheme = EvaluationScheme::All,
                                         int last_k = 3,
                                         StdConvention convention = StdConvention::Sample);

// Columns: system,paradigm,position_scheme,backend_scheme,split,mean,std,max,
// variant,n_runs. Metrics use one decimal, rounded half up.
std::string summary_to_csv(std::span<const SummaryRow> rows);
std::vector<SummaryRow> summary_from_csv(std::string_view csv);

}  // namespace adprompt
