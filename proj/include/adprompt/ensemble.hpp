#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "adprompt/corpus.hpp"
#include "adprompt/records.hpp"

namespace adprompt {

struct Vote {
  Label label = Label::AD;
  double p_ad = 0.5;
};

struct VoteMember {
  std::string sample_id;
  Label pred = Label::AD;
  double p_ad = 0.5;
};

// Majority label of the members. A tie goes to AD when the mean p_ad is at
// least 0.5 (exact 0.5 included), otherwise NonAD. The fused p_ad is the mean
// member p_ad, computed from the multiset of values so that member order and
// uniform duplication cannot change it.
// Throws ValidationError for an empty group or mixed sample ids.
Vote vote(std::span<const VoteMember> group);

using VotedOutputs = std::map<std::string, Vote>;  // sample_id -> vote

// Per-sample vote over the last `last_k` epochs present in the records of one
// run (all epochs when fewer are present).
VotedOutputs vote_last_epochs(std::span<const PredictionRecord> run_records, int last_k = 3);

// Per-sample vote across systems. Every system must cover the same sample
// set; otherwise ValidationError lists the ids missing from some system.
VotedOutputs fuse_systems(std::span<const VotedOutputs> systems);

// Percentage of gold samples whose voted label is correct. Every gold sample
// must have a prediction.
double accuracy(const VotedOutputs& predictions, const std::map<std::string, Label>& gold);
double accuracy(const std::map<std::string, Label>& predictions,
                const std::map<std::string, Label>& gold);

enum class StdConvention { Sample, Population };

struct MetricsSummary {
  double mean = 0.0;
  double std = 0.0;
  double max = 0.0;
  std::size_t n_runs = 0;
};

// Mean, standard deviation (n-1 denominator by default; 0 for a single
// value), and maximum. Values are summed in sorted order.
MetricsSummary summarize(std::span<const double> accuracies,
                         StdConvention convention = StdConvention::Sample);

// Half-up rounding to `decimals` places for display.
double round_half_up(double value, int decimals = 1);
std::string format_fixed1(double value);

}  // namespace adprompt
