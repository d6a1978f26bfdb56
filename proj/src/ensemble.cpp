#include "adprompt/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "adprompt/error.hpp"
#include "adprompt/text.hpp"

namespace adprompt {
namespace {

// Mean over a multiset, reduced by the gcd of the multiplicities first so that
// duplicating every member gives bit-identical arithmetic.
double multiset_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<std::pair<double, std::size_t>> runs;
  for (double v : values) {
    if (!runs.empty() && runs.back().first == v) {
      ++runs.back().second;
    } else {
      runs.emplace_back(v, 1);
    }
  }
  std::size_t g = 0;
  for (const auto& r : runs) g = std::gcd(g, r.second);
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& [v, c] : runs) {
    sum += v * static_cast<double>(c / g);
    n += c / g;
  }
  return sum / static_cast<double>(n);
}

}  // namespace

Vote vote(std::span<const VoteMember> group) {
  if (group.empty()) throw ValidationError("cannot vote over an empty group");
  std::size_t ad = 0;
  std::vector<double> probs;
  probs.reserve(group.size());
  for (const auto& m : group) {
    if (m.sample_id != group.front().sample_id) {
      throw ValidationError("vote group mixes samples '" + group.front().sample_id + "' and '" +
                            m.sample_id + "'");
    }
    if (m.pred == Label::AD) ++ad;
    probs.push_back(m.p_ad);
  }
  const std::size_t non_ad = group.size() - ad;
  Vote v;
  v.p_ad = multiset_mean(std::move(probs));
  if (ad != non_ad) {
    v.label = ad > non_ad ? Label::AD : Label::NonAD;
  } else {
    v.label = v.p_ad >= 0.5 ? Label::AD : Label::NonAD;
  }
  return v;
}

VotedOutputs vote_last_epochs(std::span<const PredictionRecord> run_records, int last_k) {
  if (last_k <= 0) throw ValidationError("last_k must be positive");
  std::set<int> epochs;
  for (const auto& r : run_records) epochs.insert(r.epoch);
  std::set<int> kept;
  for (auto it = epochs.rbegin(); it != epochs.rend() && static_cast<int>(kept.size()) < last_k;
       ++it) {
    kept.insert(*it);
  }
  std::map<std::string, std::vector<VoteMember>> groups;
  for (const auto& r : run_records) {
    if (kept.contains(r.epoch)) groups[r.sample_id].push_back({r.sample_id, r.pred, r.p_ad});
  }
  VotedOutputs out;
  for (const auto& [id, members] : groups) out[id] = vote(members);
  return out;
}

VotedOutputs fuse_systems(std::span<const VotedOutputs> systems) {
  if (systems.empty()) throw ValidationError("no systems to fuse");
  std::set<std::string> all;
  for (const auto& s : systems) {
    for (const auto& [id, v] : s) all.insert(id);
  }
  std::vector<std::string> missing;
  for (const auto& id : all) {
    for (const auto& s : systems) {
      if (!s.contains(id)) {
        missing.push_back(id);
        break;
      }
    }
  }
  if (!missing.empty()) {
    throw ValidationError("systems cover different samples; missing somewhere: " +
                          text::join(missing, ", "));
  }
  VotedOutputs out;
  for (const auto& id : all) {
    std::vector<VoteMember> members;
    members.reserve(systems.size());
    for (const auto& s : systems) {
      const auto& v = s.at(id);
      members.push_back({id, v.label, v.p_ad});
    }
    out[id] = vote(members);
  }
  return out;
}

double accuracy(const std::map<std::string, Label>& predictions,
                const std::map<std::string, Label>& gold) {
  if (gold.empty()) throw ValidationError("accuracy over an empty gold set");
  std::vector<std::string> missing;
  std::size_t correct = 0;
  for (const auto& [id, label] : gold) {
    const auto it = predictions.find(id);
    if (it == predictions.end()) {
      missing.push_back(id);
    } else if (it->second == label) {
      ++correct;
    }
  }
  if (!missing.empty()) {
    throw ValidationError("no prediction for: " + text::join(missing, ", "));
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(gold.size());
}

double accuracy(const VotedOutputs& predictions, const std::map<std::string, Label>& gold) {
  std::map<std::string, Label> labels;
  for (const auto& [id, v] : predictions) labels[id] = v.label;
  return accuracy(labels, gold);
}

MetricsSummary summarize(std::span<const double> accuracies, StdConvention convention) {
  if (accuracies.empty()) throw ValidationError("cannot summarize an empty list");
  std::vector<double> v(accuracies.begin(), accuracies.end());
  std::sort(v.begin(), v.end());
  MetricsSummary s;
  s.n_runs = v.size();
  const double n = static_cast<double>(v.size());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  s.max = v.back();
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / (convention == StdConvention::Sample ? n - 1.0 : n));
  }
  return s;
}

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // The nudge lets decimal halves stored slightly low (87.45 -> 87.4499...)
  // still round up.
  return std::floor(value * scale + 0.5 + 1e-9) / scale;
}

std::string format_fixed1(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", round_half_up(value, 1));
  return buf;
}

}  // namespace adprompt
