#include "adprompt/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "adprompt/error.hpp"
#include "adprompt/text.hpp"

namespace adprompt {
namespace {

constexpr std::string_view kSchemeHeader =
    "system,paradigm,position_scheme,backend_scheme,split,mean,std,max,variant,n_runs";

// Identity of one voted system output before fusion.
struct SystemKey {
  Paradigm paradigm;
  std::string variant;
  bool test;
  std::uint64_t seed;
  std::string backend;
  std::string position;
  auto tie() const { return std::tie(paradigm, variant, test, seed, backend, position); }
  bool operator<(const SystemKey& o) const { return tie() < o.tie(); }
};

int position_rank(std::string_view p) {
  if (p == "-") return 0;
  if (p == "before") return 1;
  if (p == "after") return 2;
  return 3;
}

std::string join_plus(const std::vector<std::string>& parts) { return text::join(parts, "+"); }

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto t = text::trim(s);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ParseError("summary CSV: bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

EvaluationScheme parse_scheme(std::string_view s) {
  if (s == "last-epochs") return EvaluationScheme::LastEpochs;
  if (s == "cross-position") return EvaluationScheme::CrossPosition;
  if (s == "cross-model") return EvaluationScheme::CrossModel;
  if (s == "combined") return EvaluationScheme::Combined;
  if (s == "all") return EvaluationScheme::All;
  throw ParseError("unknown scheme '" + std::string(s) +
                   "' (expected last-epochs, cross-position, cross-model, combined or all)");
}

std::vector<SummaryRow> evaluate_records(std::span<const PredictionRecord> records,
                                         std::span<const Sample> manifest,
                                         EvaluationScheme scheme, int last_k,
                                         StdConvention convention) {
  std::map<std::string, Label> gold_train;
  std::map<std::string, Label> gold_test;
  for (const auto& s : manifest) {
    (s.split == Split::Train ? gold_train : gold_test)[s.sample_id] = s.label;
  }

  std::map<std::string, std::vector<PredictionRecord>> by_run;
  for (const auto& r : records) by_run[r.run_id].push_back(r);

  // Vote per run, then pool folds into one output per system key.
  std::map<SystemKey, VotedOutputs> systems;
  for (const auto& [run_id, recs] : by_run) {
    const auto& first = recs.front();
    for (const auto& r : recs) {
      if (r.paradigm != first.paradigm || r.backend != first.backend ||
          r.position != first.position || r.seed != first.seed || r.fold != first.fold ||
          r.variant != first.variant) {
        throw ValidationError("records of run " + run_id + " disagree on the run identity");
      }
    }
    SystemKey key{first.paradigm, first.variant, first.fold == kTestFold, first.seed,
                  first.backend, first.position};
    const auto& gold = key.test ? gold_test : gold_train;
    for (const auto& r : recs) {
      if (!gold.count(r.sample_id)) {
        throw ValidationError("run " + run_id + " predicts '" + r.sample_id +
                              "', which is not a " + (key.test ? "Test" : "Train") +
                              " sample of the manifest");
      }
    }
    auto& pooled = systems[key];
    for (const auto& [id, v] : vote_last_epochs(recs, last_k)) {
      if (!pooled.emplace(id, v).second) {
        throw ValidationError("sample '" + id + "' is predicted by more than one fold of run " +
                              run_id);
      }
    }
  }

  // Cells: (paradigm, variant) -> backends and positions present.
  struct Cell {
    std::set<std::string> backends;
    std::set<std::string> positions;
    std::set<std::uint64_t> seeds;
  };
  std::map<std::pair<Paradigm, std::string>, Cell> cells;
  for (const auto& [key, out] : systems) {
    auto& c = cells[{key.paradigm, key.variant}];
    c.backends.insert(key.backend);
    c.positions.insert(key.position);
    c.seeds.insert(key.seed);
  }

  std::vector<SummaryRow> rows;
  for (const auto& [cell_key, cell] : cells) {
    const auto& [paradigm, variant] = cell_key;
    std::vector<std::vector<std::string>> backend_options;
    for (const auto& b : cell.backends) backend_options.push_back({b});
    if (cell.backends.size() > 1) {
      backend_options.emplace_back(cell.backends.begin(), cell.backends.end());
    }
    std::vector<std::string> positions(cell.positions.begin(), cell.positions.end());
    std::sort(positions.begin(), positions.end(), [](const auto& a, const auto& b) {
      return position_rank(a) < position_rank(b);
    });
    std::vector<std::vector<std::string>> position_options;
    for (const auto& p : positions) position_options.push_back({p});
    if (positions.size() > 1) position_options.push_back(positions);

    const bool many_backends = cell.backends.size() > 1;
    const bool many_positions = positions.size() > 1;
    for (const auto& backs : backend_options) {
      for (const auto& poss : position_options) {
        const bool fused_b = backs.size() > 1;
        const bool fused_p = poss.size() > 1;
        bool wanted = true;
        switch (scheme) {
          case EvaluationScheme::LastEpochs:
            wanted = !fused_b && !fused_p;
            break;
          case EvaluationScheme::CrossPosition:
            wanted = !fused_b && fused_p;
            break;
          case EvaluationScheme::CrossModel:
            wanted = fused_b && !fused_p;
            break;
          case EvaluationScheme::Combined:
            wanted = fused_b == many_backends && fused_p == many_positions;
            break;
          case EvaluationScheme::All:
            break;
        }
        if (!wanted) continue;

        for (const bool test : {false, true}) {
          const auto& gold = test ? gold_test : gold_train;
          std::vector<double> accs;
          bool any = false;
          for (const auto seed : cell.seeds) {
            std::vector<VotedOutputs> per_backend;
            bool complete = true;
            for (const auto& b : backs) {
              std::vector<VotedOutputs> per_position;
              for (const auto& p : poss) {
                const auto it = systems.find(SystemKey{paradigm, variant, test, seed, b, p});
                if (it == systems.end()) {
                  complete = false;
                  break;
                }
                per_position.push_back(it->second);
              }
              if (!complete) break;
              per_backend.push_back(per_position.size() == 1 ? per_position.front()
                                                             : fuse_systems(per_position));
            }
            if (!complete) continue;
            any = true;
            const auto fused =
                per_backend.size() == 1 ? per_backend.front() : fuse_systems(per_backend);
            accs.push_back(accuracy(fused, gold));
          }
          if (!any) continue;
          SummaryRow row;
          row.paradigm = paradigm;
          row.backend_scheme = join_plus(backs);
          row.position_scheme = join_plus(poss);
          row.system = std::string(paradigm_name(paradigm)) + "/" + row.backend_scheme + "/" +
                       row.position_scheme;
          row.split = std::string(test ? kTestSplit : kCvSplit);
          row.variant = variant;
          row.metrics = summarize(accs, convention);
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

std::string summary_to_csv(std::span<const SummaryRow> rows) {
  std::ostringstream out;
  out << kSchemeHeader << '\n';
  for (const auto& r : rows) {
    out << text::csv_field(r.system) << ',' << paradigm_name(r.paradigm) << ','
        << text::csv_field(r.position_scheme) << ',' << text::csv_field(r.backend_scheme) << ','
        << r.split << ',' << format_fixed1(r.metrics.mean) << ',' << format_fixed1(r.metrics.std)
        << ',' << format_fixed1(r.metrics.max) << ',' << text::csv_field(r.variant) << ','
        << r.metrics.n_runs << '\n';
  }
  return out.str();
}

std::vector<SummaryRow> summary_from_csv(std::string_view csv) {
  const auto rows = text::parse_csv(csv);
  if (rows.empty() || text::join(rows.front(), ",") != kSchemeHeader) {
    throw ParseError("summary CSV header must be '" + std::string(kSchemeHeader) + "'");
  }
  std::vector<SummaryRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != 10) {
      throw ParseError("summary CSV row " + std::to_string(i + 1) + ": expected 10 fields");
    }
    SummaryRow r;
    r.system = f[0];
    r.paradigm = parse_paradigm(f[1]);
    r.position_scheme = f[2];
    r.backend_scheme = f[3];
    r.split = f[4];
    r.metrics.mean = parse_double(f[5], "mean");
    r.metrics.std = parse_double(f[6], "std");
    r.metrics.max = parse_double(f[7], "max");
    r.variant = f[8];
    r.metrics.n_runs = static_cast<std::size_t>(parse_double(f[9], "n_runs"));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace adprompt
