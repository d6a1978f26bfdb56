#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "adprompt/ensemble.hpp"
#include "adprompt/error.hpp"
#include "adprompt/evaluation.hpp"
#include "adprompt/random.hpp"
#include "adprompt/report.hpp"
#include "oracles/vote_oracle.hpp"

using namespace adprompt;

namespace {

VoteMember m(Label pred, double p, std::string id = "s") { return {std::move(id), pred, p}; }

constexpr Label AD = Label::AD;
constexpr Label NON = Label::NonAD;

VotedOutputs outputs(std::initializer_list<std::tuple<const char*, Label, double>> rows) {
  VotedOutputs out;
  for (const auto& [id, label, p] : rows) out[id] = Vote{label, p};
  return out;
}

}  // namespace

TEST_CASE("vote examples") {
  std::vector<VoteMember> g = {m(AD, 0.9), m(AD, 0.7), m(NON, 0.1)};
  CHECK(vote(g).label == AD);
  g = {m(AD, 0.9), m(NON, 0.4)};
  CHECK(vote(g).label == AD);
  CHECK(vote(g).p_ad == doctest::Approx(0.65));
  g = {m(AD, 0.6), m(NON, 0.3)};
  CHECK(vote(g).label == NON);
  g = {m(AD, 0.8), m(NON, 0.2)};  // mean exactly 0.5
  CHECK(vote(g).label == AD);
  g = {m(NON, 0.2)};
  CHECK(vote(g).label == NON);
  CHECK(vote(g).p_ad == 0.2);

  CHECK_THROWS_AS(vote(std::vector<VoteMember>{}), ValidationError);
  g = {m(AD, 0.9, "a"), m(AD, 0.9, "b")};
  CHECK_THROWS_AS(vote(g), ValidationError);
}

TEST_CASE("vote agrees with the exact oracle and its properties") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = 1 + uniform_index(rng, 8);
    std::vector<oracle::GridMember> grid;
    std::vector<VoteMember> group;
    for (std::uint64_t i = 0; i < n; ++i) {
      const bool ad = uniform_index(rng, 2) == 1;
      const int t = static_cast<int>(uniform_index(rng, 21));
      grid.push_back({ad, t});
      group.push_back(m(ad ? AD : NON, t / 20.0));
    }
    const auto v = vote(group);
    CHECK((v.label == AD) == oracle::vote_is_ad(grid));

    auto shuffled = group;
    deterministic_shuffle(std::span<VoteMember>(shuffled), rng);
    const auto vs = vote(shuffled);
    CHECK(vs.label == v.label);
    CHECK(vs.p_ad == v.p_ad);

    auto doubled = group;
    doubled.insert(doubled.end(), group.begin(), group.end());
    CHECK(vote(doubled).label == v.label);
    CHECK(vote(doubled).p_ad == v.p_ad);

    CHECK(vote(group).label == v.label);

    auto unanimous = group;
    const Label same = uniform_index(rng, 2) ? AD : NON;
    for (auto& u : unanimous) u.pred = same;
    CHECK(vote(unanimous).label == same);
  }
}

TEST_CASE("vote_last_epochs uses the last k epochs of a run") {
  std::vector<PredictionRecord> recs;
  auto add = [&](int epoch, const char* id, double p) {
    PredictionRecord r;
    r.run_id = "r";
    r.epoch = epoch;
    r.sample_id = id;
    r.p_ad = p;
    r.pred = p >= 0.5 ? AD : NON;
    recs.push_back(r);
  };
  for (int e = 1; e <= 20; ++e) add(e, "a", e >= 18 ? 0.2 : 0.9);
  for (int e = 1; e <= 20; ++e) add(e, "b", e == 19 ? 0.1 : 0.8);
  const auto out = vote_last_epochs(recs, 3);
  CHECK(out.at("a").label == NON);
  CHECK(out.at("a").p_ad == doctest::Approx(0.2));
  CHECK(out.at("b").label == AD);
  // Fewer epochs than k: all of them.
  std::vector<PredictionRecord> two(recs.begin(), recs.begin() + 2);
  CHECK(vote_last_epochs(two, 3).at("a").label == AD);
}

TEST_CASE("fuse_systems examples") {
  const auto a = outputs({{"x", AD, 0.9}, {"y", NON, 0.2}});
  std::vector<VotedOutputs> same = {a, a};
  const auto fused = fuse_systems(same);
  CHECK(fused.at("x").label == AD);
  CHECK(fused.at("y").label == NON);

  std::vector<VotedOutputs> split = {outputs({{"x", AD, 0.8}, {"y", AD, 0.8}}),
                                     outputs({{"x", NON, 0.3}, {"y", NON, 0.3}})};
  for (const auto& [id, v] : fuse_systems(split)) CHECK(v.label == AD);

  // Five samples, three systems; majorities worked out by hand.
  std::vector<VotedOutputs> three = {
      outputs({{"1", AD, .9}, {"2", AD, .6}, {"3", NON, .4}, {"4", NON, .1}, {"5", AD, .7}}),
      outputs({{"1", AD, .8}, {"2", NON, .3}, {"3", NON, .2}, {"4", AD, .6}, {"5", NON, .4}}),
      outputs({{"1", NON, .3}, {"2", NON, .1}, {"3", AD, .9}, {"4", AD, .7}, {"5", NON, .2}})};
  const auto f3 = fuse_systems(three);
  CHECK(f3.at("1").label == AD);
  CHECK(f3.at("2").label == NON);
  CHECK(f3.at("3").label == NON);
  CHECK(f3.at("4").label == AD);
  CHECK(f3.at("5").label == NON);

  std::vector<VotedOutputs> uneven = {outputs({{"x", AD, .9}, {"y", AD, .9}}),
                                      outputs({{"x", AD, .9}, {"z", AD, .9}})};
  try {
    fuse_systems(uneven);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("y") != std::string::npos);
    CHECK(msg.find("z") != std::string::npos);
  }
}

TEST_CASE("accuracy and display rounding") {
  std::map<std::string, Label> gold, pred;
  for (int i = 0; i < 48; ++i) {
    const auto id = "s" + std::to_string(i);
    gold[id] = i % 2 ? AD : NON;
    pred[id] = i < 2 ? (i % 2 ? NON : AD) : gold[id];
  }
  const double acc = accuracy(pred, gold);
  CHECK(acc == doctest::Approx(100.0 * 46 / 48));
  CHECK(format_fixed1(acc) == "95.8");
  CHECK(accuracy(gold, gold) == 100.0);
  std::map<std::string, Label> wrong;
  for (const auto& [id, l] : gold) wrong[id] = l == AD ? NON : AD;
  CHECK(accuracy(wrong, gold) == 0.0);
  pred.erase("s5");
  CHECK_THROWS_AS(accuracy(pred, gold), ValidationError);

  CHECK(format_fixed1(87.45) == "87.5");
  CHECK(format_fixed1(87.44) == "87.4");
  CHECK(format_fixed1(0.05) == "0.1");
  CHECK(format_fixed1(100.0) == "100.0");
  CHECK(round_half_up(2.25, 1) == doctest::Approx(2.3));
}

TEST_CASE("summarize") {
  auto s = summarize(std::vector<double>{80, 80, 80});
  CHECK(s.mean == 80.0);
  CHECK(s.std == 0.0);
  CHECK(s.max == 80.0);
  CHECK(s.n_runs == 3);
  s = summarize(std::vector<double>{70, 90});
  CHECK(s.mean == 80.0);
  CHECK(std::abs(s.std - 10.0 * std::sqrt(2.0)) < 1e-12);
  CHECK(format_fixed1(s.std) == "14.1");
  CHECK(s.max == 90.0);
  CHECK(summarize(std::vector<double>{70, 90}, StdConvention::Population).std == 10.0);
  CHECK(summarize(std::vector<double>{55.5}).std == 0.0);

  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v;
    for (int i = 0; i < 15; ++i) v.push_back(100.0 * static_cast<double>(uniform_index(rng, 49)) / 48.0);
    const auto a = summarize(v);
    deterministic_shuffle(std::span<double>(v), rng);
    const auto b = summarize(v);
    CHECK(a.mean == b.mean);
    CHECK(a.std == b.std);
    CHECK(a.max == b.max);
    CHECK(a.max >= a.mean);
    CHECK(a.std >= 0.0);
    CHECK(a.mean >= 0.0);
    CHECK(a.mean <= 100.0);
  }
}

namespace {

struct Fixture {
  std::vector<Sample> manifest;
  std::vector<PredictionRecord> records;

  Fixture() {
    const std::pair<const char*, Label> train[] = {{"T1", AD}, {"T2", NON}, {"T3", AD}, {"T4", NON}};
    for (const auto& [id, l] : train) manifest.push_back({id, l, Split::Train, "x", {}, {}});
    manifest.push_back({"E1", AD, Split::Test, "x", {}, {}});
    manifest.push_back({"E2", NON, Split::Test, "x", {}, {}});
  }

  // Epoch 1 carries the opposite prediction so it must be outvoted by 2..4.
  void add(std::string backend, const char* position, std::uint64_t seed, int fold,
           const char* id, std::array<double, 3> last) {
    RunIdentity ident;
    ident.paradigm = Paradigm::PBFT;
    ident.backend = backend;
    ident.position = parse_position(position);
    ident.seed = seed;
    ident.fold = fold;
    ident.variant = "pauses";
    const std::array<double, 4> ps = {1.0 - last[0], last[0], last[1], last[2]};
    for (int e = 0; e < 4; ++e) {
      PredictionRecord r;
      r.run_id = ident.run_id();
      r.paradigm = ident.paradigm;
      r.backend = backend;
      r.position = position;
      r.seed = seed;
      r.fold = fold;
      r.epoch = e + 1;
      r.sample_id = id;
      r.p_ad = ps[static_cast<std::size_t>(e)];
      r.pred = r.p_ad >= 0.5 ? AD : NON;
      r.variant = "pauses";
      records.push_back(r);
    }
  }

  void add_seed(std::string backend, const char* pos, std::uint64_t seed,
                std::map<std::string, std::array<double, 3>> p) {
    add(backend, pos, seed, 0, "T1", p["T1"]);
    add(backend, pos, seed, 0, "T2", p["T2"]);
    add(backend, pos, seed, 1, "T3", p["T3"]);
    add(backend, pos, seed, 1, "T4", p["T4"]);
    add(backend, pos, seed, kTestFold, "E1", p["E1"]);
    add(backend, pos, seed, kTestFold, "E2", p["E2"]);
  }
};

const std::map<std::string, std::array<double, 3>> kPerfect = {
    {"T1", {.9, .9, .9}}, {"T2", {.1, .1, .1}}, {"T3", {.9, .9, .9}},
    {"T4", {.1, .1, .1}}, {"E1", {.9, .9, .9}}, {"E2", {.1, .1, .1}}};

const SummaryRow& find_row(const std::vector<SummaryRow>& rows, const std::string& system,
                           std::string_view split) {
  for (const auto& r : rows) {
    if (r.system == system && r.split == split) return r;
  }
  FAIL("row not found: " << system << " " << split);
  return rows.front();
}

}  // namespace

TEST_CASE("evaluate_records on a hand-computed fixture") {
  Fixture fx;
  // Seed 0. before: T2 wrong -> CV 75, test 100.
  fx.add_seed("x", "before", 0,
              {{"T1", {.9, .9, .9}}, {"T2", {.8, .8, .8}}, {"T3", {.9, .4, .8}},
               {"T4", {.1, .1, .1}}, {"E1", {.9, .9, .9}}, {"E2", {.1, .1, .1}}});
  // after: T3 wrong -> CV 75; E1 wrong -> test 50.
  fx.add_seed("x", "after", 0,
              {{"T1", {.9, .9, .9}}, {"T2", {.2, .2, .2}}, {"T3", {.3, .3, .3}},
               {"T4", {.1, .1, .1}}, {"E1", {.4, .4, .4}}, {"E2", {.1, .1, .1}}});
  // Fused: T2 ties at mean 0.5 -> AD (wrong); T3 mean .6 -> AD; E1 mean .65 -> AD.
  fx.add_seed("x", "before", 1, kPerfect);
  fx.add_seed("x", "after", 1, kPerfect);

  const auto rows = evaluate_records(fx.records, fx.manifest);
  CHECK(rows.size() == 6);
  const auto& b_cv = find_row(rows, "PBFT/x/before", kCvSplit);
  CHECK(b_cv.metrics.mean == 87.5);
  CHECK(b_cv.metrics.std == doctest::Approx(25.0 / std::sqrt(2.0)));
  CHECK(b_cv.metrics.max == 100.0);
  CHECK(b_cv.metrics.n_runs == 2);
  CHECK(b_cv.variant == "pauses");
  CHECK(find_row(rows, "PBFT/x/before", kTestSplit).metrics.mean == 100.0);
  CHECK(find_row(rows, "PBFT/x/after", kCvSplit).metrics.mean == 87.5);
  const auto& a_test = find_row(rows, "PBFT/x/after", kTestSplit);
  CHECK(a_test.metrics.mean == 75.0);
  CHECK(a_test.metrics.std == doctest::Approx(50.0 / std::sqrt(2.0)));
  CHECK(find_row(rows, "PBFT/x/before+after", kCvSplit).metrics.mean == 87.5);
  const auto& f_test = find_row(rows, "PBFT/x/before+after", kTestSplit);
  CHECK(f_test.metrics.mean == 100.0);
  CHECK(f_test.position_scheme == "before+after");
  CHECK(f_test.backend_scheme == "x");

  const auto combined = evaluate_records(fx.records, fx.manifest, EvaluationScheme::Combined);
  CHECK(combined.size() == 2);
  for (const auto& r : combined) CHECK(r.position_scheme == "before+after");
  CHECK(evaluate_records(fx.records, fx.manifest, EvaluationScheme::LastEpochs).size() == 4);
  CHECK(evaluate_records(fx.records, fx.manifest, EvaluationScheme::CrossModel).empty());

  // Last one epoch only: T3 before at epoch 4 is .8 -> still right, T2 before .8 -> wrong.
  const auto last1 = evaluate_records(fx.records, fx.manifest, EvaluationScheme::LastEpochs, 1);
  CHECK(find_row(last1, "PBFT/x/before", kCvSplit).metrics.mean == 87.5);
}

TEST_CASE("evaluate_records fuses backends after positions") {
  Fixture fx;
  fx.add_seed("a", "before", 0, kPerfect);
  fx.add_seed("a", "after", 0, kPerfect);
  auto flipped = kPerfect;
  for (auto& [id, p] : flipped) p = {1 - p[0], 1 - p[1], 1 - p[2]};
  fx.add_seed("b", "before", 0, flipped);
  fx.add_seed("b", "after", 0, flipped);
  const auto rows = evaluate_records(fx.records, fx.manifest, EvaluationScheme::All);
  // 2 backends + fused, times 2 positions + fused, times 2 splits.
  CHECK(rows.size() == 18);
  CHECK(find_row(rows, "PBFT/a/before", kCvSplit).metrics.mean == 100.0);
  CHECK(find_row(rows, "PBFT/b/before", kCvSplit).metrics.mean == 0.0);
  // a and b disagree everywhere with mean p_ad 0.5 -> AD: half right.
  CHECK(find_row(rows, "PBFT/a+b/before+after", kCvSplit).metrics.mean == 50.0);
  CHECK(find_row(rows, "PBFT/a+b/before+after", kTestSplit).metrics.mean == 50.0);
  const auto model = evaluate_records(fx.records, fx.manifest, EvaluationScheme::CrossModel);
  CHECK(model.size() == 4);
  for (const auto& r : model) CHECK(r.backend_scheme == "a+b");
}

TEST_CASE("evaluate_records rejects inconsistent records") {
  Fixture fx;
  fx.add_seed("x", "before", 0, kPerfect);
  auto bad = fx.records;
  bad[1].seed = 9;
  CHECK_THROWS_AS(evaluate_records(bad, fx.manifest), ValidationError);
  auto missing_gold = fx.manifest;
  missing_gold.pop_back();
  CHECK_THROWS_AS(evaluate_records(fx.records, missing_gold), ValidationError);
  CHECK(parse_scheme("combined") == EvaluationScheme::Combined);
  CHECK_THROWS_AS(parse_scheme("everything"), ParseError);
}

TEST_CASE("summary CSV round-trips") {
  Fixture fx;
  fx.add_seed("x", "before", 0, kPerfect);
  fx.add_seed("x", "before", 1, kPerfect);
  const auto rows = evaluate_records(fx.records, fx.manifest);
  const auto csv = summary_to_csv(rows);
  CHECK(csv.rfind("system,paradigm,position_scheme,backend_scheme,split,mean,std,max,variant,n_runs\n", 0) == 0);
  CHECK(csv.find("PBFT/x/before,PBFT,before,x,CV,100.0,0.0,100.0,pauses,2") != std::string::npos);
  CHECK(summary_to_csv(summary_from_csv(csv)) == csv);
  CHECK_THROWS_AS(summary_from_csv("a,b\n"), ParseError);
}

namespace {

SummaryRow row(const char* backend, const char* pos, const char* split, const char* variant,
               double mean, double std, double max) {
  SummaryRow r;
  r.paradigm = Paradigm::PBFT;
  r.backend_scheme = backend;
  r.position_scheme = pos;
  r.system = std::string("PBFT/") + backend + "/" + pos;
  r.split = split;
  r.variant = variant;
  r.metrics = {mean, std, max, 15};
  return r;
}

}  // namespace

TEST_CASE("render_report tables") {
  const std::vector<SummaryRow> one = {row("bert", "before", "CV", "pauses", 81.63, 2.0, 85.0),
                                       row("bert", "before", "Test", "pauses", 80.0, 1.0, 83.3)};
  auto r = render_report(one);
  CHECK(r.warnings.empty());
  CHECK(r.text.find("Paradigm") != std::string::npos);
  CHECK(r.text.find("81.6") != std::string::npos);
  CHECK(r.text.find("83.3") != std::string::npos);
  CHECK(r.csv.find("PBFT,bert,before,pauses,81.6,2.0,85.0,80.0,1.0,83.3") != std::string::npos);

  std::vector<SummaryRow> two = one;
  two.push_back(row("bert", "before", "CV", "subjects", 82.44, 2.0, 85.0));
  two.push_back(row("bert", "before", "Test", "subjects", 79.0, 1.0, 83.3));
  r = render_report(two);
  CHECK(r.text.find("Variants: subjects / pauses") != std::string::npos);
  CHECK(r.text.find("82.4/81.6") != std::string::npos);
  r = render_report(two, {"pauses", "subjects"});
  CHECK(r.text.find("81.6/82.4") != std::string::npos);

  two.pop_back();
  r = render_report(two);
  CHECK(r.warnings.size() == 1);
  CHECK(r.text.find("-/80.0") != std::string::npos);

  r = render_report(std::vector<SummaryRow>{});
  CHECK(r.warnings == std::vector<std::string>{"no summaries to report"});
  CHECK(r.text.find("Paradigm") != std::string::npos);
}
