#include <doctest.h>

#include <map>
#include <random>
#include <string>
#include <vector>

#include "adprompt/error.hpp"
#include "adprompt/random.hpp"
#include "adprompt/wer.hpp"
#include "oracles/wer_oracle.hpp"

using namespace adprompt;
using Words = std::vector<std::string>;

namespace {

Words random_words(std::mt19937_64& rng, std::size_t max_len, std::size_t alphabet,
                   std::size_t min_len = 0) {
  const auto len = min_len + uniform_index(rng, max_len - min_len + 1);
  Words w;
  for (std::size_t i = 0; i < len; ++i) {
    w.push_back(std::string(1, static_cast<char>('a' + uniform_index(rng, alphabet))));
  }
  return w;
}

Sample sample(std::string id, Label label, Split split) {
  Sample s;
  s.sample_id = std::move(id);
  s.label = label;
  s.split = split;
  return s;
}

}  // namespace

TEST_CASE("normalize_for_wer lowercases and strips punctuation") {
  CHECK(normalize_for_wer("The Boy, is FALLING!") == Words{"the", "boy", "is", "falling"});
  CHECK(normalize_for_wer("it's a cookie-jar") == Words{"its", "a", "cookiejar"});
  CHECK(normalize_for_wer("it's a cookie-jar", PunctuationMode::SplitOnSpace) ==
        Words{"it", "s", "a", "cookie", "jar"});
  CHECK(normalize_for_wer("  ... ,, ").empty());
}

TEST_CASE("word_error_rate on worked examples") {
  const Words ref = {"the", "cat", "sat"};
  auto r = word_error_rate(ref, ref);
  CHECK(r.wer == 0.0);
  CHECK(r.errors() == 0);

  r = word_error_rate(ref, Words{"the", "cat"});
  CHECK(r.deletions == 1);
  CHECK(r.wer == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  r = word_error_rate(Words{"a"}, Words{"b", "c"});
  CHECK(r.substitutions == 1);
  CHECK(r.insertions == 1);
  CHECK(r.wer == 2.0);

  r = word_error_rate(ref, Words{});
  CHECK(r.deletions == 3);
  CHECK(r.wer == 1.0);

  CHECK_THROWS_AS(word_error_rate(Words{}, Words{"a"}), ValidationError);
}

TEST_CASE("ties resolve toward substitution") {
  // ref [a b], hyp [b c]: S=2 or D=1+I=1 are both cost 2.
  const auto r = word_error_rate(Words{"a", "b"}, Words{"b", "c"});
  CHECK(r.errors() == 2);
  CHECK(r.substitutions == 2);
  CHECK(r.deletions == 0);
  CHECK(r.insertions == 0);
}

TEST_CASE("word_error_rate matches the exhaustive oracle") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto alphabet = 1 + uniform_index(rng, 5);
    const auto ref = random_words(rng, 12, alphabet, 1);
    const auto hyp = random_words(rng, 12, alphabet);
    const auto got = word_error_rate(ref, hyp);
    const auto want = oracle::EditOracle(ref, hyp).solve();
    CHECK(got.errors() == want.cost);
    CHECK(want.optimal.count({got.substitutions, got.deletions, got.insertions}) == 1);
    CHECK(got.reference_length == ref.size());
    CHECK(got.wer == static_cast<double>(want.cost) / static_cast<double>(ref.size()));
    CHECK(hyp.size() == ref.size() - got.deletions + got.insertions);
  }
}

TEST_CASE("wer properties on random inputs") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    const auto x = random_words(rng, 12, 4, 1);
    CHECK(word_error_rate(x, x).wer == 0.0);
    auto y = random_words(rng, 12, 4);
    const auto before = word_error_rate(x, y).errors();
    y.push_back(std::string(1, static_cast<char>('a' + uniform_index(rng, 4))));
    const auto after = word_error_rate(x, y).errors();
    CHECK((after + 1 >= before && after <= before + 1));
  }
}

TEST_CASE("group_wer averages per-sample rates") {
  const std::vector<Sample> manifest = {sample("h1", Label::NonAD, Split::Train),
                                        sample("h2", Label::NonAD, Split::Train)};
  const Words ref5 = {"a", "b", "c", "d", "e"};
  const std::map<std::string, Words> refs = {{"h1", ref5}, {"h2", {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"}}};
  // h1: 1/5 = 0.2, h2: 4/10 = 0.4
  const std::map<std::string, Words> hyps = {
      {"h1", {"a", "b", "c", "d", "x"}},
      {"h2", {"a", "b", "c", "d", "e", "f", "w", "x", "y", "z"}}};
  const auto report = group_wer(manifest, refs, hyps);
  CHECK(report[WerGroup::Healthy].n == 2);
  CHECK(report[WerGroup::Healthy].mean_wer_pct == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(report[WerGroup::All].mean_wer_pct == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(report[WerGroup::TrainingSet].mean_wer_pct == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(report[WerGroup::Alzheimer].n == 0);
  CHECK(report[WerGroup::TestSet].n == 0);

  const auto pooled = group_wer(manifest, refs, hyps, WerAveraging::Pooled);
  CHECK(pooled[WerGroup::All].mean_wer_pct == doctest::Approx(100.0 * 5.0 / 15.0).epsilon(1e-12));

  const auto csv = report.to_csv();
  CHECK(csv.rfind("group,n,mean_wer_pct\n", 0) == 0);
  CHECK(csv.find("Healthy,2,30.00") != std::string::npos);
}

TEST_CASE("group_wer with a perfect single sample reports zero in its groups") {
  const std::vector<Sample> manifest = {sample("a1", Label::AD, Split::Test)};
  const std::map<std::string, Words> refs = {{"a1", {"the", "boy"}}};
  const auto report = group_wer(manifest, refs, refs);
  CHECK(report[WerGroup::All].mean_wer_pct == 0.0);
  CHECK(report[WerGroup::Alzheimer].mean_wer_pct == 0.0);
  CHECK(report[WerGroup::TestSet].mean_wer_pct == 0.0);
  CHECK(report[WerGroup::Healthy].n == 0);
}

TEST_CASE("group_wer lists missing hypotheses") {
  const std::vector<Sample> manifest = {sample("a1", Label::AD, Split::Test),
                                        sample("a2", Label::AD, Split::Test)};
  const std::map<std::string, Words> refs = {{"a1", {"x"}}, {"a2", {"y"}}};
  const std::map<std::string, Words> hyps = {{"a1", {"x"}}};
  try {
    group_wer(manifest, refs, hyps);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("a2") != std::string::npos);
  }
}

TEST_CASE("the All group mean is the n-weighted mean of the label groups") {
  std::mt19937_64 rng(8);
  std::vector<Sample> manifest;
  std::map<std::string, Words> refs, hyps;
  for (int i = 0; i < 40; ++i) {
    const auto id = "s" + std::to_string(i);
    manifest.push_back(sample(id, i % 3 ? Label::AD : Label::NonAD, i % 4 ? Split::Train : Split::Test));
    refs[id] = random_words(rng, 10, 4, 1);
    hyps[id] = random_words(rng, 10, 4);
  }
  const auto r = group_wer(manifest, refs, hyps);
  const auto& h = r[WerGroup::Healthy];
  const auto& a = r[WerGroup::Alzheimer];
  CHECK(r[WerGroup::All].n == 40);
  CHECK(r[WerGroup::All].mean_wer_pct ==
        doctest::Approx((h.mean_wer_pct * h.n + a.mean_wer_pct * a.n) / 40.0).epsilon(1e-12));
  const auto& tr = r[WerGroup::TrainingSet];
  const auto& te = r[WerGroup::TestSet];
  CHECK(tr.n + te.n == 40);
  CHECK(r[WerGroup::All].mean_wer_pct ==
        doctest::Approx((tr.mean_wer_pct * tr.n + te.mean_wer_pct * te.n) / 40.0).epsilon(1e-12));
}
