#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "adprompt/error.hpp"
#include "adprompt/pause.hpp"
#include "adprompt/random.hpp"
#include "oracles/random_track.hpp"

using namespace adprompt;
using Items = std::vector<std::string>;

namespace {

NormalizedTranscript transcript_of(Items words) {
  NormalizedTranscript t;
  t.sample_id = "S";
  t.words = std::move(words);
  return t;
}

AlignedToken tok(std::string t, double s, double e, Speaker sp = Speaker::Participant) {
  return {std::move(t), s, e, sp};
}

}  // namespace

TEST_CASE("load_alignment reads TSV tracks") {
  const auto track = load_alignment(
      "# comment\nthe\t0.00\t0.20\tPAR\nSIL\t0.20\t0.90\tPAR\n\nboy\t0.90\t1.30\tPAR\nokay\t1.30\t1.60\tINV\n");
  REQUIRE(track.size() == 4);
  CHECK(track[1].is_silence());
  CHECK(track[1].duration() == doctest::Approx(0.7));
  CHECK(track[3].speaker == Speaker::Interviewer);
}

TEST_CASE("load_alignment reads CTM tracks") {
  const auto track = load_alignment(
      "S001 PAR 0.00 0.20 the\nS001 PAR 0.20 0.70 SIL 1.0\nS001 INV 0.90 0.30 okay\n",
      AlignmentFormat::Ctm);
  REQUIRE(track.size() == 3);
  CHECK(track[1].end == doctest::Approx(0.9));
  CHECK(track[2].speaker == Speaker::Interviewer);
  CHECK(track[0].speaker == Speaker::Participant);
}

TEST_CASE("load_alignment rejects malformed tracks with the line number") {
  auto expect_line = [](std::string_view text, const char* needle) {
    try {
      load_alignment(text);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_line("a\t0\t1\tPAR\nb\t0.5\t2\tPAR\n", "line 2");        // overlap
  expect_line("a\t1\t2\tPAR\nb\t0\t0.5\tPAR\n", "line 2");        // unsorted
  expect_line("a\t1\t0.5\tPAR\n", "line 1");                      // end before start
  expect_line("a\t-1\t0.5\tPAR\n", "line 1");                     // negative
  expect_line("a\t0\tsoon\tPAR\n", "line 1");                     // bad number
  expect_line("a\t0\t1\tCHI\n", "line 1");                        // unknown speaker
  expect_line("a\t0\t1\n", "line 1");                             // field count
  CHECK_THROWS_AS(load_alignment("f PAR 0 -1 a\n", AlignmentFormat::Ctm), ParseError);
}

TEST_CASE("pause bins follow the thresholds") {
  CHECK(bin_pause(0.001) == PauseBin::Short);
  CHECK_THROWS(bin_pause(0.0));
  CHECK_THROWS(bin_pause(-1.0));
  CHECK(bin_pause(0.49) == PauseBin::Short);
  CHECK(bin_pause(0.5) == PauseBin::Medium);
  CHECK(bin_pause(2.0) == PauseBin::Medium);
  CHECK(bin_pause(2.01) == PauseBin::Long);
  CHECK(pause_mark(PauseBin::Short) == ",");
  CHECK(pause_mark(PauseBin::Medium) == ".");
  CHECK(pause_mark(PauseBin::Long) == "...");
  CHECK(is_pause_mark("..."));
  CHECK_FALSE(is_pause_mark("well"));
}

TEST_CASE("encode_pauses inserts marks between words") {
  const AlignmentTrack track = {tok("SIL", 0.0, 1.0),  tok("the", 1.0, 1.2),
                                tok("SIL", 1.2, 1.5),  tok("boy", 1.5, 1.8),
                                tok("SIL", 1.8, 2.8),  tok("is", 2.8, 3.0),
                                tok("SIL", 3.0, 6.0),  tok("falling", 6.0, 6.5),
                                tok("SIL", 6.5, 9.0)};
  const auto enc = encode_pauses(transcript_of({"the", "boy", "is", "falling"}), track);
  CHECK(enc.items == Items{"the", ",", "boy", ".", "is", "...", "falling"});
  CHECK(enc.words() == Items{"the", "boy", "is", "falling"});
  CHECK(enc.text() == "the , boy . is ... falling");
}

TEST_CASE("interviewer turns inside a pause merge the surrounding silences") {
  const AlignmentTrack track = {tok("well", 0.0, 0.3), tok("SIL", 0.3, 1.3),
                                tok("mhm", 1.3, 1.6, Speaker::Interviewer),
                                tok("SIL", 1.6, 2.8), tok("yes", 2.8, 3.0)};
  const auto trimmed = trim_and_merge(track);
  REQUIRE(trimmed.size() == 3);
  CHECK(trimmed[1].duration() == doctest::Approx(2.2));
  CHECK(encode_pauses(transcript_of({"well", "yes"}), track).items == Items{"well", "...", "yes"});
}

TEST_CASE("encode_pauses compares words case-insensitively and reports divergence") {
  const AlignmentTrack track = {tok("The", 0, 1), tok("SIL", 1, 1.1), tok("boy", 1.1, 2)};
  CHECK(encode_pauses(transcript_of({"the", "boy"}), track).items == Items{"the", ",", "boy"});
  try {
    encode_pauses(transcript_of({"the", "girl"}), track);
    FAIL("expected AlignmentMismatchError");
  } catch (const AlignmentMismatchError& e) {
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
  CHECK_THROWS_AS(encode_pauses(transcript_of({"the"}), track), AlignmentMismatchError);
  CHECK_THROWS_AS(encode_pauses(transcript_of({"the", "boy", "runs"}), track),
                  AlignmentMismatchError);
}

TEST_CASE("a silence-only track has no speech content") {
  CHECK_THROWS_AS(trim_and_merge({tok("SIL", 0, 3)}), ValidationError);
  CHECK_THROWS_AS(trim_and_merge({tok("mhm", 0, 1, Speaker::Interviewer)}), ValidationError);
  CHECK_THROWS_AS(trim_and_merge({}), ValidationError);
}


TEST_CASE("encode_pauses agrees with an independent encoder on random tracks") {
  std::mt19937_64 rng(11);
  int encoded = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto r = oracle::random_track(rng);
    if (r.words.empty()) {
      CHECK_THROWS_AS(trim_and_merge(r.track), ValidationError);
      continue;
    }
    const auto enc = encode_pauses(transcript_of(r.words), r.track);
    CHECK(enc.items == r.expected);
    // Round trip.
    CHECK(enc.words() == r.words);
    // No adjacent marks, none at the ends.
    CHECK_FALSE(is_pause_mark(enc.items.front()));
    CHECK_FALSE(is_pause_mark(enc.items.back()));
    for (std::size_t i = 1; i < enc.items.size(); ++i) {
      CHECK_FALSE((is_pause_mark(enc.items[i]) && is_pause_mark(enc.items[i - 1])));
    }
    // Mark count equals interior silence runs of the trimmed track.
    const auto trimmed = trim_and_merge(r.track);
    std::size_t runs = 0;
    for (const auto& t : trimmed) runs += t.is_silence();
    std::size_t marks = 0;
    for (const auto& it : enc.items) marks += is_pause_mark(it);
    CHECK(marks == runs);
    CHECK(marks == r.interior_silence_runs);
    // Idempotent trim.
    const auto again = trim_and_merge(trimmed);
    REQUIRE(again.size() == trimmed.size());
    for (std::size_t i = 0; i < again.size(); ++i) {
      CHECK(again[i].token == trimmed[i].token);
      CHECK(again[i].start == trimmed[i].start);
      CHECK(again[i].end == trimmed[i].end);
    }
    ++encoded;
  }
  CHECK(encoded > 500);
}

TEST_CASE("pause binning is monotone in duration") {
  int previous = 0;
  for (int ms = 1; ms <= 5000; ++ms) {
    const int rank = static_cast<int>(bin_pause(ms / 1000.0));
    CHECK(rank >= previous);
    previous = rank;
  }
}
