#include <doctest.h>

#include <algorithm>
#include <random>

#include "durhybrid/corpus.hpp"
#include "fixtures.hpp"

using namespace durhybrid;
using namespace durhybrid::testing;

static const PhoneInventory& inv() {
  static PhoneInventory i = PhoneInventory::default_timit();
  return i;
}

TEST_CASE("parse_corpus ingests rows in order") {
  auto c = parse(corpus_tsv({
                     "u1\tk\t60\t0\t0\t0\t0\tP\tC\t",
                     "u1\tiy\t120\t0\t0\t0\t0\tP\tC\t",
                     "u1\tt\t55\t0\t0\t0\t0\tP\tC\t",
                 }),
                 inv());
  REQUIRE(c.utterances.size() == 1);
  CHECK(c.utterances[0].segments.size() == 3);
  CHECK(c.utterances[0].segments[1].phone == "iy");
  CHECK(c.utterances[0].segments[1].duration_ms == 120.0);
}

TEST_CASE("parse_corpus rejects bad rows with line numbers") {
  SUBCASE("negative duration") {
    CHECK_THROWS_WITH_AS(
        parse(corpus_tsv({"u1\tiy\t-5\t0\t0\t0\t0\tP\tC\t"}), inv()),
        doctest::Contains("negative duration"), ParseError);
  }
  SUBCASE("unknown phone names the symbol") {
    CHECK_THROWS_WITH_AS(
        parse(corpus_tsv({"u1\tzz\t50\t0\t0\t0\t0\tP\tC\t"}), inv()),
        doctest::Contains("zz"), ParseError);
  }
  SUBCASE("non-monotone syllable index") {
    CHECK_THROWS_AS(parse(corpus_tsv({
                              "u1\tiy\t50\t1\t0\t0\t0\tP\tC\t",
                              "u1\tiy\t50\t0\t0\t0\t0\tP\tC\t",
                          }),
                          inv()),
                    ParseError);
  }
  SUBCASE("clause change without phrase change") {
    CHECK_THROWS_AS(parse(corpus_tsv({
                              "u1\tiy\t50\t0\t0\t0\t0\tP\tC\t",
                              "u1\taa\t50\t1\t1\t0\t1\tP\tC\t",
                          }),
                          inv()),
                    ParseError);
  }
  SUBCASE("empty input") {
    CHECK_THROWS_WITH_AS(parse(corpus_tsv({}), inv()),
                         doctest::Contains("empty corpus"), DataError);
  }
}

TEST_CASE("parse_corpus rejects interleaved utterances") {
  // 6-row fixture: u1 rows resume after u2 started
  CHECK_THROWS_WITH_AS(parse(corpus_tsv({
                                 "u1\tiy\t50\t0\t0\t0\t0\tP\tC\t",
                                 "u1\taa\t60\t1\t1\t1\t1\tP\tC\t",
                                 "u2\tiy\t50\t0\t0\t0\t0\tP\tC\t",
                                 "u2\taa\t60\t1\t1\t1\t1\tP\tC\t",
                                 "u1\tiy\t50\t0\t0\t0\t0\tP\tC\t",
                                 "u1\taa\t60\t1\t1\t1\t1\tP\tC\t",
                             }),
                             inv()),
                       doctest::Contains("not contiguous"), ParseError);
}

TEST_CASE("emit then parse is the identity") {
  auto c = parse(corpus_tsv({
                     "u1\tk\t60\t0\t0\t0\t0\tP\tC\ton",
                     "u1\tiy\t120.5\t0\t0\t0\t0\tP\tC\tnu",
                     "u2\taa\t99\t0\t0\t0\t0\tU\tF\t",
                 }),
                 inv());
  auto c2 = parse(emit_corpus(c), inv());
  CHECK(c.utterances == c2.utterances);
}

TEST_CASE("derive_positions on a single-segment utterance") {
  auto c = parse(corpus_tsv({"u1\tiy\t100\t0\t0\t0\t0\tP\tC\t"}), inv());
  auto pos = derive_positions(c, inv());
  REQUIRE(pos.size() == 1);
  REQUIRE(pos[0].size() == 1);
  const auto& p = pos[0][0];
  CHECK(p.first_in_syllable);
  CHECK(p.last_in_syllable);
  CHECK(p.first_in_word);
  CHECK(p.last_in_word);
  CHECK(p.first_in_phrase);
  CHECK(p.last_in_phrase);
  CHECK(p.first_in_clause);
  CHECK(p.last_in_clause);
  CHECK(p.first_in_sentence);
  CHECK(p.last_in_sentence);
  CHECK(p.role == SyllableRole::Nucleus);
  CHECK(!p.prev_phone.has_value());
  CHECK(!p.next_phone.has_value());
}

TEST_CASE("derive_positions marks the word-final syllable") {
  // CV-CV word: syllable 1 = k iy, syllable 2 = t aa
  auto c = parse(corpus_tsv({
                     "u1\tk\t60\t0\t0\t0\t0\tP\tC\t",
                     "u1\tiy\t120\t0\t0\t0\t0\tP\tC\t",
                     "u1\tt\t50\t1\t0\t0\t0\tU\tC\t",
                     "u1\taa\t110\t1\t0\t0\t0\tU\tC\t",
                 }),
                 inv());
  auto pos = derive_positions(c, inv());
  CHECK(!pos[0][1].in_word_final_syllable);  // vowel of syllable 1
  CHECK(pos[0][3].in_word_final_syllable);   // vowel of syllable 2
  CHECK(pos[0][1].role == SyllableRole::Nucleus);
  CHECK(pos[0][2].role == SyllableRole::Onset);
  CHECK(pos[0][0].next_phone == "iy");
  CHECK(pos[0][3].prev_phone == "t");
}

TEST_CASE("last segment closes every level") {
  auto c = parse(corpus_tsv({
                     "u1\tiy\t100\t0\t0\t0\t0\tP\tC\t",
                     "u1\taa\t100\t1\t1\t1\t1\tU\tF\t",
                 }),
                 inv());
  auto pos = derive_positions(c, inv());
  const auto& last = pos[0][1];
  CHECK(last.last_in_clause);
  CHECK(last.last_in_sentence);
  CHECK(last.last_in_phrase);
  CHECK(last.last_in_word);
}

TEST_CASE("role derivation fails on ill-formed syllables") {
  SUBCASE("no syllabic phone") {
    auto c = parse(corpus_tsv({"u1\tk\t60\t0\t0\t0\t0\tP\tC\t"}), inv());
    CHECK_THROWS_WITH_AS(derive_positions(c, inv()),
                         doctest::Contains("no syllabic phone"), DataError);
  }
  SUBCASE("two syllabic phones") {
    auto c = parse(corpus_tsv({
                       "u1\tiy\t60\t0\t0\t0\t0\tP\tC\t",
                       "u1\taa\t60\t0\t0\t0\t0\tP\tC\t",
                   }),
                   inv());
    CHECK_THROWS_WITH_AS(derive_positions(c, inv()),
                         doctest::Contains("multiple syllabic"), DataError);
  }
}

TEST_CASE("flag implication chain holds on parsed corpora") {
  auto c = parse(corpus_tsv({
                     "u1\tk\t60\t0\t0\t0\t0\tP\tC\t",
                     "u1\tiy\t120\t0\t0\t0\t0\tP\tC\t",
                     "u1\tt\t50\t1\t1\t0\t0\tU\tF\t",
                     "u1\taa\t110\t1\t1\t0\t0\tU\tF\t",
                     "u1\ts\t70\t2\t2\t1\t1\tS\tC\t",
                     "u1\tow\t130\t2\t2\t1\t1\tS\tC\t",
                 }),
                 inv());
  for (const auto& utt : derive_positions(c, inv())) {
    for (const auto& p : utt) {
      if (p.last_in_clause) CHECK(p.last_in_phrase);
      if (p.last_in_phrase) CHECK(p.last_in_word);
      if (p.last_in_word) CHECK(p.last_in_syllable);
      if (p.first_in_clause) CHECK(p.first_in_phrase);
      if (p.first_in_phrase) CHECK(p.first_in_word);
      if (p.first_in_word) CHECK(p.first_in_syllable);
    }
  }
}

TEST_CASE("position derivation is independent of utterance order") {
  auto base = parse(corpus_tsv({
                        "u1\tk\t60\t0\t0\t0\t0\tP\tC\t",
                        "u1\tiy\t120\t0\t0\t0\t0\tP\tC\t",
                        "u2\taa\t99\t0\t0\t0\t0\tU\tF\t",
                        "u3\ts\t70\t0\t0\t0\t0\tS\tC\t",
                        "u3\tow\t130\t0\t0\t0\t0\tS\tC\t",
                    }),
                    inv());
  auto pos1 = derive_positions(base, inv());
  Corpus shuffled = base;
  std::swap(shuffled.utterances[0], shuffled.utterances[2]);
  auto pos2 = derive_positions(shuffled, inv());
  // u1's flags are unchanged regardless of where the utterance sits
  CHECK(pos1[0][1].in_word_final_syllable == pos2[2][1].in_word_final_syllable);
  CHECK(pos1[0][0].first_in_sentence == pos2[2][0].first_in_sentence);
  CHECK(pos1[2][1].last_in_clause == pos2[0][1].last_in_clause);
}

TEST_CASE("split_train_test") {
  std::vector<std::vector<SegSpec>> utts;
  for (int i = 0; i < 150; ++i) utts.push_back({{"iy", 100.0 + i}});
  Corpus c = make_corpus(utts);

  SUBCASE("150 utterances, 10 held out") {
    auto [train, test] = split_train_test(c, 10, 7);
    CHECK(train.utterances.size() == 140);
    CHECK(test.utterances.size() == 10);
    // disjoint and exhaustive
    std::vector<std::string> ids;
    for (const auto& u : train.utterances) ids.push_back(u.id);
    for (const auto& u : test.utterances) ids.push_back(u.id);
    std::sort(ids.begin(), ids.end());
    CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
    CHECK(ids.size() == 150);
  }
  SUBCASE("held_out zero keeps everything") {
    auto [train, test] = split_train_test(c, 0, 7);
    CHECK(train.utterances.size() == 150);
    CHECK(test.utterances.empty());
  }
  SUBCASE("same seed gives the same partition") {
    auto [tr1, te1] = split_train_test(c, 10, 42);
    auto [tr2, te2] = split_train_test(c, 10, 42);
    CHECK(tr1.utterances == tr2.utterances);
    CHECK(te1.utterances == te2.utterances);
  }
  SUBCASE("held_out too large") {
    CHECK_THROWS_AS(split_train_test(c, 150, 7), DataError);
  }
}
