#ifndef DURHYBRID_TESTS_FIXTURES_HPP_
#define DURHYBRID_TESTS_FIXTURES_HPP_

#include <sstream>
#include <string>
#include <vector>

#include "durhybrid/corpus.hpp"
#include "durhybrid/inventory.hpp"

namespace durhybrid::testing {

inline std::string corpus_tsv(const std::vector<std::string>& rows) {
  std::string s =
      "utt_id\tphone\tduration_ms\tsyll_idx\tword_idx\tphrase_idx\t"
      "clause_idx\tstress\tword_type\trole\n";
  for (const auto& r : rows) {
    s += r;
    s += '\n';
  }
  return s;
}

inline Corpus parse(const std::string& tsv, const PhoneInventory& inv) {
  std::istringstream in(tsv);
  return parse_corpus(in, inv);
}

// In-memory corpus builder: each utterance is a list of
// (phone, duration, syll, word, phrase, clause, stress, word_type).
struct SegSpec {
  const char* phone;
  double dur;
  int syll = 0, word = 0, phrase = 0, clause = 0;
  Stress stress = Stress::Unstressed;
  WordType wt = WordType::Content;
};

inline Corpus make_corpus(const std::vector<std::vector<SegSpec>>& utts) {
  Corpus c;
  int n = 0;
  for (const auto& specs : utts) {
    Utterance u;
    u.id = "u" + std::to_string(n++);
    for (const auto& s : specs) {
      SegmentRecord seg;
      seg.utt_id = u.id;
      seg.phone = s.phone;
      seg.duration_ms = s.dur;
      seg.syll_idx = s.syll;
      seg.word_idx = s.word;
      seg.phrase_idx = s.phrase;
      seg.clause_idx = s.clause;
      seg.stress = s.stress;
      seg.word_type = s.wt;
      u.segments.push_back(seg);
    }
    c.utterances.push_back(std::move(u));
  }
  return c;
}

// Positioned-segment builder for rule fixtures.
struct PosBuilder {
  PositionedSegment p;

  explicit PosBuilder(const std::string& phone) {
    p.seg.phone = phone;
    p.seg.stress = Stress::Primary;
    p.seg.word_type = WordType::Content;
    p.role = SyllableRole::Nucleus;
  }
  PosBuilder& role(SyllableRole r) { p.role = r; return *this; }
  PosBuilder& stress(Stress s) { p.seg.stress = s; return *this; }
  PosBuilder& clause_final_syll() { p.in_clause_final_syllable = true;
                                    p.in_phrase_final_syllable = true;
                                    p.in_word_final_syllable = true; return *this; }
  PosBuilder& phrase_final_syll() { p.in_phrase_final_syllable = true;
                                    p.in_word_final_syllable = true; return *this; }
  PosBuilder& word_final_syll() { p.in_word_final_syllable = true; return *this; }
  PosBuilder& prev(const std::string& ph) { p.prev_phone = ph; return *this; }
  PosBuilder& next(const std::string& ph) { p.next_phone = ph; return *this; }
  PosBuilder& first_word() { p.first_in_word = true; p.first_in_syllable = true; return *this; }
  PosBuilder& last_word() { p.last_in_word = true; p.last_in_syllable = true; return *this; }
  PositionedSegment build() const { return p; }
};

}  // namespace durhybrid::testing

#endif  // DURHYBRID_TESTS_FIXTURES_HPP_
