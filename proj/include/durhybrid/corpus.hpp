#ifndef DURHYBRID_CORPUS_HPP_
#define DURHYBRID_CORPUS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "durhybrid/inventory.hpp"

namespace durhybrid {

enum class Stress { Primary, Secondary, Unstressed };
enum class WordType { Content, Function, Other };
enum class SyllableRole { Onset, Nucleus, Coda, Unknown };

char stress_code(Stress s);
char word_type_code(WordType w);
const char* role_code(SyllableRole r);

// One labeled phone occurrence in an utterance.
struct SegmentRecord {
  std::string utt_id;
  std::string phone;
  double duration_ms = 0.0;
  int syll_idx = 0;
  int word_idx = 0;
  int phrase_idx = 0;
  int clause_idx = 0;
  Stress stress = Stress::Unstressed;
  WordType word_type = WordType::Other;
  SyllableRole role = SyllableRole::Unknown;  // derived when Unknown

  bool operator==(const SegmentRecord&) const = default;
};

struct Utterance {
  std::string id;
  std::vector<SegmentRecord> segments;
  bool operator==(const Utterance&) const = default;
};

struct Corpus {
  std::vector<Utterance> utterances;
  std::string source;

  std::size_t segment_count() const;
  std::uint64_t fingerprint() const;
};

// A SegmentRecord with its structural context resolved.
struct PositionedSegment {
  SegmentRecord seg;
  SyllableRole role = SyllableRole::Unknown;

  bool first_in_syllable = false, last_in_syllable = false;
  bool first_in_word = false, last_in_word = false;
  bool first_in_phrase = false, last_in_phrase = false;
  bool first_in_clause = false, last_in_clause = false;
  bool first_in_sentence = false, last_in_sentence = false;

  bool in_word_final_syllable = false;
  bool in_phrase_final_syllable = false;
  bool in_clause_final_syllable = false;

  std::optional<std::string> prev_phone;
  std::optional<std::string> next_phone;
};

using PositionedUtterance = std::vector<PositionedSegment>;

// TSV: `utt_id phone duration_ms syll_idx word_idx phrase_idx clause_idx
// stress word_type [role]`, header line first, `#` comments allowed.
Corpus parse_corpus(std::istream& in, const PhoneInventory& inventory);
std::string emit_corpus(const Corpus& corpus);

Corpus load_corpus_file(const std::string& path, const PhoneInventory& inventory);

// Resolves boundary flags, final-syllable membership, syllable roles and
// neighbor phones. When a segment's role is Unknown, the unique syllabic
// phone of its syllable becomes the nucleus; earlier segments are onset,
// later ones coda.
std::vector<PositionedUtterance> derive_positions(const Corpus& corpus,
                                                  const PhoneInventory& inventory);

// Utterance-level split; deterministic per seed, disjoint and exhaustive.
std::pair<Corpus, Corpus> split_train_test(const Corpus& corpus,
                                           std::size_t held_out,
                                           std::uint64_t seed);

}  // namespace durhybrid

#endif  // DURHYBRID_CORPUS_HPP_
