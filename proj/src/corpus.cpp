#include "durhybrid/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "durhybrid/common.hpp"

namespace durhybrid {

char stress_code(Stress s) {
  switch (s) {
    case Stress::Primary: return 'P';
    case Stress::Secondary: return 'S';
    case Stress::Unstressed: return 'U';
  }
  return '?';
}

char word_type_code(WordType w) {
  switch (w) {
    case WordType::Content: return 'C';
    case WordType::Function: return 'F';
    case WordType::Other: return 'O';
  }
  return '?';
}

const char* role_code(SyllableRole r) {
  switch (r) {
    case SyllableRole::Onset: return "on";
    case SyllableRole::Nucleus: return "nu";
    case SyllableRole::Coda: return "co";
    case SyllableRole::Unknown: return "";
  }
  return "";
}

std::size_t Corpus::segment_count() const {
  std::size_t n = 0;
  for (const auto& u : utterances) n += u.segments.size();
  return n;
}

std::uint64_t Corpus::fingerprint() const { return fnv1a(emit_corpus(*this)); }

namespace {

Stress parse_stress(const std::string& s, std::size_t line) {
  if (s == "P") return Stress::Primary;
  if (s == "S") return Stress::Secondary;
  if (s == "U") return Stress::Unstressed;
  throw ParseError("bad stress '" + s + "' (want P/S/U)", line);
}

WordType parse_word_type(const std::string& s, std::size_t line) {
  if (s == "C") return WordType::Content;
  if (s == "F") return WordType::Function;
  if (s == "O") return WordType::Other;
  throw ParseError("bad word_type '" + s + "' (want C/F/O)", line);
}

SyllableRole parse_role(const std::string& s, std::size_t line) {
  if (s == "on") return SyllableRole::Onset;
  if (s == "nu") return SyllableRole::Nucleus;
  if (s == "co") return SyllableRole::Coda;
  throw ParseError("bad role '" + s + "' (want on/nu/co)", line);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return out;
}

// Requires each later index to advance whenever an earlier (coarser) one does.
void check_cascade(const SegmentRecord& prev, const SegmentRecord& cur,
                   std::size_t line) {
  auto nondecreasing = [&](int a, int b, const char* name) {
    if (b < a)
      throw ParseError(std::string("non-monotone ") + name + " index", line);
  };
  nondecreasing(prev.syll_idx, cur.syll_idx, "syllable");
  nondecreasing(prev.word_idx, cur.word_idx, "word");
  nondecreasing(prev.phrase_idx, cur.phrase_idx, "phrase");
  nondecreasing(prev.clause_idx, cur.clause_idx, "clause");
  if (cur.clause_idx > prev.clause_idx && cur.phrase_idx == prev.phrase_idx)
    throw ParseError("clause changed without phrase change", line);
  if (cur.phrase_idx > prev.phrase_idx && cur.word_idx == prev.word_idx)
    throw ParseError("phrase changed without word change", line);
  if (cur.word_idx > prev.word_idx && cur.syll_idx == prev.syll_idx)
    throw ParseError("word changed without syllable change", line);
}

}  // namespace

Corpus parse_corpus(std::istream& in, const PhoneInventory& inventory) {
  Corpus corpus;
  std::set<std::string> closed_ids;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line.rfind("utt_id", 0) != 0)
        throw ParseError("missing corpus header (expected 'utt_id ...')", lineno);
      header_seen = true;
      continue;
    }
    auto toks = split_tabs(line);
    if (toks.size() != 9 && toks.size() != 10)
      throw ParseError("expected 9 or 10 tab-separated fields, got " +
                           std::to_string(toks.size()),
                       lineno);
    SegmentRecord seg;
    seg.utt_id = toks[0];
    seg.phone = toks[1];
    if (!inventory.has(seg.phone))
      throw ParseError("unknown phone symbol '" + seg.phone + "'", lineno);
    try {
      seg.duration_ms = std::stod(toks[2]);
      seg.syll_idx = std::stoi(toks[3]);
      seg.word_idx = std::stoi(toks[4]);
      seg.phrase_idx = std::stoi(toks[5]);
      seg.clause_idx = std::stoi(toks[6]);
    } catch (const std::exception&) {
      throw ParseError("malformed numeric field", lineno);
    }
    if (seg.duration_ms < 0) throw ParseError("negative duration", lineno);
    if (seg.syll_idx < 0 || seg.word_idx < 0 || seg.phrase_idx < 0 ||
        seg.clause_idx < 0)
      throw ParseError("negative structural index", lineno);
    seg.stress = parse_stress(toks[7], lineno);
    seg.word_type = parse_word_type(toks[8], lineno);
    if (toks.size() == 10 && !toks[9].empty())
      seg.role = parse_role(toks[9], lineno);

    if (corpus.utterances.empty() || corpus.utterances.back().id != seg.utt_id) {
      if (closed_ids.count(seg.utt_id))
        throw ParseError("utterance rows not contiguous (id '" + seg.utt_id + "')",
                         lineno);
      if (!corpus.utterances.empty())
        closed_ids.insert(corpus.utterances.back().id);
      corpus.utterances.push_back(Utterance{seg.utt_id, {}});
    } else {
      check_cascade(corpus.utterances.back().segments.back(), seg, lineno);
    }
    corpus.utterances.back().segments.push_back(std::move(seg));
  }
  if (corpus.utterances.empty()) throw DataError("empty corpus");
  return corpus;
}

std::string emit_corpus(const Corpus& corpus) {
  std::ostringstream out;
  out << "utt_id\tphone\tduration_ms\tsyll_idx\tword_idx\tphrase_idx\t"
         "clause_idx\tstress\tword_type\trole\n";
  for (const auto& utt : corpus.utterances) {
    for (const auto& s : utt.segments) {
      out << s.utt_id << '\t' << s.phone << '\t' << format_exact(s.duration_ms)
          << '\t' << s.syll_idx << '\t' << s.word_idx << '\t' << s.phrase_idx
          << '\t' << s.clause_idx << '\t' << stress_code(s.stress) << '\t'
          << word_type_code(s.word_type) << '\t' << role_code(s.role) << '\n';
    }
  }
  return out.str();
}

Corpus load_corpus_file(const std::string& path, const PhoneInventory& inventory) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file '" + path + "'");
  Corpus c = parse_corpus(in, inventory);
  c.source = path;
  return c;
}

namespace {

// Contiguous runs of equal index values within one utterance.
std::vector<int> run_ids(const std::vector<SegmentRecord>& segs,
                         int SegmentRecord::* idx) {
  std::vector<int> runs(segs.size());
  int run = 0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (i > 0 && segs[i].*idx != segs[i - 1].*idx) ++run;
    runs[i] = run;
  }
  return runs;
}

}  // namespace

std::vector<PositionedUtterance> derive_positions(const Corpus& corpus,
                                                  const PhoneInventory& inventory) {
  std::vector<PositionedUtterance> result;
  result.reserve(corpus.utterances.size());
  for (const auto& utt : corpus.utterances) {
    const auto& segs = utt.segments;
    const std::size_t n = segs.size();
    auto syll = run_ids(segs, &SegmentRecord::syll_idx);
    auto word = run_ids(segs, &SegmentRecord::word_idx);
    auto phrase = run_ids(segs, &SegmentRecord::phrase_idx);
    auto clause = run_ids(segs, &SegmentRecord::clause_idx);

    PositionedUtterance pos(n);
    for (std::size_t i = 0; i < n; ++i) {
      PositionedSegment& p = pos[i];
      p.seg = segs[i];
      p.first_in_syllable = i == 0 || syll[i] != syll[i - 1];
      p.last_in_syllable = i + 1 == n || syll[i] != syll[i + 1];
      p.first_in_word = i == 0 || word[i] != word[i - 1];
      p.last_in_word = i + 1 == n || word[i] != word[i + 1];
      p.first_in_phrase = i == 0 || phrase[i] != phrase[i - 1];
      p.last_in_phrase = i + 1 == n || phrase[i] != phrase[i + 1];
      p.first_in_clause = i == 0 || clause[i] != clause[i - 1];
      p.last_in_clause = i + 1 == n || clause[i] != clause[i + 1];
      p.first_in_sentence = i == 0;
      p.last_in_sentence = i + 1 == n;
      if (i > 0) p.prev_phone = segs[i - 1].phone;
      if (i + 1 < n) p.next_phone = segs[i + 1].phone;
    }

    // Final-syllable membership: the segment's syllable run ends exactly
    // where its word/phrase/clause run ends.
    std::vector<std::size_t> syll_end(n), word_end(n), phrase_end(n), clause_end(n);
    for (std::size_t i = n; i-- > 0;) {
      syll_end[i] = (i + 1 < n && syll[i] == syll[i + 1]) ? syll_end[i + 1] : i;
      word_end[i] = (i + 1 < n && word[i] == word[i + 1]) ? word_end[i + 1] : i;
      phrase_end[i] = (i + 1 < n && phrase[i] == phrase[i + 1]) ? phrase_end[i + 1] : i;
      clause_end[i] = (i + 1 < n && clause[i] == clause[i + 1]) ? clause_end[i + 1] : i;
    }
    for (std::size_t i = 0; i < n; ++i) {
      pos[i].in_word_final_syllable = syll_end[i] == word_end[i];
      pos[i].in_phrase_final_syllable = syll_end[i] == phrase_end[i];
      pos[i].in_clause_final_syllable = syll_end[i] == clause_end[i];
    }

    // Syllable roles: given roles are kept; otherwise the unique syllabic
    // phone is the nucleus.
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j < n && syll[j] == syll[i]) ++j;
      bool all_given = true;
      for (std::size_t k = i; k < j; ++k)
        if (segs[k].role == SyllableRole::Unknown) all_given = false;
      std::size_t nucleus = n;
      if (all_given) {
        for (std::size_t k = i; k < j; ++k) {
          pos[k].role = segs[k].role;
          if (segs[k].role == SyllableRole::Nucleus) {
            if (nucleus != n)
              throw DataError("syllable " + std::to_string(segs[i].syll_idx) +
                              " of utterance '" + utt.id +
                              "' has multiple nucleus segments");
            nucleus = k;
          }
        }
      } else {
        for (std::size_t k = i; k < j; ++k) {
          if (inventory.is_syllabic(segs[k].phone)) {
            if (nucleus != n)
              throw DataError("syllable " + std::to_string(segs[i].syll_idx) +
                              " of utterance '" + utt.id +
                              "' has multiple syllabic phones");
            nucleus = k;
          }
        }
        if (nucleus == n)
          throw DataError("syllable " + std::to_string(segs[i].syll_idx) +
                          " of utterance '" + utt.id + "' has no syllabic phone");
        for (std::size_t k = i; k < j; ++k)
          pos[k].role = k < nucleus ? SyllableRole::Onset
                        : k == nucleus ? SyllableRole::Nucleus
                                       : SyllableRole::Coda;
      }
      if (nucleus == n)
        throw DataError("syllable " + std::to_string(segs[i].syll_idx) +
                        " of utterance '" + utt.id + "' has no nucleus segment");
      i = j;
    }
    result.push_back(std::move(pos));
  }
  return result;
}

std::pair<Corpus, Corpus> split_train_test(const Corpus& corpus,
                                           std::size_t held_out,
                                           std::uint64_t seed) {
  const std::size_t n = corpus.utterances.size();
  if (held_out >= n)
    throw DataError("held_out (" + std::to_string(held_out) +
                    ") must be below the utterance count (" + std::to_string(n) + ")");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> is_test(n, false);
  for (std::size_t k = 0; k < held_out; ++k) is_test[order[k]] = true;
  Corpus train, test;
  train.source = corpus.source + "#train";
  test.source = corpus.source + "#test";
  for (std::size_t i = 0; i < n; ++i)
    (is_test[i] ? test : train).utterances.push_back(corpus.utterances[i]);
  return {std::move(train), std::move(test)};
}

}  // namespace durhybrid
