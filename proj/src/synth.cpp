#include "durhybrid/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "durhybrid/common.hpp"

namespace durhybrid {

namespace {

const char* kDefaultVowels[] = {"aa", "ae", "iy", "ih", "eh", "ow", "uw", "ah"};
const char* kDefaultConsonants[] = {"p", "t",  "k", "b", "d", "g", "s", "z",
                                    "f", "v",  "m", "n", "l", "r", "sh"};

}  // namespace

std::map<std::string, double> default_rule_multipliers() {
  // Strong effects sit on facts a window-1 plain encoding cannot see:
  // final-syllable membership, syllable role and the following phone's class.
  return {
      {"R01", 1.55}, {"R02", 1.35}, {"R03", 1.30}, {"R04", 1.20},
      {"R05", 0.85}, {"R06", 0.90}, {"R07", 0.85}, {"R08", 1.15},
      {"R17", 1.25},
      {"R19", 0.70}, {"R20", 0.85}, {"R21", 1.25}, {"R22", 1.10},
      {"R23", 0.75}, {"R24", 0.90}, {"R25", 1.20}, {"R26", 1.05},
      {"R27", 0.80}, {"R28", 0.92}, {"R29", 1.30}, {"R30", 1.10},
  };
}

SyntheticResult generate_synthetic_corpus(const SyntheticSpec& spec,
                                          const PhoneInventory& inventory,
                                          const RuleSet& rules) {
  if (spec.utterances <= 0) throw DataError("synthetic spec needs utterances > 0");
  if (spec.min_words <= 0 || spec.max_words < spec.min_words)
    throw DataError("synthetic spec has a bad word-count range");
  if (spec.noise_frac < 0) throw DataError("noise fraction must be nonnegative");
  for (const auto& [id, m] : spec.rule_multipliers)
    if (m <= 0) throw DataError("rule multiplier for " + id + " must be positive");

  std::vector<std::string> vowels, consonants;
  auto subset = spec.phone_subset;
  if (subset.empty()) {
    subset.assign(std::begin(kDefaultVowels), std::end(kDefaultVowels));
    subset.insert(subset.end(), std::begin(kDefaultConsonants),
                  std::end(kDefaultConsonants));
  }
  for (const auto& p : subset) {
    if (!inventory.has(p))
      throw DataError("synthetic phone subset names unknown phone '" + p + "'");
    if (inventory.phone_class(p, "vowel")) vowels.push_back(p);
    else if (inventory.phone_class(p, "consonant")) consonants.push_back(p);
  }
  if (vowels.empty() || consonants.empty())
    throw DataError("synthetic phone subset needs at least one vowel and one consonant");

  SyntheticResult result;
  result.multipliers = spec.rule_multipliers.empty() ? default_rule_multipliers()
                                                     : spec.rule_multipliers;

  // Per-phone base means, deterministic from the phone symbol.
  for (const auto& p : subset) {
    const bool is_vowel = inventory.phone_class(p, "vowel");
    const double base = is_vowel ? spec.vowel_base_mean_ms : spec.consonant_base_mean_ms;
    const double u = static_cast<double>(fnv1a(p) % 10000) / 10000.0;
    result.base_means_ms[p] = base * (1.0 + spec.base_jitter * (u - 0.5));
  }

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto pick = [&](const std::vector<std::string>& from) {
    std::uniform_int_distribution<std::size_t> d(0, from.size() - 1);
    return from[d(rng)];
  };

  Corpus& corpus = result.corpus;
  corpus.source = "synthetic seed=" + std::to_string(spec.seed);
  for (int u = 0; u < spec.utterances; ++u) {
    Utterance utt;
    utt.id = "synth-" + std::to_string(u);
    std::uniform_int_distribution<int> word_count(spec.min_words, spec.max_words);
    const int words = word_count(rng);
    int syll = 0, phrase = 0, clause = 0;
    for (int w = 0; w < words; ++w) {
      std::uniform_int_distribution<int> syll_count(1, 3);
      const int sylls = syll_count(rng);
      const double wt = coin(rng);
      const WordType word_type = wt < 0.6   ? WordType::Content
                                 : wt < 0.9 ? WordType::Function
                                            : WordType::Other;
      for (int s = 0; s < sylls; ++s, ++syll) {
        Stress stress;
        if (s == 0 && word_type == WordType::Content && coin(rng) < 0.7)
          stress = Stress::Primary;
        else if (coin(rng) < 0.25)
          stress = Stress::Secondary;
        else
          stress = Stress::Unstressed;
        auto push = [&](const std::string& phone) {
          SegmentRecord seg;
          seg.utt_id = utt.id;
          seg.phone = phone;
          seg.syll_idx = syll;
          seg.word_idx = w;
          seg.phrase_idx = phrase;
          seg.clause_idx = clause;
          seg.stress = stress;
          seg.word_type = word_type;
          utt.segments.push_back(std::move(seg));
        };
        if (coin(rng) < 0.7) push(pick(consonants));
        push(pick(vowels));
        if (coin(rng) < 0.5) push(pick(consonants));
      }
      // boundary advance; a clause change always brings a phrase change
      if (w + 1 < words) {
        const double b = coin(rng);
        if (b < 0.15) { ++clause; ++phrase; }
        else if (b < 0.40) ++phrase;
      }
    }
    corpus.utterances.push_back(std::move(utt));
  }

  // Durations from rule firings over the finished structure.
  auto positioned = derive_positions(corpus, inventory);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t u = 0; u < positioned.size(); ++u) {
    for (std::size_t i = 0; i < positioned[u].size(); ++i) {
      const PositionedSegment& p = positioned[u][i];
      const double base = result.base_means_ms.at(p.seg.phone);
      double mult = 1.0;
      const auto firing = fire_rules(rules, p, inventory);
      for (std::size_t r = 0; r < firing.size(); ++r) {
        if (!firing[r]) continue;
        auto it = result.multipliers.find(rules.cases[r].id);
        if (it != result.multipliers.end()) mult *= it->second;
      }
      double d = base * mult;
      if (spec.noise_frac > 0) d += gauss(rng) * spec.noise_frac * base;
      corpus.utterances[u].segments[i].duration_ms = std::max(1.0, d);
    }
  }
  return result;
}

std::string emit_truth(const SyntheticResult& result) {
  std::ostringstream out;
  out << "rule_id\tmultiplier\n";
  for (const auto& [id, m] : result.multipliers)
    out << id << '\t' << format_exact(m) << '\n';
  out << "# base means\n";
  for (const auto& [p, m] : result.base_means_ms)
    out << "base\t" << p << '\t' << format_exact(m) << '\n';
  return out.str();
}

}  // namespace durhybrid
