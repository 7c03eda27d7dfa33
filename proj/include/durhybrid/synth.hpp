#ifndef DURHYBRID_SYNTH_HPP_
#define DURHYBRID_SYNTH_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "durhybrid/corpus.hpp"
#include "durhybrid/inventory.hpp"
#include "durhybrid/rules.hpp"

namespace durhybrid {

// Generator spec for rule-driven synthetic corpora. Durations are
// base_mean(phone) * product(multiplier of each fired rule) plus gaussian
// noise with std = noise_frac * base_mean(phone).
struct SyntheticSpec {
  int utterances = 130;
  int min_words = 3;
  int max_words = 6;
  std::vector<std::string> phone_subset;           // empty selects a default
  std::map<std::string, double> rule_multipliers;  // empty selects defaults
  double vowel_base_mean_ms = 120.0;
  double consonant_base_mean_ms = 70.0;
  double base_jitter = 0.25;  // deterministic per-phone spread of base means
  double noise_frac = 0.05;
  std::uint64_t seed = 1;
};

struct SyntheticResult {
  Corpus corpus;
  std::map<std::string, double> multipliers;  // the generating ground truth
  std::map<std::string, double> base_means_ms;
};

std::map<std::string, double> default_rule_multipliers();

SyntheticResult generate_synthetic_corpus(const SyntheticSpec& spec,
                                          const PhoneInventory& inventory,
                                          const RuleSet& rules);

// Ground-truth TSV: `rule_id multiplier` rows plus `base <phone> <mean>` rows.
std::string emit_truth(const SyntheticResult& result);

}  // namespace durhybrid

#endif  // DURHYBRID_SYNTH_HPP_
