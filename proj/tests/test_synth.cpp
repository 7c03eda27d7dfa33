#include <doctest.h>

#include <cmath>

#include "durhybrid/stats.hpp"
#include "durhybrid/synth.hpp"
#include "fixtures.hpp"

using namespace durhybrid;
using namespace durhybrid::testing;

static const PhoneInventory& inv() {
  static PhoneInventory i = PhoneInventory::default_timit();
  return i;
}

TEST_CASE("generation is deterministic per seed") {
  auto rules = default_ruleset();
  SyntheticSpec spec;
  spec.utterances = 15;
  spec.seed = 21;
  auto a = generate_synthetic_corpus(spec, inv(), rules);
  auto b = generate_synthetic_corpus(spec, inv(), rules);
  CHECK(emit_corpus(a.corpus) == emit_corpus(b.corpus));
  spec.seed = 22;
  auto c = generate_synthetic_corpus(spec, inv(), rules);
  CHECK(emit_corpus(a.corpus) != emit_corpus(c.corpus));
}

TEST_CASE("generated corpora parse back unchanged") {
  auto rules = default_ruleset();
  SyntheticSpec spec;
  spec.utterances = 10;
  spec.seed = 4;
  auto synth = generate_synthetic_corpus(spec, inv(), rules);
  auto back = parse(emit_corpus(synth.corpus), inv());
  CHECK(back.utterances == synth.corpus.utterances);
  CHECK_NOTHROW(derive_positions(back, inv()));
}

TEST_CASE("a single rule multiplier moves the sample mean") {
  auto rules = default_ruleset();
  SyntheticSpec spec;
  spec.utterances = 400;
  spec.seed = 8;
  spec.base_jitter = 0.0;
  spec.noise_frac = 0.02;
  spec.rule_multipliers = {{"R01", 1.4}};
  auto synth = generate_synthetic_corpus(spec, inv(), rules);

  auto positioned = derive_positions(synth.corpus, inv());
  int r01 = -1;
  for (int i = 0; i < rules.size(); ++i)
    if (rules.cases[static_cast<std::size_t>(i)].id == "R01") r01 = i;
  REQUIRE(r01 >= 0);

  double fired_ratio_sum = 0, clean_ratio_sum = 0;
  int fired_n = 0, clean_n = 0;
  for (std::size_t u = 0; u < positioned.size(); ++u) {
    for (std::size_t i = 0; i < positioned[u].size(); ++i) {
      const auto& p = positioned[u][i];
      const double base = synth.base_means_ms.at(p.seg.phone);
      const double ratio = synth.corpus.utterances[u].segments[i].duration_ms / base;
      if (fire_rules(rules, p, inv())[static_cast<std::size_t>(r01)]) {
        fired_ratio_sum += ratio;
        ++fired_n;
      } else {
        clean_ratio_sum += ratio;
        ++clean_n;
      }
    }
  }
  REQUIRE(fired_n >= 200);
  const double tol_fired = 3.0 * spec.noise_frac / std::sqrt(double(fired_n));
  const double tol_clean = 3.0 * spec.noise_frac / std::sqrt(double(clean_n));
  CHECK(fired_ratio_sum / fired_n == doctest::Approx(1.4).epsilon(tol_fired));
  CHECK(clean_ratio_sum / clean_n == doctest::Approx(1.0).epsilon(tol_clean));
}

TEST_CASE("noise-free unit multipliers yield a degenerate corpus") {
  auto rules = default_ruleset();
  SyntheticSpec spec;
  spec.utterances = 5;
  spec.seed = 2;
  spec.noise_frac = 0.0;
  spec.base_jitter = 0.0;
  spec.vowel_base_mean_ms = 100.0;
  spec.consonant_base_mean_ms = 100.0;
  spec.rule_multipliers = {{"R01", 1.0}};
  auto synth = generate_synthetic_corpus(spec, inv(), rules);
  CHECK_THROWS_WITH_AS(compute_phone_stats(synth.corpus),
                       doctest::Contains("zero variance"), DataError);
}

TEST_CASE("spec validation") {
  auto rules = default_ruleset();
  SyntheticSpec spec;
  spec.phone_subset = {"aa"};  // no consonant
  CHECK_THROWS_AS(generate_synthetic_corpus(spec, inv(), rules), DataError);
  spec.phone_subset = {"zz"};
  CHECK_THROWS_AS(generate_synthetic_corpus(spec, inv(), rules), DataError);
  spec.phone_subset.clear();
  spec.rule_multipliers = {{"R01", -2.0}};
  CHECK_THROWS_AS(generate_synthetic_corpus(spec, inv(), rules), DataError);
  spec.rule_multipliers.clear();
  spec.utterances = 0;
  CHECK_THROWS_AS(generate_synthetic_corpus(spec, inv(), rules), DataError);
}

TEST_CASE("truth emission lists multipliers and base means") {
  auto rules = default_ruleset();
  SyntheticSpec spec;
  spec.utterances = 3;
  spec.rule_multipliers = {{"R01", 1.4}, {"R07", 0.9}};
  auto synth = generate_synthetic_corpus(spec, inv(), rules);
  auto truth = emit_truth(synth);
  CHECK(truth.find("R01\t1.3999999999999999") != std::string::npos);
  CHECK(truth.find("R07\t") != std::string::npos);
  CHECK(truth.find("base\taa\t") != std::string::npos);
}
