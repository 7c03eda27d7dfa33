#ifndef DURHYBRID_RULES_HPP_
#define DURHYBRID_RULES_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "durhybrid/corpus.hpp"
#include "durhybrid/inventory.hpp"

namespace durhybrid {

enum class BoundaryVariant { NearBoundary, Elsewhere, Unsplit };

// True when the segment sits in a phrase-final or clause-final syllable.
bool near_boundary(const PositionedSegment& seg);

using RulePredicate =
    std::function<bool(const PositionedSegment&, const PhoneInventory&)>;

// Compiles the rules DSL: `&`-separated atoms, each optionally negated with
// `!`. Atoms: a boundary-flag name (first_in_word, last_in_clause,
// in_phrase_final_syllable, near_boundary, ...), `role=on|nu|co`,
// `stress=P|S|U`, `class=<name>`, `prev=<name>`, `next=<name>` where <name>
// is a phone class or `none` for a missing neighbor.
RulePredicate compile_rule_expression(const std::string& expr);

// One condition case. For split cases the stored predicate is the base; the
// boundary conjunct is applied per the variant, so the two variants of a
// pair are mutually exclusive by construction.
struct RuleCase {
  std::string id;
  BoundaryVariant variant = BoundaryVariant::Unsplit;
  std::string expression;  // base predicate, DSL text
  RulePredicate base;

  bool fires(const PositionedSegment& seg, const PhoneInventory& inv) const;
};

struct RuleSet {
  std::vector<RuleCase> cases;
  std::string version;

  int size() const { return static_cast<int>(cases.size()); }
};

struct FiringTrace {
  std::string id;
  bool fired = false;
  std::string reason;
};

using RuleFiringVector = std::vector<std::uint8_t>;

// The built-in 30-case condition table.
RuleSet default_ruleset();

RuleSet load_ruleset(std::istream& in, bool strict30 = false);
RuleSet load_ruleset_file(const std::string& path, bool strict30 = false);

RuleFiringVector fire_rules(const RuleSet& rules, const PositionedSegment& seg,
                            const PhoneInventory& inv);
std::vector<FiringTrace> explain_firing(const RuleSet& rules,
                                        const PositionedSegment& seg,
                                        const PhoneInventory& inv);

}  // namespace durhybrid

#endif  // DURHYBRID_RULES_HPP_
