#ifndef DURHYBRID_FEATURES_HPP_
#define DURHYBRID_FEATURES_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "durhybrid/corpus.hpp"
#include "durhybrid/inventory.hpp"
#include "durhybrid/rules.hpp"
#include "durhybrid/stats.hpp"

namespace durhybrid {

// Whether rule-firing bits are attached to every window slot or only to the
// center segment's slot.
enum class RuleScope { PerSlot, CenterOnly };

struct LayoutBlock {
  std::string name;
  int offset = 0;
  int width = 0;
};

// Ordered per-segment block layout plus the window width. Block order:
// phone_onehot, artic_features, stress_onehot, word_type_onehot,
// boundary_flags, pad_flag, then the rules block when enabled.
struct EncodingLayout {
  std::vector<LayoutBlock> blocks;
  int window = 1;                      // odd, the reference sweep uses 1..7
  RuleScope rule_scope = RuleScope::PerSlot;
  std::uint64_t inventory_fingerprint = 0;

  int segment_width() const;           // d
  int total_width() const;             // window * d
  bool has_rules() const;
  int rules_width() const;
  const LayoutBlock* block(const std::string& name) const;
  std::uint64_t fingerprint() const;
};

struct LayoutConfig {
  int window = 3;
  int rules_width = 30;                // 0 disables the rules block
  RuleScope rule_scope = RuleScope::PerSlot;
};

EncodingLayout build_layout(const PhoneInventory& inventory,
                            const LayoutConfig& config);

// One encoded segment (width d). Exactly one bit in each one-hot block; the
// articulatory block repeats the inventory row of the one-hot phone.
Eigen::VectorXd encode_segment(const PositionedSegment& seg,
                               const EncodingLayout& layout,
                               const PhoneInventory& inventory,
                               const std::optional<RuleFiringVector>& firing);

// All-zero except the pad flag.
Eigen::VectorXd encode_pad(const EncodingLayout& layout);

// Concatenation of the W per-segment vectors centered on `center`;
// out-of-utterance slots get the pad encoding.
Eigen::VectorXd assemble_window(const PositionedUtterance& utterance,
                                std::size_t center, const EncodingLayout& layout,
                                const PhoneInventory& inventory,
                                const RuleSet* rules);

struct Dataset {
  Eigen::MatrixXd inputs;   // rows = examples, cols = layout total width
  Eigen::VectorXd targets;  // duration z-scores

  std::size_t size() const { return static_cast<std::size_t>(inputs.rows()); }
};

// One example per segment, in corpus order; targets are per-phone z-scores.
Dataset build_dataset(const Corpus& corpus, const EncodingLayout& layout,
                      const PhoneInventory& inventory, const PhoneStats& stats,
                      const RuleSet* rules, bool fallback_to_global = true);

}  // namespace durhybrid

#endif  // DURHYBRID_FEATURES_HPP_
