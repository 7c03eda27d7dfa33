#include "durhybrid/features.hpp"

#include <cstdio>
#include <sstream>

#include "durhybrid/common.hpp"

namespace durhybrid {

int EncodingLayout::segment_width() const {
  return blocks.empty() ? 0 : blocks.back().offset + blocks.back().width;
}

int EncodingLayout::total_width() const { return window * segment_width(); }

bool EncodingLayout::has_rules() const { return block("rules") != nullptr; }

int EncodingLayout::rules_width() const {
  const LayoutBlock* b = block("rules");
  return b ? b->width : 0;
}

const LayoutBlock* EncodingLayout::block(const std::string& name) const {
  for (const auto& b : blocks)
    if (b.name == name) return &b;
  return nullptr;
}

std::uint64_t EncodingLayout::fingerprint() const {
  std::ostringstream s;
  for (const auto& b : blocks) s << b.name << ':' << b.offset << ':' << b.width << ';';
  s << "window=" << window
    << ";scope=" << (rule_scope == RuleScope::PerSlot ? "slot" : "center")
    << ";inv=" << to_hex(inventory_fingerprint);
  return fnv1a(s.str());
}

EncodingLayout build_layout(const PhoneInventory& inventory,
                            const LayoutConfig& config) {
  if (config.window < 1 || config.window % 2 == 0)
    throw DataError("window width must be odd and positive, got " +
                    std::to_string(config.window));
  if (config.window > 7)
    std::fprintf(stderr, "W:layout: window width %d is outside the usual 1-7 range\n",
                 config.window);
  if (config.rules_width < 0)
    throw DataError("rules block width must be nonnegative");
  if (inventory.size() == 0) throw DataError("empty phone inventory");

  EncodingLayout layout;
  layout.window = config.window;
  layout.rule_scope = config.rule_scope;
  layout.inventory_fingerprint = inventory.fingerprint();
  int off = 0;
  auto add = [&](const std::string& name, int width) {
    layout.blocks.push_back({name, off, width});
    off += width;
  };
  add("phone_onehot", inventory.size());
  add("artic_features", inventory.feature_count());
  add("stress_onehot", 3);
  add("word_type_onehot", 3);
  add("boundary_flags", 10);
  add("pad_flag", 1);
  if (config.rules_width > 0) add("rules", config.rules_width);
  return layout;
}

Eigen::VectorXd encode_segment(const PositionedSegment& seg,
                               const EncodingLayout& layout,
                               const PhoneInventory& inventory,
                               const std::optional<RuleFiringVector>& firing) {
  const int d = layout.segment_width();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);

  int phone_idx = inventory.index_of(seg.seg.phone);
  if (phone_idx < 0)
    throw DataError("phone '" + seg.seg.phone + "' absent from inventory");

  const LayoutBlock* b = layout.block("phone_onehot");
  v[b->offset + phone_idx] = 1.0;

  b = layout.block("artic_features");
  const auto& row = inventory.feature_row(phone_idx);
  for (int f = 0; f < b->width; ++f)
    v[b->offset + f] = row[static_cast<std::size_t>(f)] ? 1.0 : 0.0;

  b = layout.block("stress_onehot");
  v[b->offset + static_cast<int>(seg.seg.stress)] = 1.0;

  b = layout.block("word_type_onehot");
  v[b->offset + static_cast<int>(seg.seg.word_type)] = 1.0;

  b = layout.block("boundary_flags");
  const bool flags[10] = {
      seg.first_in_syllable, seg.last_in_syllable, seg.first_in_word,
      seg.last_in_word,      seg.first_in_phrase,  seg.last_in_phrase,
      seg.first_in_clause,   seg.last_in_clause,   seg.first_in_sentence,
      seg.last_in_sentence};
  for (int f = 0; f < 10; ++f) v[b->offset + f] = flags[f] ? 1.0 : 0.0;

  const LayoutBlock* rb = layout.block("rules");
  if (rb != nullptr) {
    if (!firing.has_value())
      throw DataError("layout has a rules block but no firing vector was given");
    if (static_cast<int>(firing->size()) != rb->width)
      throw DataError("firing vector width " + std::to_string(firing->size()) +
                      " does not match rules block width " +
                      std::to_string(rb->width));
    for (int f = 0; f < rb->width; ++f)
      v[rb->offset + f] = (*firing)[static_cast<std::size_t>(f)] ? 1.0 : 0.0;
  } else if (firing.has_value()) {
    throw DataError("firing vector given but layout has no rules block");
  }
  return v;
}

Eigen::VectorXd encode_pad(const EncodingLayout& layout) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(layout.segment_width());
  v[layout.block("pad_flag")->offset] = 1.0;
  return v;
}

Eigen::VectorXd assemble_window(const PositionedUtterance& utterance,
                                std::size_t center, const EncodingLayout& layout,
                                const PhoneInventory& inventory,
                                const RuleSet* rules) {
  if (center >= utterance.size())
    throw DataError("window center out of range");
  if (layout.has_rules() && rules == nullptr)
    throw DataError("layout has a rules block but no ruleset was given");
  if (layout.has_rules() && rules->size() != layout.rules_width())
    throw DataError("ruleset size " + std::to_string(rules->size()) +
                    " does not match rules block width " +
                    std::to_string(layout.rules_width()));

  const int d = layout.segment_width();
  const int half = (layout.window - 1) / 2;
  Eigen::VectorXd out(layout.total_width());
  for (int slot = 0; slot < layout.window; ++slot) {
    long pos = static_cast<long>(center) - half + slot;
    Eigen::VectorXd piece;
    if (pos < 0 || pos >= static_cast<long>(utterance.size())) {
      piece = encode_pad(layout);
    } else {
      const PositionedSegment& seg = utterance[static_cast<std::size_t>(pos)];
      std::optional<RuleFiringVector> firing;
      if (layout.has_rules()) {
        bool want = layout.rule_scope == RuleScope::PerSlot ||
                    pos == static_cast<long>(center);
        firing = want ? fire_rules(*rules, seg, inventory)
                      : RuleFiringVector(static_cast<std::size_t>(layout.rules_width()), 0);
      }
      piece = encode_segment(seg, layout, inventory, firing);
    }
    out.segment(slot * d, d) = piece;
  }
  return out;
}

Dataset build_dataset(const Corpus& corpus, const EncodingLayout& layout,
                      const PhoneInventory& inventory, const PhoneStats& stats,
                      const RuleSet* rules, bool fallback_to_global) {
  auto positioned = derive_positions(corpus, inventory);
  const std::size_t n = corpus.segment_count();
  Dataset ds;
  ds.inputs.resize(static_cast<Eigen::Index>(n), layout.total_width());
  ds.targets.resize(static_cast<Eigen::Index>(n));
  Eigen::Index row = 0;
  for (const auto& utt : positioned) {
    for (std::size_t c = 0; c < utt.size(); ++c, ++row) {
      ds.inputs.row(row) = assemble_window(utt, c, layout, inventory, rules);
      ds.targets[row] = scale_duration(utt[c].seg.duration_ms, utt[c].seg.phone,
                                       stats, fallback_to_global);
    }
  }
  return ds;
}

}  // namespace durhybrid
