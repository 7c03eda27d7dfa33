#ifndef DURHYBRID_ANALYSIS_HPP_
#define DURHYBRID_ANALYSIS_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "durhybrid/model.hpp"
#include "durhybrid/rules.hpp"
#include "durhybrid/synth.hpp"

namespace durhybrid {

// First-layer absolute-weight mass grouped by input type, the standard
// saliency proxy for binary inputs.
struct ContributionRow {
  std::string input_type;
  double total = 0.0;
  int count = 0;
  double mean = 0.0;  // total / count
};

struct ContributionTable {
  std::vector<ContributionRow> rows;
};

ContributionTable contribution_table(const Network& net,
                                     const EncodingLayout& layout);

// Per-rule-bit totals, summed across window slots, sorted descending with
// ties broken by rule order.
std::vector<std::pair<std::string, double>> top_rule_contributions(
    const Network& net, const EncodingLayout& layout, const RuleSet& rules,
    std::size_t k);

struct SweepRow {
  int window = 0;
  bool with_rules = false;
  double train_error_pct = 0.0;
  double test_error_pct = 0.0;
  long weight_count = 0;
  int epochs_run = 0;
  std::uint64_t seed = 0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
};

struct SweepConfig {
  std::vector<int> widths = {1, 3, 5, 7};
  std::vector<bool> rules_modes = {false, true};
  std::size_t held_out = 10;
  std::vector<int> hidden = {20};
  Hyperparams hp;
  std::uint64_t split_seed = 0;
  RuleScope rule_scope = RuleScope::PerSlot;
};

// Trains one fresh network per (width, mode) configuration and evaluates
// both corpus sides with the percent-of-variance metric.
SweepReport window_sweep(const Corpus& corpus, const PhoneInventory& inventory,
                         const RuleSet& rules, const SweepConfig& config);

enum class ReportFormat { Tsv, Csv, PlotData };
ReportFormat parse_report_format(const std::string& name);

std::string emit_sweep_report(const SweepReport& report, ReportFormat format);
std::string emit_contribution_table(const ContributionTable& table,
                                    ReportFormat format);

}  // namespace durhybrid

#endif  // DURHYBRID_ANALYSIS_HPP_
