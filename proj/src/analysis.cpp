#include "durhybrid/analysis.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "durhybrid/common.hpp"
#include "durhybrid/stats.hpp"

namespace durhybrid {

namespace {

std::string row_name_for_block(const std::string& block) {
  if (block == "phone_onehot") return "phone identity";
  if (block == "artic_features") return "phone features";
  if (block == "stress_onehot") return "syllable stress";
  if (block == "word_type_onehot") return "word type";
  if (block == "boundary_flags") return "syntax";
  if (block == "pad_flag") return "pad";
  if (block == "rules") return "rules";
  return block;
}

const char* kRowOrder[] = {"phone identity", "phone features", "syllable stress",
                           "word type",      "syntax",         "rules",
                           "pad"};

}  // namespace

ContributionTable contribution_table(const Network& net,
                                     const EncodingLayout& layout) {
  const Eigen::VectorXd sums = first_layer_abs_weight_sums(net, layout);
  const int d = layout.segment_width();

  std::map<std::string, ContributionRow> by_type;
  for (Eigen::Index j = 0; j < sums.size(); ++j) {
    const int within = static_cast<int>(j) % d;
    const LayoutBlock* owner = nullptr;
    for (const auto& b : layout.blocks)
      if (within >= b.offset && within < b.offset + b.width) owner = &b;
    ContributionRow& row = by_type[row_name_for_block(owner->name)];
    row.total += sums[j];
    row.count += 1;
  }

  ContributionTable table;
  for (const char* name : kRowOrder) {
    auto it = by_type.find(name);
    if (it == by_type.end()) continue;
    it->second.input_type = name;
    it->second.mean = it->second.total / static_cast<double>(it->second.count);
    table.rows.push_back(it->second);
  }
  return table;
}

std::vector<std::pair<std::string, double>> top_rule_contributions(
    const Network& net, const EncodingLayout& layout, const RuleSet& rules,
    std::size_t k) {
  const LayoutBlock* rb = layout.block("rules");
  if (rb == nullptr) throw DataError("layout has no rules block");
  if (rules.size() != rb->width)
    throw DataError("ruleset size does not match the layout rules block");

  const Eigen::VectorXd sums = first_layer_abs_weight_sums(net, layout);
  const int d = layout.segment_width();
  std::vector<std::pair<std::string, double>> totals;
  for (int r = 0; r < rb->width; ++r) {
    double total = 0.0;
    for (int slot = 0; slot < layout.window; ++slot)
      total += sums[slot * d + rb->offset + r];
    totals.emplace_back(rules.cases[static_cast<std::size_t>(r)].id, total);
  }
  std::stable_sort(totals.begin(), totals.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (totals.size() > k) totals.resize(k);
  return totals;
}

SweepReport window_sweep(const Corpus& corpus, const PhoneInventory& inventory,
                         const RuleSet& rules, const SweepConfig& config) {
  auto [train_side, test_side] =
      split_train_test(corpus, config.held_out, config.split_seed);
  const PhoneStats stats = compute_phone_stats(train_side);

  SweepReport report;
  for (int width : config.widths) {
    for (bool with_rules : config.rules_modes) {
      LayoutConfig lc;
      lc.window = width;
      lc.rules_width = with_rules ? rules.size() : 0;
      lc.rule_scope = config.rule_scope;
      const EncodingLayout layout = build_layout(inventory, lc);
      const RuleSet* rs = with_rules ? &rules : nullptr;

      Dataset train_ds = build_dataset(train_side, layout, inventory, stats, rs);
      Dataset test_ds = build_dataset(test_side, layout, inventory, stats, rs);

      Network net = init_network(layout.total_width(), config.hidden, config.hp.seed);
      net.layout_fingerprint = to_hex(layout.fingerprint());
      net.ruleset_version = with_rules ? rules.version : "none";
      net.stats_fingerprint = to_hex(stats.fingerprint());
      TrainReport tr = train(net, train_ds, config.hp);

      auto eval = [&](const Dataset& ds) {
        Eigen::VectorXd preds = forward_all(net, ds.inputs);
        std::vector<double> p(preds.data(), preds.data() + preds.size());
        std::vector<double> t(ds.targets.data(),
                              ds.targets.data() + ds.targets.size());
        return mse_percent_variance(p, t);
      };

      SweepRow row;
      row.window = width;
      row.with_rules = with_rules;
      row.train_error_pct = eval(train_ds);
      row.test_error_pct = eval(test_ds);
      row.weight_count = net.weight_count();
      row.epochs_run = static_cast<int>(tr.train_error_pct.size());
      row.seed = config.hp.seed;
      report.rows.push_back(row);
    }
  }
  return report;
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "tsv") return ReportFormat::Tsv;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "plotdata") return ReportFormat::PlotData;
  throw UsageError("unknown report format '" + name + "' (want tsv/csv/plotdata)");
}

namespace {

std::string join_fields(const std::vector<std::string>& fields, char sep) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += sep;
    out += fields[i];
  }
  out += '\n';
  return out;
}

}  // namespace

std::string emit_sweep_report(const SweepReport& report, ReportFormat format) {
  if (format == ReportFormat::PlotData) {
    // x/y series per (mode, side), the four curves of the error-vs-window plot
    struct Series {
      const char* name;
      bool with_rules;
      bool test_side;
    };
    const Series series[] = {
        {"without_rules_train", false, false},
        {"without_rules_test", false, true},
        {"with_rules_train", true, false},
        {"with_rules_test", true, true},
    };
    std::ostringstream out;
    for (const auto& s : series) {
      bool any = false;
      for (const auto& r : report.rows)
        if (r.with_rules == s.with_rules) any = true;
      if (!any) continue;
      out << "# series " << s.name << '\n';
      for (const auto& r : report.rows)
        if (r.with_rules == s.with_rules)
          out << r.window << ' '
              << format_exact(s.test_side ? r.test_error_pct : r.train_error_pct)
              << '\n';
    }
    return out.str();
  }
  const char sep = format == ReportFormat::Csv ? ',' : '\t';
  std::string out = join_fields({"window", "rules", "train_error_pct",
                                 "test_error_pct", "weight_count", "epochs_run",
                                 "seed"},
                                sep);
  for (const auto& r : report.rows)
    out += join_fields({std::to_string(r.window), r.with_rules ? "on" : "off",
                        format_exact(r.train_error_pct),
                        format_exact(r.test_error_pct),
                        std::to_string(r.weight_count),
                        std::to_string(r.epochs_run), std::to_string(r.seed)},
                       sep);
  return out;
}

std::string emit_contribution_table(const ContributionTable& table,
                                    ReportFormat format) {
  if (format == ReportFormat::PlotData) {
    std::ostringstream out;
    out << "# series abs_weight_total\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i)
      out << i << ' ' << format_exact(table.rows[i].total) << '\n';
    out << "# series mean_abs_weight\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i)
      out << i << ' ' << format_exact(table.rows[i].mean) << '\n';
    return out.str();
  }
  const char sep = format == ReportFormat::Csv ? ',' : '\t';
  std::string out = join_fields(
      {"input_type", "abs_weight_total", "input_count", "mean_abs_weight"}, sep);
  for (const auto& r : table.rows) {
    std::string name = r.input_type;
    if (format == ReportFormat::Csv)
      std::replace(name.begin(), name.end(), ' ', '_');
    out += join_fields({name, format_exact(r.total), std::to_string(r.count),
                        format_exact(r.mean)},
                       sep);
  }
  return out;
}

}  // namespace durhybrid
