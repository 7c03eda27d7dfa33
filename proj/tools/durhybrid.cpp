#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "durhybrid/analysis.hpp"
#include "durhybrid/common.hpp"
#include "durhybrid/corpus.hpp"
#include "durhybrid/features.hpp"
#include "durhybrid/inventory.hpp"
#include "durhybrid/model.hpp"
#include "durhybrid/rules.hpp"
#include "durhybrid/stats.hpp"
#include "durhybrid/synth.hpp"

namespace {

using namespace durhybrid;

struct CommonOpts {
  std::string corpus_path;
  std::string inventory_path;
  std::string rules_config_path;
  int window = 3;
  std::string rules_mode = "on";
  std::vector<int> hidden = {20};
  double lr = 0.01;
  double momentum = 0.9;
  int batch = 16;
  int epochs = 200;
  std::uint64_t seed = 0;
  std::size_t held_out = 10;
  std::string out_path;
  std::string format = "tsv";
};

PhoneInventory load_inventory(const CommonOpts& o) {
  if (o.inventory_path.empty()) return PhoneInventory::default_timit();
  std::ifstream in(o.inventory_path);
  if (!in) throw DataError("cannot open inventory file '" + o.inventory_path + "'");
  return PhoneInventory::load(in);
}

RuleSet load_rules(const CommonOpts& o) {
  if (o.rules_config_path.empty()) return default_ruleset();
  return load_ruleset_file(o.rules_config_path);
}

Hyperparams hyperparams(const CommonOpts& o) {
  Hyperparams hp;
  hp.learning_rate = o.lr;
  hp.momentum = o.momentum;
  hp.batch_size = o.batch;
  hp.epochs = o.epochs;
  hp.seed = o.seed;
  return hp;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write output file '" + path + "'");
  out << content;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_corpus = true) {
  if (with_corpus)
    cmd->add_option("--corpus", o.corpus_path, "Corpus TSV path")->required();
  cmd->add_option("--inventory", o.inventory_path, "Phone inventory file");
  cmd->add_option("--rules-config", o.rules_config_path, "Rules config file");
  cmd->add_option("--window", o.window, "Context window width (odd)");
  cmd->add_option("--rules", o.rules_mode, "Rule-firing inputs")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--hidden", o.hidden, "Hidden layer sizes");
  cmd->add_option("--lr", o.lr, "Learning rate");
  cmd->add_option("--momentum", o.momentum, "Momentum");
  cmd->add_option("--batch", o.batch, "Minibatch size");
  cmd->add_option("--epochs", o.epochs, "Training epochs");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--held-out", o.held_out, "Utterances reserved for testing");
  cmd->add_option("--out", o.out_path, "Output path (default: stdout)");
  cmd->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"tsv", "csv", "plotdata"}));
}

EncodingLayout make_layout(const CommonOpts& o, const PhoneInventory& inv,
                           const RuleSet& rules) {
  LayoutConfig lc;
  lc.window = o.window;
  lc.rules_width = o.rules_mode == "on" ? rules.size() : 0;
  return build_layout(inv, lc);
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

int cmd_synth(const CommonOpts& o, const SyntheticSpec& spec) {
  PhoneInventory inv = load_inventory(o);
  RuleSet rules = load_rules(o);
  SyntheticResult result = generate_synthetic_corpus(spec, inv, rules);
  write_output(o.out_path, emit_corpus(result.corpus));
  if (!o.out_path.empty())
    write_output(o.out_path + ".truth.tsv", emit_truth(result));
  return 0;
}

int cmd_train(const CommonOpts& o) {
  PhoneInventory inv = load_inventory(o);
  RuleSet rules = load_rules(o);
  Corpus corpus = load_corpus_file(o.corpus_path, inv);
  PhoneStats stats = compute_phone_stats(corpus);
  EncodingLayout layout = make_layout(o, inv, rules);
  const RuleSet* rs = o.rules_mode == "on" ? &rules : nullptr;
  Dataset ds = build_dataset(corpus, layout, inv, stats, rs);

  Network net = init_network(layout.total_width(), o.hidden, o.seed);
  net.layout_fingerprint = to_hex(layout.fingerprint());
  net.ruleset_version = rs ? rules.version : "none";
  net.stats_fingerprint = to_hex(stats.fingerprint());
  TrainReport report = train(net, ds, hyperparams(o));

  const std::string prefix = o.out_path.empty() ? "model" : o.out_path;
  save_model_file(net, prefix + ".model");
  save_stats_file(stats, prefix + ".stats");

  std::ostringstream summary;
  summary << "weights " << net.weight_count() << '\n';
  summary << "epochs " << report.train_error_pct.size() << '\n';
  if (!report.train_error_pct.empty())
    summary << "final_train_error_pct "
            << format_exact(report.train_error_pct.back()) << '\n';
  std::cout << summary.str();
  return 0;
}

struct LoadedModel {
  PhoneInventory inv;
  RuleSet rules;
  EncodingLayout layout;
  Network net;
  PhoneStats stats;
};

LoadedModel load_for_scoring(const CommonOpts& o, const std::string& model_path,
                             const std::string& stats_path, bool need_stats) {
  LoadedModel m{load_inventory(o), load_rules(o), {}, {}, {}};
  m.net = load_model_file(model_path);
  m.layout = make_layout(o, m.inv, m.rules);
  if (m.net.layout_fingerprint != to_hex(m.layout.fingerprint()))
    throw DataError("model layout fingerprint " + m.net.layout_fingerprint +
                    " does not match the requested layout " +
                    to_hex(m.layout.fingerprint()) +
                    " (check --window/--rules/--inventory)");
  const std::string want_rules = o.rules_mode == "on" ? m.rules.version : "none";
  if (m.net.ruleset_version != want_rules)
    throw DataError("model ruleset version '" + m.net.ruleset_version +
                    "' does not match '" + want_rules + "'");
  if (need_stats) {
    m.stats = load_stats_file(stats_path);
    if (m.net.stats_fingerprint != to_hex(m.stats.fingerprint()))
      throw DataError("model stats fingerprint does not match the stats file");
  }
  return m;
}

int cmd_eval(const CommonOpts& o, const std::string& model_path,
             const std::string& stats_path) {
  LoadedModel m = load_for_scoring(o, model_path, stats_path, true);
  Corpus corpus = load_corpus_file(o.corpus_path, m.inv);
  const RuleSet* rs = o.rules_mode == "on" ? &m.rules : nullptr;
  Dataset ds = build_dataset(corpus, m.layout, m.inv, m.stats, rs);
  Eigen::VectorXd preds = forward_all(m.net, ds.inputs);
  const double err = mse_percent_variance(to_std(preds), to_std(ds.targets));
  std::ostringstream out;
  out << "error_pct " << format_exact(err) << '\n';
  write_output(o.out_path, out.str());
  return 0;
}

int cmd_predict(const CommonOpts& o, const std::string& model_path,
                const std::string& stats_path) {
  LoadedModel m = load_for_scoring(o, model_path, stats_path, true);
  Corpus corpus = load_corpus_file(o.corpus_path, m.inv);
  const RuleSet* rs = o.rules_mode == "on" ? &m.rules : nullptr;
  auto positioned = derive_positions(corpus, m.inv);

  std::ostringstream out;
  out << "utt_id\tindex\tphone\tpredicted_ms\n";
  for (const auto& utt : positioned) {
    for (std::size_t c = 0; c < utt.size(); ++c) {
      Eigen::VectorXd x = assemble_window(utt, c, m.layout, m.inv, rs);
      const double z = forward(m.net, x);
      const double ms = unscale(z, utt[c].seg.phone, m.stats, true);
      out << utt[c].seg.utt_id << '\t' << c << '\t' << utt[c].seg.phone << '\t'
          << format_exact(ms) << '\n';
    }
  }
  write_output(o.out_path, out.str());
  return 0;
}

int cmd_sweep(const CommonOpts& o, const std::vector<int>& widths,
              const std::string& modes) {
  PhoneInventory inv = load_inventory(o);
  RuleSet rules = load_rules(o);
  Corpus corpus = load_corpus_file(o.corpus_path, inv);

  SweepConfig sc;
  sc.widths = widths;
  if (modes == "both") sc.rules_modes = {false, true};
  else if (modes == "on") sc.rules_modes = {true};
  else sc.rules_modes = {false};
  sc.held_out = o.held_out;
  sc.hidden = o.hidden;
  sc.hp = hyperparams(o);
  sc.split_seed = o.seed;
  SweepReport report = window_sweep(corpus, inv, rules, sc);
  write_output(o.out_path, emit_sweep_report(report, parse_report_format(o.format)));
  return 0;
}

int cmd_contrib(const CommonOpts& o, const std::string& model_path,
                std::size_t top_rules) {
  LoadedModel m = load_for_scoring(o, model_path, "", false);
  ContributionTable table = contribution_table(m.net, m.layout);
  std::string out = emit_contribution_table(table, parse_report_format(o.format));
  if (top_rules > 0 && o.rules_mode == "on") {
    out += "# top rule contributions\n";
    for (const auto& [id, total] : top_rule_contributions(m.net, m.layout, m.rules, top_rules))
      out += id + "\t" + format_exact(total) + "\n";
  }
  write_output(o.out_path, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid rule-based/neural-network segment duration modeling"};
  app.require_subcommand(1);
  app.set_config("--config")->envname("DURHYBRID_CONFIG");

  CommonOpts o;
  SyntheticSpec spec;
  std::string model_path, stats_path, modes = "both";
  std::vector<int> widths = {1, 3, 5, 7};
  std::size_t top_rules = 0;

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  add_common(synth, o, false);
  synth->add_option("--utterances", spec.utterances, "Utterance count");
  synth->add_option("--noise", spec.noise_frac, "Noise std as fraction of base mean");
  synth->add_option("--min-words", spec.min_words, "Min words per utterance");
  synth->add_option("--max-words", spec.max_words, "Max words per utterance");

  CLI::App* train_cmd = app.add_subcommand("train", "Train a duration model");
  add_common(train_cmd, o);

  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a model on a corpus");
  add_common(eval_cmd, o);
  eval_cmd->add_option("--model", model_path, "Model file")->required();
  eval_cmd->add_option("--stats", stats_path, "Stats file")->required();

  CLI::App* predict_cmd =
      app.add_subcommand("predict", "Predict durations in milliseconds");
  add_common(predict_cmd, o);
  predict_cmd->add_option("--model", model_path, "Model file")->required();
  predict_cmd->add_option("--stats", stats_path, "Stats file")->required();

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Error-vs-window-size sweep");
  add_common(sweep_cmd, o);
  sweep_cmd->add_option("--widths", widths, "Window widths")->delimiter(',');
  sweep_cmd->add_option("--modes", modes, "Rule modes")
      ->check(CLI::IsMember({"both", "on", "off"}));

  CLI::App* contrib_cmd =
      app.add_subcommand("contrib", "Per-input-type weight contribution table");
  add_common(contrib_cmd, o, false);
  contrib_cmd->add_option("--model", model_path, "Model file")->required();
  contrib_cmd->add_option("--top-rules", top_rules, "Also rank the top K rules");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "E:usage:" << e.what() << "\n";
    return 1;
  }

  try {
    if (synth->parsed()) {
      spec.seed = o.seed;
      return cmd_synth(o, spec);
    }
    if (train_cmd->parsed()) return cmd_train(o);
    if (eval_cmd->parsed()) return cmd_eval(o, model_path, stats_path);
    if (predict_cmd->parsed()) return cmd_predict(o, model_path, stats_path);
    if (sweep_cmd->parsed()) return cmd_sweep(o, widths, modes);
    if (contrib_cmd->parsed()) return cmd_contrib(o, model_path, top_rules);
  } catch (const UsageError& e) {
    std::cerr << "E:usage:" << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "E:data:" << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "E:internal:" << e.what() << "\n";
    return 2;
  }
  return 1;
}
