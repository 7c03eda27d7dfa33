#include "durhybrid/stats.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "durhybrid/common.hpp"

namespace durhybrid {

std::uint64_t PhoneStats::fingerprint() const { return fnv1a(emit_stats(*this)); }

PhoneStats compute_phone_stats(const Corpus& corpus) {
  if (corpus.utterances.empty() || corpus.segment_count() == 0)
    throw DataError("cannot compute phone stats on an empty corpus");

  std::map<std::string, std::vector<double>> by_phone;
  std::vector<double> all;
  for (const auto& utt : corpus.utterances)
    for (const auto& seg : utt.segments) {
      by_phone[seg.phone].push_back(seg.duration_ms);
      all.push_back(seg.duration_ms);
    }

  auto mean_of = [](const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
  };
  auto pop_std_of = [&](const std::vector<double>& xs, double mean) {
    double s = 0.0;
    for (double x : xs) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(xs.size()));
  };

  PhoneStats stats;
  stats.global_mean_ms = mean_of(all);
  stats.global_std_ms = pop_std_of(all, stats.global_mean_ms);
  if (stats.global_std_ms == 0.0)
    throw DataError("degenerate corpus: zero variance in segment durations");
  stats.corpus_fingerprint = to_hex(corpus.fingerprint());

  for (const auto& [phone, durations] : by_phone) {
    PhoneStats::Entry e;
    e.count = static_cast<int>(durations.size());
    e.mean_ms = mean_of(durations);
    e.std_ms = pop_std_of(durations, e.mean_ms);
    if (e.count < 2 || e.std_ms == 0.0) {
      e.std_ms = stats.global_std_ms;
      e.fallback = true;
    }
    stats.phones[phone] = e;
  }
  return stats;
}

namespace {

const PhoneStats::Entry* lookup(const std::string& phone, const PhoneStats& stats) {
  auto it = stats.phones.find(phone);
  return it == stats.phones.end() ? nullptr : &it->second;
}

}  // namespace

double scale_duration(double duration_ms, const std::string& phone,
                      const PhoneStats& stats, bool fallback_to_global) {
  if (const auto* e = lookup(phone, stats))
    return (duration_ms - e->mean_ms) / e->std_ms;
  if (fallback_to_global)
    return (duration_ms - stats.global_mean_ms) / stats.global_std_ms;
  throw DataError("phone '" + phone + "' absent from stats and global fallback disabled");
}

double unscale(double z, const std::string& phone, const PhoneStats& stats,
               bool fallback_to_global) {
  if (const auto* e = lookup(phone, stats)) return e->mean_ms + z * e->std_ms;
  if (fallback_to_global) return stats.global_mean_ms + z * stats.global_std_ms;
  throw DataError("phone '" + phone + "' absent from stats and global fallback disabled");
}

double mse_percent_variance(const std::vector<double>& predicted,
                            const std::vector<double>& target) {
  if (predicted.size() != target.size())
    throw DataError("prediction/target length mismatch (" +
                    std::to_string(predicted.size()) + " vs " +
                    std::to_string(target.size()) + ")");
  if (target.empty()) throw DataError("empty prediction/target sequences");

  const double n = static_cast<double>(target.size());
  double t_mean = 0.0;
  for (double t : target) t_mean += t;
  t_mean /= n;
  double variance = 0.0;
  for (double t : target) variance += (t - t_mean) * (t - t_mean);
  variance /= n;
  if (variance == 0.0) throw DataError("target sequence has zero variance");

  double mse = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    double d = predicted[i] - target[i];
    mse += d * d;
  }
  mse /= n;
  return 100.0 * mse / variance;
}

std::string emit_stats(const PhoneStats& stats) {
  std::ostringstream out;
  out << "# corpus_fingerprint " << stats.corpus_fingerprint << '\n';
  out << "# global_mean_ms " << format_exact(stats.global_mean_ms) << '\n';
  out << "# global_std_ms " << format_exact(stats.global_std_ms) << '\n';
  out << "phone\tmean_ms\tstd_ms\tcount\tfallback\n";
  for (const auto& [phone, e] : stats.phones)
    out << phone << '\t' << format_exact(e.mean_ms) << '\t'
        << format_exact(e.std_ms) << '\t' << e.count << '\t'
        << (e.fallback ? 1 : 0) << '\n';
  return out.str();
}

PhoneStats parse_stats(std::istream& in) {
  PhoneStats stats;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key;
      ls >> key;
      if (key == "corpus_fingerprint") ls >> stats.corpus_fingerprint;
      else if (key == "global_mean_ms") ls >> stats.global_mean_ms;
      else if (key == "global_std_ms") ls >> stats.global_std_ms;
      continue;
    }
    if (!header_seen) {
      if (line.rfind("phone", 0) != 0)
        throw ParseError("missing stats header", lineno);
      header_seen = true;
      continue;
    }
    std::istringstream ls(line);
    std::string phone;
    PhoneStats::Entry e;
    int fb = 0;
    if (!(ls >> phone >> e.mean_ms >> e.std_ms >> e.count >> fb))
      throw ParseError("malformed stats row", lineno);
    e.fallback = fb != 0;
    stats.phones[phone] = e;
  }
  if (!header_seen) throw DataError("empty stats file");
  return stats;
}

void save_stats_file(const PhoneStats& stats, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write stats file '" + path + "'");
  out << emit_stats(stats);
}

PhoneStats load_stats_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stats file '" + path + "'");
  return parse_stats(in);
}

}  // namespace durhybrid
