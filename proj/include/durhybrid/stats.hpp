#ifndef DURHYBRID_STATS_HPP_
#define DURHYBRID_STATS_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "durhybrid/corpus.hpp"

namespace durhybrid {

// Per-phone duration mean/std with global fallbacks. Standard deviations are
// population (divide by n); phones with fewer than two observations or zero
// spread fall back to the global std and are flagged.
struct PhoneStats {
  struct Entry {
    double mean_ms = 0.0;
    double std_ms = 0.0;
    int count = 0;
    bool fallback = false;
  };

  std::map<std::string, Entry> phones;
  double global_mean_ms = 0.0;
  double global_std_ms = 0.0;
  std::string corpus_fingerprint;

  std::uint64_t fingerprint() const;
};

PhoneStats compute_phone_stats(const Corpus& corpus);

// z = (duration - mean(phone)) / std(phone). Unknown phones scale against the
// global stats only when fallback_to_global is set.
double scale_duration(double duration_ms, const std::string& phone,
                      const PhoneStats& stats, bool fallback_to_global = false);
double unscale(double z, const std::string& phone, const PhoneStats& stats,
               bool fallback_to_global = false);

// 100 * mean((p - t)^2) / population-variance(t).
double mse_percent_variance(const std::vector<double>& predicted,
                            const std::vector<double>& target);

std::string emit_stats(const PhoneStats& stats);
PhoneStats parse_stats(std::istream& in);
void save_stats_file(const PhoneStats& stats, const std::string& path);
PhoneStats load_stats_file(const std::string& path);

}  // namespace durhybrid

#endif  // DURHYBRID_STATS_HPP_
