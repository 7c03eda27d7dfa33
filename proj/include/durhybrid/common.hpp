#ifndef DURHYBRID_COMMON_HPP_
#define DURHYBRID_COMMON_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace durhybrid {

// Data/model problems (bad input files, mismatched fingerprints, degenerate
// corpora). The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : DataError(msg + ", line " + std::to_string(line)), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Bad arguments / usage. The CLI maps these to exit code 1.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// FNV-1a, used for content fingerprints (layout, stats, corpus, weights).
inline std::uint64_t fnv1a(std::string_view data,
                           std::uint64_t seed = 0xcbf29ce484222325ull) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string to_hex(std::uint64_t v);

// Formats a double with enough digits to round-trip exactly.
std::string format_exact(double v);

}  // namespace durhybrid

#endif  // DURHYBRID_COMMON_HPP_
