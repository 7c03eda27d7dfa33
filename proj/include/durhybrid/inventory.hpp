#ifndef DURHYBRID_INVENTORY_HPP_
#define DURHYBRID_INVENTORY_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "durhybrid/common.hpp"

namespace durhybrid {

// Ordered phone symbol set plus a binary articulatory feature row per phone.
// The default is the 61-symbol TIMIT labeling inventory with 14 features.
class PhoneInventory {
 public:
  static PhoneInventory default_timit();

  // File format: header line `phone<TAB>f1<TAB>...`, then one 0/1 row per
  // phone. `#` comment lines allowed.
  static PhoneInventory load(std::istream& in);
  std::string emit() const;

  int size() const { return static_cast<int>(phones_.size()); }
  int feature_count() const { return static_cast<int>(feature_names_.size()); }

  const std::vector<std::string>& phones() const { return phones_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }

  bool has(const std::string& phone) const { return index_.count(phone) != 0; }
  // -1 when the phone is not in the inventory.
  int index_of(const std::string& phone) const;

  const std::vector<std::uint8_t>& feature_row(int phone_idx) const {
    return rows_[static_cast<std::size_t>(phone_idx)];
  }

  bool feature(const std::string& phone, const std::string& feat) const;
  bool is_syllabic(const std::string& phone) const { return feature(phone, "syllabic"); }

  // Named phone classes used by the rule predicates: "vowel", "consonant",
  // "voiceless_stop", "voiced_stop", "voiceless_fricative",
  // "voiced_fricative", plus any raw feature name.
  bool phone_class(const std::string& phone, const std::string& cls) const;
  bool known_class(const std::string& cls) const;

  std::uint64_t fingerprint() const;

 private:
  PhoneInventory() = default;
  void add_phone(const std::string& phone, const std::vector<std::uint8_t>& row);
  void validate() const;
  int feature_index(const std::string& feat) const;

  std::vector<std::string> phones_;
  std::vector<std::string> feature_names_;
  std::vector<std::vector<std::uint8_t>> rows_;
  std::unordered_map<std::string, int> index_;
  std::unordered_map<std::string, int> feature_index_;
};

}  // namespace durhybrid

#endif  // DURHYBRID_INVENTORY_HPP_
