#include "durhybrid/inventory.hpp"

#include <istream>
#include <sstream>

#include "durhybrid/common.hpp"

namespace durhybrid {

namespace {

const char* kFeatureNames[] = {
    "syllabic",  "consonantal", "sonorant",    "voiced", "nasal",
    "stop",      "fricative",   "affricate",   "approximant",
    "lateral",   "high",        "low",         "back",   "rounded"};
constexpr int kFeatureCount = 14;

struct PhoneRow {
  const char* phone;
  // syl con son voi nas stp fri aff app lat hi lo bk rnd
  std::uint8_t f[kFeatureCount];
};

// TIMIT 61-symbol inventory. Vowels carry height/backness/rounding bits;
// closures are folded into the stop class; pau/epi/h# carry no features.
const PhoneRow kTimit[] = {
    // vowels
    {"aa",   {1,0,1,1,0,0,0,0,0,0,0,1,1,0}},
    {"ae",   {1,0,1,1,0,0,0,0,0,0,0,1,0,0}},
    {"ah",   {1,0,1,1,0,0,0,0,0,0,0,0,1,0}},
    {"ao",   {1,0,1,1,0,0,0,0,0,0,0,1,1,1}},
    {"aw",   {1,0,1,1,0,0,0,0,0,0,0,1,1,1}},
    {"ax",   {1,0,1,1,0,0,0,0,0,0,0,0,0,0}},
    {"ax-h", {1,0,1,0,0,0,0,0,0,0,0,0,0,0}},
    {"axr",  {1,0,1,1,0,0,0,0,0,0,0,0,0,0}},
    {"ay",   {1,0,1,1,0,0,0,0,0,0,0,1,0,0}},
    {"eh",   {1,0,1,1,0,0,0,0,0,0,0,0,0,0}},
    {"er",   {1,0,1,1,0,0,0,0,0,0,0,0,0,0}},
    {"ey",   {1,0,1,1,0,0,0,0,0,0,0,0,0,0}},
    {"ih",   {1,0,1,1,0,0,0,0,0,0,1,0,0,0}},
    {"ix",   {1,0,1,1,0,0,0,0,0,0,1,0,0,0}},
    {"iy",   {1,0,1,1,0,0,0,0,0,0,1,0,0,0}},
    {"ow",   {1,0,1,1,0,0,0,0,0,0,0,0,1,1}},
    {"oy",   {1,0,1,1,0,0,0,0,0,0,0,0,1,1}},
    {"uh",   {1,0,1,1,0,0,0,0,0,0,1,0,1,1}},
    {"uw",   {1,0,1,1,0,0,0,0,0,0,1,0,1,1}},
    {"ux",   {1,0,1,1,0,0,0,0,0,0,1,0,0,1}},
    // semivowels and glides
    {"l",    {0,1,1,1,0,0,0,0,1,1,0,0,0,0}},
    {"r",    {0,1,1,1,0,0,0,0,1,0,0,0,0,0}},
    {"w",    {0,1,1,1,0,0,0,0,1,0,1,0,1,1}},
    {"y",    {0,1,1,1,0,0,0,0,1,0,1,0,0,0}},
    {"hh",   {0,1,0,0,0,0,1,0,0,0,0,0,0,0}},
    {"hv",   {0,1,0,1,0,0,1,0,0,0,0,0,0,0}},
    {"el",   {1,1,1,1,0,0,0,0,1,1,0,0,0,0}},
    // nasals
    {"m",    {0,1,1,1,1,0,0,0,0,0,0,0,0,0}},
    {"n",    {0,1,1,1,1,0,0,0,0,0,0,0,0,0}},
    {"ng",   {0,1,1,1,1,0,0,0,0,0,0,0,0,0}},
    {"em",   {1,1,1,1,1,0,0,0,0,0,0,0,0,0}},
    {"en",   {1,1,1,1,1,0,0,0,0,0,0,0,0,0}},
    {"eng",  {1,1,1,1,1,0,0,0,0,0,0,0,0,0}},
    {"nx",   {0,1,1,1,1,0,0,0,0,0,0,0,0,0}},
    // fricatives
    {"s",    {0,1,0,0,0,0,1,0,0,0,0,0,0,0}},
    {"sh",   {0,1,0,0,0,0,1,0,0,0,0,0,0,0}},
    {"z",    {0,1,0,1,0,0,1,0,0,0,0,0,0,0}},
    {"zh",   {0,1,0,1,0,0,1,0,0,0,0,0,0,0}},
    {"f",    {0,1,0,0,0,0,1,0,0,0,0,0,0,0}},
    {"th",   {0,1,0,0,0,0,1,0,0,0,0,0,0,0}},
    {"v",    {0,1,0,1,0,0,1,0,0,0,0,0,0,0}},
    {"dh",   {0,1,0,1,0,0,1,0,0,0,0,0,0,0}},
    // affricates
    {"jh",   {0,1,0,1,0,0,0,1,0,0,0,0,0,0}},
    {"ch",   {0,1,0,0,0,0,0,1,0,0,0,0,0,0}},
    // stops
    {"b",    {0,1,0,1,0,1,0,0,0,0,0,0,0,0}},
    {"d",    {0,1,0,1,0,1,0,0,0,0,0,0,0,0}},
    {"g",    {0,1,0,1,0,1,0,0,0,0,0,0,0,0}},
    {"p",    {0,1,0,0,0,1,0,0,0,0,0,0,0,0}},
    {"t",    {0,1,0,0,0,1,0,0,0,0,0,0,0,0}},
    {"k",    {0,1,0,0,0,1,0,0,0,0,0,0,0,0}},
    {"dx",   {0,1,0,1,0,1,0,0,0,0,0,0,0,0}},
    {"q",    {0,1,0,0,0,1,0,0,0,0,0,0,0,0}},
    // closures and silence
    {"bcl",  {0,1,0,1,0,1,0,0,0,0,0,0,0,0}},
    {"dcl",  {0,1,0,1,0,1,0,0,0,0,0,0,0,0}},
    {"gcl",  {0,1,0,1,0,1,0,0,0,0,0,0,0,0}},
    {"pcl",  {0,1,0,0,0,1,0,0,0,0,0,0,0,0}},
    {"tcl",  {0,1,0,0,0,1,0,0,0,0,0,0,0,0}},
    {"kcl",  {0,1,0,0,0,1,0,0,0,0,0,0,0,0}},
    {"epi",  {0,0,0,0,0,0,0,0,0,0,0,0,0,0}},
    {"pau",  {0,0,0,0,0,0,0,0,0,0,0,0,0,0}},
    {"h#",   {0,0,0,0,0,0,0,0,0,0,0,0,0,0}},
};

}  // namespace

PhoneInventory PhoneInventory::default_timit() {
  PhoneInventory inv;
  inv.feature_names_.assign(kFeatureNames, kFeatureNames + kFeatureCount);
  for (int i = 0; i < kFeatureCount; ++i) inv.feature_index_[kFeatureNames[i]] = i;
  for (const PhoneRow& row : kTimit) {
    inv.add_phone(row.phone, std::vector<std::uint8_t>(row.f, row.f + kFeatureCount));
  }
  inv.validate();
  return inv;
}

PhoneInventory PhoneInventory::load(std::istream& in) {
  PhoneInventory inv;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> toks;
    while (ls >> tok) toks.push_back(tok);
    if (!header_seen) {
      if (toks.empty() || toks[0] != "phone")
        throw ParseError("inventory header must start with 'phone'", lineno);
      inv.feature_names_.assign(toks.begin() + 1, toks.end());
      if (inv.feature_names_.empty())
        throw ParseError("inventory header names no features", lineno);
      for (int i = 0; i < inv.feature_count(); ++i)
        inv.feature_index_[inv.feature_names_[static_cast<std::size_t>(i)]] = i;
      header_seen = true;
      continue;
    }
    if (static_cast<int>(toks.size()) != 1 + inv.feature_count())
      throw ParseError("inventory row width mismatch for phone '" + toks[0] + "'", lineno);
    std::vector<std::uint8_t> row;
    for (std::size_t i = 1; i < toks.size(); ++i) {
      if (toks[i] != "0" && toks[i] != "1")
        throw ParseError("inventory feature bit must be 0 or 1", lineno);
      row.push_back(toks[i] == "1" ? 1 : 0);
    }
    if (inv.has(toks[0]))
      throw ParseError("duplicate phone '" + toks[0] + "'", lineno);
    inv.add_phone(toks[0], row);
  }
  if (!header_seen) throw DataError("empty inventory file");
  inv.validate();
  return inv;
}

std::string PhoneInventory::emit() const {
  std::ostringstream out;
  out << "phone";
  for (const auto& f : feature_names_) out << '\t' << f;
  out << '\n';
  for (std::size_t p = 0; p < phones_.size(); ++p) {
    out << phones_[p];
    for (std::uint8_t b : rows_[p]) out << '\t' << int(b);
    out << '\n';
  }
  return out.str();
}

int PhoneInventory::index_of(const std::string& phone) const {
  auto it = index_.find(phone);
  return it == index_.end() ? -1 : it->second;
}

bool PhoneInventory::feature(const std::string& phone, const std::string& feat) const {
  int p = index_of(phone);
  if (p < 0) throw DataError("unknown phone symbol '" + phone + "'");
  int f = feature_index(feat);
  if (f < 0) throw DataError("unknown feature '" + feat + "'");
  return rows_[static_cast<std::size_t>(p)][static_cast<std::size_t>(f)] != 0;
}

bool PhoneInventory::phone_class(const std::string& phone, const std::string& cls) const {
  if (cls == "vowel") return feature(phone, "syllabic") && !feature(phone, "consonantal");
  if (cls == "consonant") return feature(phone, "consonantal");
  if (cls == "voiceless_stop") return feature(phone, "stop") && !feature(phone, "voiced");
  if (cls == "voiced_stop") return feature(phone, "stop") && feature(phone, "voiced");
  if (cls == "voiceless_fricative")
    return feature(phone, "fricative") && !feature(phone, "voiced");
  if (cls == "voiced_fricative")
    return feature(phone, "fricative") && feature(phone, "voiced");
  return feature(phone, cls);
}

bool PhoneInventory::known_class(const std::string& cls) const {
  if (cls == "vowel" || cls == "consonant" || cls == "voiceless_stop" ||
      cls == "voiced_stop" || cls == "voiceless_fricative" || cls == "voiced_fricative")
    return true;
  return feature_index(cls) >= 0;
}

std::uint64_t PhoneInventory::fingerprint() const { return fnv1a(emit()); }

void PhoneInventory::add_phone(const std::string& phone,
                               const std::vector<std::uint8_t>& row) {
  index_[phone] = static_cast<int>(phones_.size());
  phones_.push_back(phone);
  rows_.push_back(row);
}

void PhoneInventory::validate() const {
  int f_syl = feature_index("syllabic");
  if (f_syl < 0) throw DataError("inventory lacks a 'syllabic' feature");
  bool any_syllabic = false;
  for (const auto& row : rows_)
    if (row[static_cast<std::size_t>(f_syl)]) any_syllabic = true;
  if (!any_syllabic) throw DataError("inventory marks no phone as syllabic");
}

int PhoneInventory::feature_index(const std::string& feat) const {
  auto it = feature_index_.find(feat);
  return it == feature_index_.end() ? -1 : it->second;
}

}  // namespace durhybrid
