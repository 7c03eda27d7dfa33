#include "durhybrid/rules.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "durhybrid/common.hpp"

namespace durhybrid {

bool near_boundary(const PositionedSegment& seg) {
  return seg.in_phrase_final_syllable || seg.in_clause_final_syllable;
}

namespace {

bool flag_value(const PositionedSegment& s, const std::string& name, bool& out) {
  if (name == "first_in_syllable") out = s.first_in_syllable;
  else if (name == "last_in_syllable") out = s.last_in_syllable;
  else if (name == "first_in_word") out = s.first_in_word;
  else if (name == "last_in_word") out = s.last_in_word;
  else if (name == "first_in_phrase") out = s.first_in_phrase;
  else if (name == "last_in_phrase") out = s.last_in_phrase;
  else if (name == "first_in_clause") out = s.first_in_clause;
  else if (name == "last_in_clause") out = s.last_in_clause;
  else if (name == "first_in_sentence") out = s.first_in_sentence;
  else if (name == "last_in_sentence") out = s.last_in_sentence;
  else if (name == "in_word_final_syllable") out = s.in_word_final_syllable;
  else if (name == "in_phrase_final_syllable") out = s.in_phrase_final_syllable;
  else if (name == "in_clause_final_syllable") out = s.in_clause_final_syllable;
  else if (name == "near_boundary") out = near_boundary(s);
  else return false;
  return true;
}

RulePredicate compile_atom(const std::string& atom) {
  auto eq = atom.find('=');
  if (eq == std::string::npos) {
    // boundary-flag atom; validate the name eagerly
    PositionedSegment probe;
    bool dummy;
    if (!flag_value(probe, atom, dummy))
      throw DataError("unknown rule atom '" + atom + "'");
    return [atom](const PositionedSegment& s, const PhoneInventory&) {
      bool v = false;
      flag_value(s, atom, v);
      return v;
    };
  }
  std::string key = atom.substr(0, eq);
  std::string val = atom.substr(eq + 1);
  if (key == "role") {
    SyllableRole want;
    if (val == "on") want = SyllableRole::Onset;
    else if (val == "nu") want = SyllableRole::Nucleus;
    else if (val == "co") want = SyllableRole::Coda;
    else throw DataError("bad role '" + val + "' in rule atom");
    return [want](const PositionedSegment& s, const PhoneInventory&) {
      return s.role == want;
    };
  }
  if (key == "stress") {
    Stress want;
    if (val == "P") want = Stress::Primary;
    else if (val == "S") want = Stress::Secondary;
    else if (val == "U") want = Stress::Unstressed;
    else throw DataError("bad stress '" + val + "' in rule atom");
    return [want](const PositionedSegment& s, const PhoneInventory&) {
      return s.seg.stress == want;
    };
  }
  if (key == "class") {
    return [val](const PositionedSegment& s, const PhoneInventory& inv) {
      return inv.phone_class(s.seg.phone, val);
    };
  }
  if (key == "prev" || key == "next") {
    bool use_next = key == "next";
    return [val, use_next](const PositionedSegment& s, const PhoneInventory& inv) {
      const auto& neighbor = use_next ? s.next_phone : s.prev_phone;
      if (val == "none") return !neighbor.has_value();
      return neighbor.has_value() && inv.phone_class(*neighbor, val);
    };
  }
  throw DataError("unknown rule atom '" + atom + "'");
}

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace

RulePredicate compile_rule_expression(const std::string& expr) {
  struct Term {
    bool negate;
    RulePredicate pred;
  };
  std::vector<Term> terms;
  std::string rest = expr;
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    std::size_t amp = rest.find('&', pos);
    std::string piece = trim(amp == std::string::npos ? rest.substr(pos)
                                                      : rest.substr(pos, amp - pos));
    if (piece.empty()) throw DataError("empty term in rule expression '" + expr + "'");
    bool neg = piece[0] == '!';
    if (neg) piece = trim(piece.substr(1));
    terms.push_back({neg, compile_atom(piece)});
    if (amp == std::string::npos) break;
    pos = amp + 1;
  }
  return [terms](const PositionedSegment& s, const PhoneInventory& inv) {
    for (const auto& t : terms)
      if (t.pred(s, inv) == t.negate) return false;
    return true;
  };
}

bool RuleCase::fires(const PositionedSegment& seg, const PhoneInventory& inv) const {
  bool b = base(seg, inv);
  switch (variant) {
    case BoundaryVariant::Unsplit: return b;
    case BoundaryVariant::NearBoundary: return b && near_boundary(seg);
    case BoundaryVariant::Elsewhere: return b && !near_boundary(seg);
  }
  return false;
}

namespace {

RuleCase make_case(const std::string& id, BoundaryVariant v, const std::string& expr) {
  return RuleCase{id, v, expr, compile_rule_expression(expr)};
}

}  // namespace

RuleSet default_ruleset() {
  const auto U = BoundaryVariant::Unsplit;
  const auto N = BoundaryVariant::NearBoundary;
  const auto E = BoundaryVariant::Elsewhere;
  RuleSet rs;
  rs.version = "default-30-v1";
  auto add = [&](const std::string& id, BoundaryVariant v, const std::string& expr) {
    rs.cases.push_back(make_case(id, v, expr));
  };
  add("R01", U, "role=nu & in_clause_final_syllable");
  add("R02", U, "role=co & in_clause_final_syllable");
  add("R03", U, "role=nu & in_phrase_final_syllable");
  add("R04", U, "role=co & in_phrase_final_syllable");
  add("R05", U, "class=syllabic & !in_word_final_syllable");
  add("R06", U, "class=syllabic & !in_phrase_final_syllable");
  add("R07", U, "stress=U");
  add("R08", U, "role=nu & stress=S");
  add("R09", U, "first_in_word & role=on & class=consonant");
  add("R10", U, "last_in_word & role=co & class=consonant");
  add("R11", U, "class=consonant & prev=consonant");
  add("R12", U, "class=consonant & next=consonant");
  add("R13", U, "class=vowel & next=vowel");
  add("R14", U, "class=vowel & prev=vowel");
  add("R15", U, "last_in_sentence");
  add("R16", U, "first_in_sentence");
  add("R17", U, "role=nu & in_word_final_syllable & !in_phrase_final_syllable");
  add("R18", U, "stress=U & !class=syllabic & !first_in_word & !last_in_word");
  // postvocalic context of vowels, split near-boundary / elsewhere
  const char* kPostvocalic[] = {
      "class=vowel & next=voiceless_stop",
      "class=vowel & next=voiced_stop",
      "class=vowel & next=voiceless_fricative",
      "class=vowel & next=voiced_fricative",
      "class=vowel & next=nasal",
      "class=vowel & !next=voiceless_stop & !next=voiced_stop & "
      "!next=voiceless_fricative & !next=voiced_fricative & !next=nasal",
  };
  int id = 19;
  for (const char* expr : kPostvocalic) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "R%02d", id++);
    add(buf, N, expr);
    std::snprintf(buf, sizeof(buf), "R%02d", id++);
    add(buf, E, expr);
  }
  return rs;
}

RuleSet load_ruleset(std::istream& in, bool strict30) {
  RuleSet rs;
  std::set<std::string> ids;
  std::string line, content;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    content += line;
    content += '\n';
    if (line.empty() || line[0] == '#') continue;
    std::size_t t1 = line.find('\t');
    std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw ParseError("expected 'id<TAB>variant<TAB>expression'", lineno);
    std::string id = line.substr(0, t1);
    std::string variant = line.substr(t1 + 1, t2 - t1 - 1);
    std::string expr = trim(line.substr(t2 + 1));
    if (!ids.insert(id).second)
      throw ParseError("duplicate rule id '" + id + "'", lineno);
    BoundaryVariant v;
    if (variant == "near") v = BoundaryVariant::NearBoundary;
    else if (variant == "else") v = BoundaryVariant::Elsewhere;
    else if (variant == "unsplit") v = BoundaryVariant::Unsplit;
    else throw ParseError("bad variant '" + variant + "' (want near/else/unsplit)", lineno);
    try {
      rs.cases.push_back(make_case(id, v, expr));
    } catch (const DataError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  if (rs.cases.empty()) throw DataError("empty rules config");
  if (strict30 && rs.size() != 30)
    throw DataError("rules config has " + std::to_string(rs.size()) +
                    " cases, strict30 requires exactly 30");
  rs.version = "custom-" + to_hex(fnv1a(content));
  return rs;
}

RuleSet load_ruleset_file(const std::string& path, bool strict30) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open rules config '" + path + "'");
  return load_ruleset(in, strict30);
}

RuleFiringVector fire_rules(const RuleSet& rules, const PositionedSegment& seg,
                            const PhoneInventory& inv) {
  RuleFiringVector bits(rules.cases.size());
  for (std::size_t i = 0; i < rules.cases.size(); ++i)
    bits[i] = rules.cases[i].fires(seg, inv) ? 1 : 0;
  return bits;
}

std::vector<FiringTrace> explain_firing(const RuleSet& rules,
                                        const PositionedSegment& seg,
                                        const PhoneInventory& inv) {
  std::vector<FiringTrace> traces;
  traces.reserve(rules.cases.size());
  for (const auto& c : rules.cases) {
    FiringTrace t;
    t.id = c.id;
    t.fired = c.fires(seg, inv);
    std::string cond = c.expression;
    if (c.variant == BoundaryVariant::NearBoundary) cond += " & near_boundary";
    else if (c.variant == BoundaryVariant::Elsewhere) cond += " & !near_boundary";
    t.reason = std::string(t.fired ? "satisfied: " : "not satisfied: ") + cond;
    traces.push_back(std::move(t));
  }
  return traces;
}

}  // namespace durhybrid
