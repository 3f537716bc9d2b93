#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "scyc/lambda.hpp"
#include "scyc/net.hpp"
#include "scyc/power_word.hpp"
#include "scyc/reductions.hpp"

namespace scyc {

using Json = nlohmann::ordered_json;

/// Input error at a 1-based line and column.
struct ParseError : std::runtime_error {
  std::size_t line;
  std::size_t column;

  ParseError(std::size_t l, std::size_t c, const std::string& message)
      : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + message),
        line(l),
        column(c) {}
};

namespace detail {

struct Token {
  std::string text;
  std::size_t column;
};

/// Whitespace-separated tokens of one line with '#' comments removed.
inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

inline std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    out.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

inline BigInt parse_natural(const Token& tok, std::size_t line) {
  if (tok.text.empty() || !std::all_of(tok.text.begin(), tok.text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    if (!tok.text.empty() && tok.text[0] == '-') throw ParseError(line, tok.column, "negative number '" + tok.text + "'");
    throw ParseError(line, tok.column, "expected a nonnegative integer, found '" + tok.text + "'");
  }
  return BigInt(tok.text, 10);
}

inline bool valid_label(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ':' || c == '#') return false;
  }
  return !(s[0] >= '0' && s[0] <= '9');
}

inline std::string join(const std::vector<BigInt>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + v[i].get_str();
  return out;
}

}  // namespace detail

/// Parses the net format: `petri <d>` then one `[label:] u1 .. ud -> v1 .. vd`
/// line per transition.  Exact duplicates are dropped with a warning.
inline PetriNet parse_net(std::string_view text, std::vector<std::string>* warnings = nullptr) {
  const auto lines = detail::lines_of(text);
  std::optional<std::size_t> dimension;
  std::vector<Transition> ts;
  std::set<std::string> labels;
  std::set<std::pair<std::vector<BigInt>, std::vector<BigInt>>> seen;

  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::size_t line = ln + 1;
    auto toks = detail::tokenize(lines[ln]);
    if (toks.empty()) continue;
    if (!dimension) {
      if (toks[0].text != "petri") throw ParseError(line, toks[0].column, "expected header 'petri <d>'");
      if (toks.size() != 2) throw ParseError(line, toks[0].column, "header must be 'petri <d>'");
      const BigInt d = detail::parse_natural(toks[1], line);
      if (!d.fits_ulong_p() || d > 1'000'000) throw ParseError(line, toks[1].column, "dimension too large");
      dimension = d.get_ui();
      continue;
    }

    std::optional<std::string> label;
    std::size_t pos = 0;
    if (auto colon = toks[0].text.find(':'); colon != std::string::npos) {
      label = toks[0].text.substr(0, colon);
      if (!detail::valid_label(*label)) throw ParseError(line, toks[0].column, "invalid label '" + *label + "'");
      std::string rest = toks[0].text.substr(colon + 1);
      if (rest.empty()) {
        pos = 1;
      } else {
        toks[0] = {rest, toks[0].column + colon + 1};
      }
    }
    std::vector<BigInt> u;
    std::vector<BigInt> v;
    bool arrow = false;
    std::size_t arrow_col = 0;
    for (; pos < toks.size(); ++pos) {
      if (toks[pos].text == "->") {
        if (arrow) throw ParseError(line, toks[pos].column, "second '->'");
        arrow = true;
        arrow_col = toks[pos].column;
        continue;
      }
      (arrow ? v : u).push_back(detail::parse_natural(toks[pos], line));
    }
    if (!arrow) throw ParseError(line, toks.back().column, "missing '->'");
    if (u.size() != *dimension || v.size() != *dimension) {
      throw DimensionMismatch("line " + std::to_string(line) + ", column " + std::to_string(arrow_col) +
                              ": transition has " + std::to_string(u.size()) + " -> " + std::to_string(v.size()) +
                              " entries, net dimension is " + std::to_string(*dimension));
    }
    if (label && !labels.insert(*label).second) {
      throw ParseError(line, toks[0].column, "duplicate label '" + *label + "'");
    }
    if (!seen.emplace(u, v).second) {
      if (warnings != nullptr) {
        warnings->push_back("line " + std::to_string(line) + ": duplicate transition " + detail::join(u) + " -> " +
                            detail::join(v) + " dropped");
      }
      continue;
    }
    ts.emplace_back(Configuration(std::move(u)), Configuration(std::move(v)), std::move(label));
  }
  if (!dimension) throw ParseError(lines.size(), 1, "missing header 'petri <d>'");
  return PetriNet(*dimension, std::move(ts));
}

inline std::string serialize_net(const PetriNet& net) {
  std::ostringstream out;
  out << "petri " << net.dimension() << '\n';
  for (const auto& t : net) {
    if (t.label) {
      if (!detail::valid_label(*t.label)) throw std::invalid_argument("label '" + *t.label + "' cannot be serialized");
      out << *t.label << ": ";
    }
    const auto u = detail::join(t.pre.entries());
    const auto v = detail::join(t.post.entries());
    out << u << (u.empty() ? "->" : " ->") << (v.empty() ? "" : " ") << v << '\n';
  }
  return out.str();
}

namespace detail {

inline bool terminal_token(const std::string& s) { return !s.empty() && std::islower(static_cast<unsigned char>(s[0])); }

}  // namespace detail

/// One production per line, `A -> B C` or `A ->`; the first left-hand side is
/// the start symbol and lowercase-initial tokens are terminals.  Symbols are
/// numbered by first appearance.
inline Grammar parse_grammar(std::string_view text) {
  Grammar g;
  std::set<std::string> nts;
  std::set<std::string> terms;
  auto declare = [&](const std::string& s) {
    if (detail::terminal_token(s)) {
      if (terms.insert(s).second) g.terminals.push_back(s);
    } else if (nts.insert(s).second) {
      g.nonterminals.push_back(s);
    }
  };
  const auto lines = detail::lines_of(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto toks = detail::tokenize(lines[ln]);
    if (toks.empty()) continue;
    if (toks.size() < 2 || toks[1].text != "->") throw ParseError(ln + 1, toks[0].column, "expected 'A -> ...'");
    if (detail::terminal_token(toks[0].text)) {
      throw ParseError(ln + 1, toks[0].column, "left-hand side '" + toks[0].text + "' is a terminal");
    }
    Production p{toks[0].text, {}};
    declare(p.lhs);
    for (std::size_t k = 2; k < toks.size(); ++k) {
      if (toks[k].text == "->") throw ParseError(ln + 1, toks[k].column, "second '->'");
      p.rhs.push_back(toks[k].text);
      declare(toks[k].text);
    }
    if (g.productions.empty()) g.start = p.lhs;
    g.productions.push_back(std::move(p));
  }
  if (g.productions.empty()) throw ParseError(lines.size(), 1, "grammar has no productions");
  g.validate();
  return g;
}

inline std::string serialize_grammar(const Grammar& g) {
  g.validate();
  for (const auto& s : g.nonterminals) {
    if (detail::terminal_token(s)) throw std::invalid_argument("nonterminal '" + s + "' would read back as a terminal");
  }
  for (const auto& s : g.terminals) {
    if (!detail::terminal_token(s)) throw std::invalid_argument("terminal '" + s + "' would read back as a nonterminal");
  }
  std::ostringstream out;
  for (const auto& p : g.productions) {
    out << p.lhs << " ->";
    for (const auto& s : p.rhs) out << ' ' << s;
    out << '\n';
  }
  return out.str();
}

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> parse_multiset(std::string_view body, std::size_t line, std::size_t column) {
  std::vector<std::string> out;
  if (trim(body).empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto comma = body.find(',', start);
    auto item = trim(body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (item.empty()) throw ParseError(line, column + start, "empty state name");
    out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

/// One rule per line, `{p,q} -a-> {r}`; states are numbered by first
/// appearance and repetition inside braces is multiplicity.
inline DagAutomaton parse_dag(std::string_view text) {
  DagAutomaton a;
  std::set<std::string> known;
  const auto lines = detail::lines_of(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view raw = lines[ln];
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (detail::trim(raw).empty()) continue;
    const std::size_t line = ln + 1;
    const auto open1 = raw.find('{');
    const auto close1 = raw.find('}', open1 == std::string_view::npos ? 0 : open1);
    if (open1 == std::string_view::npos || close1 == std::string_view::npos) {
      throw ParseError(line, 1, "expected '{heads} -label-> {tails}'");
    }
    if (!detail::trim(raw.substr(0, open1)).empty()) throw ParseError(line, 1, "unexpected text before '{'");
    const auto open2 = raw.find('{', close1);
    const auto close2 = open2 == std::string_view::npos ? open2 : raw.find('}', open2);
    if (open2 == std::string_view::npos || close2 == std::string_view::npos) {
      throw ParseError(line, close1 + 2, "expected '{tails}'");
    }
    if (!detail::trim(raw.substr(close2 + 1)).empty()) throw ParseError(line, close2 + 2, "unexpected text after '}'");
    const auto middle = detail::trim(raw.substr(close1 + 1, open2 - close1 - 1));
    if (middle.size() < 4 || middle.front() != '-' || middle.substr(middle.size() - 2) != "->") {
      throw ParseError(line, close1 + 2, "expected '-label->' between the multisets");
    }
    const auto label = middle.substr(1, middle.size() - 3);
    if (label.empty() || std::any_of(label.begin(), label.end(), [](char c) {
          return std::isspace(static_cast<unsigned char>(c)) || c == '{' || c == '}' || c == ',';
        })) {
      throw ParseError(line, close1 + 2, "invalid rule label '" + label + "'");
    }
    DagRule r{detail::parse_multiset(raw.substr(open1 + 1, close1 - open1 - 1), line, open1 + 2), label,
              detail::parse_multiset(raw.substr(open2 + 1, close2 - open2 - 1), line, open2 + 2)};
    for (const auto* side : {&r.heads, &r.tails}) {
      for (const auto& s : *side) {
        if (s.find_first_of(" \t{}-#") != std::string::npos) throw ParseError(line, 1, "invalid state name '" + s + "'");
        if (known.insert(s).second) a.states.push_back(s);
      }
    }
    a.rules.push_back(std::move(r));
  }
  a.validate();
  return a;
}

inline std::string serialize_dag(const DagAutomaton& a) {
  a.validate();
  std::ostringstream out;
  auto side = [&](const std::vector<std::string>& v) {
    out << '{';
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
    out << '}';
  };
  for (const auto& r : a.rules) {
    side(r.heads);
    out << " -" << r.label << "-> ";
    side(r.tails);
    out << '\n';
  }
  return out.str();
}

/// Parses whitespace-separated naturals of a given dimension.
inline Configuration parse_configuration(std::string_view text, std::size_t dimension) {
  const auto toks = detail::tokenize(text);
  std::vector<BigInt> v;
  for (const auto& t : toks) v.push_back(detail::parse_natural(t, 1));
  if (v.size() != dimension) {
    throw DimensionMismatch("configuration has " + std::to_string(v.size()) + " entries, expected " +
                            std::to_string(dimension));
  }
  return Configuration(std::move(v));
}

// ---------------------------------------------------------------------------
// JSON.  Index sets are 1-based arrays; big integers are decimal strings.

inline Json to_json(const IndexSet& s) {
  Json out = Json::array();
  for (auto i : s.elements()) out.push_back(i + 1);
  return out;
}

inline IndexSet index_set_from_json(const Json& j, std::size_t universe) {
  IndexSet s(universe);
  for (const auto& v : j) {
    const auto i = v.get<std::size_t>();
    if (i == 0 || i > universe) throw std::out_of_range("index " + std::to_string(i) + " out of range");
    s.insert(i - 1);
  }
  return s;
}

inline Json to_json(const PowerWord& w) {
  if (const auto* l = w.as_leaf()) return Json{{"kind", "leaf"}, {"transition", l->transition + 1}};
  if (const auto* c = w.as_concat()) {
    Json items = Json::array();
    for (const auto& x : c->items) items.push_back(to_json(x));
    return Json{{"kind", "concat"}, {"items", std::move(items)}};
  }
  const auto& p = *w.as_power();
  return Json{{"kind", "power"}, {"exponent", p.exponent.get_str()}, {"body", to_json(p.body)}};
}

inline PowerWord power_word_from_json(const Json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "leaf") {
    const auto t = j.at("transition").get<std::size_t>();
    if (t == 0) throw std::out_of_range("transition indices are 1-based");
    return PowerWord::leaf(t - 1);
  }
  if (kind == "concat") {
    std::vector<PowerWord> items;
    for (const auto& x : j.at("items")) items.push_back(power_word_from_json(x));
    return PowerWord::concat(std::move(items));
  }
  if (kind == "power") {
    return PowerWord::power(power_word_from_json(j.at("body")), parse_bigint(j.at("exponent").get<std::string>()));
  }
  throw std::invalid_argument("unknown power-word kind '" + kind + "'");
}

/// Dense multiplicities, one decimal string per transition.
inline Json psi_to_json(const ParikhVector& psi, std::size_t transitions) {
  Json out = Json::array();
  for (std::size_t t = 0; t < transitions; ++t) out.push_back(psi.get(t).get_str());
  return out;
}

inline ParikhVector psi_from_json(const Json& j) {
  ParikhVector psi;
  std::size_t t = 0;
  for (const auto& v : j) {
    BigInt n = parse_bigint(v.get<std::string>());
    if (sgn(n) < 0) throw std::invalid_argument("negative multiplicity");
    if (sgn(n) > 0) psi.set(t, n);
    ++t;
  }
  return psi;
}

struct ReportJsonOptions {
  bool rounds = false;
};

/// Top-level sets describe the input net; "fixpoint" holds the markable
/// analysis and U certificate of the final subnet the witness is built from.
inline Json report_to_json(const AnalysisReport& r, const ReportJsonOptions& options = {}) {
  const std::size_t n = r.transition_count;
  Json j;
  j["dimension"] = r.dimension;
  j["transition_count"] = n;
  j["i_plus"] = to_json(r.input_markable.i_plus);
  j["i_minus"] = to_json(r.input_markable.i_minus);
  j["i_both"] = to_json(r.input_markable.i_both);
  j["m_set"] = to_json(r.input_markable.mutually_fireable);
  j["forward_witness"] = to_json(r.input_markable.forward_witness);
  j["backward_witness"] = to_json(r.input_markable.backward_witness);
  if (r.input_u) {
    j["u_set"] = to_json(r.input_u->u_set);
    j["psi"] = psi_to_json(r.input_u->psi, n);
  }
  j["lambda_set"] = to_json(r.lambda_set);
  Json rounds = Json::array();
  for (const auto& s : r.rounds) rounds.push_back(to_json(s));
  j["rounds"] = std::move(rounds);
  j["structurally_cyclic"] = r.structurally_cyclic;
  if (r.witness) {
    j["witness"] = to_json(*r.witness);
    j["expanded_length"] = expanded_length(*r.witness).get_str();
  } else {
    j["witness"] = nullptr;
  }
  j["fixpoint"] = Json{{"i_plus", to_json(r.markable.i_plus)},
                       {"i_minus", to_json(r.markable.i_minus)},
                       {"i_both", to_json(r.markable.i_both)},
                       {"m_set", to_json(r.markable.mutually_fireable)},
                       {"forward_witness", to_json(r.markable.forward_witness)},
                       {"backward_witness", to_json(r.markable.backward_witness)},
                       {"u_set", to_json(r.u_certificate.u_set)},
                       {"psi", psi_to_json(r.u_certificate.psi, n)}};
  if (options.rounds) {
    Json details = Json::array();
    for (const auto& d : r.round_details) {
      details.push_back(Json{{"active", to_json(d.active)},
                             {"i_plus", to_json(d.i_plus)},
                             {"i_minus", to_json(d.i_minus)},
                             {"i_both", to_json(d.i_both)},
                             {"m_set", to_json(d.m_set)},
                             {"u_certified", to_json(d.u_certified)},
                             {"next", to_json(d.next)}});
    }
    j["round_details"] = std::move(details);
  }
  return j;
}

/// Inverse of report_to_json; round_details are restored only when present.
inline AnalysisReport report_from_json(const Json& j) {
  AnalysisReport r;
  r.dimension = j.at("dimension").get<std::size_t>();
  r.transition_count = j.at("transition_count").get<std::size_t>();
  const std::size_t d = r.dimension;
  const std::size_t n = r.transition_count;
  r.input_markable.i_plus = index_set_from_json(j.at("i_plus"), d);
  r.input_markable.i_minus = index_set_from_json(j.at("i_minus"), d);
  r.input_markable.i_both = index_set_from_json(j.at("i_both"), d);
  r.input_markable.mutually_fireable = index_set_from_json(j.at("m_set"), n);
  r.input_markable.forward_witness = power_word_from_json(j.at("forward_witness"));
  r.input_markable.backward_witness = power_word_from_json(j.at("backward_witness"));
  if (j.contains("u_set")) {
    r.input_u = CyclicCertificate{index_set_from_json(j.at("u_set"), n), psi_from_json(j.at("psi"))};
  }
  r.lambda_set = index_set_from_json(j.at("lambda_set"), n);
  for (const auto& s : j.at("rounds")) r.rounds.push_back(index_set_from_json(s, n));
  r.structurally_cyclic = j.at("structurally_cyclic").get<bool>();
  if (!j.at("witness").is_null()) r.witness = power_word_from_json(j.at("witness"));
  const auto& f = j.at("fixpoint");
  r.markable.i_plus = index_set_from_json(f.at("i_plus"), d);
  r.markable.i_minus = index_set_from_json(f.at("i_minus"), d);
  r.markable.i_both = index_set_from_json(f.at("i_both"), d);
  r.markable.mutually_fireable = index_set_from_json(f.at("m_set"), n);
  r.markable.forward_witness = power_word_from_json(f.at("forward_witness"));
  r.markable.backward_witness = power_word_from_json(f.at("backward_witness"));
  r.u_certificate = CyclicCertificate{index_set_from_json(f.at("u_set"), n), psi_from_json(f.at("psi"))};
  if (j.contains("round_details")) {
    for (const auto& x : j.at("round_details")) {
      r.round_details.push_back(RoundRecord{index_set_from_json(x.at("active"), n),
                                            index_set_from_json(x.at("i_plus"), d),
                                            index_set_from_json(x.at("i_minus"), d),
                                            index_set_from_json(x.at("i_both"), d),
                                            index_set_from_json(x.at("m_set"), n),
                                            index_set_from_json(x.at("u_certified"), n),
                                            index_set_from_json(x.at("next"), n)});
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Text rendering.

/// Power word with transition names, e.g. `(t1^3 t2)^2 t3`.
inline std::string render_word(const PowerWord& w, const PetriNet& net) {
  if (const auto* l = w.as_leaf()) return net.name(l->transition);
  if (const auto* c = w.as_concat()) {
    if (c->items.empty()) return "()";
    std::string out;
    for (std::size_t i = 0; i < c->items.size(); ++i) out += (i ? " " : "") + render_word(c->items[i], net);
    return out;
  }
  const auto& p = *w.as_power();
  const auto body = render_word(p.body, net);
  const bool atom = p.body.as_leaf() != nullptr;
  return (atom ? body : "(" + body + ")") + "^" + p.exponent.get_str();
}

inline std::string render_indices(const IndexSet& s) {
  std::string out = "{";
  bool first = true;
  for (auto i : s.elements()) {
    out += (first ? "" : ", ") + std::to_string(i + 1);
    first = false;
  }
  return out + "}";
}

inline std::string render_transitions(const TransitionSet& s, const PetriNet& net) {
  std::string out = "{";
  bool first = true;
  for (auto t : s.elements()) {
    out += (first ? "" : ", ") + net.name(t);
    first = false;
  }
  return out + "}";
}

inline std::string report_to_text(const AnalysisReport& r, const PetriNet& net, const ReportJsonOptions& options = {}) {
  std::ostringstream out;
  out << "dimension: " << r.dimension << "\n";
  out << "transitions: " << r.transition_count << "\n";
  out << "I+: " << render_indices(r.input_markable.i_plus) << "\n";
  out << "I-: " << render_indices(r.input_markable.i_minus) << "\n";
  out << "I: " << render_indices(r.input_markable.i_both) << "\n";
  out << "M: " << render_transitions(r.input_markable.mutually_fireable, net) << "\n";
  if (r.input_u) out << "U: " << render_transitions(r.input_u->u_set, net) << "\n";
  out << "Lambda: " << render_transitions(r.lambda_set, net) << "\n";
  out << "rounds: " << r.strict_rounds() << "\n";
  if (options.rounds) {
    for (std::size_t k = 0; k < r.rounds.size(); ++k) {
      out << "  T" << k << ": " << render_transitions(r.rounds[k], net) << "\n";
    }
  }
  out << "structurally cyclic: " << (r.structurally_cyclic ? "yes" : "no") << "\n";
  if (r.witness) {
    out << "witness: " << render_word(*r.witness, net) << "\n";
    out << "expanded length: " << expanded_length(*r.witness).get_str() << "\n";
  }
  return out.str();
}

}  // namespace scyc
