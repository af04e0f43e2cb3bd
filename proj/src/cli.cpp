#include "ctt/cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "ctt/transfer.hpp"

namespace ctt::cli {

ParseError::ParseError(int l, int c, const std::string& msg)
    : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg), line(l), column(c) {}

namespace {

// ---------------------------------------------------------------- parsing

std::vector<Token> tokenize(const std::string& raw) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(raw[i])) || raw[i] == ',') {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j])) && raw[j] != ',' && raw[j] != '#') ++j;
    out.push_back({raw.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

bool is_name(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
  return true;
}

bool is_keyval(const Token& t) { return t.text.find('=') != std::string::npos && t.text != "="; }

struct TaskShape {
  std::vector<std::string> positional;  // "tower", "pair", "torus", "word:a|b"
  std::set<std::string> required, optional;
};

const std::map<std::string, TaskShape>& task_shapes() {
  static const std::map<std::string, TaskShape> m{
      {"certify", {{"tower", "tower"}, {"l"}, {"pi", "expect"}}},
      {"herbrand", {{"tower"}, {}, {"l", "expect"}}},
      {"correspond", {{"torus", "pair"}, {"r", "x", "y"}, {"expect"}}},
      {"standard", {{"torus", "pair"}, {"r"}, {"expect"}}},
      {"uniqueness", {{"torus", "pair"}, {"r"}, {"expect"}}},
      {"identity", {{"torus", "pair"}, {"r"}, {"expect"}}},
      {"congruent", {{"torus", "pair"}, {"m"}, {"stage", "expect"}}},
      {"functoriality", {{"word:diagonal|norm", "torus", "pair"}, {"r"}, {"expect"}}},
      {"equivariance", {{"torus", "pair"}, {"r"}, {"expect"}}},
      {"kottwitz", {{"torus", "pair"}, {"r"}, {"expect"}}},
      {"level_reduction", {{"torus", "pair"}, {"r", "s"}, {"expect"}}},
      {"filtrations", {{"torus"}, {"r"}, {"expect"}}},
  };
  return m;
}

struct DeclShape {
  std::vector<std::string> positional;
  std::set<std::string> required, optional;
  bool variadic = false;  // trailing element list
};

const std::map<std::string, std::map<std::string, DeclShape>>& decl_shapes() {
  static const std::map<std::string, std::map<std::string, DeclShape>> m{
      {"towers",
       {{"base", {{"word:mixed|equal"}, {"p", "M"}, {"f"}}},
        {"root", {{"tower", "int"}, {}, {"unit"}}},
        {"eisenstein", {{"tower"}, {}, {}, true}},
        {"unramified", {{"tower", "int"}, {}, {}}}}},
      {"pairs", {{"certify", {{"tower", "tower"}, {"l"}, {"pi"}}}}},
      {"tori",
       {{"split", {{"tower"}, {}, {"rank", "over"}}},
        {"res", {{"tower", "tower"}, {}, {}}},
        {"norm_one", {{"tower", "tower"}, {}, {}}}}},
  };
  return m;
}

void check_args(const Line& ln, size_t start, const std::vector<std::string>& positional,
                const std::set<std::string>& required, const std::set<std::string>& optional, bool variadic,
                const std::map<std::string, std::string>& names) {
  size_t k = start;
  for (const auto& kind : positional) {
    if (k >= ln.tokens.size() || is_keyval(ln.tokens[k])) {
      int col = k < ln.tokens.size() ? ln.tokens[k].column : (ln.tokens.empty() ? 1 : ln.tokens.back().column);
      throw ParseError(ln.number, col, "expected a " + (kind.rfind("word:", 0) == 0 ? kind.substr(5) : kind) + " argument");
    }
    const Token& t = ln.tokens[k];
    if (kind.rfind("word:", 0) == 0) {
      std::string opts = "|" + kind.substr(5) + "|";
      if (opts.find("|" + t.text + "|") == std::string::npos)
        throw ParseError(ln.number, t.column, "expected one of " + kind.substr(5) + ", got '" + t.text + "'");
    } else if (kind == "int") {
      if (t.text.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(ln.number, t.column, "expected a positive integer, got '" + t.text + "'");
    } else {
      auto it = names.find(t.text);
      if (it == names.end()) throw ParseError(ln.number, t.column, "undeclared " + kind + " '" + t.text + "'");
      if (it->second != kind)
        throw ParseError(ln.number, t.column, "'" + t.text + "' is a " + it->second + ", expected a " + kind);
    }
    ++k;
  }
  std::set<std::string> seen;
  for (; k < ln.tokens.size(); ++k) {
    const Token& t = ln.tokens[k];
    if (!is_keyval(t)) {
      if (variadic) continue;
      throw ParseError(ln.number, t.column, "unexpected argument '" + t.text + "'");
    }
    std::string key = t.text.substr(0, t.text.find('='));
    if (!required.count(key) && !optional.count(key)) throw ParseError(ln.number, t.column, "unknown option '" + key + "'");
    if (!seen.insert(key).second) throw ParseError(ln.number, t.column, "option '" + key + "' given twice");
  }
  for (const auto& key : required)
    if (!seen.count(key))
      throw ParseError(ln.number, ln.tokens.empty() ? 1 : ln.tokens[0].column, "missing option '" + key + "='");
}

std::string kind_of_section(const std::string& s) {
  if (s == "towers") return "tower";
  if (s == "pairs") return "pair";
  return "torus";
}

// ---------------------------------------------------------------- values

std::map<std::string, std::string> options(const Line& ln) {
  std::map<std::string, std::string> m;
  for (const auto& t : ln.tokens)
    if (is_keyval(t)) m[t.text.substr(0, t.text.find('='))] = t.text.substr(t.text.find('=') + 1);
  return m;
}

int64_t to_int(const std::string& s, const std::string& what) {
  size_t used = 0;
  int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw std::invalid_argument(what + ": expected an integer, got '" + s + "'");
  return v;
}

Rat to_rat(const std::string& s, const std::string& what) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(to_int(s, what));
  int64_t d = to_int(s.substr(slash + 1), what);
  if (d == 0) throw std::invalid_argument(what + ": zero denominator");
  return Rat(to_int(s.substr(0, slash), what)) / d;
}

// sum of terms c, c*pi, c*pi^k, pi^k with optional signs
Vec parse_element(const Tower& t, const std::string& s) {
  Vec acc = t.zero(t.top());
  size_t i = 0;
  if (s.empty()) throw std::invalid_argument("empty element");
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    std::string term = s.substr(i, j - i);
    if (term.empty()) throw std::invalid_argument("malformed element '" + s + "'");
    int64_t c = 1;
    uint64_t k = 0;
    auto star = term.find('*');
    std::string rest = term;
    if (term.rfind("pi", 0) != 0) {
      std::string num = star == std::string::npos ? term : term.substr(0, star);
      c = to_int(num, "element '" + s + "'");
      rest = star == std::string::npos ? "" : term.substr(star + 1);
    }
    if (!rest.empty()) {
      if (rest.rfind("pi", 0) != 0) throw std::invalid_argument("malformed term '" + term + "'");
      if (rest.size() > 2) {
        if (rest[2] != '^') throw std::invalid_argument("malformed term '" + term + "'");
        k = static_cast<uint64_t>(to_int(rest.substr(3), "exponent in '" + term + "'"));
      } else {
        k = 1;
      }
    }
    Vec v = t.mul(t.from_int(t.top(), sign * c), t.pow(t.uniformizer(), k));
    acc = t.add(acc, v);
    i = j;
  }
  return acc;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string line_text(const Line& ln) {
  std::string s;
  for (const auto& t : ln.tokens) s += (s.empty() ? "" : " ") + t.text;
  return s;
}

// ---------------------------------------------------------------- running

struct TaskOutcome {
  bool pass = true;
  size_t checked = 0;
  std::vector<std::string> lines;  // "key: value"
};

TaskOutcome from_report(const Report& r) {
  TaskOutcome o;
  o.pass = r.pass;
  o.checked = r.checked;
  if (!r.detail.empty()) o.lines.push_back("detail: " + r.detail);
  if (!r.witness.empty()) o.lines.push_back("witness: " + r.witness);
  return o;
}

class Runner {
 public:
  Runner(const Scenario& s, const Options& o) : sc_(s), opt_(o) {}

  void declare() {
    for (const auto& ln : sc_.towers) towers_[ln.tokens[0].text] = build_tower(ln);
    for (const auto& ln : sc_.pairs) pairs_[ln.tokens[0].text] = build_pair(ln);
    for (const auto& ln : sc_.tori) tori_[ln.tokens[0].text] = build_torus(ln);
  }

  TaskOutcome run(const Line& ln) {
    const std::string& kw = ln.tokens[0].text;
    auto opt = options(ln);
    auto pos = [&](size_t i) { return ln.tokens[i].text; };
    if (kw == "certify") return certify(pos(1), pos(2), opt);
    if (kw == "herbrand") return herbrand(pos(1), opt);
    if (kw == "filtrations") return filtrations(pos(1), opt);
    if (kw == "functoriality") return functoriality(pos(1), pos(2), pos(3), opt);
    const ClosePairDatum& d = datum(pos(1), pos(2));
    const size_t mx = opt_.max_enumeration;
    if (kw == "correspond") return correspond(d, opt);
    if (kw == "standard") {
      auto iso = build_standard_iso(d, to_rat(opt["r"], "r"), mx);
      TaskOutcome o;
      o.pass = iso.ok;
      o.checked = iso.P.points.gens.size();
      o.lines.push_back("source: " + iso.P.points.abstract().str());
      o.lines.push_back("target: " + iso.P2.points.abstract().str());
      if (!iso.ok) o.lines.push_back("witness: " + iso.witness);
      return o;
    }
    if (kw == "uniqueness") return from_report(verify_uniqueness(d, build_standard_iso(d, to_rat(opt["r"], "r"), mx), 1, mx));
    if (kw == "identity") return from_report(verify_identity(build_standard_iso(d, to_rat(opt["r"], "r"), mx)));
    if (kw == "congruent") {
      int stage = opt.count("stage") ? static_cast<int>(to_int(opt["stage"], "stage")) : opt_.stage_degree;
      auto iso = build_congruent_iso(d, static_cast<int>(to_int(opt["m"], "m")), stage, mx);
      TaskOutcome o;
      o.pass = iso.ok;
      o.checked = iso.P.points.gens.size();
      o.lines.push_back("stage: " + std::to_string(iso.stage_degree) + " (" + iso.stage_note + ")");
      if (!iso.ok) o.lines.push_back("witness: " + iso.witness);
      return o;
    }
    if (kw == "equivariance") return from_report(verify_equivariance(d, to_rat(opt["r"], "r")));
    if (kw == "kottwitz") return from_report(verify_kottwitz(d, build_standard_iso(d, to_rat(opt["r"], "r"), mx), 2, mx));
    if (kw == "level_reduction")
      return from_report(verify_level_reduction(d, to_rat(opt["r"], "r"), to_rat(opt["s"], "s"), 2, mx));
    throw std::logic_error("unhandled task " + kw);
  }

 private:
  const Scenario& sc_;
  Options opt_;
  std::map<std::string, TowerPtr> towers_;
  std::map<std::string, ClosePairCertificate> pairs_;
  std::map<std::string, TorusSpec> tori_;
  std::map<std::pair<std::string, std::string>, ClosePairDatum> data_;

  TowerPtr build_tower(const Line& ln) {
    auto opt = options(ln);
    const std::string kind = ln.tokens[2].text;
    if (kind == "base") {
      Kind k = ln.tokens[3].text == "mixed" ? Kind::mixed : Kind::equal;
      int f = opt.count("f") ? static_cast<int>(to_int(opt["f"], "f")) : 1;
      return Tower::base(make_base(k, static_cast<int>(to_int(opt["p"], "p")), f, static_cast<int>(to_int(opt["M"], "M"))));
    }
    const TowerPtr& b = towers_.at(ln.tokens[3].text);
    if (kind == "unramified") return extend_unramified(b, static_cast<int>(to_int(ln.tokens[4].text, "degree")));
    std::vector<Vec> poly;
    if (kind == "root") {
      int d = static_cast<int>(to_int(ln.tokens[4].text, "degree"));
      Vec c = opt.count("unit") ? parse_element(*b, opt["unit"]) : b->one();
      poly.assign(static_cast<size_t>(d), b->zero(b->top()));
      poly[0] = b->neg(b->top(), b->mul(c, b->uniformizer()));
    } else {
      for (size_t i = 4; i < ln.tokens.size(); ++i) poly.push_back(parse_element(*b, ln.tokens[i].text));
      if (poly.empty()) throw std::invalid_argument("eisenstein: no coefficients");
    }
    return extend_eisenstein(b, poly);
  }

  ClosePairCertificate build_pair(const Line& ln) {
    auto opt = options(ln);
    const TowerPtr& a = towers_.at(ln.tokens[3].text);
    const TowerPtr& b = towers_.at(ln.tokens[4].text);
    std::optional<Vec> pi;
    if (opt.count("pi")) pi = parse_element(*b, opt["pi"]);
    return certify_close(a, b, static_cast<int>(to_int(opt["l"], "l")), pi);
  }

  TorusSpec build_torus(const Line& ln) {
    auto opt = options(ln);
    const std::string kind = ln.tokens[2].text;
    const TowerPtr& F = towers_.at(ln.tokens[3].text);
    TorusSpec T;
    if (kind == "split") {
      TowerPtr L = opt.count("over") ? lookup_tower(opt["over"]) : F;
      size_t rank = opt.count("rank") ? static_cast<size_t>(to_int(opt["rank"], "rank")) : 1;
      T = split_torus(F, L, rank);
    } else if (kind == "res") {
      T = weil_restriction(F, towers_.at(ln.tokens[4].text));
    } else {
      T = norm_one(F, towers_.at(ln.tokens[4].text));
    }
    T.label = ln.tokens[0].text;
    return T;
  }

  TowerPtr lookup_tower(const std::string& n) {
    auto it = towers_.find(n);
    if (it == towers_.end()) throw std::invalid_argument("undeclared tower '" + n + "'");
    return it->second;
  }

  const ClosePairDatum& datum(const std::string& torus, const std::string& pair) {
    auto key = std::make_pair(torus, pair);
    auto it = data_.find(key);
    if (it == data_.end()) it = data_.emplace(key, close_pair(pairs_.at(pair), tori_.at(torus))).first;
    return it->second;
  }

  TaskOutcome certify(const std::string& a, const std::string& b, std::map<std::string, std::string>& opt) {
    TaskOutcome o;
    const int l = static_cast<int>(to_int(opt["l"], "l"));
    std::optional<Vec> pi;
    if (opt.count("pi")) pi = parse_element(*towers_.at(b), opt["pi"]);
    auto c = certify_close(towers_.at(a), towers_.at(b), l, pi);
    o.checked = 1;
    o.lines.push_back("level: " + std::to_string(c.level));
    if (!c.note.empty()) o.lines.push_back("detail: " + c.note);
    return o;
  }

  TaskOutcome herbrand(const std::string& name, std::map<std::string, std::string>& opt) {
    const TowerPtr& E = towers_.at(name);
    if (E->top() < 1 || E->layer(E->top()).kind == LayerKind::prime || E->layer(E->top()).kind == LayerKind::tadic)
      throw std::invalid_argument("herbrand: '" + name + "' is not an extension step");
    auto h = ramification_breaks(E);
    TaskOutcome o;
    std::ostringstream br;
    for (const auto& [b, j] : h.breaks) br << "(" << b << ", " << j << ") ";
    o.lines.push_back("breaks: " + (h.breaks.empty() ? std::string("none") : br.str().substr(0, br.str().size() - 1)));
    o.lines.push_back("phi: " + h.phi.str());
    o.lines.push_back("psi: " + h.psi.str());
    o.lines.push_back("different: " + std::to_string(h.different_val));
    for (int k = 0; k < 20; ++k) {
      Rat x = Rat(k, 2);
      ++o.checked;
      if (h.phi(h.psi(x)) != x || h.psi(h.phi(x)) != x) {
        o.pass = false;
        o.lines.push_back("witness: phi/psi not inverse at " + x.str());
        return o;
      }
    }
    if (E->layer(E->top()).kind == LayerKind::eisenstein && different_from_derivative(E, E->top()) != h.different_val) {
      o.pass = false;
      o.lines.push_back("witness: different from breaks " + std::to_string(h.different_val) + " vs derivative " +
                        std::to_string(different_from_derivative(E, E->top())));
    }
    if (opt.count("l")) {
      int64_t l = to_int(opt["l"], "l");
      int64_t l1 = l_one(h, l);
      o.lines.push_back("l(1): " + std::to_string(l1));
      if (l1 < l || l1 > l * h.e) o.pass = false;
    }
    return o;
  }

  IVec tuple_of(const TorusPoints& P, const std::string& spec) {
    auto parts = split(spec, ';');
    if (parts.size() != P.spec.lattice.rank)
      throw std::invalid_argument("expected " + std::to_string(P.spec.lattice.rank) + " character values, got " +
                                  std::to_string(parts.size()));
    IVec t;
    for (const auto& s : parts) {
      IVec v = project(P.G, parse_element(*P.spec.L, s));
      t.insert(t.end(), v.begin(), v.end());
    }
    return t;
  }

  TaskOutcome correspond(const ClosePairDatum& d, std::map<std::string, std::string>& opt) {
    Rat r = to_rat(opt["r"], "r");
    auto P = torus_points(d.spec, r, opt_.max_enumeration), P2 = torus_points(d.spec2, r, opt_.max_enumeration);
    IVec x = tuple_of(P, opt["x"]), y = tuple_of(P2, opt["y"]);
    TaskOutcome o;
    o.checked = 1;
    if (!P.points.contains(x)) throw std::invalid_argument("x is not a point of " + d.spec.label);
    if (!P2.points.contains(y)) throw std::invalid_argument("y is not a point of " + d.spec2.label);
    o.pass = is_standard_correspondent(d, P, P2, x, y);
    if (!o.pass) {
      IVec img = split_level_iso(d, P, P2).apply(x);
      o.lines.push_back("witness: x = " + P.str(x) + " corresponds to " + P2.str(img) + ", not y = " + P2.str(y));
    }
    return o;
  }

  TaskOutcome functoriality(const std::string& which, const std::string& torus, const std::string& pair,
                            std::map<std::string, std::string>& opt) {
    const TorusSpec& T = tori_.at(torus);
    if (T.tag != CatalogTag::split || T.L == T.F)
      throw std::invalid_argument("functoriality: '" + torus + "' must be a split torus over a one-step extension (split F over=E)");
    const auto& c = pairs_.at(pair);
    auto base = close_pair(c, T);
    auto dn = diagonal_and_norm(T, T.L);
    auto dres = close_pair(c, dn.res, weil_restriction(base.spec2.F, base.spec2.L));
    auto dgm = close_pair(c, T, split_torus(base.spec2.F, base.spec2.L, T.lattice.rank));
    Rat r = to_rat(opt["r"], "r");
    if (which == "diagonal") return from_report(verify_functoriality(dgm, dres, dn.diagonal_dual, r, 2, opt_.max_enumeration));
    return from_report(verify_functoriality(dres, dgm, dn.norm_dual, r, 2, opt_.max_enumeration));
  }

  TaskOutcome filtrations(const std::string& torus, std::map<std::string, std::string>& opt) {
    const TorusSpec& T = tori_.at(torus);
    Rat r = to_rat(opt["r"], "r");
    auto P = torus_points(T, r, opt_.max_enumeration);
    TaskOutcome o;
    auto b = naive_filtration(P, Rat(0));
    for (const auto& x : P.enumerate(2, opt_.max_enumeration)) {
      bool vz = true;
      for (auto v : P.valuations(x)) vz = vz && v == 0;
      ++o.checked;
      if (b.contains(x) != vz) {
        o.pass = false;
        o.lines.push_back("witness: naive level 0 differs from the bounded part at " + P.str(x));
        return o;
      }
    }
    const bool wi = weakly_induced(T);
    Int top = numerator(r) / denominator(r);
    for (int s = 1; Int(s) <= top; ++s) {
      auto nv = naive_filtration(P, Rat(s)), st = standard_filtration(P, Rat(s));
      ++o.checked;
      bool ok = nv.contains(st) && (!wi || (st.equals(nv) && congruent_filtration(P, Rat(s)).equals(st)));
      if (!ok) {
        o.pass = false;
        o.lines.push_back("witness: filtrations differ at s = " + std::to_string(s));
        return o;
      }
    }
    o.lines.push_back(std::string("weakly induced: ") + (wi ? "yes" : "no"));
    return o;
  }
};

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& name) {
  Scenario sc;
  sc.name = name;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  std::string section;
  std::map<std::string, std::string> names;  // name -> kind
  while (std::getline(in, raw)) {
    ++number;
    Line ln;
    ln.number = number;
    ln.tokens = tokenize(raw);
    if (ln.tokens.empty()) continue;
    const Token& head = ln.tokens[0];
    if (head.text.front() == '[') {
      if (head.text.back() != ']' || ln.tokens.size() != 1) throw ParseError(number, head.column, "malformed section header");
      section = head.text.substr(1, head.text.size() - 2);
      if (section != "towers" && section != "pairs" && section != "tori" && section != "tasks")
        throw ParseError(number, head.column + 1, "unknown section '" + section + "'");
      continue;
    }
    if (section.empty()) throw ParseError(number, head.column, "content before the first section header");
    ln.section = section;
    if (section == "tasks") {
      auto it = task_shapes().find(head.text);
      if (it == task_shapes().end()) throw ParseError(number, head.column, "unknown task '" + head.text + "'");
      check_args(ln, 1, it->second.positional, it->second.required, it->second.optional, false, names);
      auto opt = options(ln);
      if (opt.count("expect") && opt["expect"] != "error")
        throw ParseError(number, head.column, "expect= only accepts 'error'");
      sc.tasks.push_back(ln);
      continue;
    }
    if (ln.tokens.size() < 3 || ln.tokens[1].text != "=")
      throw ParseError(number, ln.tokens.size() > 1 ? ln.tokens[1].column : head.column, "expected 'NAME = ...'");
    if (!is_name(head.text)) throw ParseError(number, head.column, "invalid name '" + head.text + "'");
    if (names.count(head.text)) throw ParseError(number, head.column, "duplicate name '" + head.text + "'");
    const auto& shapes = decl_shapes().at(section);
    auto it = shapes.find(ln.tokens[2].text);
    if (it == shapes.end()) throw ParseError(number, ln.tokens[2].column, "unknown " + kind_of_section(section) + " kind '" + ln.tokens[2].text + "'");
    check_args(ln, 3, it->second.positional, it->second.required, it->second.optional, it->second.variadic, names);
    if (section == "tori") {
      for (const auto& [k, v] : options(ln))
        if (k == "over" && (!names.count(v) || names.at(v) != "tower"))
          throw ParseError(number, head.column, "undeclared tower '" + v + "'");
    }
    names[head.text] = kind_of_section(section);
    if (section == "towers") sc.towers.push_back(ln);
    if (section == "pairs") sc.pairs.push_back(ln);
    if (section == "tori") sc.tori.push_back(ln);
  }
  return sc;
}

RunResult run_scenario(const Scenario& s, const Options& opt) {
  RunResult res;
  std::ostringstream body, foot;
  body << "scenario: " << s.name << "\n";
  Runner runner(s, opt);
  try {
    runner.declare();
  } catch (const std::exception& e) {
    body << "error: construction failed: " << e.what() << "\n";
    res.body = body.str();
    res.exit_code = 2;
    return res;
  }
  foot << kFooterMarker << "\n";
  int index = 0;
  for (const auto& ln : s.tasks) {
    ++index;
    auto t0 = std::chrono::steady_clock::now();
    TaskOutcome o;
    const bool expect_error = options(ln).count("expect") > 0;
    try {
      o = runner.run(ln);
      if (expect_error) {
        o.pass = false;
        o.lines.push_back("detail: expected an error, none raised");
      }
    } catch (const std::exception& e) {
      o = TaskOutcome{};
      o.pass = expect_error;
      o.lines.push_back(std::string(expect_error ? "detail: raised as expected: " : "error: ") + e.what());
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    body << "[TASK] " << index << " " << line_text(ln) << "\n";
    body << (o.pass ? "PASS" : "FAIL") << "\n";
    body << "checked: " << o.checked << "\n";
    for (const auto& l : o.lines) body << l << "\n";
    body << "\n";
    foot << "task " << index << ": " << ms << " ms\n";
    ++res.total;
    if (o.pass) ++res.passed;
  }
  body << "SUMMARY: " << res.passed << "/" << res.total << "\n";
  res.body = body.str();
  res.footer = foot.str();
  res.exit_code = res.passed == res.total ? 0 : 1;
  return res;
}

RunResult run_file(const std::string& path, const Options& opt) {
  std::ifstream f(path);
  if (!f) {
    RunResult r;
    r.exit_code = 2;
    r.body = "error: cannot read " + path + "\n";
    return r;
  }
  std::stringstream ss;
  ss << f.rdbuf();
  std::string name = path.substr(path.find_last_of('/') == std::string::npos ? 0 : path.find_last_of('/') + 1);
  if (name.size() > 4 && name.substr(name.size() - 4) == ".ctt") name.resize(name.size() - 4);
  try {
    return run_scenario(parse_scenario(ss.str(), name), opt);
  } catch (const ParseError& e) {
    RunResult r;
    r.exit_code = 2;
    r.body = "error: " + path + ": " + e.what() + "\n";
    return r;
  }
}

bool compare_reports(const std::string& a, const std::string& b, std::string& difference) {
  auto strip = [](const std::string& s) {
    auto p = s.find(kFooterMarker);
    return p == std::string::npos ? s : s.substr(0, p);
  };
  std::istringstream ia(strip(a)), ib(strip(b));
  std::string la, lb;
  int n = 0;
  while (true) {
    ++n;
    bool ga = static_cast<bool>(std::getline(ia, la)), gb = static_cast<bool>(std::getline(ib, lb));
    if (!ga && !gb) return true;
    if (ga != gb || la != lb) {
      difference = "line " + std::to_string(n) + ": '" + (ga ? la : "<end>") + "' vs '" + (gb ? lb : "<end>") + "'";
      return false;
    }
  }
}

std::string explain(const std::string& name) {
  static const std::map<std::string, std::string> texts{
      {"herbrand",
       "herbrand: phi(u) is the integral of dt / [G_0 : G_t] over [0, u], computed from the lower breaks i(s) - 1 of the "
       "Galois group; psi is its inverse.  The different is sum (i(s)) over s != 1, checked against v(P'(pi)).  "
       "l(1) = psi(l) is the closeness level inherited by an at most l-ramified extension."},
      {"close",
       "close: F and F' are l-close when O_F/p^l and O_F'/p'^l are isomorphic compatibly with uniformizers; certified "
       "digit-wise, with the prime relation and every layer relation checked at level l."},
      {"deligne",
       "deligne: the unit isomorphism F^x/(1+p^l) -> F'^x/(1+p'^l) sending the uniformizer to its declared image and "
       "unit classes through the truncated ring isomorphism."},
      {"standard",
       "standard: the isomorphism T(F)/T(F)_r -> T'(F')/T'(F')_r sending every point to its standard correspondent, "
       "i.e. the point whose character values match under the unit isomorphism of the splitting fields.  Unique when "
       "it exists; a missing one is reported with a witness."},
      {"congruent",
       "congruent: for weakly induced tori and integer m, the standard isomorphism at level m, certified to commute "
       "with Frobenius over a finite unramified stage."},
      {"kottwitz",
       "kottwitz: T(F) -> (X_*(T)_I)^Frob; on catalog tori through the parametrization (valuation for split tori, "
       "inertia coinvariants for restrictions and norm-one tori).  The harness checks it commutes with the transfer."},
      {"filtrations",
       "filtrations: naive T(F)_r (all characters congruent to 1), standard = naive intersected with ker(kottwitz), "
       "minimal congruent = standard for weakly induced tori at r > 0."},
      {"neron", "neron: out of scope.  Neron-model based constructions are not implemented; requests for the congruent "
                "filtration of tori that are not weakly induced raise an error."},
  };
  auto it = texts.find(name);
  if (it == texts.end()) {
    std::string known;
    for (const auto& [k, v] : texts) known += (known.empty() ? "" : ", ") + k;
    throw std::invalid_argument("unknown name '" + name + "'; known: " + known);
  }
  return it->second;
}

}  // namespace ctt::cli
