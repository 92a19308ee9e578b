// spec.hpp
//
// Declarative sieve descriptions and the line-oriented text format.
//
//   ring        := "ring" ("Z" | "Z^" int)
//   stream      := "stream" IDENT "=" ("primes" ["where mod" int "==" int]
//                                      | "list" "{" int+ "}")
//   class       := "class" "modulus" modexpr "residues" resset
//   family      := "family" IDENT "in" int ".." [int] ":" "modulus" modexpr
//                  "residues" resset ["bound" int ["deg" int]]
//   override    := "override" IDENT "==" int ":" "residues" resset
//   modexpr     := term | "(" term ("," term)* ")"
//   term        := factor ("*" factor)*
//   factor      := int | IDENT "(" affine ")" ["^" int]
//   resset      := "{" [point ("," point)*] "}"
//                | "coset" point "mod" modexpr
//                | resset "|" resset
//   point       := affine | "(" affine ("," affine)* ")"
//   affine      := int | [int "*"] IDENT [("+"|"-") int]
//
// '#' starts a comment. A class entry uses constant modexprs only; family
// modexprs may reference the family index variable through stream factors
// and affine arguments. The optional "bound c [deg g]" metadata declares
// |R_i| <= c * p_i^g for the rule's first stream's prime p_i; it is checked
// at every materialized index and feeds the summability tail bounds.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sievelab/core.hpp"
#include "sievelab/primes.hpp"

namespace sievelab {

// scale * var + offset; constant when var is empty.
struct Affine {
  i64 scale = 0;
  std::string var;
  i64 offset = 0;

  bool is_const() const { return var.empty(); }
  i64 eval(const std::string& bound_var, i64 value) const {
    if (is_const()) return offset;
    if (var != bound_var)
      throw Error(Errc::ParseError, "unbound variable '" + var + "'");
    return checked_add(checked_mul(scale, value), offset);
  }
  auto operator<=>(const Affine&) const = default;
};

struct ModFactor {
  bool is_const = true;
  i64 constant = 1;
  std::string stream;  // stream factor: stream(arg)^exp
  Affine arg;
  i64 exp = 1;
  auto operator<=>(const ModFactor&) const = default;
};

// One modulus component is a product of factors; a ModExpr is a k-tuple.
struct ModExpr {
  std::vector<std::vector<ModFactor>> components;
  int arity() const { return int(components.size()); }
  bool is_const() const {
    for (auto& comp : components)
      for (auto& f : comp)
        if (!f.is_const) return false;
    return true;
  }
  auto operator<=>(const ModExpr&) const = default;
};

struct CosetSpec {
  std::vector<Affine> base;
  ModExpr div;
  auto operator<=>(const CosetSpec&) const = default;
};

struct ResSpec {
  std::vector<std::vector<Affine>> points;
  std::vector<CosetSpec> cosets;
  auto operator<=>(const ResSpec&) const = default;
};

struct FamilyRule {
  std::string var;
  i64 lo = 1;
  std::optional<i64> hi;
  ModExpr modulus;
  ResSpec residues;
  std::optional<i64> bound_c;
  i64 bound_deg = 0;
  std::map<i64, ResSpec> overrides;
  auto operator<=>(const FamilyRule&) const = default;
};

struct SieveSpec {
  int k = 1;
  std::vector<std::string> stream_order;
  std::map<std::string, PrimeStream> streams;
  std::vector<std::pair<ModExpr, ResSpec>> entries;  // explicit classes
  std::vector<FamilyRule> families;

  const PrimeStream& stream(const std::string& name) const {
    auto it = streams.find(name);
    if (it == streams.end())
      throw Error(Errc::UnknownStream, "unknown stream '" + name + "'");
    return it->second;
  }
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace detail {

struct Cursor {
  const std::string& s;
  size_t pos = 0;
  int line;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ", col " +
                                      std::to_string(pos + 1) + ": " + msg);
  }
  bool peek_is(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool eat_word(const std::string& w) {
    skip_ws();
    size_t e = pos + w.size();
    if (s.compare(pos, w.size(), w) != 0) return false;
    if (e < s.size() && (isalnum((unsigned char)s[e]) || s[e] == '_'))
      return false;
    pos = e;
    return true;
  }
  void expect_word(const std::string& w) {
    if (!eat_word(w)) fail("expected '" + w + "'");
  }
  std::string ident() {
    skip_ws();
    size_t b = pos;
    while (pos < s.size() && (isalnum((unsigned char)s[pos]) || s[pos] == '_'))
      ++pos;
    if (b == pos || isdigit((unsigned char)s[b])) fail("expected identifier");
    return s.substr(b, pos - b);
  }
  bool peek_int() {
    skip_ws();
    size_t p = pos;
    if (p < s.size() && (s[p] == '-' || s[p] == '+')) ++p;
    return p < s.size() && isdigit((unsigned char)s[p]);
  }
  i64 integer() {
    skip_ws();
    size_t b = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    size_t d = pos;
    while (pos < s.size() && isdigit((unsigned char)s[pos])) ++pos;
    if (d == pos) fail("expected integer");
    try {
      return std::stoll(s.substr(b, pos - b));
    } catch (...) {
      fail("integer out of range");
    }
  }
};

inline Affine parse_affine(Cursor& c) {
  Affine a;
  if (c.peek_int()) {
    i64 v = c.integer();
    if (c.eat('*')) {
      a.scale = v;
      a.var = c.ident();
    } else {
      a.offset = v;
      return a;
    }
  } else {
    a.scale = 1;
    a.var = c.ident();
  }
  if (c.eat('+'))
    a.offset = c.integer();
  else if (c.eat('-'))
    a.offset = -c.integer();
  return a;
}

inline ModFactor parse_factor(Cursor& c) {
  ModFactor f;
  if (c.peek_int()) {
    f.is_const = true;
    f.constant = c.integer();
    if (f.constant < 1) c.fail("modulus factor must be >= 1");
    return f;
  }
  f.is_const = false;
  f.stream = c.ident();
  c.expect('(');
  f.arg = parse_affine(c);
  c.expect(')');
  if (c.eat('^')) {
    f.exp = c.integer();
    if (f.exp < 1) c.fail("exponent must be >= 1");
  }
  return f;
}

inline std::vector<ModFactor> parse_term(Cursor& c) {
  std::vector<ModFactor> t;
  t.push_back(parse_factor(c));
  while (c.eat('*')) t.push_back(parse_factor(c));
  return t;
}

inline ModExpr parse_modexpr(Cursor& c, int k) {
  ModExpr e;
  if (c.eat('(')) {
    e.components.push_back(parse_term(c));
    while (c.eat(',')) e.components.push_back(parse_term(c));
    c.expect(')');
  } else {
    e.components.push_back(parse_term(c));
  }
  if (e.arity() != k) c.fail("modulus arity does not match ring dimension");
  return e;
}

inline std::vector<Affine> parse_point(Cursor& c, int k) {
  std::vector<Affine> p;
  if (c.eat('(')) {
    p.push_back(parse_affine(c));
    while (c.eat(',')) p.push_back(parse_affine(c));
    c.expect(')');
  } else {
    p.push_back(parse_affine(c));
  }
  if (int(p.size()) != k) c.fail("point arity does not match ring dimension");
  return p;
}

inline ResSpec parse_resset(Cursor& c, int k) {
  ResSpec r;
  do {
    if (c.eat('{')) {
      if (!c.peek_is('}')) {
        r.points.push_back(parse_point(c, k));
        while (c.eat(',')) r.points.push_back(parse_point(c, k));
      }
      c.expect('}');
    } else if (c.eat_word("coset")) {
      CosetSpec cs;
      cs.base = parse_point(c, k);
      c.expect_word("mod");
      cs.div = parse_modexpr(c, k);
      r.cosets.push_back(std::move(cs));
    } else {
      c.fail("expected '{' or 'coset'");
    }
  } while (c.eat('|'));
  return r;
}

}  // namespace detail

inline SieveSpec parse_sieve(const std::string& text) {
  SieveSpec spec;
  bool saw_ring = false;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;

  while (std::getline(in, raw)) {
    ++lineno;
    if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
    detail::Cursor c{raw, 0, lineno};
    if (c.done()) continue;

    if (c.eat_word("ring")) {
      c.expect_word("Z");
      spec.k = c.eat('^') ? int(c.integer()) : 1;
      if (spec.k < 1) c.fail("ring dimension must be >= 1");
      saw_ring = true;
    } else if (c.eat_word("stream")) {
      PrimeStream st;
      st.name = c.ident();
      c.expect('=');
      if (c.eat_word("primes")) {
        st.kind = PrimeStream::Kind::AllPrimes;
        if (c.eat_word("where")) {
          c.expect_word("mod");
          st.filter_mod = c.integer();
          if (st.filter_mod < 1) c.fail("filter modulus must be >= 1");
          c.expect('=');
          c.expect('=');
          st.filter_res = mod_reduce(c.integer(), st.filter_mod);
          st.kind = PrimeStream::Kind::PrimesModulo;
          if (gcd64(st.filter_res, st.filter_mod) != 1)
            throw Error(Errc::NonCoprimeFilter,
                        "line " + std::to_string(lineno) +
                            ": residue filter must be coprime to its modulus");
        }
      } else if (c.eat_word("list")) {
        st.kind = PrimeStream::Kind::ExplicitList;
        c.expect('{');
        while (!c.eat('}')) {
          st.list.push_back(c.integer());
          c.eat(',');
        }
        for (i64 p : st.list)
          if (!is_prime(p))
            c.fail("stream list entry " + std::to_string(p) + " is not prime");
        for (size_t i = 1; i < st.list.size(); ++i)
          if (st.list[i] <= st.list[i - 1])
            c.fail("stream list must be strictly increasing");
      } else {
        c.fail("expected 'primes' or 'list'");
      }
      if (spec.streams.count(st.name)) c.fail("duplicate stream name");
      spec.stream_order.push_back(st.name);
      spec.streams.emplace(st.name, std::move(st));
    } else if (c.eat_word("class")) {
      c.expect_word("modulus");
      ModExpr m = detail::parse_modexpr(c, spec.k);
      if (!m.is_const()) c.fail("class modulus must be constant");
      c.expect_word("residues");
      ResSpec r = detail::parse_resset(c, spec.k);
      spec.entries.emplace_back(std::move(m), std::move(r));
    } else if (c.eat_word("family")) {
      FamilyRule f;
      f.var = c.ident();
      c.expect_word("in");
      f.lo = c.integer();
      c.expect('.');
      c.expect('.');
      if (c.peek_int()) f.hi = c.integer();
      c.expect(':');
      c.expect_word("modulus");
      f.modulus = detail::parse_modexpr(c, spec.k);
      c.expect_word("residues");
      f.residues = detail::parse_resset(c, spec.k);
      if (c.eat_word("bound")) {
        f.bound_c = c.integer();
        if (c.eat_word("deg")) f.bound_deg = c.integer();
      }
      spec.families.push_back(std::move(f));
    } else if (c.eat_word("override")) {
      std::string var = c.ident();
      c.expect('=');
      c.expect('=');
      i64 idx = c.integer();
      c.expect(':');
      c.expect_word("residues");
      ResSpec r = detail::parse_resset(c, spec.k);
      bool found = false;
      for (auto& f : spec.families)
        if (f.var == var) {
          f.overrides[idx] = r;
          found = true;
        }
      if (!found) c.fail("override for unknown family variable '" + var + "'");
    } else {
      c.fail("unknown directive");
    }
    if (!c.done()) c.fail("trailing input");
  }

  if (!saw_ring) throw Error(Errc::ParseError, "missing 'ring' directive");

  // arity / stream sanity inside expressions
  auto check_expr = [&](const ModExpr& e) {
    for (auto& comp : e.components)
      for (auto& f : comp)
        if (!f.is_const) spec.stream(f.stream);
  };
  for (auto& [m, r] : spec.entries) {
    check_expr(m);
    for (auto& cs : r.cosets) check_expr(cs.div);
  }
  for (auto& f : spec.families) {
    check_expr(f.modulus);
    for (auto& cs : f.residues.cosets) check_expr(cs.div);
  }

  // explicit entries are constant: validate them now (rejects full classes
  // at parse time rather than first materialization)
  for (auto& [me, rs] : spec.entries) {
    std::vector<i64> comps;
    for (auto& term : me.components) {
      i64 v = 1;
      for (auto& f : term) v = checked_mul(v, f.constant);
      comps.push_back(v);
    }
    Modulus mod(comps);
    bool all_const = true;
    for (auto& p : rs.points)
      for (auto& a : p) all_const &= a.is_const();
    for (auto& cs : rs.cosets)
      for (auto& a : cs.base) all_const &= a.is_const();
    if (!all_const)
      throw Error(Errc::ParseError, "class residues must be constant");
    std::vector<Coset> cosets;
    for (auto& cs : rs.cosets) {
      if (!cs.div.is_const())
        throw Error(Errc::ParseError, "class coset divisors must be constant");
      std::vector<i64> dc, bc;
      for (auto& term : cs.div.components) {
        i64 v = 1;
        for (auto& f : term) v = checked_mul(v, f.constant);
        dc.push_back(v);
      }
      for (auto& a : cs.base) bc.push_back(a.offset);
      Modulus div(dc);
      if (!modulus_divides(div, mod))
        throw Error(Errc::ParseError, "coset divisor must divide the modulus");
      cosets.push_back(Coset{div, reduce_point(Point(bc), div)});
    }
    std::vector<Point> pts;
    for (auto& p : rs.points) {
      std::vector<i64> c;
      for (auto& a : p) c.push_back(a.offset);
      pts.push_back(reduce_point(Point(c), mod));
    }
    if (cosets.empty()) {
      (void)ResidueClassSet::explicit_set(mod, std::move(pts));
    } else {
      for (auto& p : pts) cosets.push_back(Coset{mod, p});
      (void)ResidueClassSet::coset_union(mod, std::move(cosets));
    }
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Canonical printer (round-trips through parse_sieve)
// ---------------------------------------------------------------------------

namespace detail {

inline void print_affine(std::ostream& os, const Affine& a) {
  if (a.is_const()) {
    os << a.offset;
    return;
  }
  if (a.scale != 1) os << a.scale << "*";
  os << a.var;
  if (a.offset > 0) os << "+" << a.offset;
  if (a.offset < 0) os << "-" << -a.offset;
}

inline void print_modexpr(std::ostream& os, const ModExpr& e) {
  auto term = [&](const std::vector<ModFactor>& t) {
    for (size_t i = 0; i < t.size(); ++i) {
      if (i) os << "*";
      if (t[i].is_const) {
        os << t[i].constant;
      } else {
        os << t[i].stream << "(";
        print_affine(os, t[i].arg);
        os << ")";
        if (t[i].exp != 1) os << "^" << t[i].exp;
      }
    }
  };
  if (e.arity() == 1) {
    term(e.components[0]);
  } else {
    os << "(";
    for (int j = 0; j < e.arity(); ++j) {
      if (j) os << ", ";
      term(e.components[j]);
    }
    os << ")";
  }
}

inline void print_point(std::ostream& os, const std::vector<Affine>& p) {
  if (p.size() == 1) {
    print_affine(os, p[0]);
    return;
  }
  os << "(";
  for (size_t j = 0; j < p.size(); ++j) {
    if (j) os << ", ";
    print_affine(os, p[j]);
  }
  os << ")";
}

inline void print_resset(std::ostream& os, const ResSpec& r) {
  bool first = true;
  if (!r.points.empty() || r.cosets.empty()) {
    os << "{";
    for (size_t i = 0; i < r.points.size(); ++i) {
      if (i) os << ", ";
      print_point(os, r.points[i]);
    }
    os << "}";
    first = false;
  }
  for (auto& cs : r.cosets) {
    if (!first) os << " | ";
    os << "coset ";
    print_point(os, cs.base);
    os << " mod ";
    print_modexpr(os, cs.div);
    first = false;
  }
}

}  // namespace detail

inline std::string print_sieve(const SieveSpec& spec) {
  std::ostringstream os;
  os << "ring Z";
  if (spec.k != 1) os << "^" << spec.k;
  os << "\n";
  for (const auto& name : spec.stream_order) {
    const PrimeStream& st = spec.streams.at(name);
    os << "stream " << name << " = ";
    switch (st.kind) {
      case PrimeStream::Kind::AllPrimes:
        os << "primes";
        break;
      case PrimeStream::Kind::PrimesModulo:
        os << "primes where mod " << st.filter_mod << " == " << st.filter_res;
        break;
      case PrimeStream::Kind::ExplicitList:
        os << "list {";
        for (size_t i = 0; i < st.list.size(); ++i)
          os << (i ? " " : "") << st.list[i];
        os << "}";
        break;
    }
    os << "\n";
  }
  for (const auto& [m, r] : spec.entries) {
    os << "class modulus ";
    detail::print_modexpr(os, m);
    os << " residues ";
    detail::print_resset(os, r);
    os << "\n";
  }
  for (const auto& f : spec.families) {
    os << "family " << f.var << " in " << f.lo << "..";
    if (f.hi) os << *f.hi;
    os << ": modulus ";
    detail::print_modexpr(os, f.modulus);
    os << " residues ";
    detail::print_resset(os, f.residues);
    if (f.bound_c) {
      os << " bound " << *f.bound_c;
      if (f.bound_deg != 0) os << " deg " << f.bound_deg;
    }
    os << "\n";
    for (const auto& [idx, r] : f.overrides) {
      os << "override " << f.var << " == " << idx << ": residues ";
      detail::print_resset(os, r);
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace sievelab
