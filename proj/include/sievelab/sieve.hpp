// sieve.hpp
//
// Materialization of a SieveSpec into an indexed prefix of L classes.
//
// Index order: explicit entries occupy indices 1..n in file order; family
// instances follow in round-robin over the rules, each advancing its own
// index variable. Validation is eager per level: moduli must be pairwise
// coprime across the whole prefix (checked on factored form, so the check
// is linear in L), no class may cover the full ring, and declared residue
// bounds are verified at every index.

#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <vector>

#include "sievelab/core.hpp"
#include "sievelab/spec.hpp"

namespace sievelab {

using Factorization = std::vector<std::pair<i64, int>>;  // (prime, exponent)

inline Factorization factor_small(i64 n) {
  if (n > i64(1'000'000'000'000))
    throw Error(Errc::BoundExceeded, "constant modulus factor too large");
  Factorization f;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

struct SieveClass {
  Modulus modulus;
  ResidueClassSet set;
  int rule = -1;       // -1: explicit entry, else index into spec.families
  i64 rule_index = 0;  // value of the family index variable
  std::vector<Factorization> factors;  // per component, sorted by prime
};

struct Sieve {
  std::shared_ptr<const SieveSpec> spec;
  int k = 1;
  std::vector<SieveClass> classes;  // classes[i] is index i+1

  i64 L() const { return i64(classes.size()); }
  const SieveClass& at(i64 index) const { return classes.at(size_t(index - 1)); }
};

namespace detail {

// Evaluate a modulus expression at a family index (or a constant entry when
// rule_var is empty). Returns the modulus plus its per-component factorization.
inline std::pair<Modulus, std::vector<Factorization>> eval_modexpr(
    const SieveSpec& spec, const ModExpr& e, const std::string& rule_var,
    i64 idx) {
  std::vector<i64> comps;
  std::vector<Factorization> facs;
  for (const auto& term : e.components) {
    i64 value = 1;
    std::map<i64, int> fmap;
    for (const auto& f : term) {
      if (f.is_const) {
        value = checked_mul(value, f.constant);
        for (auto [p, ex] : factor_small(f.constant)) fmap[p] += ex;
      } else {
        i64 argv = f.arg.eval(rule_var, idx);
        if (argv < 1)
          throw Error(Errc::BadInput, "stream argument must be >= 1");
        i64 p = spec.stream(f.stream).at(size_t(argv));
        for (i64 i = 0; i < f.exp; ++i) value = checked_mul(value, p);
        fmap[p] += int(f.exp);
      }
    }
    comps.push_back(value);
    facs.emplace_back(fmap.begin(), fmap.end());
  }
  Modulus m(comps);
  (void)modulus_norm(m);
  return {m, facs};
}

inline ResidueClassSet eval_resset(const SieveSpec& spec, const ResSpec& r,
                                   const Modulus& m,
                                   const std::string& rule_var, i64 idx) {
  std::vector<Point> pts;
  for (const auto& p : r.points) {
    std::vector<i64> coords;
    for (const auto& a : p) coords.push_back(a.eval(rule_var, idx));
    pts.push_back(reduce_point(Point(coords), m));
  }
  std::vector<Coset> cosets;
  for (const auto& cs : r.cosets) {
    auto [div, dfac] = eval_modexpr(spec, cs.div, rule_var, idx);
    if (!modulus_divides(div, m))
      throw Error(Errc::BadInput,
                  "coset divisor does not divide the class modulus");
    std::vector<i64> coords;
    for (const auto& a : cs.base) coords.push_back(a.eval(rule_var, idx));
    cosets.push_back(Coset{div, reduce_point(Point(coords), div)});
  }
  if (cosets.empty()) return ResidueClassSet::explicit_set(m, std::move(pts));
  for (const auto& p : pts) cosets.push_back(Coset{m, p});
  return ResidueClassSet::coset_union(m, std::move(cosets));
}

// First stream named in the rule's modulus expression; its prime at the
// rule index is the growth variable of the declared residue bound.
inline const ModFactor* primary_stream_factor(const FamilyRule& rule) {
  for (const auto& comp : rule.modulus.components)
    for (const auto& f : comp)
      if (!f.is_const) return &f;
  return nullptr;
}

inline int total_stream_exponent(const FamilyRule& rule,
                                 const std::string& stream) {
  int e = 0;
  for (const auto& comp : rule.modulus.components)
    for (const auto& f : comp)
      if (!f.is_const && f.stream == stream) e += int(f.exp);
  return e;
}

}  // namespace detail

inline Sieve materialize(std::shared_ptr<const SieveSpec> spec, i64 L) {
  Sieve sv;
  sv.spec = spec;
  sv.k = spec->k;
  if (L < 0) throw Error(Errc::BadInput, "negative truncation");

  // prime -> (component, class index) for coprimality accounting
  std::vector<std::map<i64, i64>> owner(size_t(spec->k));
  auto admit = [&](const SieveClass& cls, i64 index) {
    for (int j = 0; j < spec->k; ++j) {
      for (auto [p, e] : cls.factors[size_t(j)]) {
        auto [it, fresh] = owner[size_t(j)].emplace(p, index);
        if (!fresh)
          throw Error(Errc::CoprimalityViolation,
                      "classes " + std::to_string(it->second) + " and " +
                          std::to_string(index) + " share prime " +
                          std::to_string(p) + " in component " +
                          std::to_string(j + 1));
      }
    }
  };

  // explicit entries first
  for (const auto& [m, r] : spec->entries) {
    if (sv.L() == L) break;
    SieveClass cls;
    auto [mod, fac] = detail::eval_modexpr(*spec, m, "", 0);
    cls.modulus = mod;
    cls.factors = fac;
    cls.set = detail::eval_resset(*spec, r, mod, "", 0);
    admit(cls, sv.L() + 1);
    sv.classes.push_back(std::move(cls));
  }

  // family instances, round-robin over rules
  std::vector<i64> next(spec->families.size());
  for (size_t r = 0; r < spec->families.size(); ++r)
    next[r] = spec->families[r].lo;
  while (sv.L() < L) {
    bool progressed = false;
    for (size_t r = 0; r < spec->families.size() && sv.L() < L; ++r) {
      const FamilyRule& rule = spec->families[r];
      if (rule.hi && next[r] > *rule.hi) continue;
      i64 idx = next[r]++;
      progressed = true;

      SieveClass cls;
      auto [mod, fac] = detail::eval_modexpr(*spec, rule.modulus, rule.var, idx);
      cls.modulus = mod;
      cls.factors = fac;
      cls.rule = int(r);
      cls.rule_index = idx;
      auto ov = rule.overrides.find(idx);
      const ResSpec& rs = ov == rule.overrides.end() ? rule.residues : ov->second;
      cls.set = detail::eval_resset(*spec, rs, mod, rule.var, idx);

      if (rule.bound_c) {
        const ModFactor* pf = detail::primary_stream_factor(rule);
        i64 cap = *rule.bound_c;
        if (pf && rule.bound_deg > 0) {
          i64 p = spec->stream(pf->stream).at(size_t(pf->arg.eval(rule.var, idx)));
          for (i64 i = 0; i < rule.bound_deg; ++i) cap = checked_mul(cap, p);
        }
        if (cls.set.count() > cap)
          throw Error(Errc::BadInput,
                      "declared residue bound violated at index " +
                          std::to_string(idx));
      }

      admit(cls, sv.L() + 1);
      sv.classes.push_back(std::move(cls));
    }
    if (!progressed)
      throw Error(Errc::StreamExhausted,
                  "spec provides only " + std::to_string(sv.L()) +
                      " classes, " + std::to_string(L) + " requested");
  }
  return sv;
}

inline Sieve materialize(const SieveSpec& spec, i64 L) {
  return materialize(std::make_shared<SieveSpec>(spec), L);
}

// ---------------------------------------------------------------------------
// Summability tail bound
// ---------------------------------------------------------------------------

// For the tail formulas below: a rule declaring |R_i| <= c * p_i^g against a
// modulus of norm >= p_i^e (e = total exponent of the rule's first stream in
// the modulus expression) has remaining terms bounded by
//
//   sum_{i not yet materialized} c * p_i^(g-e)
//     <= c * sum_{n > P} n^(g-e)  <  c * P^(g-e+1) / (e-g-1),
//
// where P is the last materialized prime of that stream (the primes still to
// come are distinct integers exceeding P). Needs e - g >= 2.
struct RuleTailState {
  i64 from;     // first unmaterialized rule index
  i64 P;        // every remaining stream prime exceeds this
  i64 c, g;
  int e;
};

// Tail parameters per family rule, or nullopt when some rule lacks usable
// metadata. Fully materialized rules are omitted.
inline std::optional<std::vector<RuleTailState>> rule_tails(const Sieve& sv) {
  const SieveSpec& spec = *sv.spec;
  std::vector<i64> last(spec.families.size(), 0);
  std::vector<bool> seen(spec.families.size(), false);
  for (const auto& cls : sv.classes)
    if (cls.rule >= 0) {
      last[size_t(cls.rule)] = cls.rule_index;
      seen[size_t(cls.rule)] = true;
    }

  std::vector<RuleTailState> out;
  for (size_t r = 0; r < spec.families.size(); ++r) {
    const FamilyRule& rule = spec.families[r];
    i64 from = seen[r] ? last[r] + 1 : rule.lo;
    if (rule.hi && from > *rule.hi) continue;  // fully materialized
    if (!rule.bound_c) return std::nullopt;
    const ModFactor* pf = detail::primary_stream_factor(rule);
    if (!pf) return std::nullopt;  // constant modulus family: not summable
    int e = detail::total_stream_exponent(rule, pf->stream);
    i64 g = rule.bound_deg;
    if (e - g < 2) return std::nullopt;
    i64 P;
    const PrimeStream& st = spec.stream(pf->stream);
    try {
      if (seen[r]) {
        P = st.at(size_t(pf->arg.eval(rule.var, last[r])));
      } else {
        P = st.at(size_t(pf->arg.eval(rule.var, from))) - 1;
      }
    } catch (const Error& err) {
      if (err.code() == Errc::StreamExhausted) continue;  // no classes left
      throw;
    }
    out.push_back(RuleTailState{from, P, *rule.bound_c, g, e});
  }
  return out;
}

// Upper bound on sum_{i > L} |R_i| / N(b_i), or nullopt when uncertifiable.
inline std::optional<double> tail_bound(const Sieve& sv) {
  const SieveSpec& spec = *sv.spec;
  double tail = 0.0;
  // leftover explicit entries (requested L smaller than the entry list)
  for (size_t i = size_t(sv.L()); i < spec.entries.size(); ++i) {
    auto [mod, fac] = detail::eval_modexpr(spec, spec.entries[i].first, "", 0);
    auto set = detail::eval_resset(spec, spec.entries[i].second, mod, "", 0);
    tail += double(set.count()) / double(modulus_norm(mod));
  }
  auto rt = rule_tails(sv);
  if (!rt) return std::nullopt;
  for (const auto& s : *rt)
    tail += double(s.c) * std::pow(double(s.P), double(s.g - s.e + 1)) /
            double(s.e - s.g - 1);
  return tail;
}

// FNV-1a over the canonical printed spec; identifies a spec in report headers.
inline u64 spec_hash(const SieveSpec& spec) {
  u64 h = 1469598103934665603ull;
  for (unsigned char ch : print_sieve(spec)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace sievelab
