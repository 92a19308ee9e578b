// density.hpp
//
// Certified density brackets and admissibility decisions.
//
// product_density returns the truncated product prod_{i<=L} (1 - |R_i|/N_i)
// as the upper end; the lower end multiplies in 1 - T_L, where T_L bounds the
// remaining mass sum_{i>L} |R_i|/N_i (using prod (1-v_i) >= 1 - sum v_i).
// When no tail bound is certifiable the lower end degrades to 0 and the
// bracket is flagged as not exact.

#pragma once

#include "sievelab/enumerate.hpp"
#include "sievelab/sieve.hpp"

namespace sievelab {

struct BracketedValue {
  double lower = 0.0;
  double upper = 1.0;
  i64 L = 0;
  bool exact = false;  // bracket certified and collapsed to a point

  bool contains(double v) const { return lower <= v && v <= upper; }
  double midpoint() const { return (lower + upper) / 2; }
};

inline BracketedValue product_density(const Sieve& sv) {
  double upper = 1.0;
  for (const auto& cls : sv.classes)
    upper *= 1.0 - double(cls.set.count()) / double(modulus_norm(cls.modulus));
  BracketedValue b;
  b.L = sv.L();
  b.upper = upper;
  auto tail = tail_bound(sv);
  if (tail) {
    b.lower = upper * std::max(0.0, 1.0 - *tail);
    b.exact = (*tail == 0.0);
  } else {
    b.lower = 0.0;
    b.exact = false;
  }
  return b;
}

// ---------------------------------------------------------------------------
// Shifted unions  -D + R
// ---------------------------------------------------------------------------

// |union_{a in D} (-a + R)| as a subset of Z^k / modulus(R).
inline i64 shifted_union_count(const ResidueClassSet& R,
                               const std::vector<Point>& D) {
  if (D.empty() || R.empty()) return 0;
  const Modulus& m = R.modulus();
  if (!R.coset_form()) {
    std::vector<Point> pts;
    pts.reserve(R.residues().size() * D.size());
    for (const auto& a : D)
      for (const auto& r : R.residues()) {
        Point p = r;
        for (int j = 0; j < m.arity(); ++j)
          p.x[size_t(j)] = mod_reduce(p.x[size_t(j)] - a.x[size_t(j)],
                                      m.c[size_t(j)]);
        pts.push_back(std::move(p));
      }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return i64(pts.size());
  }
  std::vector<Coset> cs;
  for (const auto& a : D)
    for (const auto& c : R.cosets()) {
      Coset s = c;
      for (int j = 0; j < m.arity(); ++j)
        s.base.x[size_t(j)] = mod_reduce(s.base.x[size_t(j)] - a.x[size_t(j)],
                                         s.div.c[size_t(j)]);
      cs.push_back(std::move(s));
    }
  if (cs.size() <= 20) return ResidueClassSet::union_count(cs, m);
  return shifted_union_count(R.expanded(), D);
}

inline bool shifted_union_is_full(const ResidueClassSet& R,
                                  const std::vector<Point>& D) {
  if (R.empty() || D.empty()) return false;
  // quick reject: |-D + R| <= |D| * |R|
  if (checked_mul(i64(D.size()), R.count()) < modulus_norm(R.modulus()))
    return false;
  return shifted_union_count(R, D) == modulus_norm(R.modulus());
}

// ---------------------------------------------------------------------------
// Admissibility
// ---------------------------------------------------------------------------

struct AdmissibleVerdict {
  enum class Kind { Admissible, NotAdmissible, AdmissibleUpTo };
  Kind kind;
  i64 witness_index = 0;  // NotAdmissible: class index with -A+R_i full
  i64 upto = 0;           // AdmissibleUpTo: verified truncation

  bool ok() const { return kind != Kind::NotAdmissible; }
};

// Decides whether -A + R_i covers the full ring at any index. With residue
// bounds declared on every family rule the verdict is exact: beyond the
// prefix, |-A + R_i| <= |A| * c * p_i^g < p_i^e <= N(b_i) once the stream
// prime satisfies p^(e-g) > |A| * c, so only finitely many indices need the
// exact set computation. The caller must pass a sieve materialized at least
// that far (see admissibility_cutoff_ok).
inline AdmissibleVerdict is_admissible(const std::vector<Point>& A,
                                       const Sieve& sv) {
  if (A.empty()) return {AdmissibleVerdict::Kind::Admissible, 0, 0};
  for (i64 i = 1; i <= sv.L(); ++i) {
    const SieveClass& cls = sv.at(i);
    if (cls.set.empty()) continue;
    if (shifted_union_is_full(cls.set, A))
      return {AdmissibleVerdict::Kind::NotAdmissible, i, 0};
  }
  // exactness beyond the prefix
  auto rt = rule_tails(sv);
  if (!rt) return {AdmissibleVerdict::Kind::AdmissibleUpTo, 0, sv.L()};
  for (const auto& s : *rt) {
    // need P^(e-g) > |A| * c for every remaining prime p > P
    i128 pw = 1;
    bool big = false;
    for (i64 i = 0; i < s.e - s.g && !big; ++i) {
      pw *= s.P;
      if (pw > i128(kNormLimit)) big = true;
    }
    if (!big && pw < i128(checked_mul(i64(A.size()), s.c)))
      return {AdmissibleVerdict::Kind::AdmissibleUpTo, 0, sv.L()};
  }
  return {AdmissibleVerdict::Kind::Admissible, 0, 0};
}

}  // namespace sievelab
