// polysieve.hpp
//
// Sieves built from the l-free values of integer polynomials.
//
// Root finding modulo p^l: the roots modulo p come from a direct scan of
// Z/pZ; each root lifts level by level. A root r with f'(r) nonzero mod p
// lifts uniquely by the Newton step r <- r - f(r) * f'(r)^{-1}; a singular
// root is lifted by scanning all p extensions r + t p^j of the current
// level. Exceptional primes (dividing the discriminant or the leading
// coefficient) therefore cost O(p) per level, and all other primes O(1)
// per root past the initial scan.

#pragma once

#include "sievelab/density.hpp"
#include "sievelab/sieve.hpp"

namespace sievelab {

struct IntPolynomial {
  std::vector<i64> coeffs;  // low to high; trailing zeros trimmed

  explicit IntPolynomial(std::vector<i64> c) : coeffs(std::move(c)) {
    while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
  }
  IntPolynomial(std::initializer_list<i64> c) : IntPolynomial(std::vector<i64>(c)) {}

  int degree() const {
    return coeffs.size() == 1 && coeffs[0] == 0 ? -1 : int(coeffs.size()) - 1;
  }
  bool is_zero() const { return degree() < 0; }
  i64 leading() const { return coeffs.back(); }

  i64 eval_mod(i64 x, i64 m) const {
    i64 acc = 0;
    for (size_t i = coeffs.size(); i-- > 0;)
      acc = mod_reduce(i64((i128(acc) * x + coeffs[i]) % m), m);
    return acc;
  }

  // checked evaluation over Z
  i64 eval(i64 x) const {
    i64 acc = 0;
    for (size_t i = coeffs.size(); i-- > 0;)
      acc = checked_add(checked_mul(acc, x), coeffs[i]);
    return acc;
  }

  IntPolynomial derivative() const {
    if (coeffs.size() <= 1) return IntPolynomial{0};
    std::vector<i64> d(coeffs.size() - 1);
    for (size_t i = 1; i < coeffs.size(); ++i)
      d[i - 1] = checked_mul(i64(i), coeffs[i]);
    return IntPolynomial(std::move(d));
  }

  std::string to_string() const {
    std::string s;
    for (size_t i = 0; i < coeffs.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(coeffs[i]);
    }
    return s;
  }
};

// Sorted roots of f modulo p^l. `brute_bound` caps the initial scan of Z/pZ.
inline std::vector<i64> poly_roots_mod(const IntPolynomial& f, i64 p, int l,
                                       i64 brute_bound = 100'000) {
  if (l < 1) throw Error(Errc::BadInput, "exponent must be >= 1");
  if (p < 2 || !is_prime(p)) throw Error(Errc::BadInput, "p must be prime");
  if (p > brute_bound)
    throw Error(Errc::BoundExceeded, "prime exceeds the root-scan bound");
  i64 pl = 1;
  for (int i = 0; i < l; ++i) pl = checked_mul(pl, p);

  std::vector<i64> roots;
  for (i64 r = 0; r < p; ++r)
    if (f.eval_mod(r, p) == 0) roots.push_back(r);

  IntPolynomial df = f.derivative();
  i64 pj = p;
  for (int level = 1; level < l; ++level) {
    i64 pj1 = pj * p;
    std::vector<i64> lifted;
    for (i64 r : roots) {
      if (mod_reduce(df.eval_mod(r, p), p) != 0) {
        // simple root: unique lift r - f(r)/p^j * f'(r)^{-1} * p^j
        i64 fr = f.eval_mod(r, pj1);
        i64 t = mulmod(mod_reduce(-(fr / pj), p),
                       mod_inverse(df.eval_mod(r, p), p), p);
        lifted.push_back(r + t * pj);
      } else {
        for (i64 t = 0; t < p; ++t) {
          i64 cand = r + t * pj;
          if (f.eval_mod(cand, pj1) == 0) lifted.push_back(cand);
        }
      }
    }
    roots = std::move(lifted);
    pj = pj1;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

inline i64 rho(const IntPolynomial& f, i64 p, int l,
               i64 brute_bound = 100'000) {
  return i64(poly_roots_mod(f, p, l, brute_bound).size());
}

// ---------------------------------------------------------------------------
// Resultants
// ---------------------------------------------------------------------------

// Exact resultant through the pseudo-remainder recursion
//
//   res(A,B) = (-1)^(da db) lb^(da - dr) res(B,R) / lb^((da-db+1) db),
//
// where R = prem(A,B) = lb^(da-db+1) A mod B and dr = deg R. Corrections
// accumulate as an exact integer fraction; 64-bit checked throughout (the
// inputs of interest are small, and growth raises Error(Overflow)).
inline i64 resultant(const IntPolynomial& f, const IntPolynomial& g) {
  if (f.is_zero() || g.is_zero())
    throw Error(Errc::BadInput, "resultant of the zero polynomial");
  std::vector<i64> A = f.coeffs, B = g.coeffs;
  i64 sign = 1;
  i64 acc_num = 1, acc_den = 1;
  auto deg = [](const std::vector<i64>& v) { return int(v.size()) - 1; };
  if (deg(A) < deg(B)) {
    std::swap(A, B);
    if ((deg(A) & 1) && (deg(B) & 1)) sign = -sign;
  }
  while (true) {
    int da = deg(A), db = deg(B);
    if (db == 0) {
      i64 r = 1;
      for (int i = 0; i < da; ++i) r = checked_mul(r, B[0]);
      i128 num = i128(r) * acc_num * sign;
      if (num % acc_den != 0)
        throw Error(Errc::Overflow, "resultant: non-exact division");
      i128 q = num / acc_den;
      if (q > i128(INT64_MAX) || q < i128(INT64_MIN))
        throw Error(Errc::Overflow, "resultant too large");
      return i64(q);
    }
    // R := lb^(da-db+1) * A mod B, reducing one degree per step
    i64 lb = B[size_t(db)];
    std::vector<i64> R = A;
    for (int i = da; i >= db; --i) {
      i64 lead = int(R.size()) > i ? R[size_t(i)] : 0;
      if (int(R.size()) > i) R.resize(size_t(i));
      for (int j = int(R.size()) - 1; j >= 0; --j) {
        i64 v = checked_mul(R[size_t(j)], lb);
        if (j >= i - db)
          v = checked_add(v, -checked_mul(lead, B[size_t(j - (i - db))]));
        R[size_t(j)] = v;
      }
    }
    while (R.size() > 1 && R.back() == 0) R.pop_back();
    if (R.size() == 1 && R[0] == 0) return 0;  // positive-degree common factor
    int dr = deg(R);
    if ((da & 1) && (db & 1)) sign = -sign;
    for (int i = 0; i < da - dr; ++i) acc_num = checked_mul(acc_num, lb);
    for (int i = 0; i < (da - db + 1) * db; ++i)
      acc_den = checked_mul(acc_den, lb);
    A = std::move(B);
    B = std::move(R);
  }
}

inline i64 discriminant(const IntPolynomial& f) {
  if (f.degree() < 1) return 0;
  i64 res = resultant(f, f.derivative());
  i64 lc = f.leading();
  if (res % lc != 0) throw Error(Errc::Overflow, "discriminant not integral");
  i64 d = res / lc;
  int n = f.degree();
  return ((i64(n) * (n - 1) / 2) % 2 == 0) ? d : -d;
}

// ---------------------------------------------------------------------------
// Polynomial sieves
// ---------------------------------------------------------------------------

struct PolySieveParams {
  IntPolynomial f{0};
  int l = 2;
  i64 P_max = 2;
};

// Explicit sieve of the classes (p^l, roots of f mod p^l) over p <= P_max,
// skipping primes with no roots. Pairwise coprimality holds by construction;
// a full root set (possible only for degenerate f) is rejected.
inline SieveSpec build_poly_sieve(const PolySieveParams& params) {
  if (params.f.degree() < 1)
    throw Error(Errc::BadInput, "sieve polynomial must be nonconstant");
  if (params.l < 2) throw Error(Errc::BadInput, "need l >= 2");
  SieveSpec spec;
  spec.k = 1;
  for (i64 p : PrimeTable::global().up_to(params.P_max)) {
    if (p > params.P_max) break;
    std::vector<i64> roots = poly_roots_mod(params.f, p, params.l);
    if (roots.empty()) continue;
    i64 pl = 1;
    for (int i = 0; i < params.l; ++i) pl = checked_mul(pl, p);
    if (i64(roots.size()) == pl)
      throw Error(Errc::FullClass, "every residue mod " + std::to_string(pl) +
                                       " is a root");
    ModFactor m;
    m.is_const = true;
    m.constant = pl;
    ModExpr me;
    me.components.push_back({m});
    ResSpec rs;
    for (i64 r : roots) rs.points.push_back({Affine{0, "", r}});
    spec.entries.emplace_back(std::move(me), std::move(rs));
  }
  return spec;
}

// Truncated density of the points where every f_i takes l-free values:
// prod_{p <= P_max} (1 - |union_i roots(f_i, p, l)| / p^l), with the tail
// bounded by (sum_i deg f_i) * sum_{p > P_max} p^-l.
inline BracketedValue multi_poly_density(const std::vector<IntPolynomial>& fs,
                                         int l, i64 P_max) {
  if (fs.empty()) throw Error(Errc::BadInput, "no polynomials");
  if (l < 2) throw Error(Errc::BadInput, "need l >= 2");
  double upper = 1.0;
  i64 count = 0;
  for (i64 p : PrimeTable::global().up_to(P_max)) {
    if (p > P_max) break;
    ++count;
    std::vector<i64> all;
    for (const auto& f : fs) {
      auto r = poly_roots_mod(f, p, l);
      all.insert(all.end(), r.begin(), r.end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    i64 pl = 1;
    for (int i = 0; i < l; ++i) pl = checked_mul(pl, p);
    if (i64(all.size()) == pl)
      throw Error(Errc::FullClass,
                  "union class covers all residues mod " + std::to_string(pl));
    upper *= 1.0 - double(all.size()) / double(pl);
  }
  i64 dsum = 0;
  for (const auto& f : fs) dsum += std::max(0, f.degree());
  double tail =
      double(dsum) * std::pow(double(P_max), double(1 - l)) / double(l - 1);
  BracketedValue b;
  b.L = count;
  b.upper = upper;
  b.lower = upper * std::max(0.0, 1.0 - tail);
  b.exact = false;
  return b;
}

// Exact count of 1 <= m <= N with f(m) free of l-th powers, by trial
// division of each value with early exit on a p^l divisor.
inline i64 count_lfree_values(const IntPolynomial& f, int l, i64 N) {
  if (l < 2) throw Error(Errc::BadInput, "need l >= 2");
  i64 count = 0;
  for (i64 m = 1; m <= N; ++m) {
    i64 v = f.eval(m);
    if (v < 0) v = -v;
    if (v == 0) continue;  // 0 is divisible by everything
    bool lfree = true;
    i64 rest = v;
    for (i64 p = 2; p * p <= rest && lfree; ++p) {
      if (rest % p) continue;
      int e = 0;
      while (rest % p == 0) {
        rest /= p;
        ++e;
        if (e >= l) {
          lfree = false;
          break;
        }
      }
    }
    // leftover rest is 1 or prime: exponent 1, never an l-th power
    count += lfree;
  }
  return count;
}

}  // namespace sievelab
