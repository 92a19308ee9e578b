// core.hpp
//
// Exact residue arithmetic over Z^k: moduli, points, norms, coprimality,
// CRT, divisor lattices, and residue-class sets.
//
// A modulus b = (b_1,...,b_k) stands for the subgroup b_1 Z x ... x b_k Z.
// Its norm is b_1*...*b_k, the index of that subgroup in Z^k. Two moduli
// are coprime when gcd(a_j, b_j) = 1 in every component, i.e. when the
// corresponding subgroups sum to the whole of Z^k.
//
// A ResidueClassSet is a union of congruence classes modulo b. Small sets
// are stored as an explicit sorted list of reduced residue tuples. Sets that
// are a union of a few cosets of divisors d | b (componentwise) are kept in
// symbolic coset form, since expanding them can be quadratic in the norm;
// counting then goes through inclusion-exclusion over coset intersections.
//
// All integers are 64-bit with checked overflow: a computation that would
// leave the representable range raises Error(Overflow) instead of wrapping.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace sievelab {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

// Hard ceiling for modulus norms; keeps products of two norms inside i128
// and single norms inside i64.
inline constexpr i64 kNormLimit = i64(1) << 62;

enum class Errc {
  Overflow,
  ArityMismatch,
  NonCoprimeModuli,
  BoundExceeded,
  FullClass,
  CoprimalityViolation,
  StreamExhausted,
  NonCoprimeFilter,
  UnknownStream,
  ParseError,
  WindowTooLarge,
  EmptySet,
  NotAdmissible,
  NoCommonBasis,
  NotWellDefined,
  BadInput,
};

inline const char* errc_token(Errc c) {
  switch (c) {
    case Errc::Overflow: return "Overflow";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::NonCoprimeModuli: return "NonCoprimeModuli";
    case Errc::BoundExceeded: return "BoundExceeded";
    case Errc::FullClass: return "FullClass";
    case Errc::CoprimalityViolation: return "CoprimalityViolation";
    case Errc::StreamExhausted: return "StreamExhausted";
    case Errc::NonCoprimeFilter: return "NonCoprimeFilter";
    case Errc::UnknownStream: return "UnknownStream";
    case Errc::ParseError: return "ParseError";
    case Errc::WindowTooLarge: return "WindowTooLarge";
    case Errc::EmptySet: return "EmptySet";
    case Errc::NotAdmissible: return "NotAdmissible";
    case Errc::NoCommonBasis: return "NoCommonBasis";
    case Errc::NotWellDefined: return "NotWellDefined";
    case Errc::BadInput: return "BadInput";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_token(code)) + ": " + what),
        code_(code) {}
  Errc code() const { return code_; }
  const char* token() const { return errc_token(code_); }

 private:
  Errc code_;
};

inline i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(Errc::Overflow, "add");
  return r;
}

inline i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(Errc::Overflow, "mul");
  return r;
}

// Reduce v into [0, m). m >= 1.
inline i64 mod_reduce(i64 v, i64 m) {
  i64 r = v % m;
  return r < 0 ? r + m : r;
}

inline i64 gcd64(i64 a, i64 b) { return std::gcd(a, b); }

// a^{-1} mod m for gcd(a, m) = 1.
inline i64 mod_inverse(i64 a, i64 m) {
  i64 t = 0, nt = 1, r = m, nr = mod_reduce(a, m);
  while (nr != 0) {
    i64 q = r / nr;
    std::swap(t -= q * nt, nt);
    std::swap(r -= q * nr, nr);
  }
  if (r != 1) throw Error(Errc::NonCoprimeModuli, "mod_inverse");
  return mod_reduce(t, m);
}

inline i64 mulmod(i64 a, i64 b, i64 m) {
  return i64((i128(a) * b) % m);
}

// ---------------------------------------------------------------------------
// Point and Modulus
// ---------------------------------------------------------------------------

struct Point {
  std::vector<i64> x;

  Point() = default;
  explicit Point(std::vector<i64> v) : x(std::move(v)) {}
  Point(std::initializer_list<i64> v) : x(v) {}

  int arity() const { return int(x.size()); }
  auto operator<=>(const Point&) const = default;
};

struct Modulus {
  std::vector<i64> c;  // each component >= 1

  Modulus() = default;
  explicit Modulus(std::vector<i64> v) : c(std::move(v)) { validate(); }
  Modulus(std::initializer_list<i64> v) : c(v) { validate(); }

  void validate() const {
    if (c.empty()) throw Error(Errc::BadInput, "modulus must have arity >= 1");
    for (i64 b : c)
      if (b < 1) throw Error(Errc::BadInput, "modulus component must be >= 1");
  }

  int arity() const { return int(c.size()); }
  auto operator<=>(const Modulus&) const = default;
};

inline i64 modulus_norm(const Modulus& m) {
  i64 n = 1;
  for (i64 b : m.c) {
    n = checked_mul(n, b);
    if (n >= kNormLimit) throw Error(Errc::Overflow, "modulus norm >= 2^62");
  }
  return n;
}

inline bool moduli_coprime(const Modulus& a, const Modulus& b) {
  if (a.arity() != b.arity())
    throw Error(Errc::ArityMismatch, "moduli_coprime arity mismatch");
  for (int j = 0; j < a.arity(); ++j)
    if (gcd64(a.c[j], b.c[j]) != 1) return false;
  return true;
}

inline Point reduce_point(const Point& p, const Modulus& m) {
  if (p.arity() != m.arity())
    throw Error(Errc::ArityMismatch, "point/modulus arity mismatch");
  Point r = p;
  for (int j = 0; j < m.arity(); ++j) r.x[j] = mod_reduce(r.x[j], m.c[j]);
  return r;
}

// True iff d divides m componentwise.
inline bool modulus_divides(const Modulus& d, const Modulus& m) {
  if (d.arity() != m.arity()) return false;
  for (int j = 0; j < m.arity(); ++j)
    if (m.c[j] % d.c[j] != 0) return false;
  return true;
}

inline Modulus modulus_lcm(const Modulus& a, const Modulus& b) {
  if (a.arity() != b.arity())
    throw Error(Errc::ArityMismatch, "modulus lcm arity mismatch");
  std::vector<i64> v(a.arity());
  for (int j = 0; j < a.arity(); ++j) {
    i64 g = gcd64(a.c[j], b.c[j]);
    v[j] = checked_mul(a.c[j] / g, b.c[j]);
  }
  return Modulus(v);
}

inline Modulus modulus_gcd(const Modulus& a, const Modulus& b) {
  std::vector<i64> v(a.arity());
  for (int j = 0; j < a.arity(); ++j) v[j] = gcd64(a.c[j], b.c[j]);
  return Modulus(v);
}

// ---------------------------------------------------------------------------
// CRT
// ---------------------------------------------------------------------------

// One-dimensional CRT step: x = a (mod m), x = b (mod n) with gcd(m,n) = 1.
inline i64 crt_pair(i64 a, i64 m, i64 b, i64 n) {
  i64 t = mod_reduce(b - a, n);
  i64 x = a + m * i64((i128(t) * mod_inverse(mod_reduce(m, n), n)) % n);
  return mod_reduce(x, checked_mul(m, n));
}

// Simultaneous congruences over Z^k with pairwise coprime moduli. Returns the
// unique solution reduced modulo the componentwise product.
inline std::pair<Point, Modulus> crt_solve(
    const std::vector<std::pair<Point, Modulus>>& congruences) {
  if (congruences.empty()) throw Error(Errc::BadInput, "crt_solve: empty input");
  const int k = congruences.front().second.arity();
  for (auto& [p, m] : congruences)
    if (p.arity() != k || m.arity() != k)
      throw Error(Errc::ArityMismatch, "crt_solve arity mismatch");
  for (size_t i = 0; i < congruences.size(); ++i)
    for (size_t j = i + 1; j < congruences.size(); ++j)
      if (!moduli_coprime(congruences[i].second, congruences[j].second))
        throw Error(Errc::NonCoprimeModuli, "crt_solve: moduli not coprime");

  Point acc = reduce_point(congruences.front().first, congruences.front().second);
  Modulus mod = congruences.front().second;
  for (size_t i = 1; i < congruences.size(); ++i) {
    const Point r = reduce_point(congruences[i].first, congruences[i].second);
    const Modulus& n = congruences[i].second;
    std::vector<i64> nm(k);
    for (int j = 0; j < k; ++j) {
      acc.x[j] = crt_pair(acc.x[j], mod.c[j], r.x[j], n.c[j]);
      nm[j] = checked_mul(mod.c[j], n.c[j]);
    }
    mod = Modulus(nm);
    (void)modulus_norm(mod);  // overflow guard
  }
  return {acc, mod};
}

// ---------------------------------------------------------------------------
// Divisor lattices
// ---------------------------------------------------------------------------

inline std::vector<i64> divisors_of(i64 n) {
  std::vector<i64> d;
  for (i64 i = 1; i * i <= n; ++i) {
    if (n % i == 0) {
      d.push_back(i);
      if (i != n / i) d.push_back(n / i);
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

// All componentwise divisor tuples of m, sorted by increasing norm (ties
// broken lexicographically). Errors when norm(m) exceeds `bound`.
inline std::vector<Modulus> modulus_divisors(const Modulus& m,
                                             i64 bound = 1'000'000) {
  if (modulus_norm(m) > bound)
    throw Error(Errc::BoundExceeded, "modulus_divisors: norm exceeds bound");
  std::vector<std::vector<i64>> per;
  for (i64 b : m.c) per.push_back(divisors_of(b));
  std::vector<Modulus> out;
  std::vector<i64> cur(m.arity(), 1);
  auto rec = [&](auto&& self, int j) -> void {
    if (j == m.arity()) {
      out.push_back(Modulus(cur));
      return;
    }
    for (i64 d : per[j]) {
      cur[j] = d;
      self(self, j + 1);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end(), [](const Modulus& a, const Modulus& b) {
    i64 na = modulus_norm(a), nb = modulus_norm(b);
    return na != nb ? na < nb : a.c < b.c;
  });
  return out;
}

// ---------------------------------------------------------------------------
// ResidueClassSet
// ---------------------------------------------------------------------------

// One coset base + d Z^k inside an enclosing modulus b (d | b componentwise).
struct Coset {
  Modulus div;
  Point base;  // reduced mod div
  auto operator<=>(const Coset&) const = default;
};

class ResidueClassSet {
 public:
  ResidueClassSet() = default;

  static ResidueClassSet explicit_set(Modulus m, std::vector<Point> pts) {
    ResidueClassSet s;
    s.modulus_ = std::move(m);
    for (auto& p : pts) p = reduce_point(p, s.modulus_);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    s.residues_ = std::move(pts);
    s.check_not_full();
    return s;
  }

  static ResidueClassSet coset_union(Modulus m, std::vector<Coset> cosets) {
    ResidueClassSet s;
    s.modulus_ = std::move(m);
    for (auto& c : cosets) {
      if (!modulus_divides(c.div, s.modulus_))
        throw Error(Errc::BadInput, "coset divisor does not divide modulus");
      c.base = reduce_point(c.base, c.div);
    }
    std::sort(cosets.begin(), cosets.end());
    cosets.erase(std::unique(cosets.begin(), cosets.end()), cosets.end());
    s.cosets_ = std::move(cosets);
    s.coset_form_ = true;
    // Collapse to explicit form while small; keeps equality structural for
    // everything the structure algorithms touch.
    if (!s.cosets_.empty()) {
      i64 total = 0;
      bool small = true;
      for (auto& c : s.cosets_) {
        i64 n = modulus_norm(s.modulus_) / modulus_norm(c.div);
        total += n;
        if (total > kExpandLimit) { small = false; break; }
      }
      if (small) s = s.expanded(kExpandLimit);
    }
    s.check_not_full();
    return s;
  }

  const Modulus& modulus() const { return modulus_; }
  bool coset_form() const { return coset_form_; }
  const std::vector<Point>& residues() const {
    if (coset_form_)
      throw Error(Errc::BoundExceeded, "residue list unavailable for coset form");
    return residues_;
  }
  const std::vector<Coset>& cosets() const { return cosets_; }

  bool empty() const { return coset_form_ ? cosets_.empty() : residues_.empty(); }

  // Number of congruence classes mod modulus in the set.
  i64 count() const {
    if (!coset_form_) return i64(residues_.size());
    return union_count(cosets_, modulus_);
  }

  bool is_full() const { return count() == modulus_norm(modulus_); }

  bool contains(const Point& p) const {
    Point r = reduce_point(p, modulus_);
    if (!coset_form_)
      return std::binary_search(residues_.begin(), residues_.end(), r);
    for (const auto& c : cosets_) {
      bool in = true;
      for (int j = 0; j < modulus_.arity() && in; ++j)
        if (mod_reduce(r.x[j], c.div.c[j]) != c.base.x[j]) in = false;
      if (in) return true;
    }
    return false;
  }

  // The translated set delta + R (same modulus).
  ResidueClassSet shifted(const Point& delta) const {
    if (delta.arity() != modulus_.arity())
      throw Error(Errc::ArityMismatch, "shift arity mismatch");
    ResidueClassSet s = *this;
    if (!coset_form_) {
      for (auto& p : s.residues_) {
        for (int j = 0; j < modulus_.arity(); ++j)
          p.x[j] = mod_reduce(p.x[j] + delta.x[j], modulus_.c[j]);
      }
      std::sort(s.residues_.begin(), s.residues_.end());
    } else {
      for (auto& c : s.cosets_) {
        for (int j = 0; j < modulus_.arity(); ++j)
          c.base.x[j] = mod_reduce(c.base.x[j] + delta.x[j], c.div.c[j]);
      }
      std::sort(s.cosets_.begin(), s.cosets_.end());
    }
    return s;
  }

  // Explicit expansion; throws BoundExceeded when the set has more than
  // `bound` residues.
  ResidueClassSet expanded(i64 bound = kExpandLimit) const {
    if (!coset_form_) return *this;
    std::vector<Point> pts;
    const int k = modulus_.arity();
    for (const auto& c : cosets_) {
      i64 n = modulus_norm(modulus_) / modulus_norm(c.div);
      if (i64(pts.size()) + n > bound)
        throw Error(Errc::BoundExceeded, "residue expansion exceeds bound");
      // enumerate base + div * t within the box [0, modulus)
      std::vector<i64> t(k, 0);
      while (true) {
        Point p{std::vector<i64>(size_t(k))};
        for (int j = 0; j < k; ++j) p.x[j] = c.base.x[j] + t[j] * c.div.c[j];
        pts.push_back(std::move(p));
        int j = 0;
        for (; j < k; ++j) {
          ++t[j];
          if (c.base.x[j] + t[j] * c.div.c[j] < modulus_.c[j]) break;
          t[j] = 0;
        }
        if (j == k) break;
      }
    }
    return explicit_set(modulus_, std::move(pts));
  }

  auto operator<=>(const ResidueClassSet&) const = default;

  // Intersect two one-dimensional cosets a (mod d) and a2 (mod d2), both with
  // d, d2 dividing the same modulus component. Returns false when disjoint,
  // else writes the merged coset back into (a, d).
  static bool merge_coset_1d(i64& a, i64& d, i64 a2, i64 d2) {
    i64 g = gcd64(d, d2);
    if (mod_reduce(a - a2, g) != 0) return false;
    i64 l = checked_mul(d / g, d2);
    i64 n2 = d2 / g;
    if (n2 == 1) return true;  // d2 | d already
    i64 t = mod_reduce((a2 - a) / g, n2);
    i64 inv = mod_inverse(mod_reduce(d / g, n2), n2);
    a = mod_reduce(a + checked_mul(d, i64((i128(t) * inv) % n2)), l);
    d = l;
    return true;
  }

  // |union of cosets| inside Z^k / m, by inclusion-exclusion over coset
  // intersections (each intersection is again a coset or empty, via CRT).
  static i64 union_count(const std::vector<Coset>& cs, const Modulus& m) {
    const int n = int(cs.size());
    if (n == 0) return 0;
    if (n > 20)
      throw Error(Errc::BoundExceeded, "inclusion-exclusion over > 20 cosets");
    i64 total = 0;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      bool nonempty = true;
      i64 pts = 1;
      for (int j = 0; j < m.arity() && nonempty; ++j) {
        i64 d = 1, a = 0;
        for (int i = 0; i < n; ++i) {
          if (!(mask >> i & 1)) continue;
          if (!merge_coset_1d(a, d, cs[i].base.x[j], cs[i].div.c[j])) {
            nonempty = false;
            break;
          }
        }
        if (nonempty) pts = checked_mul(pts, m.c[j] / d);
      }
      if (!nonempty) continue;
      total += (__builtin_popcount(mask) & 1) ? pts : -pts;
    }
    return total;
  }

  static constexpr i64 kExpandLimit = 4096;

 private:
  void check_not_full() const {
    if (!empty() && is_full())
      throw Error(Errc::FullClass, "residue class set covers the full ring");
  }

  Modulus modulus_{std::vector<i64>{1}};
  bool coset_form_ = false;
  std::vector<Point> residues_;  // explicit form: sorted, reduced, unique
  std::vector<Coset> cosets_;    // coset form: sorted, bases reduced mod div
};

}  // namespace sievelab
