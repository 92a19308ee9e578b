// pnt.hpp
//
// Omega tables (number of prime factors with multiplicity), finite cyclic
// rotations as uniquely ergodic systems, and the ergodic averages over the
// truncated free set:
//
//   lhs = (1/N) sum_{m in F^(L), m <= N} f((x0 + Omega(m)) mod q)
//   rhs = (|F^(L) ∩ [1,N]| / N) * mean(f).
//
// Both sides are accumulated as exact integer counts against rational
// observable values; only the final division leaves exact arithmetic.

#pragma once

#include "sievelab/enumerate.hpp"

namespace sievelab {

struct OmegaTable {
  i64 N = 0;
  std::vector<std::uint8_t> omega;  // omega[m], 1 <= m <= N

  i64 at(i64 m) const { return omega[size_t(m)]; }
};

// Additive sieve: for every prime power q = p^e <= N, each multiple of q
// gains one factor of p. Linear memory, N log log N additions.
inline OmegaTable omega_table(i64 N, i64 budget = i64(1) << 28) {
  if (N < 1) throw Error(Errc::BadInput, "omega table needs N >= 1");
  if (N > budget) throw Error(Errc::BoundExceeded, "omega table exceeds budget");
  OmegaTable t;
  t.N = N;
  t.omega.assign(size_t(N) + 1, 0);
  for (i64 p : PrimeTable::global().up_to(N)) {
    if (p > N) break;
    for (i64 q = p; q <= N; q = q > N / p ? N + 1 : q * p)
      for (i64 m = q; m <= N; m += q) ++t.omega[size_t(m)];
  }
  return t;
}

// Small exact rational for observable values ("2/3", "-1", "0.25" is not
// accepted; fractions keep the averages exact).
struct Rat {
  i64 num = 0;
  i64 den = 1;

  static Rat parse(const std::string& s) {
    size_t slash = s.find('/');
    try {
      if (slash == std::string::npos) return {std::stoll(s), 1};
      Rat r{std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))};
      if (r.den <= 0) throw Error(Errc::BadInput, "denominator must be > 0");
      return r;
    } catch (const Error&) {
      throw;
    } catch (...) {
      throw Error(Errc::BadInput, "bad rational '" + s + "'");
    }
  }
  double value() const { return double(num) / double(den); }
};

struct FiniteRotation {
  i64 q = 1;       // group order
  i64 x0 = 0;      // start point
  std::vector<Rat> f;  // observable, one value per residue

  void validate() const {
    if (q < 1 || i64(f.size()) != q)
      throw Error(Errc::BadInput, "rotation needs q values");
  }
};

struct ErgodicAverage {
  // exact integer data
  std::vector<i64> class_counts;  // free m <= N with (x0 + Omega(m)) % q = j
  i64 free_count = 0;
  i64 N = 0;
  // derived
  double lhs = 0, rhs = 0, diff = 0;
  i64 lhs_num = 0, lhs_den = 1;  // lhs as an exact fraction
};

inline ErgodicAverage ergodic_average(const Sieve& sv, i64 N,
                                      const FiniteRotation& rot) {
  rot.validate();
  if (sv.k != 1) throw Error(Errc::BadInput, "averages run over ring Z");
  OmegaTable om = omega_table(N);
  FreeSetReport rep = enumerate_free(sv, Window::interval(1, N));

  ErgodicAverage out;
  out.N = N;
  out.class_counts.assign(size_t(rot.q), 0);
  for (i64 m = 1; m <= N; ++m)
    if (rep.is_free(m - 1)) {
      ++out.free_count;
      ++out.class_counts[size_t(mod_reduce(rot.x0 + om.at(m), rot.q))];
    }

  // lhs = sum_j counts[j] * f_j / N over the common denominator
  i64 D = 1;
  for (const auto& r : rot.f) D = checked_mul(D / gcd64(D, r.den), r.den);
  i64 num = 0;
  for (i64 j = 0; j < rot.q; ++j)
    num = checked_add(num, checked_mul(out.class_counts[size_t(j)],
                                       checked_mul(rot.f[size_t(j)].num,
                                                   D / rot.f[size_t(j)].den)));
  out.lhs_num = num;
  out.lhs_den = checked_mul(D, N);
  out.lhs = double(num) / double(out.lhs_den);

  // rhs = (free/N) * (1/q) sum_j f_j
  i64 mean_num = 0;
  for (const auto& r : rot.f)
    mean_num = checked_add(mean_num, checked_mul(r.num, D / r.den));
  out.rhs = double(out.free_count) / double(N) * double(mean_num) /
            double(checked_mul(D, rot.q));
  out.diff = std::abs(out.lhs - out.rhs);
  return out;
}

// (1/N) |{m <= N in the level-L_inner weak-tail set}|, i.e. the exact mean of
// |1_{F^(L)}(m) - P(m)| where P is the periodic truncation to the first
// L_inner classes. Identical, by definition, to the weak-tail ratio of
// tails_profile at matched parameters.
struct BesicovitchError {
  i64 mismatch_count = 0;
  i64 N = 0;
  double ratio = 0;
};

inline BesicovitchError besicovitch_error(const Sieve& sv, i64 L_inner,
                                          i64 N) {
  if (L_inner < 0 || L_inner > sv.L())
    throw Error(Errc::BadInput, "inner level must be within the truncation");
  BesicovitchError out;
  out.N = N;
  if (L_inner == sv.L()) return out;  // same truncation, error 0
  auto pts = tails_profile(sv, Window::interval(1, N), {L_inner});
  out.mismatch_count = pts[0].weak_count;
  out.ratio = pts[0].weak_ratio;
  return out;
}

}  // namespace sievelab
