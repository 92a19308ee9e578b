// primes.hpp
//
// A growable prime table plus the prime streams used by sieve families:
// all primes, primes in a fixed residue class a (mod m) with gcd(a, m) = 1,
// or an explicit finite list. Streams are 1-indexed increasing enumerations.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sievelab/core.hpp"

namespace sievelab {

// Shared table of primes, extended on demand by segmented Eratosthenes.
class PrimeTable {
 public:
  // p_i for 1-based index i.
  i64 nth(size_t i) {
    if (i == 0) throw Error(Errc::BadInput, "prime index is 1-based");
    while (primes_.size() < i) grow();
    return primes_[i - 1];
  }

  // All primes <= limit.
  const std::vector<i64>& up_to(i64 limit) {
    while (sieved_to_ < limit) grow();
    return primes_;
  }

  size_t count_up_to(i64 limit) {
    up_to(limit);
    size_t lo = 0, hi = primes_.size();
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      if (primes_[mid] <= limit) lo = mid + 1; else hi = mid;
    }
    return lo;
  }

  static PrimeTable& global() {
    static PrimeTable t;
    return t;
  }

 private:
  void grow() {
    i64 lo = sieved_to_ + 1;
    i64 hi = sieved_to_ == 0 ? 1 << 16 : sieved_to_ * 2;
    std::vector<bool> comp(size_t(hi - lo + 1), false);
    for (i64 p = 2; p * p <= hi; ++p) {
      bool isp = true;
      for (i64 q = 2; q * q <= p; ++q)
        if (p % q == 0) { isp = false; break; }
      if (!isp) continue;
      i64 s = std::max(p * p, (lo + p - 1) / p * p);
      for (i64 m = s; m <= hi; m += p) comp[size_t(m - lo)] = true;
    }
    for (i64 v = std::max<i64>(lo, 2); v <= hi; ++v)
      if (!comp[size_t(v - lo)]) primes_.push_back(v);
    sieved_to_ = hi;
  }

  std::vector<i64> primes_;
  i64 sieved_to_ = 0;
};

struct PrimeStream {
  enum class Kind { AllPrimes, PrimesModulo, ExplicitList };

  std::string name;
  Kind kind = Kind::AllPrimes;
  i64 filter_mod = 0;  // PrimesModulo: p = filter_res (mod filter_mod)
  i64 filter_res = 0;
  std::vector<i64> list;  // ExplicitList, increasing

  // i-th matching prime, 1-based. Throws StreamExhausted for finite lists.
  i64 at(size_t i) const {
    if (i == 0) throw Error(Errc::BadInput, "stream index is 1-based");
    switch (kind) {
      case Kind::AllPrimes:
        return PrimeTable::global().nth(i);
      case Kind::ExplicitList:
        if (i > list.size())
          throw Error(Errc::StreamExhausted,
                      "stream '" + name + "' has only " +
                          std::to_string(list.size()) + " entries");
        return list[i - 1];
      case Kind::PrimesModulo: {
        while (matched_.size() < i) {
          i64 p = PrimeTable::global().nth(++scan_pos_);
          if (mod_reduce(p, filter_mod) == filter_res) matched_.push_back(p);
        }
        return matched_[i - 1];
      }
    }
    throw Error(Errc::BadInput, "unreachable");
  }

 private:
  mutable std::vector<i64> matched_;  // PrimesModulo cache
  mutable size_t scan_pos_ = 0;
};

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

}  // namespace sievelab
