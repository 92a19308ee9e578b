// erdos.hpp
//
// Exact partial sums of sum_i |R_i| / N(b_i) with a certified analytic tail
// bound. Kept separate from sieve.hpp because it pulls in multiprecision
// rationals; the double-precision tail used by the density brackets lives in
// sieve.hpp.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>

#include "sievelab/sieve.hpp"

namespace sievelab {

using Rational = boost::multiprecision::cpp_rational;

struct ErdosPartial {
  Rational partial;               // sum_{i <= L} |R_i| / N(b_i)
  std::optional<Rational> tail;   // bound on the rest; nullopt = unknown
};

inline ErdosPartial erdos_partial(std::shared_ptr<const SieveSpec> spec, i64 L) {
  Sieve sv = materialize(spec, L);
  ErdosPartial out;
  out.partial = 0;
  for (const auto& cls : sv.classes)
    out.partial += Rational(cls.set.count(), modulus_norm(cls.modulus));

  Rational tail = 0;
  const SieveSpec& sp = *sv.spec;
  for (size_t i = size_t(sv.L()); i < sp.entries.size(); ++i) {
    auto [mod, fac] = detail::eval_modexpr(sp, sp.entries[i].first, "", 0);
    auto set = detail::eval_resset(sp, sp.entries[i].second, mod, "", 0);
    tail += Rational(set.count(), modulus_norm(mod));
  }
  auto rt = rule_tails(sv);
  if (!rt) {
    out.tail = std::nullopt;
    return out;
  }
  for (const auto& s : *rt) {
    // c * P^(g-e+1) / (e-g-1) as an exact rational
    boost::multiprecision::cpp_int den = s.e - s.g - 1;
    for (i64 i = 0; i < s.e - s.g - 1; ++i) den *= s.P;
    tail += Rational(boost::multiprecision::cpp_int(s.c), den);
  }
  out.tail = tail;
  return out;
}

inline ErdosPartial erdos_partial(const SieveSpec& spec, i64 L) {
  return erdos_partial(std::make_shared<SieveSpec>(spec), L);
}

}  // namespace sievelab
