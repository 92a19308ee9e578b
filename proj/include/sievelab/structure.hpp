// structure.hpp
//
// Structural algebra on sieve classes and prefixes.
//
// A class R_b is decomposable when it is a union of cosets of pairwise
// coprime proper divisors of b; a key fact used throughout: every coset that
// could appear in such a decomposition lies wholly inside R_b, so taking all
// inside-cosets per chosen divisor never loses a decomposition. A sieve is
// minimal when no class is decomposable; contraction rewrites every
// decomposable class into its parts until that holds, which leaves the
// sieved-out set unchanged on every window.
//
// The union of two sieves lives on the connected components of the bipartite
// non-coprimality graph between their moduli. A component can only be used
// when it provably cannot grow at larger truncations; this is checked with a
// guard band: both prefixes are extended a few indices past L and a component
// that touches the guard region is reported as boundary.

#pragma once

#include <functional>
#include <variant>

#include "sievelab/density.hpp"
#include "sievelab/enumerate.hpp"
#include "sievelab/sieve.hpp"

namespace sievelab {

inline constexpr i64 kClassNormBound = 1'000'000;

// ---------------------------------------------------------------------------
// Stabilizer F(R_b) = { x : x + R_b = R_b }
// ---------------------------------------------------------------------------

struct Stabilizer {
  Modulus modulus;
  std::vector<Point> elements;  // sorted, subgroup containing 0
  i64 index = 1;                // norm(b) / |elements|
};

inline Stabilizer stabilizer(const ResidueClassSet& R,
                             i64 bound = kClassNormBound) {
  const Modulus& m = R.modulus();
  const i64 norm = modulus_norm(m);
  if (norm > bound)
    throw Error(Errc::BoundExceeded, "stabilizer: norm exceeds bound");
  Stabilizer st;
  st.modulus = m;
  if (R.empty()) {
    // the empty set is fixed by everything
    ResidueClassSet full = ResidueClassSet::coset_union(
        m, {Coset{Modulus(std::vector<i64>(size_t(m.arity()), 1)),
                  Point(std::vector<i64>(size_t(m.arity()), 0))}});
    st.elements = full.expanded(bound).residues();
    st.index = 1;
    return st;
  }
  ResidueClassSet E = R.expanded(bound);
  const auto& res = E.residues();
  // any stabilizer element maps res[0] into the set
  for (const auto& r : res) {
    Point x = r;
    for (int j = 0; j < m.arity(); ++j)
      x.x[size_t(j)] =
          mod_reduce(x.x[size_t(j)] - res[0].x[size_t(j)], m.c[size_t(j)]);
    if (E.shifted(x) == E) st.elements.push_back(std::move(x));
  }
  std::sort(st.elements.begin(), st.elements.end());
  // subgroup sanity: closed under addition, 0 present, order divides norm
  auto member = [&](const Point& p) {
    return std::binary_search(st.elements.begin(), st.elements.end(), p);
  };
  if (!member(Point(std::vector<i64>(size_t(m.arity()), 0))))
    throw Error(Errc::BadInput, "stabilizer does not contain 0");
  for (const auto& a : st.elements)
    for (const auto& b : st.elements) {
      Point s = a;
      for (int j = 0; j < m.arity(); ++j)
        s.x[size_t(j)] = mod_reduce(s.x[size_t(j)] + b.x[size_t(j)], m.c[size_t(j)]);
      if (!member(s))
        throw Error(Errc::BadInput, "stabilizer not closed under addition");
    }
  if (norm % i64(st.elements.size()) != 0)
    throw Error(Errc::BadInput, "stabilizer order does not divide the norm");
  st.index = norm / i64(st.elements.size());
  return st;
}

// ---------------------------------------------------------------------------
// Minimality of a single class
// ---------------------------------------------------------------------------

struct DecompositionPart {
  Modulus div;                  // proper divisor of the class modulus
  std::vector<Point> residues;  // S_i, reduced mod div, sorted
};

struct Decomposition {
  std::vector<DecompositionPart> parts;  // pairwise coprime divisors
};

struct Minimal {};

using MinimalityVerdict = std::variant<Minimal, Decomposition>;

namespace detail {

// Bitset over Z^k / m in row-major order.
inline i64 flat_residue(const Point& p, const Modulus& m) {
  i64 idx = 0;
  for (int j = 0; j < m.arity(); ++j)
    idx = idx * m.c[size_t(j)] + mod_reduce(p.x[size_t(j)], m.c[size_t(j)]);
  return idx;
}

inline std::vector<bool> class_bitset(const ResidueClassSet& R, i64 bound) {
  const i64 norm = modulus_norm(R.modulus());
  if (norm > bound)
    throw Error(Errc::BoundExceeded, "class norm exceeds bound");
  std::vector<bool> bits(size_t(norm), false);
  ResidueClassSet E = R.expanded(bound);
  for (const auto& r : E.residues())
    bits[size_t(flat_residue(r, R.modulus()))] = true;
  return bits;
}

}  // namespace detail

// Decides whether R_b is a union of cosets of pairwise coprime proper
// divisors of b. On success returns the decomposition with the fewest parts,
// ties broken by the lexicographically smallest divisor-norm sequence
// (search: iterative deepening over candidate divisors sorted by norm).
inline MinimalityVerdict minimal_class(const ResidueClassSet& R,
                                       i64 bound = kClassNormBound) {
  const Modulus& b = R.modulus();
  const i64 norm = modulus_norm(b);
  if (norm > bound)
    throw Error(Errc::BoundExceeded, "minimal_class: norm exceeds bound");
  if (R.empty()) return Decomposition{};  // removable by contraction

  std::vector<bool> target = detail::class_bitset(R, bound);

  // candidate divisors: proper, not the trivial (1,..,1), with their
  // inside-cosets and covered bitsets
  struct Candidate {
    Modulus d;
    std::vector<Point> bases;   // bases of cosets wholly inside R, mod d
    std::vector<bool> covered;  // union of those cosets, over Z^k/b
  };
  std::vector<Candidate> cands;
  for (const Modulus& d : modulus_divisors(b, bound)) {
    if (d == b) continue;
    if (modulus_norm(d) == 1) continue;  // full-ring coset cannot fit
    Candidate c;
    c.d = d;
    c.covered.assign(size_t(norm), false);
    // iterate all residues mod d as coset bases
    std::vector<i64> t(size_t(b.arity()), 0);
    while (true) {
      Point base{std::vector<i64>(t.begin(), t.end())};
      // check that base + dZ^k lies inside R
      bool inside = true;
      ResidueClassSet coset =
          ResidueClassSet::coset_union(b, {Coset{d, base}}).expanded(bound);
      for (const auto& p : coset.residues()) {
        if (!target[size_t(detail::flat_residue(p, b))]) {
          inside = false;
          break;
        }
      }
      if (inside) {
        c.bases.push_back(base);
        for (const auto& p : coset.residues())
          c.covered[size_t(detail::flat_residue(p, b))] = true;
      }
      int j = 0;
      for (; j < b.arity(); ++j) {
        if (++t[size_t(j)] < d.c[size_t(j)]) break;
        t[size_t(j)] = 0;
      }
      if (j == b.arity()) break;
    }
    if (!c.bases.empty()) cands.push_back(std::move(c));
  }
  if (cands.empty()) return Minimal{};

  // iterative deepening: fewest parts first, then lexicographically smallest
  // divisor sequence (candidates are already sorted by norm, then lex)
  std::vector<int> chosen;
  std::function<bool(size_t, size_t, std::vector<bool>&)> dfs =
      [&](size_t depth, size_t start, std::vector<bool>& cover) -> bool {
    if (depth == 0) return std::equal(cover.begin(), cover.end(), target.begin());
    for (size_t c = start; c < cands.size(); ++c) {
      bool coprime = true;
      for (int used : chosen)
        if (!moduli_coprime(cands[size_t(used)].d, cands[c].d)) {
          coprime = false;
          break;
        }
      if (!coprime) continue;
      std::vector<bool> next = cover;
      for (size_t i = 0; i < next.size(); ++i)
        if (cands[c].covered[i]) next[i] = true;
      chosen.push_back(int(c));
      if (dfs(depth - 1, c + 1, next)) return true;
      chosen.pop_back();
    }
    return false;
  };

  for (size_t r = 1; r <= cands.size(); ++r) {
    std::vector<bool> cover(size_t(norm), false);
    chosen.clear();
    if (dfs(r, 0, cover)) {
      Decomposition dec;
      for (int c : chosen)
        dec.parts.push_back(
            DecompositionPart{cands[size_t(c)].d, cands[size_t(c)].bases});
      return dec;
    }
  }
  return Minimal{};
}

// ---------------------------------------------------------------------------
// Contraction of a materialized prefix
// ---------------------------------------------------------------------------

// Replaces every decomposable class by its parts, recursively, dropping empty
// classes. Parts replace their parent in place, ordered by norm (then lex).
// The sieved-out set over any window is unchanged.
inline Sieve contract_sieve(const Sieve& sv, i64 bound = kClassNormBound) {
  std::vector<std::pair<Modulus, ResidueClassSet>> out;

  std::function<void(const Modulus&, const ResidueClassSet&,
                     std::vector<std::pair<Modulus, ResidueClassSet>>&)>
      reduce = [&](const Modulus& m, const ResidueClassSet& R,
                   std::vector<std::pair<Modulus, ResidueClassSet>>& sink) {
        if (R.empty()) return;
        MinimalityVerdict v = minimal_class(R, bound);
        if (std::holds_alternative<Minimal>(v)) {
          sink.emplace_back(m, R);
          return;
        }
        for (const auto& part : std::get<Decomposition>(v).parts)
          reduce(part.div,
                 ResidueClassSet::explicit_set(part.div, part.residues), sink);
      };

  for (const auto& cls : sv.classes) {
    std::vector<std::pair<Modulus, ResidueClassSet>> frag;
    reduce(cls.modulus, cls.set, frag);
    std::sort(frag.begin(), frag.end(), [](const auto& a, const auto& b) {
      i64 na = modulus_norm(a.first), nb = modulus_norm(b.first);
      return na != nb ? na < nb : a.first.c < b.first.c;
    });
    for (auto& f : frag) out.push_back(std::move(f));
  }

  // synthesize an explicit spec so the result prints as DSL
  auto spec = std::make_shared<SieveSpec>();
  spec->k = sv.k;
  Sieve res;
  res.k = sv.k;
  for (auto& [m, R] : out) {
    ModExpr me;
    for (i64 c : m.c) {
      ModFactor f;
      f.is_const = true;
      f.constant = c;
      me.components.push_back({f});
    }
    ResSpec rs;
    ResidueClassSet E = R.expanded(bound);
    for (const auto& p : E.residues()) {
      std::vector<Affine> pt;
      for (i64 v : p.x) pt.push_back(Affine{0, "", v});
      rs.points.push_back(std::move(pt));
    }
    spec->entries.emplace_back(std::move(me), std::move(rs));
    SieveClass cls;
    cls.modulus = m;
    cls.set = R;
    for (i64 c : m.c) cls.factors.push_back(factor_small(c));
    res.classes.push_back(std::move(cls));
  }
  res.spec = spec;
  return res;
}

// ---------------------------------------------------------------------------
// Equivalence of two prefixes
// ---------------------------------------------------------------------------

struct EquivVerdict {
  bool equivalent = true;  // up to the provided truncations
  int side = 0;            // witness sieved only by this side (0 = first)
  i64 class_index = 0;     // sieving class index on `side`
  Point witness;           // integer point sieved by exactly one prefix
};

namespace detail {

inline bool point_in_class(const Point& p, const SieveClass& cls) {
  return cls.set.contains(p);
}

inline bool point_in_prefix(const Point& p, const Sieve& sv) {
  for (const auto& cls : sv.classes)
    if (cls.set.contains(p)) return true;
  return false;
}

// Containment of one side's class in the union of its non-coprime partners
// on the other side, verified exactly modulo the joint lcm. On failure,
// produces an integer witness inside the class whose whole coset mod the lcm
// avoids every partner, moved along the lcm lattice until it also avoids
// every remaining class of the other prefix.
inline bool class_covered(const Sieve& self, i64 index, const Sieve& other,
                          Point& witness_out, i64 lcm_bound,
                          i64 enum_bound) {
  const SieveClass& cls = self.at(index);
  if (cls.set.empty()) return true;
  std::vector<const SieveClass*> partners;
  Modulus lcm = cls.modulus;
  for (const auto& oc : other.classes)
    if (!moduli_coprime(cls.modulus, oc.modulus)) {
      partners.push_back(&oc);
      lcm = modulus_lcm(lcm, oc.modulus);
    }
  if (modulus_norm(lcm) > lcm_bound)
    throw Error(Errc::BoundExceeded, "equivalence: lcm norm exceeds bound");

  const int k = self.k;
  i64 lifts = modulus_norm(lcm) / modulus_norm(cls.modulus);
  ResidueClassSet E = cls.set.expanded(i64(1) << 20);
  if (checked_mul(lifts, E.count()) > enum_bound)
    throw Error(Errc::BoundExceeded, "equivalence: enumeration too large");

  for (const auto& r : E.residues()) {
    // lifts of r modulo lcm
    std::vector<i64> t(size_t(k), 0);
    while (true) {
      Point y = r;
      for (int j = 0; j < k; ++j)
        y.x[size_t(j)] += t[size_t(j)] * cls.modulus.c[size_t(j)];
      bool covered = false;
      for (const auto* pc : partners)
        if (pc->set.contains(y)) {
          covered = true;
          break;
        }
      if (!covered) {
        // move along the lcm lattice to dodge the remaining classes of both
        // prefixes; a free representative exists since the uninvolved
        // classes never cover a full coset of the lcm
        for (i64 step = 0; step < 1'000'000; ++step) {
          Point w = y;
          w.x[0] = y.x[0] + checked_mul(step, lcm.c[0]);
          bool clean = !point_in_prefix(w, other);
          if (clean) {
            for (const auto& sc : self.classes)
              if (&sc != &cls && sc.set.contains(w)) {
                clean = false;
                break;
              }
          }
          if (clean) {
            witness_out = w;
            return false;
          }
        }
        throw Error(Errc::BoundExceeded,
                    "equivalence: witness representative search exhausted");
      }
      int j = 0;
      for (; j < k; ++j) {
        if (++t[size_t(j)] < lcm.c[size_t(j)] / cls.modulus.c[size_t(j)]) break;
        t[size_t(j)] = 0;
      }
      if (j == k) break;
    }
  }
  return true;
}

}  // namespace detail

inline EquivVerdict check_equivalent(const Sieve& a, const Sieve& b,
                                     i64 lcm_bound = i64(100'000'000),
                                     i64 enum_bound = i64(10'000'000)) {
  if (a.k != b.k) throw Error(Errc::ArityMismatch, "equivalence arity mismatch");
  EquivVerdict v;
  Point w;
  for (i64 i = 1; i <= a.L(); ++i)
    if (!detail::class_covered(a, i, b, w, lcm_bound, enum_bound))
      return {false, 0, i, w};
  for (i64 i = 1; i <= b.L(); ++i)
    if (!detail::class_covered(b, i, a, w, lcm_bound, enum_bound))
      return {false, 1, i, w};
  return v;
}

// ---------------------------------------------------------------------------
// Union of sieves
// ---------------------------------------------------------------------------

struct UnionComponent {
  Modulus lcm;
  std::vector<std::pair<int, i64>> members;  // (side, class index)
  ResidueClassSet cls;                       // union class mod lcm
};

struct UnionResult {
  bool ok = false;
  Errc failure = Errc::NoCommonBasis;  // NoCommonBasis or NotWellDefined
  i64 upto = 0;                        // truncation for NoCommonBasisUpTo
  std::vector<UnionComponent> components;
  Sieve combined;  // explicit sieve on the component moduli
};

// Unions the prefixes of length L of both specs. Components are certified
// closed by materializing `guard` extra indices on each side and requiring
// that no component containing a class of index <= L touches the guard band.
inline UnionResult union_sieves(std::shared_ptr<const SieveSpec> spec_a,
                                std::shared_ptr<const SieveSpec> spec_b, i64 L,
                                i64 guard = 8) {
  auto take = [&](std::shared_ptr<const SieveSpec> spec) {
    // exhausting the spec is fine: the prefix is then complete
    for (i64 want = L + guard; want >= L; --want) {
      try {
        return materialize(spec, want);
      } catch (const Error& e) {
        if (e.code() != Errc::StreamExhausted) throw;
      }
    }
    throw Error(Errc::StreamExhausted, "union: prefix shorter than L");
  };
  Sieve a = take(spec_a), b = take(spec_b);
  if (a.k != b.k) throw Error(Errc::ArityMismatch, "union arity mismatch");

  // union-find over classes; edges via shared (component, prime)
  const i64 na = a.L(), nb = b.L();
  std::vector<i64> parent(size_t(na + nb), 0);
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = i64(i);
  std::function<i64(i64)> find = [&](i64 x) -> i64 {
    while (parent[size_t(x)] != x) x = parent[size_t(x)] = parent[size_t(parent[size_t(x)])];
    return x;
  };
  auto unite = [&](i64 x, i64 y) { parent[size_t(find(x))] = find(y); };

  // (component, prime) -> owning class index on each side; within one side a
  // prime has a unique owner by pairwise coprimality
  std::map<std::pair<int, i64>, std::pair<i64, i64>> own;
  for (i64 i = 1; i <= na; ++i)
    for (int j = 0; j < a.k; ++j)
      for (auto [p, e] : a.at(i).factors[size_t(j)]) own[{j, p}].first = i;
  for (i64 i = 1; i <= nb; ++i)
    for (int j = 0; j < b.k; ++j)
      for (auto [p, e] : b.at(i).factors[size_t(j)]) own[{j, p}].second = i;
  for (auto& [key, idx] : own)
    if (idx.first > 0 && idx.second > 0)
      unite(idx.first - 1, na + idx.second - 1);

  // group members per component root
  std::map<i64, std::vector<std::pair<int, i64>>> comps;
  for (i64 i = 1; i <= na; ++i) comps[find(i - 1)].emplace_back(0, i);
  for (i64 i = 1; i <= nb; ++i) comps[find(na + i - 1)].emplace_back(1, i);

  UnionResult res;
  std::vector<UnionComponent> kept;
  for (auto& [root, members] : comps) {
    bool in_prefix = false, touches_guard = false;
    for (auto [side, idx] : members) {
      if (idx <= L) in_prefix = true;
      if (idx > L) touches_guard = true;
    }
    if (!in_prefix) continue;  // pure guard component: ignore
    if (touches_guard) {
      res.ok = false;
      res.failure = Errc::NoCommonBasis;
      res.upto = L;
      return res;
    }
    UnionComponent uc;
    uc.members = members;
    Modulus lcm = (members.front().first == 0 ? a : b)
                      .at(members.front().second)
                      .modulus;
    for (auto [side, idx] : members)
      lcm = modulus_lcm(lcm, (side == 0 ? a : b).at(idx).modulus);
    uc.lcm = lcm;
    std::vector<Coset> cosets;
    for (auto [side, idx] : members) {
      const SieveClass& cls = (side == 0 ? a : b).at(idx);
      if (cls.set.coset_form()) {
        for (const auto& c : cls.set.cosets()) cosets.push_back(c);
      } else {
        for (const auto& r : cls.set.residues())
          cosets.push_back(Coset{cls.modulus, r});
      }
    }
    try {
      uc.cls = ResidueClassSet::coset_union(lcm, std::move(cosets));
    } catch (const Error& e) {
      if (e.code() == Errc::FullClass) {
        res.ok = false;
        res.failure = Errc::NotWellDefined;
        return res;
      }
      throw;
    }
    kept.push_back(std::move(uc));
  }

  std::sort(kept.begin(), kept.end(), [](const UnionComponent& x,
                                         const UnionComponent& y) {
    i64 nx = modulus_norm(x.lcm), ny = modulus_norm(y.lcm);
    return nx != ny ? nx < ny : x.lcm.c < y.lcm.c;
  });

  res.ok = true;
  res.components = std::move(kept);
  res.combined.k = a.k;
  auto spec = std::make_shared<SieveSpec>();
  spec->k = a.k;
  for (const auto& uc : res.components) {
    SieveClass cls;
    cls.modulus = uc.lcm;
    cls.set = uc.cls;
    for (i64 c : uc.lcm.c) cls.factors.push_back(factor_small(c));
    res.combined.classes.push_back(std::move(cls));
    ModExpr me;
    for (i64 c : uc.lcm.c) {
      ModFactor f;
      f.is_const = true;
      f.constant = c;
      me.components.push_back({f});
    }
    ResSpec rs;
    if (uc.cls.coset_form()) {
      for (const auto& cs : uc.cls.cosets()) {
        CosetSpec c2;
        for (i64 v : cs.base.x) c2.base.push_back(Affine{0, "", v});
        for (i64 v : cs.div.c) {
          ModFactor f;
          f.is_const = true;
          f.constant = v;
          c2.div.components.push_back({f});
        }
        rs.cosets.push_back(std::move(c2));
      }
    } else {
      for (const auto& p : uc.cls.residues()) {
        std::vector<Affine> pt;
        for (i64 v : p.x) pt.push_back(Affine{0, "", v});
        rs.points.push_back(std::move(pt));
      }
    }
    spec->entries.emplace_back(std::move(me), std::move(rs));
  }
  res.combined.spec = spec;
  return res;
}

// ---------------------------------------------------------------------------
// Minimum gaps
// ---------------------------------------------------------------------------

// lambda(R_b): minimum sup-norm distance between distinct points of the
// infinite set R_b + b Z^k. Computed per residue pair: the difference set of
// two cosets factors componentwise, so the minimum of the maximum reduces to
// max_j of per-component wraparound minima, plus min_j b_j for pairs inside
// one coset. Adjacent residues therefore give lambda = 1 regardless of the
// modulus.
inline i64 min_gap(const ResidueClassSet& R) {
  if (R.empty()) throw Error(Errc::EmptySet, "min_gap of empty class");
  const Modulus& m = R.modulus();
  const int k = m.arity();

  std::vector<Coset> cosets;
  if (R.coset_form()) {
    cosets = R.cosets();
  } else {
    for (const auto& r : R.residues()) cosets.push_back(Coset{m, r});
  }

  i64 best = kNormLimit;
  auto wrap_min = [](i64 delta, i64 g) {
    i64 d = mod_reduce(delta, g);
    return std::min(d, g - d);
  };
  for (size_t i = 0; i < cosets.size(); ++i) {
    // distinct points within one coset
    i64 self = kNormLimit;
    for (int j = 0; j < k; ++j) self = std::min(self, cosets[i].div.c[size_t(j)]);
    best = std::min(best, self);
    for (size_t l = i + 1; l < cosets.size(); ++l) {
      std::vector<i64> g(size_t(k), 0), c(size_t(k), 0);
      bool all_zero = true;
      i64 sup = 0;
      for (int j = 0; j < k; ++j) {
        g[size_t(j)] = gcd64(cosets[i].div.c[size_t(j)], cosets[l].div.c[size_t(j)]);
        c[size_t(j)] = cosets[i].base.x[size_t(j)] - cosets[l].base.x[size_t(j)];
        i64 w = wrap_min(c[size_t(j)], g[size_t(j)]);
        if (mod_reduce(c[size_t(j)], g[size_t(j)]) != 0) all_zero = false;
        sup = std::max(sup, w);
      }
      if (all_zero) {
        // the cosets overlap; distinct pairs must deviate in some component
        i64 dev = kNormLimit;
        for (int j = 0; j < k; ++j) dev = std::min(dev, g[size_t(j)]);
        best = std::min(best, dev);
      } else {
        best = std::min(best, sup);
      }
    }
  }
  return best;
}

struct LambdaPoint {
  i64 index;
  i64 lambda;
  i64 running_max;
  bool record;  // strictly exceeds every earlier value
};

inline std::vector<LambdaPoint> lambda_profile(const Sieve& sv) {
  std::vector<LambdaPoint> out;
  i64 run = 0;
  for (i64 i = 1; i <= sv.L(); ++i) {
    if (sv.at(i).set.empty()) continue;
    i64 lam = min_gap(sv.at(i).set);
    bool rec = lam > run;
    run = std::max(run, lam);
    out.push_back({i, lam, run, rec});
  }
  return out;
}

}  // namespace sievelab
