// dynamics.hpp
//
// The measure side: truncated cylinder values with certified brackets and a
// combinatorial exact-zero test, Monte-Carlo sampling of the underlying group
// rotation, certificates for window patterns, spectrum invariants, and
// shifted-sieve experiments.
//
// Cylinder values. For disjoint finite A, B the truncated value is
//
//   nu^(L)(A,B) = sum_{A subset D subset A u B} (-1)^{|D \ A|}
//                 prod_{i<=L} (1 - |-D + R_i| / N(b_i)),
//
// which equals the exact probability, over one uniform residue per class,
// that every point of A survives all L classes and every point of B is hit.
// The value is reported as exactly zero only when the terms cancel
// combinatorially: grouping the subsets D by their vector of class counts
// (|-D+R_i|)_i, every group must have signed count zero. That criterion is
// independent of floating point and stays zero under any refinement of the
// same count vectors.

#pragma once

#include <array>
#include <map>
#include <optional>

#include "sievelab/density.hpp"
#include "sievelab/enumerate.hpp"
#include "sievelab/rng.hpp"
#include "sievelab/structure.hpp"

namespace sievelab {

struct Pattern {
  std::vector<Point> A;
  std::vector<Point> B;

  void validate(int k) const {
    for (const auto& p : A)
      if (p.arity() != k) throw Error(Errc::ArityMismatch, "pattern arity");
    for (const auto& p : B)
      if (p.arity() != k) throw Error(Errc::ArityMismatch, "pattern arity");
    for (const auto& a : A)
      for (const auto& b : B)
        if (a == b)
          throw Error(Errc::BadInput, "pattern sets must be disjoint");
  }
};

// ---------------------------------------------------------------------------
// Cylinder measure
// ---------------------------------------------------------------------------

struct CylinderValue {
  double truncated = 1.0;  // exact value at truncation L (up to rounding)
  BracketedValue bracket;  // encloses the untruncated limit when certified
  bool exact_zero = false;
};

inline CylinderValue cylinder_measure(const Pattern& pat, const Sieve& sv) {
  pat.validate(sv.k);
  CylinderValue out;
  out.bracket.L = sv.L();
  if (pat.A.empty() && pat.B.empty()) {
    out.truncated = 1.0;
    out.bracket = {1.0, 1.0, sv.L(), true};
    return out;
  }
  const size_t nb = pat.B.size();
  if (nb > 20) throw Error(Errc::BoundExceeded, "pattern B too large");

  auto tb = tail_bound(sv);

  struct Term {
    int sign;
    double value;
    double tail;              // bound on its own removed mass
    bool killed;              // a full-ring factor makes it identically 0
    std::vector<i64> counts;  // |-D + R_i| per class index
  };
  std::vector<Term> terms;
  double plus = 0, minus = 0, plus_lo = 0, minus_lo = 0;
  for (u64 mask = 0; mask < (u64(1) << nb); ++mask) {
    std::vector<Point> D = pat.A;
    for (size_t j = 0; j < nb; ++j)
      if (mask >> j & 1) D.push_back(pat.B[j]);
    Term t;
    t.sign = (__builtin_popcountll(mask) & 1) ? -1 : 1;
    t.value = 1.0;
    t.killed = false;
    t.counts.reserve(size_t(sv.L()));
    for (i64 i = 1; i <= sv.L(); ++i) {
      i64 c = shifted_union_count(sv.at(i).set, D);
      t.counts.push_back(c);
      if (c == modulus_norm(sv.at(i).modulus)) t.killed = true;
      t.value *= 1.0 - double(c) / double(modulus_norm(sv.at(i).modulus));
    }
    if (t.killed) t.value = 0.0;
    t.tail = tb ? std::min(1.0, double(D.size()) * *tb) : 1.0;
    if (t.sign > 0) {
      plus += t.value;
      plus_lo += t.value * (1.0 - t.tail);
    } else {
      minus += t.value;
      minus_lo += t.value * (1.0 - t.tail);
    }
    terms.push_back(std::move(t));
  }
  out.truncated = plus - minus;

  // combinatorial cancellation over count vectors; terms killed by a
  // full-ring factor stay zero at every refinement and drop out
  std::map<std::vector<i64>, int> groups;
  for (const auto& t : terms)
    if (!t.killed) groups[t.counts] += t.sign;
  out.exact_zero = true;
  for (const auto& [key, s] : groups)
    if (s != 0) {
      out.exact_zero = false;
      break;
    }
  if (out.exact_zero) {
    out.truncated = 0.0;
    out.bracket = {0.0, 0.0, sv.L(), true};
    return out;
  }

  // termwise bracket: each true factor product lies in [value*(1-tail), value]
  out.bracket.lower = std::max(0.0, plus_lo - minus);
  out.bracket.upper = std::min(1.0, plus - minus_lo);
  out.bracket.exact = tb.has_value() && *tb == 0.0;
  if (!tb) out.bracket.exact = false;
  return out;
}

// ---------------------------------------------------------------------------
// Mirsky sampling
// ---------------------------------------------------------------------------

struct MirskyRow {
  Pattern pattern;
  i64 hits = 0;
  i64 samples = 0;
  double frequency = 0;
  double stderr_ = 0;      // binomial standard error
  double cylinder = 0;     // truncated cylinder value at the same L
};

// Draws one uniform residue per class per sample (SplitMix64, 64 derived
// streams assigned round-robin) and evaluates, for each queried pattern,
// whether the sampled configuration shows A free and B excluded. Identical
// seeds produce identical tables regardless of scheduling.
inline std::vector<MirskyRow> mirsky_sample(const Sieve& sv,
                                            const std::vector<Pattern>& pats,
                                            i64 n, u64 seed) {
  if (n < 1) throw Error(Errc::BadInput, "sample count must be >= 1");
  for (const auto& p : pats) p.validate(sv.k);

  // distinct query points
  std::vector<Point> pts;
  for (const auto& p : pats) {
    pts.insert(pts.end(), p.A.begin(), p.A.end());
    pts.insert(pts.end(), p.B.begin(), p.B.end());
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const size_t np = pts.size();

  // per class: reduced query points, flattened; membership bitset if small
  struct ClassCtx {
    std::vector<i64> comps;      // modulus components
    i64 norm;
    std::vector<i64> pt_flat;    // flat residue of each query point
    std::vector<bool> bits;      // membership over flat residues (norm small)
    const ResidueClassSet* set;
  };
  std::vector<ClassCtx> ctx;
  for (i64 i = 1; i <= sv.L(); ++i) {
    const SieveClass& cls = sv.at(i);
    ClassCtx c;
    c.comps = cls.modulus.c;
    c.norm = modulus_norm(cls.modulus);
    c.set = &cls.set;
    for (const auto& p : pts)
      c.pt_flat.push_back(detail::flat_residue(p, cls.modulus));
    if (c.norm <= (i64(1) << 22) && !cls.set.empty()) {
      c.bits.assign(size_t(c.norm), false);
      ResidueClassSet E = cls.set.expanded(c.norm);
      for (const auto& r : E.residues())
        c.bits[size_t(detail::flat_residue(r, cls.modulus))] = true;
    }
    ctx.push_back(std::move(c));
  }

  constexpr u64 kStreams = 64;
  std::vector<SplitMix64> streams;
  for (u64 s = 0; s < kStreams; ++s)
    streams.push_back(SplitMix64::derived(seed, s));

  std::vector<i64> hits(pats.size(), 0);
  std::vector<char> free_pt(np);
  for (i64 draw = 0; draw < n; ++draw) {
    SplitMix64& rng = streams[size_t(draw % kStreams)];
    std::fill(free_pt.begin(), free_pt.end(), 1);
    for (auto& c : ctx) {
      // g uniform in Z^k / b, drawn componentwise; flat offset of +g
      i64 gflat = 0;
      for (i64 comp : c.comps) gflat = gflat * comp + i64(rng.below(u64(comp)));
      if (c.set->empty()) continue;
      for (size_t q = 0; q < np; ++q) {
        if (!free_pt[q]) continue;
        // flat residue of p + g: componentwise add with carry-free mix
        i64 pf = c.pt_flat[q], acc = 0, rem_p = pf, rem_g = gflat;
        // recompose from most significant component downward
        i64 scale = 1;
        for (size_t j = c.comps.size(); j-- > 0;) {
          i64 comp = c.comps[j];
          i64 sum = (rem_p % comp + rem_g % comp) % comp;
          acc += sum * scale;
          scale *= comp;
          rem_p /= comp;
          rem_g /= comp;
        }
        bool in;
        if (!c.bits.empty()) {
          in = c.bits[size_t(acc)];
        } else {
          // reconstruct the point for coset membership
          Point y{std::vector<i64>(c.comps.size(), 0)};
          i64 rest = acc;
          for (size_t j = c.comps.size(); j-- > 0;) {
            y.x[j] = rest % c.comps[j];
            rest /= c.comps[j];
          }
          in = c.set->contains(y);
        }
        if (in) free_pt[q] = 0;
      }
    }
    for (size_t t = 0; t < pats.size(); ++t) {
      bool ok = true;
      for (const auto& a : pats[t].A) {
        size_t q = size_t(std::lower_bound(pts.begin(), pts.end(), a) - pts.begin());
        if (!free_pt[q]) { ok = false; break; }
      }
      if (ok)
        for (const auto& b : pats[t].B) {
          size_t q = size_t(std::lower_bound(pts.begin(), pts.end(), b) - pts.begin());
          if (free_pt[q]) { ok = false; break; }
        }
      hits[t] += ok;
    }
  }

  std::vector<MirskyRow> rows;
  for (size_t t = 0; t < pats.size(); ++t) {
    MirskyRow r;
    r.pattern = pats[t];
    r.hits = hits[t];
    r.samples = n;
    r.frequency = double(hits[t]) / double(n);
    double p = r.frequency;
    r.stderr_ = std::sqrt(std::max(0.0, p * (1 - p) / double(n)));
    r.cylinder = cylinder_measure(pats[t], sv).truncated;
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Window-pattern certificates
// ---------------------------------------------------------------------------

// Evidence that, inside the truncated model, the pattern "A' present, all of
// Bpts absent" is realizable: every excluded point b_j gets a class index i_j
// with -b_j + R_{i_j} not inside -A' + R_{i_j}, and points sharing an index
// carry a joint witness residue in the intersection of their shifted classes
// that avoids -A' + R_i.
struct XrCertificate {
  std::vector<Point> A;
  std::vector<Point> B;
  std::vector<i64> index_for;                 // per B point
  std::map<i64, Point> witness;               // class index -> residue mod b_i
};

struct XrOutcome {
  bool found = false;
  i64 upto = 0;  // NoCertificateUpTo(L)
  XrCertificate cert;
};

namespace detail {

// -b + R_i as an explicit sorted residue list (bounded).
inline std::vector<Point> shifted_class(const SieveClass& cls, const Point& b,
                                        i64 bound = 1 << 20) {
  Point nb = b;
  for (auto& v : nb.x) v = -v;
  ResidueClassSet s = cls.set.shifted(nb).expanded(bound);
  return s.residues();
}

inline bool in_shifted_union(const Point& x, const SieveClass& cls,
                             const std::vector<Point>& A) {
  // x in -a + R_i for some a in A
  for (const auto& a : A) {
    Point y = x;
    for (int j = 0; j < int(y.x.size()); ++j) y.x[size_t(j)] += a.x[size_t(j)];
    if (cls.set.contains(y)) return true;
  }
  return false;
}

}  // namespace detail

inline XrOutcome xr_window_test(const std::vector<Point>& Aprime,
                                const std::vector<Point>& Bpts,
                                const Sieve& sv) {
  Pattern pat{Aprime, Bpts};
  pat.validate(sv.k);
  auto adm = is_admissible(Aprime, sv);
  if (adm.kind == AdmissibleVerdict::Kind::NotAdmissible)
    throw Error(Errc::NotAdmissible,
                "pattern base set is excluded by class " +
                    std::to_string(adm.witness_index));

  XrOutcome out;
  out.upto = sv.L();
  const size_t l = Bpts.size();
  if (l == 0) {
    out.found = true;
    out.cert = {Aprime, {}, {}, {}};
    return out;
  }

  // feasible indices per excluded point: -b + R_i not inside -A' + R_i;
  // keep the explicit residue options (-b + R_i) \ (-A' + R_i)
  std::vector<std::vector<i64>> feasible(l);
  std::vector<std::map<i64, std::vector<Point>>> options(l);
  for (size_t j = 0; j < l; ++j) {
    for (i64 i = 1; i <= sv.L(); ++i) {
      const SieveClass& cls = sv.at(i);
      if (cls.set.empty()) continue;
      std::vector<Point> opts;
      for (const auto& x : detail::shifted_class(cls, Bpts[j]))
        if (!detail::in_shifted_union(x, cls, Aprime)) opts.push_back(x);
      if (!opts.empty()) {
        feasible[j].push_back(i);
        options[j][i] = std::move(opts);
      }
    }
    if (feasible[j].empty()) return out;  // NoCertificateUpTo(L)
  }

  // lexicographic backtracking over assignments; shared indices intersect
  // their option sets
  std::vector<i64> assign(l, 0);
  std::map<i64, std::vector<Point>> joint;
  std::function<bool(size_t)> dfs = [&](size_t j) -> bool {
    if (j == l) return true;
    for (i64 i : feasible[j]) {
      auto it = joint.find(i);
      std::vector<Point> saved;
      bool had = it != joint.end();
      if (had) {
        saved = it->second;
        std::vector<Point> inter;
        const auto& opt = options[j].at(i);
        for (const auto& p : saved)
          if (std::binary_search(opt.begin(), opt.end(), p))
            inter.push_back(p);
        if (inter.empty()) continue;
        it->second = std::move(inter);
      } else {
        joint[i] = options[j].at(i);
      }
      assign[j] = i;
      if (dfs(j + 1)) return true;
      if (had)
        joint[i] = saved;
      else
        joint.erase(i);
    }
    return false;
  };

  if (!dfs(0)) return out;
  out.found = true;
  out.cert.A = Aprime;
  out.cert.B = Bpts;
  out.cert.index_for = assign;
  for (const auto& [i, opts] : joint) out.cert.witness[i] = opts.front();
  return out;
}

// Independent re-checker: only membership arithmetic, no set algebra shared
// with the search.
inline bool verify_certificate(const XrCertificate& cert, const Sieve& sv,
                               std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (cert.index_for.size() != cert.B.size())
    return fail("index list does not match excluded points");
  for (size_t j = 0; j < cert.B.size(); ++j) {
    i64 i = cert.index_for[j];
    if (i < 1 || i > sv.L()) return fail("class index out of range");
    const SieveClass& cls = sv.at(i);
    // non-containment: some residue of -b_j + R_i avoids -A' + R_i
    bool escapes = false;
    for (const auto& x : detail::shifted_class(cls, cert.B[j])) {
      bool inside = false;
      for (const auto& a : cert.A) {
        Point y = x;
        for (int c = 0; c < int(y.x.size()); ++c) y.x[size_t(c)] += a.x[size_t(c)];
        if (cls.set.contains(y)) {
          inside = true;
          break;
        }
      }
      if (!inside) {
        escapes = true;
        break;
      }
    }
    if (!escapes) return fail("containment clause fails at an index");
  }
  // witnesses per used index
  std::map<i64, std::vector<size_t>> groups;
  for (size_t j = 0; j < cert.B.size(); ++j)
    groups[cert.index_for[j]].push_back(j);
  for (const auto& [i, js] : groups) {
    auto wit = cert.witness.find(i);
    if (wit == cert.witness.end()) return fail("missing witness for an index");
    const SieveClass& cls = sv.at(i);
    const Point& x = wit->second;
    for (size_t j : js) {
      Point y = x;  // x + b_j must be sieved by class i
      for (int c = 0; c < int(y.x.size()); ++c)
        y.x[size_t(c)] += cert.B[j].x[size_t(c)];
      if (!cls.set.contains(y)) return fail("witness misses an excluded point");
    }
    for (const auto& a : cert.A) {
      Point y = x;
      for (int c = 0; c < int(y.x.size()); ++c) y.x[size_t(c)] += a.x[size_t(c)];
      if (cls.set.contains(y)) return fail("witness collides with the base set");
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

struct SpectrumRow {
  i64 index;
  i64 stabilizer_order;
  i64 stabilizer_index;
  std::vector<i64> invariant_factors;  // of (Z^k / b) / F(R_b), each > 1
};

namespace detail {

// Smith normal form diagonal of an integer matrix (k rows), values kept
// small by gcd reduction.
inline std::vector<i64> smith_diagonal(std::vector<std::vector<i64>> M) {
  const size_t rows = M.size();
  if (rows == 0) return {};
  const size_t cols = M[0].size();
  std::vector<i64> diag;
  size_t r0 = 0, c0 = 0;
  while (r0 < rows && c0 < cols) {
    // find nonzero pivot with minimal |value|
    size_t pr = rows, pc = cols;
    i64 best = 0;
    for (size_t r = r0; r < rows; ++r)
      for (size_t c = c0; c < cols; ++c)
        if (M[r][c] != 0 &&
            (best == 0 || std::abs(M[r][c]) < std::abs(best))) {
          best = M[r][c];
          pr = r;
          pc = c;
        }
    if (best == 0) break;
    std::swap(M[r0], M[pr]);
    for (size_t r = 0; r < rows; ++r) std::swap(M[r][c0], M[r][pc]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (size_t r = r0 + 1; r < rows; ++r)
        if (M[r][c0] != 0) {
          i64 q = M[r][c0] / M[r0][c0];
          for (size_t c = c0; c < cols; ++c) M[r][c] -= q * M[r0][c];
          if (M[r][c0] != 0) {
            std::swap(M[r0], M[r]);
            clean = false;
          }
        }
      for (size_t c = c0 + 1; c < cols; ++c)
        if (M[r0][c] != 0) {
          i64 q = M[r0][c] / M[r0][c0];
          for (size_t r = r0; r < rows; ++r) M[r][c] -= q * M[r][c0];
          if (M[r0][c] != 0) {
            for (size_t r = r0; r < rows; ++r) std::swap(M[r][c0], M[r][c]);
            clean = false;
          }
        }
    }
    diag.push_back(std::abs(M[r0][c0]));
    ++r0;
    ++c0;
  }
  // enforce divisibility d_1 | d_2 | ...
  for (size_t i = 0; i < diag.size(); ++i)
    for (size_t j = i + 1; j < diag.size(); ++j) {
      i64 g = std::gcd(diag[i], diag[j]);
      i64 l = diag[i] / g * diag[j];
      diag[i] = g;
      diag[j] = l;
    }
  return diag;
}

}  // namespace detail

// Invariant factors of the quotient of the residue group by the stabilizer:
// the cokernel of the lattice spanned by b_j e_j and the stabilizer elements.
inline std::vector<SpectrumRow> spectrum(const Sieve& sv,
                                         i64 bound = kClassNormBound) {
  std::vector<SpectrumRow> rows;
  for (i64 i = 1; i <= sv.L(); ++i) {
    const SieveClass& cls = sv.at(i);
    Stabilizer st = stabilizer(cls.set, bound);
    SpectrumRow row;
    row.index = i;
    row.stabilizer_order = i64(st.elements.size());
    row.stabilizer_index = st.index;
    const int k = sv.k;
    std::vector<std::vector<i64>> M{size_t(k)};
    for (int j = 0; j < k; ++j) {
      M[size_t(j)].assign(size_t(k) + st.elements.size(), 0);
      M[size_t(j)][size_t(j)] = cls.modulus.c[size_t(j)];
    }
    for (size_t e = 0; e < st.elements.size(); ++e)
      for (int j = 0; j < k; ++j)
        M[size_t(j)][size_t(k) + e] = st.elements[e].x[size_t(j)];
    std::vector<i64> diag = detail::smith_diagonal(std::move(M));
    i64 prod = 1;
    for (i64 d : diag) {
      if (d > 1) row.invariant_factors.push_back(d);
      prod = checked_mul(prod, std::max<i64>(1, d));
    }
    if (prod != st.index)
      throw Error(Errc::BadInput,
                  "invariant factor product disagrees with stabilizer index");
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Shifted sieves and sumset experiments
// ---------------------------------------------------------------------------

struct ShiftedUniformStats {
  i64 samples = 0;
  std::vector<double> weak_ratios;  // per sample, at the inner level
  double mean = 0;
  double frac_below = 0;   // fraction under `threshold`
  double frac_stderr = 0;
  double threshold = 0.05;
};

struct ShiftedGreedyResult {
  std::vector<i64> free_flat;  // window indices of B
  i64 b_count = 0;
  double b_density = 0;
  bool sumset_verified = false;  // A + B avoids every shifted class
};

namespace detail {

// Per-class exclusion of the window by -A + (g_i + R_i), writing first/last
// hit levels. Returns nothing; used by both strategies.
inline void mark_shifted(const Sieve& sv, const std::vector<Point>& A,
                         const std::vector<Point>& g, const Window& w,
                         std::vector<std::int32_t>& first,
                         std::vector<std::int32_t>& last) {
  for (i64 i = 1; i <= sv.L(); ++i) {
    const SieveClass& cls = sv.at(i);
    auto mark_one = [&](const Modulus& d, const Point& base) {
      for (const auto& a : A) {
        Point shifted = base;  // -a + g_i + base
        for (int j = 0; j < sv.k; ++j)
          shifted.x[size_t(j)] = mod_reduce(
              base.x[size_t(j)] + g[size_t(i - 1)].x[size_t(j)] - a.x[size_t(j)],
              d.c[size_t(j)]);
        walk_coset(w, d, shifted, [&](i64 idx) {
          if (first[size_t(idx)] == 0) first[size_t(idx)] = std::int32_t(i);
          last[size_t(idx)] = std::int32_t(i);
        });
      }
    };
    for_each_class_coset(cls, mark_one);
  }
}

}  // namespace detail

// Uniform strategy: sample g as in mirsky_sample and report the weak-tail
// ratio of -A + R(g) on the window at level L_inner (within truncation L).
inline ShiftedUniformStats sample_shifted_uniform(
    const Sieve& sv, const std::vector<Point>& A, const Window& w, i64 n,
    u64 seed, i64 L_inner, double threshold = 0.05) {
  if (L_inner < 0 || L_inner >= sv.L())
    throw Error(Errc::BadInput, "inner level must be below the truncation");
  const i64 wsize = w.size();
  constexpr u64 kStreams = 64;
  std::vector<SplitMix64> streams;
  for (u64 s = 0; s < kStreams; ++s)
    streams.push_back(SplitMix64::derived(seed, s));

  ShiftedUniformStats st;
  st.samples = n;
  st.threshold = threshold;
  std::vector<std::int32_t> first(size_t(wsize), 0), last(size_t(wsize), 0);
  for (i64 draw = 0; draw < n; ++draw) {
    SplitMix64& rng = streams[size_t(draw % kStreams)];
    std::vector<Point> g;
    for (i64 i = 1; i <= sv.L(); ++i) {
      Point gi{std::vector<i64>(size_t(sv.k), 0)};
      for (int j = 0; j < sv.k; ++j)
        gi.x[size_t(j)] = i64(rng.below(u64(sv.at(i).modulus.c[size_t(j)])));
      g.push_back(std::move(gi));
    }
    std::fill(first.begin(), first.end(), 0);
    std::fill(last.begin(), last.end(), 0);
    detail::mark_shifted(sv, A, g, w, first, last);
    i64 weak = 0;
    for (i64 idx = 0; idx < wsize; ++idx)
      weak += (first[size_t(idx)] > std::int32_t(L_inner));
    st.weak_ratios.push_back(double(weak) / double(wsize));
  }
  double sum = 0;
  i64 below = 0;
  for (double r : st.weak_ratios) {
    sum += r;
    below += (r < threshold);
  }
  st.mean = sum / double(n);
  st.frac_below = double(below) / double(n);
  st.frac_stderr =
      std::sqrt(std::max(0.0, st.frac_below * (1 - st.frac_below) / double(n)));
  return st;
}

// Greedy strategy: choose each g_i to minimize the number of still-free
// window points newly excluded by -A + (g_i + R_i); returns the surviving
// set B and checks A + B against every shifted class directly.
inline ShiftedGreedyResult sample_shifted_greedy(const Sieve& sv,
                                                 const std::vector<Point>& A,
                                                 const Window& w) {
  if (sv.k != 1)
    throw Error(Errc::BadInput, "greedy shift search works over ring Z");
  const i64 wsize = w.size();
  std::vector<char> free_pt(size_t(wsize), 1);
  std::vector<i64> g(size_t(sv.L()), 0);

  std::vector<i64> hist;
  for (i64 i = 1; i <= sv.L(); ++i) {
    const SieveClass& cls = sv.at(i);
    const i64 m = cls.modulus.c[0];
    hist.assign(size_t(m), 0);
    // newly excluded count for shift t: points w0 free with
    // w0 = -a + t + r (mod m) for some a, r; histogram over t = w0 + a - r.
    ResidueClassSet E = cls.set.expanded(1 << 20);
    for (i64 idx = 0; idx < wsize; ++idx) {
      if (!free_pt[size_t(idx)]) continue;
      i64 x = w.ranges[0].first + idx;
      for (const auto& a : A)
        for (const auto& r : E.residues())
          ++hist[size_t(mod_reduce(x + a.x[0] - r.x[0], m))];
    }
    // histogram over-counts multiply-hit points; it is still a faithful
    // greedy score for picking a low-collision shift, and exact when 0
    i64 best = 0;
    for (i64 t = 1; t < m; ++t)
      if (hist[size_t(t)] < hist[size_t(best)]) best = t;
    g[size_t(i - 1)] = best;
    for (i64 idx = 0; idx < wsize; ++idx) {
      if (!free_pt[size_t(idx)]) continue;
      i64 x = w.ranges[0].first + idx;
      for (const auto& a : A) {
        Point y{x + a.x[0] - best};
        if (cls.set.contains(y)) {
          free_pt[size_t(idx)] = 0;
          break;
        }
      }
    }
  }

  ShiftedGreedyResult res;
  for (i64 idx = 0; idx < wsize; ++idx)
    if (free_pt[size_t(idx)]) res.free_flat.push_back(idx);
  res.b_count = i64(res.free_flat.size());
  res.b_density = double(res.b_count) / double(wsize);

  // verify A + B inside the free set of R(g) = (g_i + R_i)_i
  res.sumset_verified = true;
  for (i64 idx : res.free_flat) {
    i64 b = w.ranges[0].first + idx;
    for (const auto& a : A) {
      for (i64 i = 1; i <= sv.L() && res.sumset_verified; ++i) {
        Point y{a.x[0] + b - g[size_t(i - 1)]};
        if (sv.at(i).set.contains(y)) res.sumset_verified = false;
      }
      if (!res.sumset_verified) break;
    }
    if (!res.sumset_verified) break;
  }
  return res;
}

}  // namespace sievelab
