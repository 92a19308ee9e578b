// enumerate.hpp
//
// Segmented enumeration of R-free points over a window, plus the empirical
// statistics built on it: densities along Foelner families, weak/strong tail
// profiles, and pattern counts.
//
// The kernel stores, for every window point, the smallest class index that
// excludes it (0 = free after all L classes). Each class marks its residues
// by walking the arithmetic progression of lattice points inside the window
// segment by segment, so the cost is sum_i |R_i| * |window| / N(b_i) plus a
// per-(class, segment) setup term, never |window| * L. The tail profile
// additionally records the largest excluding index.

#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>

#include "sievelab/sieve.hpp"
#include "sievelab/window.hpp"

namespace sievelab {

inline int thread_count() {
  if (const char* env = std::getenv("SIEVELAB_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

struct FreeSetReport {
  Window window;
  i64 L = 0;
  std::vector<std::int32_t> first_hit;  // 0 = free
  i64 free_count = 0;

  bool is_free(i64 idx) const { return first_hit[size_t(idx)] == 0; }
  bool is_free_point(const Point& p) const {
    return first_hit[size_t(window.index_of(p))] == 0;
  }
};

namespace detail {

// Visit every window point of base + div Z^k; f receives the flat index.
template <typename F>
inline void walk_coset(const Window& w, const Modulus& div, const Point& base,
                       F&& f, i64 seg_lo = 0, i64 seg_hi = -1) {
  const int k = w.arity();
  if (seg_hi < 0) seg_hi = w.size();
  if (k == 1) {
    i64 lo = w.ranges[0].first + seg_lo, hi = w.ranges[0].first + seg_hi - 1;
    i64 b = div.c[0];
    i64 start = lo + mod_reduce(base.x[0] - lo, b);
    for (i64 x = start; x <= hi; x += b) f(x - w.ranges[0].first);
    return;
  }
  // boxes: nested strides, innermost contiguous (segments not used here;
  // multi-dimensional windows in this code base stay modest)
  std::vector<i64> cur(size_t(k), 0);
  std::vector<i64> strides(size_t(k), 1);
  for (int j = k - 2; j >= 0; --j)
    strides[size_t(j)] = strides[size_t(j + 1)] * w.extent(j + 1);
  auto rec = [&](auto&& self, int j, i64 acc) -> void {
    i64 lo = w.ranges[size_t(j)].first, hi = w.ranges[size_t(j)].second;
    i64 b = div.c[size_t(j)];
    i64 start = lo + mod_reduce(base.x[size_t(j)] - lo, b);
    for (i64 x = start; x <= hi; x += b) {
      i64 a = acc + (x - lo) * strides[size_t(j)];
      if (j == k - 1)
        f(a);
      else
        self(self, j + 1, a);
    }
  };
  rec(rec, 0, 0);
}

template <typename F>
inline void for_each_class_coset(const SieveClass& cls, F&& f) {
  if (cls.set.coset_form()) {
    for (const auto& c : cls.set.cosets()) f(c.div, c.base);
  } else {
    for (const auto& r : cls.set.residues()) f(cls.modulus, r);
  }
}

}  // namespace detail

inline FreeSetReport enumerate_free(const Sieve& sv, const Window& window,
                                    i64 max_points = i64(1) << 27) {
  if (window.arity() != sv.k)
    throw Error(Errc::ArityMismatch, "window arity does not match sieve");
  const i64 n = window.size();
  if (n > max_points)
    throw Error(Errc::WindowTooLarge,
                "window has " + std::to_string(n) + " points");
  FreeSetReport rep;
  rep.window = window;
  rep.L = sv.L();
  rep.first_hit.assign(size_t(n), 0);

  auto mark_segment = [&](i64 seg_lo, i64 seg_hi) {
    for (i64 i = 1; i <= sv.L(); ++i) {
      const SieveClass& cls = sv.at(i);
      detail::for_each_class_coset(cls, [&](const Modulus& d, const Point& b) {
        detail::walk_coset(window, d, b, [&](i64 idx) {
          auto& slot = rep.first_hit[size_t(idx)];
          if (slot == 0) slot = std::int32_t(i);
        }, seg_lo, seg_hi);
      });
    }
  };

  const int threads = sv.k == 1 ? thread_count() : 1;
  if (threads <= 1) {
    mark_segment(0, n);
  } else {
    std::vector<std::thread> pool;
    i64 chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      i64 lo = t * chunk, hi = std::min(n, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(mark_segment, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  i64 free_count = 0;
  for (auto v : rep.first_hit) free_count += (v == 0);
  rep.free_count = free_count;
  return rep;
}

// ---------------------------------------------------------------------------
// Densities along window families
// ---------------------------------------------------------------------------

enum class WindowFamily { Interval1, Interval0, SymmetricBox, ShiftedBox };

inline Window family_window(WindowFamily fam, int k, i64 N,
                            const Point& shift = {}) {
  switch (fam) {
    case WindowFamily::Interval1:
      if (k != 1) throw Error(Errc::BadInput, "interval family needs ring Z");
      return Window::interval(1, N);
    case WindowFamily::Interval0:
      if (k != 1) throw Error(Errc::BadInput, "interval family needs ring Z");
      return Window::interval(0, N);
    case WindowFamily::SymmetricBox:
      return Window::symmetric_box(k, N);
    case WindowFamily::ShiftedBox: {
      Window w = Window::symmetric_box(k, N);
      for (int j = 0; j < k; ++j) {
        w.ranges[size_t(j)].first += shift.x[size_t(j)];
        w.ranges[size_t(j)].second += shift.x[size_t(j)];
      }
      return w;
    }
  }
  throw Error(Errc::BadInput, "unknown window family");
}

struct DensityPoint {
  i64 N;
  i64 free_count;
  i64 window_size;
  double ratio;
};

inline std::vector<DensityPoint> empirical_density(const Sieve& sv,
                                                   WindowFamily fam,
                                                   const std::vector<i64>& Ns,
                                                   const Point& shift = {}) {
  std::vector<DensityPoint> out;
  for (i64 N : Ns) {
    Window w = family_window(fam, sv.k, N, shift);
    FreeSetReport rep = enumerate_free(sv, w);
    out.push_back({N, rep.free_count, w.size(),
                   double(rep.free_count) / double(w.size())});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Weak / strong tail profiles
// ---------------------------------------------------------------------------

struct TailsPoint {
  i64 L;
  i64 weak_count;    // hit by some class in (L, L_max], by none in [1, L]
  i64 strong_count;  // hit by some class in (L, L_max]
  double weak_ratio;
  double strong_ratio;
};

// Counts are relative to the materialized prefix L_max, hence lower bounds
// for the untruncated tail sets.
inline std::vector<TailsPoint> tails_profile(const Sieve& sv,
                                             const Window& window,
                                             const std::vector<i64>& Ls,
                                             i64 max_points = i64(1) << 27) {
  const i64 n = window.size();
  if (n > max_points)
    throw Error(Errc::WindowTooLarge,
                "window has " + std::to_string(n) + " points");
  for (i64 L : Ls)
    if (L >= sv.L())
      throw Error(Errc::BadInput, "tails level must be below the truncation");

  std::vector<std::int32_t> first(size_t(n), 0), last(size_t(n), 0);
  for (i64 i = 1; i <= sv.L(); ++i) {
    detail::for_each_class_coset(sv.at(i), [&](const Modulus& d, const Point& b) {
      detail::walk_coset(window, d, b, [&](i64 idx) {
        if (first[size_t(idx)] == 0) first[size_t(idx)] = std::int32_t(i);
        last[size_t(idx)] = std::int32_t(i);
      });
    });
  }

  // histogram of first/last hit levels -> suffix sums answer every L at once
  std::vector<i64> hf(size_t(sv.L()) + 2, 0), hl(size_t(sv.L()) + 2, 0);
  for (i64 idx = 0; idx < n; ++idx) {
    ++hf[size_t(first[size_t(idx)])];
    ++hl[size_t(last[size_t(idx)])];
  }
  std::vector<i64> sf(hf.size() + 1, 0), sl(hl.size() + 1, 0);
  for (size_t i = hf.size(); i-- > 1;) {
    sf[i] = sf[i + 1] + hf[i];
    sl[i] = sl[i + 1] + hl[i];
  }

  std::vector<TailsPoint> out;
  for (i64 L : Ls) {
    i64 weak = sf[size_t(L) + 1];
    i64 strong = sl[size_t(L) + 1];
    out.push_back({L, weak, strong, double(weak) / double(n),
                   double(strong) / double(n)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pattern counts
// ---------------------------------------------------------------------------

struct PatternCount {
  i64 count;
  i64 window_size;
  double ratio;
};

// Number of x in the window with x + A inside the truncated free set and
// (x + B) disjoint from it. A and B must be disjoint.
inline PatternCount pattern_count(const std::vector<Point>& A,
                                  const std::vector<Point>& B, const Sieve& sv,
                                  const Window& window,
                                  i64 max_points = i64(1) << 27) {
  for (const auto& a : A)
    for (const auto& b : B)
      if (a == b) throw Error(Errc::BadInput, "pattern sets must be disjoint");
  std::vector<Point> hull = A;
  hull.insert(hull.end(), B.begin(), B.end());
  Window padded = hull.empty() ? window : window.padded(hull);
  FreeSetReport rep = enumerate_free(sv, padded, max_points);

  // Flat offsets are position-independent inside the padded box.
  const int k = sv.k;
  std::vector<i64> pstride(size_t(k), 1);
  for (int j = k - 2; j >= 0; --j)
    pstride[size_t(j)] = pstride[size_t(j + 1)] * padded.extent(j + 1);
  auto flat_offset = [&](const Point& o) {
    i64 s = 0;
    for (int j = 0; j < k; ++j) s += o.x[size_t(j)] * pstride[size_t(j)];
    return s;
  };
  std::vector<i64> offA, offB;
  for (const auto& a : A) offA.push_back(flat_offset(a));
  for (const auto& b : B) offB.push_back(flat_offset(b));

  i64 count = 0;
  const i64 n = window.size();
  std::vector<i64> x(size_t(k), 0);
  for (int j = 0; j < k; ++j) x[size_t(j)] = window.ranges[size_t(j)].first;
  i64 pidx = padded.index_of(Point(x));
  for (i64 step = 0;; ++step) {
    bool ok = true;
    for (i64 o : offA)
      if (rep.first_hit[size_t(pidx + o)] != 0) {
        ok = false;
        break;
      }
    if (ok)
      for (i64 o : offB)
        if (rep.first_hit[size_t(pidx + o)] == 0) {
          ok = false;
          break;
        }
    count += ok;
    if (step + 1 == n) break;
    for (int j = k - 1; j >= 0; --j) {  // odometer advance
      ++x[size_t(j)];
      pidx += pstride[size_t(j)];
      if (x[size_t(j)] <= window.ranges[size_t(j)].second) break;
      x[size_t(j)] = window.ranges[size_t(j)].first;
      pidx -= pstride[size_t(j)] * window.extent(j);
    }
  }
  return {count, n, double(count) / double(n)};
}

}  // namespace sievelab
