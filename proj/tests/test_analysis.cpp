#include <catch2/catch_amalgamated.hpp>
#include <numeric>

#include "sievelab/density.hpp"
#include "sievelab/enumerate.hpp"
#include "sievelab/rng.hpp"

using namespace sievelab;

namespace {

const char* kSquarefree =
    "ring Z\nstream P = primes\nfamily i in 1..: modulus P(i)^2 residues {0} bound 1\n";
const char* kAdjacent =
    "ring Z\nstream P = primes\nfamily i in 1..: modulus P(i)^2 residues {0,1} bound 2\n";
const char* kAdjacentNoTwo =
    "ring Z\nstream P = primes\nfamily i in 1..: modulus P(i)^2 residues {0,1} bound 2\n"
    "override i == 1: residues {}\n";

bool squarefree_oracle(i64 n) {
  n = std::abs(n);
  if (n == 0) return false;
  for (i64 p = 2; p * p <= n; ++p)
    while (n % p == 0) {
      n /= p;
      if (n % p == 0) return false;
      break;
    }
  return true;
}

Sieve random_sieve(SplitMix64& rng, int max_classes = 8, i64 max_mod = 100) {
  // pairwise coprime moduli from random prime powers
  const i64 primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  std::vector<int> order(std::size(primes));
  std::iota(order.begin(), order.end(), 0);
  for (size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[size_t(rng.below(i))]);
  SieveSpec spec;
  spec.k = 1;
  int n = 1 + int(rng.below(u64(max_classes)));
  for (int c = 0; c < n; ++c) {
    i64 m = primes[order[size_t(c)]];
    while (m * primes[order[size_t(c)]] <= max_mod && rng.below(2))
      m *= primes[order[size_t(c)]];
    i64 nres = 1 + i64(rng.below(u64(std::min<i64>(m - 1, 4))));
    std::vector<i64> seen;
    ResSpec rs;
    for (i64 r = 0; r < nres; ++r) {
      i64 v = i64(rng.below(u64(m)));
      rs.points.push_back({Affine{0, "", v}});
    }
    ModFactor f;
    f.is_const = true;
    f.constant = m;
    ModExpr me;
    me.components.push_back({f});
    spec.entries.emplace_back(std::move(me), std::move(rs));
  }
  return materialize(spec, i64(spec.entries.size()));
}

}  // namespace

TEST_CASE("squarefree free set on [1..30]") {
  Sieve sv = materialize(parse_sieve(kSquarefree), 11);  // p_11 = 31
  FreeSetReport rep = enumerate_free(sv, Window::interval(1, 30));
  std::vector<i64> expect = {1,  2,  3,  5,  6,  7,  10, 11, 13, 14,
                             15, 17, 19, 21, 22, 23, 26, 29, 30};
  std::vector<i64> got;
  for (i64 idx = 0; idx < 30; ++idx)
    if (rep.is_free(idx)) got.push_back(idx + 1);
  CHECK(got == expect);
  for (i64 v : expect) CHECK(squarefree_oracle(v));
}

TEST_CASE("empty sieve frees everything") {
  Sieve sv = materialize(parse_sieve("ring Z\n"), 0);
  FreeSetReport rep = enumerate_free(sv, Window::interval(1, 10));
  CHECK(rep.free_count == 10);
}

TEST_CASE("carefree free set over a small box matches the gcd oracle") {
  Sieve sv = materialize(
      parse_sieve("ring Z^2\nstream P = primes\n"
                  "family i in 1..: modulus (P(i)^2, P(i)) residues "
                  "coset (0,0) mod (P(i),P(i)) | coset (0,0) mod (P(i)^2,1) "
                  "bound 2 deg 1\n"),
      4);  // p <= 7
  Window w = Window::box({{1, 10}, {1, 10}});
  FreeSetReport rep = enumerate_free(sv, w);
  for (i64 x = 1; x <= 10; ++x)
    for (i64 y = 1; y <= 10; ++y) {
      bool oracle = std::gcd(x, y) == 1 && squarefree_oracle(x);
      CHECK(rep.is_free_point(Point{x, y}) == oracle);
    }
}

TEST_CASE("per-point smallest excluding index") {
  Sieve sv = materialize(parse_sieve(kSquarefree), 3);
  FreeSetReport rep = enumerate_free(sv, Window::interval(1, 100));
  CHECK(rep.first_hit[4 - 1] == 1);    // 4 = 2^2
  CHECK(rep.first_hit[9 - 1] == 2);    // 9 = 3^2
  CHECK(rep.first_hit[36 - 1] == 1);   // hit by 4 first
  CHECK(rep.first_hit[25 - 1] == 3);
  CHECK(rep.first_hit[6 - 1] == 0);
}

TEST_CASE("single even class has density one half") {
  Sieve sv = materialize(parse_sieve("ring Z\nclass modulus 2 residues {0}\n"), 1);
  auto pts = empirical_density(sv, WindowFamily::Interval1, {1'000'000});
  CHECK(pts[0].ratio == Catch::Approx(0.5).margin(1e-6));
  auto b = product_density(sv);
  CHECK(b.lower == 0.5);
  CHECK(b.upper == 0.5);
  CHECK(b.exact);
}

TEST_CASE("squarefree density brackets 1/zeta(2)") {
  Sieve sv = materialize(parse_sieve(kSquarefree), 6);  // p <= 13
  auto b = product_density(sv);
  CHECK(b.upper == Catch::Approx(0.61808).margin(5e-5));
  CHECK(b.lower <= 0.6079271);
  CHECK(0.6079271 <= b.upper);
}

TEST_CASE("two-residue family has vanishing density, decreasing in L") {
  auto spec = std::make_shared<SieveSpec>(parse_sieve(
      "ring Z\nstream P = primes\n"
      "family i in 1..: modulus P(i)^2 residues {-1*i, i} bound 2\n"));
  double prev = 1.0;
  for (i64 L : {50, 100, 200}) {
    Sieve sv = materialize(spec, L);
    auto d = empirical_density(sv, WindowFamily::Interval1, {100'000});
    CHECK(d[0].ratio < prev);
    prev = d[0].ratio;
  }
}

TEST_CASE("free sets shrink as the truncation grows") {
  auto spec = std::make_shared<SieveSpec>(parse_sieve(kAdjacent));
  Window w = Window::interval(1, 2000);
  FreeSetReport prev = enumerate_free(materialize(spec, 1), w);
  for (i64 L = 2; L <= 12; ++L) {
    FreeSetReport cur = enumerate_free(materialize(spec, L), w);
    for (i64 idx = 0; idx < w.size(); ++idx)
      if (cur.is_free(idx)) CHECK(prev.is_free(idx));
    prev = std::move(cur);
  }
}

TEST_CASE("enumerate matches a per-point membership oracle on random sieves") {
  SplitMix64 rng(2024);
  for (int t = 0; t < 60; ++t) {
    Sieve sv = random_sieve(rng);
    i64 lo = i64(rng.below(100)) - 50;
    i64 hi = lo + 1 + i64(rng.below(2000));
    Window w = Window::interval(lo, hi);
    FreeSetReport rep = enumerate_free(sv, w);
    for (i64 x = lo; x <= hi; ++x) {
      bool hit = false;
      for (i64 i = 1; i <= sv.L() && !hit; ++i)
        hit = sv.at(i).set.contains(Point{x});
      CHECK(rep.is_free(x - lo) == !hit);
    }
  }
}

TEST_CASE("weak tails nest and the profile counts both tails") {
  Sieve sv = materialize(parse_sieve(kSquarefree), 25);  // p <= 97
  Window w = Window::interval(1, 100'000);
  auto pts = tails_profile(sv, w, {5, 10, 15, 20});
  for (size_t i = 1; i < pts.size(); ++i) {
    CHECK(pts[i].weak_count <= pts[i - 1].weak_count);      // nested
    CHECK(pts[i].strong_count <= pts[i - 1].strong_count);
    CHECK(pts[i].weak_count <= pts[i].strong_count);
  }
  // strong tail at level L counts multiples of p^2 for p in the band
  FreeSetReport full = enumerate_free(sv, w);
  i64 expect = 0;
  for (i64 x = 1; x <= 100'000; ++x) {
    bool in_tail = false;
    for (i64 i = 6; i <= sv.L() && !in_tail; ++i)
      in_tail = sv.at(i).set.contains(Point{x});
    expect += in_tail;
  }
  auto at5 = tails_profile(sv, w, {5});
  CHECK(at5[0].strong_count == expect);
}

TEST_CASE("tails of the empty sieve vanish") {
  Sieve sv = materialize(parse_sieve("ring Z\nclass modulus 7 residues {0}\n"), 1);
  auto pts = tails_profile(sv, Window::interval(1, 1000), {0});
  CHECK(pts[0].strong_count == 1000 / 7);
  CHECK(pts[0].weak_count == pts[0].strong_count);
}

TEST_CASE("admissibility: the distance-2 pair without the prime-2 class") {
  Sieve sv = materialize(parse_sieve(kAdjacentNoTwo), 50);
  auto v = is_admissible({Point{2}, Point{4}}, sv);
  CHECK(v.kind == AdmissibleVerdict::Kind::Admissible);
  auto e = is_admissible({}, sv);
  CHECK(e.kind == AdmissibleVerdict::Kind::Admissible);
}

TEST_CASE("admissibility: the distance-2 pair with the mod-4 class") {
  Sieve sv = materialize(parse_sieve(kAdjacent), 10);
  auto v = is_admissible({Point{0}, Point{2}}, sv);
  REQUIRE(v.kind == AdmissibleVerdict::Kind::NotAdmissible);
  CHECK(v.witness_index == 1);  // -A + R_1 covers Z/4
}

TEST_CASE("admissibility degrades to a truncation verdict without bounds") {
  Sieve sv = materialize(
      parse_sieve("ring Z\nstream P = primes\n"
                  "family i in 1..: modulus P(i)^2 residues {0}\n"),
      10);
  auto v = is_admissible({Point{0}}, sv);
  CHECK(v.kind == AdmissibleVerdict::Kind::AdmissibleUpTo);
  CHECK(v.upto == 10);
}

TEST_CASE("pattern count reduces to the free count for A={0}") {
  Sieve sv = materialize(parse_sieve(kSquarefree), 10);
  Window w = Window::interval(1, 5000);
  auto pc = pattern_count({Point{0}}, {}, sv, w);
  CHECK(pc.count == enumerate_free(sv, w).free_count);
}

TEST_CASE("pattern ratio approaches the shifted product") {
  Sieve sv = materialize(parse_sieve(kSquarefree), 25);  // p <= 97
  Window w = Window::interval(1, 100'000);
  auto pc = pattern_count({Point{0}, Point{1}, Point{2}, Point{3}}, {}, sv, w);
  double product = 1.0;
  for (i64 i = 1; i <= sv.L(); ++i) {
    i64 c = shifted_union_count(sv.at(i).set,
                                {Point{0}, Point{1}, Point{2}, Point{3}});
    product *= 1.0 - double(c) / double(modulus_norm(sv.at(i).modulus));
  }
  CHECK(pc.ratio == Catch::Approx(product).margin(0.01));
}

TEST_CASE("a non-admissible base pattern never occurs") {
  Sieve sv = materialize(parse_sieve(kAdjacentNoTwo), 50);
  // x+3 excluded forces x+2 or x+4 excluded: count is zero on any window
  auto pc = pattern_count({Point{2}, Point{4}}, {Point{3}}, sv,
                          Window::interval(1, 50'000));
  CHECK(pc.count == 0);
}

TEST_CASE("enumerate rejects oversized windows") {
  Sieve sv = materialize(parse_sieve(kSquarefree), 1);
  CHECK_THROWS_MATCHES(
      enumerate_free(sv, Window::interval(1, i64(1) << 40)), Error,
      Catch::Matchers::Predicate<Error>(
          [](const Error& e) { return e.code() == Errc::WindowTooLarge; }));
}
