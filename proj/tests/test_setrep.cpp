#include <doctest.h>

#include <numeric>
#include <set>

#include "density_lab/errors.hpp"
#include "density_lab/setops.hpp"
#include "density_lab/sets.hpp"
#include "support.hpp"

using namespace density_lab;
using testing::random_residues;
using testing::random_union;
using testing::uniform;

namespace {

const GroupSpec kZ = ZLattice{1};
const GroupSpec kR = RealLine{};

DiscreteSet periodic1(std::int64_t m, const std::vector<std::int64_t>& r) {
  return make_periodic({m}, testing::as_residues(r));
}

// Residues of a periodic subset of ℤ reduced to modulus m.
std::set<std::int64_t> residues_mod(const DiscreteSet& s, std::int64_t m) {
  std::set<std::int64_t> out;
  for (std::int64_t x = 0; x < m; ++x) {
    if (contains(kZ, s, IntVec{x})) out.insert(x);
  }
  return out;
}

}  // namespace

TEST_CASE("interval unions canonicalize") {
  const IntervalUnion u({{Rational(2), Rational(3)}, {Rational(0), Rational(1)}, {Rational(1), Rational(3, 2)}});
  REQUIRE(u.parts().size() == 2);
  CHECK(u.parts()[0] == Interval{Rational(0), Rational(3, 2)});
  CHECK(u.length() == Rational(5, 2));
  CHECK(u.diameter() == Rational(3));
  CHECK_THROWS_AS(IntervalUnion({{Rational(1), Rational(0)}}), PreconditionError);
}

TEST_CASE("minkowski sums of interval unions") {
  const auto unit = IntervalUnion::closed(0, 1);
  CHECK(minkowski_sum(unit, unit) == IntervalUnion::closed(0, 2));
  CHECK(minkowski_sum(IntervalUnion::closed(-1, 1), IntervalUnion::point(0)) == IntervalUnion::closed(-1, 1));
  for (int i = 0; i < 100; ++i) {
    const auto a = random_union(3, 20, 4), b = random_union(2, 20, 3), c = random_union(2, 10, 2);
    CHECK(minkowski_sum(a, b) == minkowski_sum(b, a));
    CHECK(minkowski_sum(minkowski_sum(a, b), c) == minkowski_sum(a, minkowski_sum(b, c)));
    const auto d = difference_set(a).set;
    CHECK(d == d.negated());
    CHECK(d.contains(Rational(0)));
    // |A + B| ≥ |A| + |B| on the line.
    CHECK(minkowski_sum(a, b).length() >= a.length() + b.length());
  }
}

TEST_CASE("periodic discrete sumsets against residue enumeration") {
  CHECK(residues_mod(minkowski_sum(kZ, periodic1(6, {0, 1}), periodic1(6, {0, 3})), 6) ==
        std::set<std::int64_t>{0, 1, 3, 4});
  for (int i = 0; i < 100; ++i) {
    const auto m1 = uniform(1, 8), m2 = uniform(1, 8);
    const auto a = random_residues(m1), b = random_residues(m2);
    const auto sum = minkowski_sum(kZ, periodic1(m1, a), periodic1(m2, b));
    const std::int64_t m = std::lcm(m1, m2);
    std::set<std::int64_t> expected;
    for (auto x : a) {
      for (auto y : b) {
        for (std::int64_t s = 0; s < m; s += m1) {
          for (std::int64_t t = 0; t < m; t += m2) expected.insert(testing::mod(x + y + s + t, m));
        }
      }
    }
    CHECK(residues_mod(sum, m) == expected);
  }
}

TEST_CASE("difference sets") {
  CHECK(residues_mod(difference_set(kZ, periodic1(3, {0})).set, 3) == std::set<std::int64_t>{0});
  const GroupSpec z7 = FiniteAbelian{{7}};
  const auto d = difference_set(z7, make_explicit(z7, {IntVec{0}, IntVec{1}, IntVec{3}}));
  for (std::int64_t x = 0; x < 7; ++x) CHECK(contains(z7, d.set, IntVec{x}));
  const auto empty = difference_set(z7, make_explicit(z7, {}));
  CHECK(empty.empty_input);
  CHECK(!contains(z7, empty.set, IntVec{0}));

  for (int i = 0; i < 100; ++i) {
    const auto m = uniform(1, 12);
    const auto a = random_residues(m);
    CHECK(residues_mod(difference_set(kZ, periodic1(m, a)).set, m) == testing::diff_mod(a, m));
  }

  std::vector<Rational> pts;
  for (int n = 2; n <= 6; ++n) {
    pts.push_back(Rational(n));
    pts.push_back(Rational(n) + Rational(1, n));
  }
  const auto diffs = difference_set(finite_points(pts), Rational(-1, 2), Rational(1, 2)).set;
  const auto within = points_within(diffs, Rational(-1, 2), Rational(1, 2));
  const std::set<Rational> got(within.begin(), within.end());
  CHECK(got.count(Rational(0)) == 1);
  for (int n = 2; n <= 6; ++n) {
    CHECK(got.count(Rational(1, n)) == 1);
    CHECK(got.count(Rational(-1, n)) == 1);
  }
}

TEST_CASE("periodic patterns") {
  const PeriodicPattern half(Rational(1), IntervalUnion::closed(0, Rational(1, 2)));
  CHECK(half.density() == Rational(1, 2));
  CHECK(half.mass(Rational(-3, 4), Rational(5, 4)) == Rational(1));
  CHECK(half.contains(Rational(-1, 2)));
  CHECK(!half.contains(Rational(3, 4)));
  CHECK(half.with_period(3).density() == Rational(1, 2));
  CHECK(half.shifted(Rational(1, 2)).negated() == half.negated().shifted(Rational(-1, 2)));
  CHECK(difference_set(half).covers_line());
  const PeriodicPattern third(Rational(1), IntervalUnion::closed(0, Rational(1, 3)));
  const auto s = minkowski_sum(third, PeriodicPattern(Rational(1, 2), IntervalUnion::closed(0, Rational(1, 8))));
  CHECK(s.period() == Rational(1));
  for (int i = 0; i < 50; ++i) {
    const Rational p(uniform(1, 6), uniform(1, 3));
    const PeriodicPattern pat(p, random_union(2, 12, 12).scaled(p));
    const Rational a(uniform(-40, 40), 7), b = a + Rational(uniform(0, 40), 5);
    // Mass over an interval equals the exact length of the materialized union.
    CHECK(pat.mass(a, b) == pat.materialize(a, b).length());
  }
}

TEST_CASE("haar measure") {
  const GroupSpec z7 = FiniteAbelian{{7}};
  CHECK(haar(z7, DiscreteSet(make_explicit(z7, {IntVec{0}, IntVec{1}, IntVec{3}}))).value == ExtRational(3));
  const IntervalUnion u({{Rational(0), Rational(1)}, {Rational(2), Rational(5, 2)}});
  CHECK(haar(kR, u).value == ExtRational(Rational(3, 2)));
  const auto h = haar(kR, PeriodicPattern(Rational(1), IntervalUnion::closed(0, Rational(1, 3))));
  CHECK(h.value.is_infinite());
  REQUIRE(h.per_period);
  CHECK(*h.per_period == Rational(1, 3));
}

TEST_CASE("window mass") {
  CHECK(window_mass(kZ, counting(periodic1(2, {0})), IntVec{0}, BoxRadius{Rational(5)}) == ExtRational(5));
  const auto nu = haar_trace(PeriodicPattern(Rational(1), IntervalUnion::closed(0, Rational(1, 2))));
  CHECK(window_mass(kR, nu, Rational(1, 4), IntervalUnion::closed(-1, 1)) == ExtRational(1));
  const auto acc = counting(harmonic(Rational(0), 1));
  CHECK(window_mass(kR, acc, Rational(0), IntervalUnion::closed(Rational(-1, 100), Rational(1, 100))).is_infinite());
  CHECK(window_mass(kR, acc, Rational(10), IntervalUnion::closed(-1, 1)) == ExtRational(0));
}

TEST_CASE("window mass is translation covariant") {
  for (int i = 0; i < 100; ++i) {
    const auto m = uniform(1, 9);
    const auto nu = counting(periodic1(m, random_residues(m)));
    const IntVec g{uniform(-20, 20)}, x{uniform(-20, 20)};
    const BoxRadius r{Rational(uniform(0, 10))};
    // (ν shifted by g)(x + W) = ν(x - g + W).
    CHECK(window_mass(kZ, shifted(kZ, nu, g), x, r) == window_mass(kZ, nu, IntVec{x[0] - g[0]}, r));
  }
  const auto nu = haar_trace(PeriodicPattern(Rational(3, 2), IntervalUnion::closed(0, Rational(1, 3))));
  for (int i = 0; i < 50; ++i) {
    const Rational g(uniform(-30, 30), 7), x(uniform(-30, 30), 5);
    const auto W = IntervalUnion::closed(0, Rational(uniform(1, 9), 2));
    CHECK(window_mass(kR, shifted(kR, nu, g), x, W) == window_mass(kR, nu, x - g, W));
  }
}

TEST_CASE("shape checks") {
  CHECK_THROWS_AS(validate(FiniteAbelian{{4}}, counting(DiscreteSet(ExplicitFinite{{IntVec{1, 2}}}))), ShapeError);
  CHECK_THROWS_AS(validate(kR, weighted_diracs({{Rational(0), Rational(-1)}})), Error);
  CHECK(has_accumulation(counting(harmonic(Rational(0)))));
  CHECK(!has_accumulation(counting(lattice(Rational(1), {Rational(0)}))));
}

TEST_CASE("chain sets") {
  const SigmaFiniteChain chain{{2, 2, 2, 2}};
  const ChainSet A = make_cylinder(chain, 1, {{0}});
  for (std::size_t n = 1; n <= 4; ++n) CHECK(count_in_subgroup(chain, A, n) == (std::int64_t{1} << (n - 1)));
  CHECK(count_in_subgroup(chain, ChainSubgroup{1}, 3) == 2);
  CHECK(contains(chain, A, IntVec{0, 1, 1}));
  CHECK(!contains(chain, A, IntVec{1}));
}
