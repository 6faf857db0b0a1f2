#include <doctest.h>

#include "density_lab/additive.hpp"
#include "density_lab/setops.hpp"
#include "support.hpp"

using namespace density_lab;
using testing::random_residues;
using testing::uniform;

namespace {

const GroupSpec kZ = ZLattice{1};

DiscreteSet periodic1(std::int64_t m, const std::vector<std::int64_t>& r) {
  return make_periodic({m}, testing::as_residues(r));
}

}  // namespace

TEST_CASE("gap analysis") {
  const auto two = gap_analysis(kZ, periodic1(2, {0}));
  CHECK(two.bounded);
  CHECK(two.max_gap == 2);
  CHECK(gap_analysis(kZ, periodic1(3, {0})).max_gap == 3);
  const auto d = difference_set(kZ, periodic1(5, {0, 1})).set;
  const auto g = gap_analysis(kZ, d);
  CHECK(g.max_gap == 3);
  REQUIRE(g.positives.size() >= 4);
  CHECK(g.positives[0] == 1);
  CHECK(g.positives[1] == 4);
  CHECK(g.positives[2] == 5);
  CHECK(g.positives[3] == 6);
  CHECK(gap_analysis(kZ, periodic1(10, {0})).max_gap == 10);

  for (int i = 0; i < 100; ++i) {
    const auto m = uniform(1, 20);
    const auto res = random_residues(m);
    std::int64_t prev = 0, best = 0;
    for (std::int64_t x = 1; x <= 3 * m; ++x) {
      if (std::find(res.begin(), res.end(), testing::mod(x, m)) != res.end()) {
        if (prev > 0) best = std::max(best, x - prev);
        prev = x;
      }
    }
    CHECK(gap_analysis(kZ, periodic1(m, res)).max_gap == best);
  }
}

TEST_CASE("syndetic checks") {
  const auto three = periodic1(3, {0});
  CHECK(syndetic_check(kZ, three, make_explicit(kZ, {IntVec{0}, IntVec{1}, IntVec{2}})).verified);
  const auto bad = syndetic_check(kZ, three, make_explicit(kZ, {IntVec{0}, IntVec{1}}));
  CHECK(!bad.verified);
  REQUIRE(bad.counterexample);
  CHECK(*bad.counterexample == Element(IntVec{2}));

  const PeriodicPattern half(Rational(1), IntervalUnion::closed(0, Rational(1, 2)));
  CHECK(syndetic_check(RealLine{}, half, IntervalUnion::closed(0, Rational(1, 2))).verified);
  const auto gap = syndetic_check(RealLine{}, half, IntervalUnion::closed(0, Rational(1, 4)));
  CHECK(!gap.verified);
  REQUIRE(gap.uncovered_gap);
  CHECK(gap.uncovered_gap->lo == Rational(3, 4));

  const SigmaFiniteChain chain{{2, 2, 2}};
  CHECK(syndetic_check(chain, ChainSet(make_cylinder(chain, 1, {{0}})), make_explicit(chain, {IntVec{}, IntVec{1}}))
            .verified);
}

TEST_CASE("minimal translates") {
  const auto k = minimal_translates(kZ, periodic1(3, {0}));
  CHECK(k.exact);
  CHECK(k.K == std::vector<Element>{IntVec{0}, IntVec{1}, IntVec{2}});
  const GroupSpec z4 = FiniteAbelian{{4}};
  CHECK(minimal_translates(z4, make_explicit(z4, {IntVec{0}})).K.size() == 4);
  CHECK(minimal_translates(z4, make_explicit(z4, enumerate(z4))).K == std::vector<Element>{IntVec{0}});

  for (int i = 0; i < 40; ++i) {
    const auto m = uniform(1, 10);
    const auto res = random_residues(m);
    const auto cover = minimal_translates(kZ, periodic1(m, res));
    REQUIRE(cover.exact);
    CHECK(syndetic_check(kZ, periodic1(m, res), make_explicit(kZ, cover.K)).verified);
    // No cover with fewer translates exists: check every subset of {0..m-1}.
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) >= cover.K.size()) continue;
      std::vector<char> hit(static_cast<std::size_t>(m), 0);
      for (std::int64_t t = 0; t < m; ++t) {
        if (!((mask >> t) & 1u)) continue;
        for (auto r : res) hit[static_cast<std::size_t>(testing::mod(r + t, m))] = 1;
      }
      CHECK(std::count(hit.begin(), hit.end(), 1) < m);
    }
  }
}
