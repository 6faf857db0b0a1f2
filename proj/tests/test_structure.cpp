#include <doctest.h>

#include <set>

#include "density_lab/errors.hpp"
#include "density_lab/setops.hpp"
#include "density_lab/structure.hpp"
#include "support.hpp"

using namespace density_lab;
using testing::random_residues;
using testing::uniform;

namespace {

const GroupSpec kZ = ZLattice{1};
const GroupSpec kR = RealLine{};

DiscreteSet periodic1(std::int64_t m, const std::vector<std::int64_t>& r) {
  return make_periodic({m}, testing::as_residues(r));
}

PointConfig z_and_third() { return lattice(Rational(1), {Rational(0), Rational(1, 3)}); }

std::vector<std::int64_t> ints(const std::vector<Element>& v) {
  std::vector<std::int64_t> out;
  for (const auto& e : v) out.push_back(std::get<IntVec>(e).at(0));
  return out;
}

}  // namespace

TEST_CASE("greedy translates on small examples") {
  const auto three = greedy_translates(kZ, periodic1(3, {0}));
  CHECK(ints(three.B) == std::vector<std::int64_t>{0, 1, 2});
  CHECK(three.size_bound == 3);
  CHECK(three.verified_cover);
  CHECK(three.verified_packing);
  CHECK_NOTHROW(verify_cover(kZ, periodic1(3, {0}), three));

  const GroupSpec z6 = FiniteAbelian{{6}};
  const auto whole = greedy_translates(z6, DiscreteSet(make_explicit(z6, enumerate(z6))));
  CHECK(whole.B == std::vector<Element>{IntVec{0}});

  const SigmaFiniteChain chain{{2, 2, 2}};
  const auto cyl = greedy_translates(chain, ChainSet(make_cylinder(chain, 1, {{0}})));
  CHECK(cyl.B == std::vector<Element>{IntVec{}, IntVec{1}});
  CHECK(cyl.size_bound == 2);

  const PeriodicPattern small(Rational(1), IntervalUnion::closed(0, Rational(1, 10)));
  const auto line = greedy_translates(kR, small);
  CHECK(line.verified_cover);
  CHECK(static_cast<std::int64_t>(line.B.size()) <= line.size_bound);
}

TEST_CASE("greedy translates against residue arithmetic") {
  for (int i = 0; i < 100; ++i) {
    const auto m = uniform(1, 24);
    const auto res = random_residues(m, 0.25);
    const auto out = greedy_translates(kZ, periodic1(m, res));
    const auto d = testing::diff_mod(res, m);
    std::set<std::int64_t> covered;
    const auto b = ints(out.B);
    for (auto x : d) {
      for (auto y : b) covered.insert(testing::mod(x + y, m));
    }
    CHECK(static_cast<std::int64_t>(covered.size()) == m);
    for (auto x : b) {
      for (auto y : b) {
        if (x != y) CHECK(d.count(testing::mod(x - y, m)) == 0);
      }
    }
    CHECK(static_cast<std::int64_t>(b.size()) * static_cast<std::int64_t>(res.size()) <= m);
  }
}

TEST_CASE("a tampered cover fails verification") {
  auto out = greedy_translates(kZ, periodic1(3, {0}));
  out.B.pop_back();
  CHECK_THROWS_AS(verify_cover(kZ, periodic1(3, {0}), out), VerificationError);
}

TEST_CASE("packing bound") {
  const auto even = lattice(Rational(2), {Rational(0)});
  const auto v = packing_bound_check(kR, even, IntervalUnion::closed(0, Rational(3, 2)));
  CHECK(v.rho == Rational(1, 2));
  CHECK(v.slack == Rational(1, 2));
  CHECK_THROWS_AS(packing_bound_check(kR, even, IntervalUnion::closed(0, 2)), PreconditionError);
  CHECK(find_packing_violation(kR, even, IntervalUnion::closed(0, 2)) == std::optional<Element>(Rational(2)));
  const auto near = packing_bound_check(kR, even, IntervalUnion::closed(0, Rational(2) - Rational(1, 1000000)));
  CHECK(near.slack == Rational(1, 1000000));

  const auto w = packing_bound_check(kR, z_and_third(), IntervalUnion::closed(0, Rational(1, 4)));
  CHECK(w.rho == Rational(2));
  CHECK(w.slack == Rational(1, 4));

  const GroupSpec z8 = FiniteAbelian{{8}};
  const auto sub = DiscreteSet(make_explicit(z8, {IntVec{0}, IntVec{4}}));
  CHECK_NOTHROW(packing_bound_check(z8, sub, make_explicit(z8, {IntVec{0}, IntVec{1}, IntVec{2}, IntVec{3}})));
  CHECK(find_packing_violation(z8, sub, make_explicit(z8, {IntVec{0}, IntVec{4}})).has_value());
}

TEST_CASE("fattening") {
  const auto even = lattice(Rational(2), {Rational(0)});
  const auto f = fatten(even, IntervalUnion::closed(0, 1));
  CHECK(f.measured == Rational(1, 2));
  CHECK(f.bound == Rational(1, 2));
  CHECK(fatten(even, IntervalUnion::point(0)).bound == Rational(0));
  const auto z = fatten(lattice(Rational(1), {Rational(0)}), IntervalUnion::closed(0, Rational(1, 3)));
  CHECK(z.measured == Rational(1, 3));
  CHECK(z.measured >= z.bound);
}

TEST_CASE("partitions") {
  const auto one = partition_by_coloring(kR, z_and_third(), IntervalUnion::closed(0, Rational(1, 5)));
  CHECK(one.n == 1);
  const auto two = partition_by_coloring(kR, z_and_third(), IntervalUnion::closed(0, Rational(2, 5)));
  CHECK(two.n == 2);
  CHECK(two.n <= two.k_bound);
  CHECK_NOTHROW(verify_partition(kR, z_and_third(), two));
  for (const auto& c : two.classes) {
    const auto& pc = std::get<PointConfig>(c);
    CHECK(pc.is_periodic());
    CHECK(pc.period() == Rational(1));
    CHECK(pc.offsets().size() == 1);
  }

  std::vector<Rational> pts;
  for (int n = 2; n <= 50; ++n) {
    pts.push_back(Rational(n));
    pts.push_back(Rational(n) + Rational(1, n));
  }
  const auto S = finite_points(pts);
  const auto trunc = partition_by_coloring(kR, S, IntervalUnion::closed(0, Rational(1, 4)));
  CHECK(trunc.n == 2);
  for (const auto& c : trunc.classes) {
    const auto d = points_within(difference_set(std::get<PointConfig>(c), Rational(-1, 4), Rational(1, 4)).set,
                                 Rational(-1, 4), Rational(1, 4));
    CHECK(d == std::vector<Rational>{Rational(0)});
  }

  for (int i = 0; i < 30; ++i) {
    const auto m = uniform(2, 16);
    const auto res = random_residues(m, 0.5);
    const GroupSpec zm = FiniteAbelian{{m}};
    std::vector<Element> elems;
    for (auto r : res) elems.push_back(IntVec{r});
    const auto S2 = DiscreteSet(make_explicit(zm, elems));
    const auto H = make_explicit(zm, {IntVec{0}, IntVec{uniform(1, m - 1)}});
    const auto p = partition_by_coloring(zm, S2, H);
    CHECK_NOTHROW(verify_partition(zm, S2, p));
    CHECK(p.n <= p.k_bound);
  }
}

TEST_CASE("automatic window choice") {
  for (const auto& [S, eps] : std::vector<std::pair<PointConfig, Rational>>{
           {lattice(Rational(2), {Rational(0)}), Rational(1)},
           {lattice(Rational(1), {Rational(0)}), Rational(1, 2)},
           {z_and_third(), Rational(1, 2)},
       }) {
    const auto a = auto_H(S, eps);
    CHECK(a.verified);
    CHECK(a.H == IntervalUnion::closed(0, a.L));
    // Direct count of S in s + [-L, L] over one period of base points.
    std::int64_t k = 0;
    for (const auto& s : S.offsets()) {
      k = std::max<std::int64_t>(k, static_cast<std::int64_t>(points_within(S, s - a.L, s + a.L).size()));
    }
    CHECK(k == a.k);
    CHECK(Rational(k) <= (Rational(1) + eps) * a.rho * Rational(2) * a.L);
  }
  CHECK_THROWS_AS(auto_H(finite_points({Rational(0), Rational(1)})), PreconditionError);
}

TEST_CASE("subadditivity") {
  const GroupSpec z6 = FiniteAbelian{{6}};
  const auto v = subadditivity_check(z6, {counting(DiscreteSet(make_explicit(z6, {IntVec{0}, IntVec{1}}))),
                                          counting(DiscreteSet(make_explicit(z6, {IntVec{3}})))});
  CHECK(v.total.value() == ExtRational(Rational(1, 2)));
  CHECK(v.sum_of_parts == ExtRational(Rational(1, 2)));
  CHECK(v.holds);
  const auto parity = subadditivity_check(kZ, {counting(periodic1(2, {0})), counting(periodic1(2, {1}))});
  CHECK(parity.total.value() == ExtRational(1));
  CHECK(parity.slack == std::optional<Rational>(Rational(0)));
  const auto lumpy = subadditivity_check(kZ, {counting(periodic1(4, {0, 1})), counting(periodic1(6, {3}))});
  CHECK(lumpy.holds);
  CHECK(lumpy.slack->sign() >= 0);
}

TEST_CASE("pipeline") {
  const auto even = syndetic_pipeline(lattice(Rational(2), {Rational(0)}), Rational(1, 2), IntervalUnion::closed(0, 1));
  CHECK(even.partition.n == 1);
  CHECK(even.covering.verified);
  CHECK(even.mu_T <= Rational(3));
  CHECK(even.remark_holds);

  const auto mixed = syndetic_pipeline(z_and_third(), Rational(1, 2), IntervalUnion::closed(0, Rational(2, 5)));
  CHECK(mixed.partition.n == 2);
  CHECK(mixed.rho_j == Rational(1));
  CHECK(mixed.covering.verified);
  CHECK(mixed.translate_bound_holds);
  CHECK(mixed.corrected_holds);

  const auto autoh = syndetic_pipeline(lattice(Rational(1), {Rational(0)}));
  REQUIRE(autoh.auto_h);
  CHECK(autoh.covering.verified);
  CHECK(autoh.translate_bound_holds);
  CHECK(autoh.corrected_holds);
  CHECK(autoh.mu_T <= Rational(static_cast<std::int64_t>(autoh.cover.B.size())) * Rational(2) * autoh.auto_h->L);

  CHECK_THROWS_AS(syndetic_pipeline(harmonic(Rational(0))), PreconditionError);
  CHECK_THROWS_AS(syndetic_pipeline(with_accumulation(finite_points({Rational(1), Rational(2)}), Rational(0))),
                  PreconditionError);
}
