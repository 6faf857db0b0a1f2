#include <doctest.h>

#include <algorithm>

#include "density_lab/density.hpp"
#include "density_lab/errors.hpp"
#include "density_lab/setops.hpp"
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

PeriodicPattern pattern(const Rational& p, const Rational& lo, const Rational& hi) {
  return PeriodicPattern(p, IntervalUnion::closed(lo, hi));
}

// max over x of #(A ∩ [x - r, x + r]) / (2r + 1) by direct counting.
Rational brute_cube_ratio(std::int64_t m, const std::vector<std::int64_t>& residues, std::int64_t r) {
  std::vector<char> in(static_cast<std::size_t>(m), 0);
  for (auto x : residues) in[static_cast<std::size_t>(x)] = 1;
  std::int64_t best = 0;
  for (std::int64_t x = 0; x < m; ++x) {
    std::int64_t c = 0;
    for (std::int64_t y = x - r; y <= x + r; ++y) c += in[static_cast<std::size_t>(testing::mod(y, m))];
    best = std::max(best, c);
  }
  return Rational(best, 2 * r + 1);
}

}  // namespace

TEST_CASE("classical upper density") {
  CHECK(classical_upper_density(kZ, periodic1(3, {0})).value() == ExtRational(Rational(1, 3)));
  CHECK(classical_upper_density(kZ, DiscreteSet(ExplicitFinite{})).value() == ExtRational(0));
  const auto A = periodic1(10, {0, 1, 4});
  CHECK(classical_upper_density(kZ, A).value() == ExtRational(Rational(3, 10)));
  std::int64_t count = 0;
  for (std::int64_t n = 1; n <= 10000; ++n) count += contains(kZ, A, IntVec{n}) ? 1 : 0;
  CHECK(Rational(count, 10000) == Rational(3, 10));
}

TEST_CASE("window profiles") {
  const auto even = counting(lattice(Rational(2), {Rational(0)}));
  const auto p = window_density_profile(kR, even, IntervalShape{}, {Rational(10), Rational(1000)});
  CHECK(p[0].ratio == ExtRational(Rational(11, 20)));
  CHECK(p[1].ratio == ExtRational(Rational(1001, 2000)));

  const auto half = haar_trace(pattern(Rational(1), Rational(0), Rational(1, 2)));
  for (int r : {1, 2, 7, 30}) {
    CHECK(window_density_profile(kR, half, IntervalShape{}, {Rational(r)})[0].ratio == ExtRational(Rational(1, 2)));
  }

  const auto dirac = dirac_at_zero();
  for (int r : {1, 10, 1000}) {
    CHECK(window_density_profile(kR, dirac, IntervalShape{}, {Rational(r)})[0].ratio == ExtRational(Rational(1, 2 * r)));
  }

  for (int i = 0; i < 100; ++i) {
    const auto m = uniform(1, 15);
    const auto res = random_residues(m);
    const auto r = uniform(0, 20);
    const auto got = window_density_profile(kZ, counting(periodic1(m, res)), CenteredCube{}, {Rational(r)});
    CHECK(got[0].ratio == ExtRational(brute_cube_ratio(m, res, r)));
  }
}

TEST_CASE("window density on explicit truncations is an estimate") {
  std::vector<Rational> pts;
  for (int n = 2; n <= 2000; ++n) {
    pts.push_back(Rational(n));
    pts.push_back(Rational(n) + Rational(1, n));
  }
  EstimationSettings s;
  s.r0 = Rational(10);
  s.r_max = Rational(1000);
  const auto rep = auud_window(kR, counting(finite_points(pts)), IntervalShape{}, s);
  CHECK(rep.kind == ValueKind::Estimated);
  CHECK(rep.approx() == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("custom window shapes") {
  CHECK_THROWS_AS(custom_k(IntervalUnion::closed(0, 2)), PreconditionError);
  const auto K = custom_k(IntervalUnion({{Rational(0), Rational(1, 2)}, {Rational(3, 4), Rational(5, 4)}}));
  EstimationSettings s;
  s.scan_only = true;
  s.r0 = Rational(1);
  const auto third = haar_trace(pattern(Rational(1), Rational(0), Rational(1, 3)));
  const auto rep = auud_window(kR, third, K, s);
  CHECK(rep.approx() == doctest::Approx(1.0 / 3).epsilon(1e-3));
  const auto cube = auud_window(kR, third, IntervalShape{}, s);
  CHECK(std::abs(rep.approx() - cube.approx()) < 2e-3);
}

TEST_CASE("kahane density closed forms") {
  CHECK(kahane_density(kZ, counting(periodic1(3, {0}))).value() == ExtRational(Rational(1, 3)));
  CHECK(kahane_density(kR, haar_trace(pattern(Rational(1), Rational(0), Rational(1, 2)))).value() ==
        ExtRational(Rational(1, 2)));
  CHECK(kahane_density(kR, dirac_at_zero()).value() == ExtRational(0));
  const GroupSpec z6 = FiniteAbelian{{6}};
  const auto nu = counting(DiscreteSet(make_explicit(z6, {IntVec{0}, IntVec{2}})));
  CHECK(kahane_density(z6, nu).value() == ExtRational(Rational(1, 3)));
  CHECK(kahane_density_finite_group(FiniteAbelian{{6}}, nu, FiniteMode::Oracle).value() == ExtRational(Rational(1, 3)));
  CHECK(delta_density(z6, nu).value() == ExtRational(Rational(1, 3)));
  CHECK(delta_density(kZ, counting(periodic1(3, {0}))).value() == ExtRational(Rational(1, 3)));
  const auto totik = delta_density(kR, dirac_at_zero());
  CHECK(totik.is_infinite());
  REQUIRE(totik.witness);
  CHECK(!totik.witness->eta_schedule.empty());
}

TEST_CASE("finite group oracle matches the normalized total mass") {
  for (const IntVec& moduli : std::vector<IntVec>{{2}, {3}, {4}, {2, 2}, {5}, {6}, {2, 3}}) {
    const FiniteGroupOracle oracle(FiniteAbelian{moduli});
    const auto n = static_cast<std::int64_t>(oracle.order());
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<std::int64_t> w(static_cast<std::size_t>(n));
      std::int64_t size = 0;
      for (std::int64_t i = 0; i < n; ++i) size += w[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
      CHECK(oracle.evaluate_counts(w).value == Rational(size, n));
    }
    for (int t = 0; t < 10; ++t) {
      std::vector<Rational> w;
      Rational total;
      for (std::int64_t i = 0; i < n; ++i) {
        w.emplace_back(uniform(0, 9), uniform(1, 4));
        total += w.back();
      }
      CHECK(oracle.evaluate(w).value == total / Rational(n));
    }
  }
  CHECK_THROWS_AS(FiniteGroupOracle(FiniteAbelian{{13}}, 12), CapExceeded);
}

TEST_CASE("density is translation invariant and monotone") {
  for (int i = 0; i < 100; ++i) {
    const auto m = uniform(1, 12);
    auto small = random_residues(m, 0.3);
    auto big = small;
    for (std::int64_t x = 0; x < m; ++x) {
      if (uniform(0, 2) == 0 && std::find(big.begin(), big.end(), x) == big.end()) big.push_back(x);
    }
    std::sort(big.begin(), big.end());
    const auto ds = kahane_density(kZ, counting(periodic1(m, small))).value();
    const auto db = kahane_density(kZ, counting(periodic1(m, big))).value();
    CHECK(ds <= db);
    CHECK(ds == ExtRational(Rational(static_cast<std::int64_t>(small.size()), m)));
    const auto moved = shifted(kZ, counting(periodic1(m, small)), IntVec{uniform(-50, 50)});
    CHECK(kahane_density(kZ, moved).value() == ds);
    const auto delta = delta_density(kZ, counting(periodic1(m, small)));
    CHECK(delta.value() >= ds);
  }
}

TEST_CASE("hegyvari density on a chain") {
  const SigmaFiniteChain chain{IntVec(10, 2)};
  CHECK(hegyvari_density(chain, make_cylinder(chain, 1, {{0}}), 10).value() == ExtRational(Rational(1, 2)));
  CHECK(hegyvari_density(chain, WholeChain{}, 10).value() == ExtRational(1));
  const auto sub = hegyvari_density(chain, ChainSubgroup{1}, 10);
  REQUIRE(!sub.schedule.empty());
  CHECK(sub.schedule.back().ratio == ExtRational(Rational(2, 1024)));
}

TEST_CASE("translation witness") {
  const auto even = counting(lattice(Rational(2), {Rational(0)}));
  const auto t = translation_witness(kR, even, IntervalUnion::closed(0, 4), Rational(2, 5));
  REQUIRE(t.x);
  CHECK(t.target == Rational(8, 5));
  CHECK(t.mass_at_x >= ExtRational(t.target));
  CHECK(window_mass(kR, even, *t.x, IntervalUnion::closed(0, 4)) == t.mass_at_x);

  const auto half = haar_trace(pattern(Rational(1), Rational(0), Rational(1, 2)));
  const auto h = translation_witness(kR, half, IntervalUnion::closed(0, 1), Rational(49, 100));
  REQUIRE(h.x);
  CHECK(h.mass_at_x >= ExtRational(Rational(49, 100)));

  const auto z = translation_witness(kR, half, IntervalUnion::closed(0, 1), Rational(0));
  REQUIRE(z.x);
  CHECK(*z.x == Element(Rational(0)));
}

TEST_CASE("rudin windows") {
  const auto w = rudin_window(kR, IntervalUnion::closed(-1, 1), Rational(1, 10));
  CHECK(w.verified);
  CHECK(w.L == Rational(11));
  CHECK(rudin_sum_measure(kR, IntervalUnion::closed(-1, 1), Rational(20)) == Rational(42));
  CHECK(rudin_sum_measure(kR, IntervalUnion::closed(-1, 1), Rational(10)) >= Rational(11, 10) * Rational(20));

  const auto p = rudin_window(kR, IntervalUnion::point(0), Rational(1, 3));
  CHECK(p.L == Rational(1));
  CHECK(p.mu_CV == p.mu_V);

  std::vector<Element> six;
  for (int i = 0; i < 6; ++i) six.push_back(IntVec{i});
  const auto d = rudin_window(kZ, make_explicit(kZ, six), Rational(1, 2));
  CHECK(d.L == Rational(5));
  CHECK(d.mu_CV < Rational(3, 2) * d.mu_V);

  for (int i = 0; i < 30; ++i) {
    std::vector<Element> c;
    std::vector<std::int64_t> raw;
    for (int j = 0; j < 4; ++j) {
      raw.push_back(uniform(-8, 8));
      c.push_back(IntVec{raw.back()});
    }
    const Rational eps(uniform(1, 4), 4);
    const auto r = rudin_window(kZ, make_explicit(kZ, c), eps);
    const auto L = r.L.to_int64();
    std::set<std::int64_t> sum;
    for (auto x : raw) {
      for (std::int64_t v = -L; v <= L; ++v) sum.insert(x + v);
    }
    const Rational mu_v(2 * L + 1);
    CHECK(Rational(static_cast<std::int64_t>(sum.size())) < (Rational(1) + eps) * mu_v);
    if (L > 1) {
      // L - 1 must fail, so L is least.
      std::set<std::int64_t> prev;
      for (auto x : raw) {
        for (std::int64_t v = -(L - 1); v <= L - 1; ++v) prev.insert(x + v);
      }
      CHECK(Rational(static_cast<std::int64_t>(prev.size())) >= (Rational(1) + eps) * Rational(2 * L - 1));
    }
  }
}
