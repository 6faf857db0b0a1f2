// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when a
// criterion fails that is not listed in kKnownFailures.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "density_lab/additive.hpp"
#include "density_lab/density.hpp"
#include "density_lab/errors.hpp"
#include "density_lab/setops.hpp"
#include "density_lab/structure.hpp"
#include "support.hpp"

using namespace density_lab;
using testing::random_residues;
using testing::uniform;

namespace {

using Clock = std::chrono::steady_clock;

// Pinned tolerances.
constexpr double kPatternTol = 1e-2;     // window estimate vs exact pattern density
constexpr double kShapeTol = 2e-3;       // window estimates for different K
constexpr double kOracleBudgetS = 300;   // criterion 1 runtime
constexpr double kPatternBudgetS = 120;  // criterion 3 runtime

// Printed as FAIL but not fatal; see README.
const std::set<int> kKnownFailures{9};

const GroupSpec kZ = ZLattice{1};
const GroupSpec kR = RealLine{};

struct Line {
  int id;
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

DiscreteSet periodic1(std::int64_t m, const std::vector<std::int64_t>& r) {
  return make_periodic({m}, testing::as_residues(r));
}

// Ordered factorizations of n into moduli >= 2; {} for n = 1.
std::vector<IntVec> moduli_lists(std::int64_t n) {
  if (n == 1) return {IntVec{}};
  std::vector<IntVec> out;
  std::function<void(std::int64_t, IntVec&)> rec = [&](std::int64_t rest, IntVec& cur) {
    if (rest == 1) {
      out.push_back(cur);
      return;
    }
    for (std::int64_t d = 2; d <= rest; ++d) {
      if (rest % d) continue;
      cur.push_back(d);
      rec(rest / d, cur);
      cur.pop_back();
    }
  };
  IntVec cur;
  rec(n, cur);
  return out;
}

std::vector<IntVec> all_groups_up_to(std::int64_t n) {
  std::vector<IntVec> out;
  for (std::int64_t k = 1; k <= n; ++k) {
    for (auto& m : moduli_lists(k)) out.push_back(m);
  }
  return out;
}

// Addition of mixed-radix indices, coordinatewise mod moduli.
std::int64_t add_index(std::int64_t a, std::int64_t b, const IntVec& moduli, bool subtract = false) {
  const auto x = lex_element(a, moduli), y = lex_element(b, moduli);
  IntVec z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = testing::mod(subtract ? x[i] - y[i] : x[i] + y[i], moduli[i]);
  return lex_index(z, moduli);
}

std::vector<Element> subset_elements(std::uint32_t mask, const IntVec& moduli, std::int64_t n) {
  std::vector<Element> out;
  for (std::int64_t i = 0; i < n; ++i) {
    if ((mask >> i) & 1u) out.push_back(lex_element(i, moduli));
  }
  return out;
}

// Random periodic configuration: step p, offsets on the grid p/12.
PointConfig random_config() {
  const std::vector<Rational> steps{Rational(1), Rational(3, 2), Rational(2), Rational(5, 2), Rational(3)};
  const Rational p = steps[static_cast<std::size_t>(uniform(0, 4))];
  std::set<std::int64_t> grid;
  const auto count = uniform(1, 4);
  while (static_cast<std::int64_t>(grid.size()) < count) grid.insert(uniform(0, 11));
  std::vector<Rational> offsets;
  for (auto g : grid) offsets.push_back(p * Rational(g, 12));
  return lattice(p, offsets);
}

// Least positive difference of a periodic configuration.
Rational min_gap(const PointConfig& S) {
  const auto& off = S.offsets();
  Rational best = S.period();
  for (std::size_t i = 0; i + 1 < off.size(); ++i) best = min(best, off[i + 1] - off[i]);
  if (off.size() > 1) best = min(best, off.front() + S.period() - off.back());
  return best;
}

// ----------------------------------------------------------------------------

Line criterion1() {
  const auto t0 = Clock::now();
  std::int64_t cases = 0, bad = 0;
  const auto groups = all_groups_up_to(8);
  for (const auto& moduli : groups) {
    const FiniteAbelian g{moduli};
    const FiniteGroupOracle oracle(g);
    const auto n = static_cast<std::int64_t>(oracle.order());
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<std::int64_t> w(static_cast<std::size_t>(n));
      for (std::int64_t i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
      const Rational expected(__builtin_popcount(mask), n);
      ++cases;
      if (oracle.evaluate_counts(w).value != expected) ++bad;
      // The public entry point on a sample: every subset of the groups up to order 6.
      if (n <= 6) {
        const auto nu = counting(DiscreteSet(make_explicit(g, subset_elements(mask, moduli, n))));
        if (kahane_density_finite_group(g, nu, FiniteMode::Oracle).value() != ExtRational(expected)) ++bad;
      }
    }
  }
  const double s = seconds_since(t0);
  std::ostringstream d;
  d << groups.size() << " groups, " << cases << " subsets, " << bad << " mismatches, " << s << " s";
  return {1, bad == 0 && s <= kOracleBudgetS, d.str()};
}

Line criterion2() {
  std::int64_t equal = 0, computed = 0, violations = 0;
  for (int i = 0; i < 500; ++i) {
    GroupSpec group;
    MeasureSpec nu;
    Rational expected;
    switch (i % 4) {
      case 0: {
        const auto m = uniform(2, 12);
        const auto res = random_residues(m);
        group = FiniteAbelian{{m}};
        std::vector<Element> el;
        for (auto r : res) el.push_back(IntVec{r});
        nu = counting(DiscreteSet(make_explicit(group, el)));
        expected = Rational(static_cast<std::int64_t>(res.size()), m);
        break;
      }
      case 1: {
        const auto m = uniform(1, 24);
        const auto res = random_residues(m);
        group = kZ;
        nu = counting(periodic1(m, res));
        expected = Rational(static_cast<std::int64_t>(res.size()), m);
        break;
      }
      case 2: {
        const IntVec per{uniform(1, 5), uniform(1, 5)};
        std::vector<IntVec> res;
        for (const auto& c : BoxDomain{per}.cells()) {
          if (uniform(0, 2) == 0) res.push_back(c);
        }
        if (res.empty()) res.push_back({0, 0});
        group = ZLattice{2};
        nu = counting(DiscreteSet(make_periodic(per, res)));
        expected = Rational(static_cast<std::int64_t>(res.size()), per[0] * per[1]);
        break;
      }
      default: {
        const IntVec moduli{2, uniform(2, 4)};
        group = FiniteAbelian{moduli};
        std::vector<std::pair<Element, Rational>> atoms;
        Rational total;
        for (const auto& c : BoxDomain{moduli}.cells()) {
          if (uniform(0, 1)) {
            atoms.emplace_back(c, Rational(uniform(1, 5), uniform(1, 3)));
            total += atoms.back().second;
          }
        }
        if (atoms.empty()) {
          atoms.emplace_back(IntVec{0, 0}, Rational(1));
          total = Rational(1);
        }
        nu = weighted_diracs(atoms);
        expected = total / Rational(moduli[0] * moduli[1]);
        break;
      }
    }
    const auto D = kahane_density(group, nu);
    const auto Delta = delta_density(group, nu);
    if (!D.is_exact() || !Delta.is_exact()) continue;
    ++computed;
    if (Delta.value() == D.value() && D.value() == ExtRational(expected)) ++equal;
    if (Delta.value() < D.value()) ++violations;
  }
  std::ostringstream d;
  d << equal << "/500 equal to each other and to the direct count, " << computed << " computed, " << violations
    << " with Delta < D";
  return {2, equal == 500 && violations == 0, d.str()};
}

Line criterion3() {
  const auto t0 = Clock::now();
  const std::vector<WindowShape> shapes{
      IntervalShape{},
      custom_k(IntervalUnion({{Rational(0), Rational(1, 2)}, {Rational(3, 4), Rational(5, 4)}})),
      custom_k(IntervalUnion({{Rational(-1, 2), Rational(-1, 4)}, {Rational(0), Rational(3, 4)}})),
  };
  int ok = 0;
  double worst_exact = 0, worst_pair = 0;
  for (int i = 0; i < 50; ++i) {
    const Rational p(uniform(1, 8), uniform(1, 3));
    auto u = testing::random_union(3, 24, 24).scaled(p);
    if (u.length().is_zero()) u = IntervalUnion::closed(0, p / Rational(2));
    const double exact = (u.length() / p).to_double();
    const auto nu = haar_trace(PeriodicPattern(p, u));
    EstimationSettings s;
    s.scan_only = true;
    // r0 is not a multiple of the period.
    s.r0 = p * Rational(uniform(8, 13), 7);
    s.r_max = p * Rational(4096);
    bool good = true;
    std::vector<double> est;
    for (const auto& K : shapes) {
      const auto rep = auud_window(kR, nu, K, s);
      good = good && rep.converged && !rep.schedule.empty() && rep.schedule.back().r <= *s.r_max;
      est.push_back(rep.approx());
      worst_exact = std::max(worst_exact, std::abs(rep.approx() - exact));
    }
    const auto [lo, hi] = std::minmax_element(est.begin(), est.end());
    worst_pair = std::max(worst_pair, *hi - *lo);
    if (good && *hi - *lo <= kShapeTol && std::abs(*lo - exact) <= kPatternTol && std::abs(*hi - exact) <= kPatternTol)
      ++ok;
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << ok << "/50 patterns, max |est - exact| " << worst_exact << ", max spread " << worst_pair << ", " << secs << " s";
  return {3, ok == 50 && secs <= kPatternBudgetS, d.str()};
}

// Cover and packing of B against D = A - A, by index arithmetic.
bool check_cover_indices(const std::set<std::int64_t>& D, const std::vector<std::int64_t>& B, std::int64_t n,
                         const std::function<std::int64_t(std::int64_t, std::int64_t, bool)>& op) {
  std::vector<char> hit(static_cast<std::size_t>(n), 0);
  for (auto d : D) {
    for (auto b : B) hit[static_cast<std::size_t>(op(d, b, false))] = 1;
  }
  if (std::count(hit.begin(), hit.end(), 1) != n) return false;
  for (auto a : B) {
    for (auto b : B) {
      if (a != b && D.count(op(a, b, true))) return false;
    }
  }
  return true;
}

Line criterion4() {
  std::int64_t cases = 0, bad = 0;
  for (int i = 0; i < 500; ++i) {
    const auto m = uniform(1, 24);
    const auto res = random_residues(m, uniform(1, 5) / 10.0);
    const auto A = periodic1(m, res);
    ++cases;
    try {
      const auto out = greedy_translates(kZ, A);
      verify_cover(kZ, A, out);
      std::vector<std::int64_t> B;
      for (const auto& b : out.B) B.push_back(testing::mod(std::get<IntVec>(b)[0], m));
      const auto D = testing::diff_mod(res, m);
      const auto op = [m](std::int64_t a, std::int64_t b, bool sub) { return testing::mod(sub ? a - b : a + b, m); };
      const auto delta = delta_density(kZ, counting(A)).value().value();
      const auto bound = (Rational(1) / delta).floor().to_int64();
      if (delta != Rational(static_cast<std::int64_t>(res.size()), m) || !check_cover_indices(D, B, m, op) ||
          static_cast<std::int64_t>(B.size()) > bound)
        ++bad;
    } catch (const Error&) {
      ++bad;
    }
  }
  for (const auto& moduli : all_groups_up_to(8)) {
    const GroupSpec g = FiniteAbelian{moduli};
    const auto n = *order(g);
    const auto op = [&moduli](std::int64_t a, std::int64_t b, bool sub) { return add_index(a, b, moduli, sub); };
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      ++cases;
      const auto A = DiscreteSet(make_explicit(g, subset_elements(mask, moduli, n)));
      try {
        const auto out = greedy_translates(g, A);
        verify_cover(g, A, out);
        std::set<std::int64_t> D;
        for (std::int64_t a = 0; a < n; ++a) {
          for (std::int64_t b = 0; b < n; ++b) {
            if (((mask >> a) & 1u) && ((mask >> b) & 1u)) D.insert(op(a, b, true));
          }
        }
        std::vector<std::int64_t> B;
        for (const auto& b : out.B) B.push_back(lex_index(std::get<IntVec>(b), moduli));
        const auto bound = n / __builtin_popcount(mask);
        if (!check_cover_indices(D, B, n, op) || static_cast<std::int64_t>(B.size()) > bound) ++bad;
      } catch (const Error&) {
        ++bad;
      }
    }
  }
  const auto three = greedy_translates(kZ, periodic1(3, {0}));
  const bool exact = three.B == std::vector<Element>{IntVec{0}, IntVec{1}, IntVec{2}};
  std::ostringstream d;
  d << cases << " sets, " << bad << " violations, 3Z gives B = {";
  for (std::size_t i = 0; i < three.B.size(); ++i) d << (i ? "," : "") << to_string(three.B[i]);
  d << "}";
  return {4, bad == 0 && exact, d.str()};
}

Line criterion5() {
  std::int64_t verified = 0, attempts = 0, violations = 0;
  while (verified < 10000 && attempts < 100000) {
    ++attempts;
    if (attempts % 2) {
      const auto S = random_config();
      const auto gap = min_gap(S);
      // H inside [0, 6/5 gap] so that some draws break the packing condition.
      const Rational span = gap * Rational(6, 5);
      std::vector<Interval> parts;
      for (int j = uniform(1, 3); j > 0; --j) {
        auto a = uniform(0, 60), b = uniform(0, 60);
        if (a > b) std::swap(a, b);
        parts.push_back({span * Rational(a, 60), span * Rational(b, 60)});
      }
      const IntervalUnion H(parts);
      if (find_packing_violation(kR, S, H)) continue;
      ++verified;
      const Rational rho(static_cast<std::int64_t>(S.offsets().size()));
      try {
        const auto v = packing_bound_check(kR, S, H);
        if (v.rho != rho / S.period() || H.length() > S.period() / rho) ++violations;
      } catch (const Error&) {
        ++violations;
      }
    } else {
      const auto m = uniform(2, 12);
      const GroupSpec g = FiniteAbelian{{m}};
      std::vector<Element> s, h{IntVec{0}};
      for (auto r : random_residues(m, 0.3)) s.push_back(IntVec{r});
      for (auto r : random_residues(m, 0.2)) h.push_back(IntVec{r});
      const auto S = DiscreteSet(make_explicit(g, s));
      const auto H = make_explicit(g, h);
      if (find_packing_violation(g, S, H)) continue;
      ++verified;
      try {
        const auto v = packing_bound_check(g, S, H);
        if (Rational(static_cast<std::int64_t>(H.elements.size())) * Rational(static_cast<std::int64_t>(s.size())) >
                Rational(m) ||
            v.mu_H > Rational(1) / v.rho)
          ++violations;
      } catch (const Error&) {
        ++violations;
      }
    }
  }
  const auto even = lattice(Rational(2), {Rational(0)});
  bool boundary = false, rejected = false;
  try {
    packing_bound_check(kR, even, IntervalUnion::closed(0, Rational(2) - Rational(1, 1000000)));
    boundary = true;
  } catch (const Error&) {
  }
  try {
    packing_bound_check(kR, even, IntervalUnion::closed(0, 2));
  } catch (const PreconditionError& e) {
    rejected = std::string(e.what()).find("packing") != std::string::npos;
  }
  std::ostringstream d;
  d << verified << " packed pairs (" << attempts << " drawn), " << violations << " violations, boundary "
    << (boundary ? "passes" : "FAILS") << ", H=[0,2] " << (rejected ? "rejected" : "NOT rejected");
  return {5, verified == 10000 && violations == 0 && boundary && rejected, d.str()};
}

// Every class avoids (H - H) \ {0} and the classes partition S, checked on
// [-W, W] by direct point lists.
bool partition_ok(const PointConfig& S, const PartitionResult& p, const Rational& W) {
  const auto HH = difference_set(std::get<IntervalUnion>(p.H)).set;
  std::multiset<Rational> joined;
  for (const auto& c : p.classes) {
    const auto pts = points_within(std::get<PointConfig>(c), -W, W);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      joined.insert(pts[i]);
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        if (HH.contains(pts[j] - pts[i])) return false;
      }
    }
  }
  const auto all = points_within(S, -W, W);
  return joined == std::multiset<Rational>(all.begin(), all.end());
}

Line criterion6() {
  int runs = 0, bad = 0;
  std::string named;
  const auto mixed = lattice(Rational(1), {Rational(0), Rational(1, 3)});
  {
    const auto p = partition_by_coloring(kR, mixed, IntervalUnion::closed(0, Rational(2, 5)));
    ++runs;
    if (p.n != 2 || !partition_ok(mixed, p, Rational(20))) ++bad;
    named += "Z u (Z+1/3): " + std::to_string(p.n) + " classes";
  }
  {
    std::vector<Rational> pts;
    for (int n = 2; n <= 50; ++n) {
      pts.push_back(Rational(n));
      pts.push_back(Rational(n) + Rational(1, n));
    }
    const auto S = finite_points(pts);
    const auto p = partition_by_coloring(kR, S, IntervalUnion::closed(0, Rational(1, 4)));
    ++runs;
    if (p.n != 2 || !partition_ok(S, p, Rational(60))) ++bad;
    named += ", truncated n+1/n: " + std::to_string(p.n) + " classes";
  }
  for (int i = 0; i < 60; ++i) {
    const auto S = random_config();
    const auto L = S.period() * Rational(uniform(1, 24), 12);
    try {
      const auto p = partition_by_coloring(kR, S, IntervalUnion::closed(0, L));
      ++runs;
      if (!partition_ok(S, p, S.period() * Rational(3) + L * Rational(4))) ++bad;
    } catch (const Error&) {
      ++bad;
    }
  }
  int auto_runs = 0, auto_bad = 0;
  for (int i = 0; i < 20; ++i) {
    const auto S = i == 0 ? mixed : random_config();
    try {
      const auto a = auto_H(S, Rational(1, 2));
      const auto p = partition_by_coloring(kR, S, a.H);
      ++auto_runs;
      const Rational rho(static_cast<std::int64_t>(S.offsets().size()), 1);
      const Rational bound = Rational(3, 2) * (rho / S.period()) * Rational(2) * a.L;
      if (Rational(p.n) > bound || !partition_ok(S, p, a.L * Rational(3))) ++auto_bad;
    } catch (const Error& e) {
      ++auto_bad;
    }
  }
  std::ostringstream d;
  d << named << "; " << runs << " partitions, " << bad << " failed; auto_H(1/2) " << auto_runs << " runs, " << auto_bad
    << " over n <= (3/2) rho mu(H-H)";
  return {6, bad == 0 && auto_bad == 0 && auto_runs == 20, d.str()};
}

Line criterion7() {
  int finite = 0, periodic = 0, violations = 0;
  const std::vector<IntVec> groups{{2}, {3}, {4}, {2, 2}, {5}, {6}, {2, 3}, {7}, {8}, {2, 4}, {2, 2, 2}, {9}, {3, 3},
                                   {10}, {12}, {2, 6}};
  for (int i = 0; i < 1000; ++i) {
    const auto& moduli = groups[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(groups.size()) - 1))];
    const GroupSpec g = FiniteAbelian{moduli};
    const auto n = *order(g);
    const auto parts_n = uniform(1, 4);
    std::vector<std::vector<Element>> parts(static_cast<std::size_t>(parts_n));
    std::vector<Element> all;
    for (std::int64_t x = 0; x < n; ++x) {
      if (uniform(0, 2) == 0) continue;
      parts[static_cast<std::size_t>(uniform(0, parts_n - 1))].push_back(lex_element(x, moduli));
      all.push_back(lex_element(x, moduli));
    }
    std::vector<MeasureSpec> nus;
    for (auto& p : parts) nus.push_back(counting(DiscreteSet(make_explicit(g, p))));
    try {
      const auto v = subadditivity_check(g, nus);
      const auto whole = kahane_density(g, counting(DiscreteSet(make_explicit(g, all)))).value();
      if (!v.holds || whole > v.sum_of_parts || whole != v.total.value() ||
          whole != ExtRational(Rational(static_cast<std::int64_t>(all.size()), n)))
        ++violations;
      ++finite;
    } catch (const Error&) {
      ++violations;
    }
  }
  for (int i = 0; i < 100; ++i) {
    const auto m = uniform(1, 12), k = uniform(1, 3);
    const auto res = random_residues(m, 0.5);
    const auto parts_n = uniform(1, 3);
    std::vector<std::vector<std::int64_t>> parts(static_cast<std::size_t>(parts_n));
    for (std::int64_t j = 0; j < k; ++j) {
      for (auto r : res) parts[static_cast<std::size_t>(uniform(0, parts_n - 1))].push_back(r + j * m);
    }
    std::vector<MeasureSpec> nus;
    for (auto& p : parts) {
      nus.push_back(p.empty() ? counting(DiscreteSet(ExplicitFinite{})) : counting(periodic1(m * k, p)));
    }
    try {
      const auto v = subadditivity_check(kZ, nus);
      const auto whole = kahane_density(kZ, counting(periodic1(m, res))).value();
      if (!v.holds || whole > v.sum_of_parts || whole != v.total.value()) ++violations;
      ++periodic;
    } catch (const Error&) {
      ++violations;
    }
  }
  std::ostringstream d;
  d << finite << " finite-group and " << periodic << " periodic partitions, " << violations << " violations";
  return {7, finite == 1000 && periodic == 100 && violations == 0, d.str()};
}

Line criterion8() {
  const auto Delta = delta_density(kR, dirac_at_zero());
  bool at_eta = false;
  Rational best;
  if (Delta.witness) {
    for (const auto& [eta, bound] : Delta.witness->eta_schedule) {
      if (eta == Rational(1, 1000000) && bound >= ExtRational(Rational(1000000))) at_eta = true;
      if (!bound.is_infinite()) best = max(best, bound.value());
    }
  }
  const auto profile = window_density_profile(kR, dirac_at_zero(), IntervalShape{}, {Rational(1000000)});
  const auto D = kahane_density(kR, dirac_at_zero());
  std::ostringstream sink;
  const int demo = cli::run({"demo", "totik"}, sink, sink);
  const bool ok = Delta.is_infinite() && at_eta && best > Rational(1000000) &&
                  profile[0].ratio <= ExtRational(Rational(1, 1000000)) && D.value() == ExtRational(0) && demo == 0;
  std::ostringstream d;
  d << "Delta lower bound " << best << " (eta schedule to 1e-7), D profile at r=1e6 " << profile[0].ratio << ", D = "
    << D.value() << ", demo exit " << demo;
  return {8, ok, d.str()};
}

// (S_j - S_j) + T covers [0, P] by direct interval arithmetic.
bool covers_period(const PointConfig& Sj, const IntervalUnion& T) {
  const Rational P = Sj.period();
  const auto& off = Sj.offsets();
  IntervalUnion acc;
  for (const auto& a : off) {
    for (const auto& b : off) {
      const Rational d = mod(a - b, P);
      const auto lo = ((Rational(0) - T.max() - d) / P).floor().to_int64() - 1;
      const auto hi = ((P - T.min() - d) / P).ceil().to_int64() + 1;
      for (auto k = lo; k <= hi; ++k) acc = unite(acc, T.shifted(d + P * Rational(k)));
    }
  }
  return gaps(acc, Rational(0), P).empty();
}

Line criterion9() {
  std::vector<PointConfig> configs{lattice(Rational(1), {Rational(0)}), lattice(Rational(2), {Rational(0)}),
                                   lattice(Rational(1), {Rational(0), Rational(1, 3)})};
  while (configs.size() < 20) configs.push_back(random_config());
  int covered = 0, literal = 0, corrected = 0, translate = 0, errors = 0;
  std::ostringstream rows;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    try {
      const auto r = syndetic_pipeline(configs[i], Rational(1, 2));
      const auto& Sj = std::get<PointConfig>(r.partition.classes[r.selected]);
      if (r.covering.verified && covers_period(Sj, r.T)) ++covered;
      literal += r.remark_holds ? 1 : 0;
      corrected += r.corrected_holds ? 1 : 0;
      translate += r.translate_bound_holds ? 1 : 0;
      if (i < 3) {
        rows << "\n      " << describe(configs[i]) << ": L=" << r.auto_h->L << " n=" << r.partition.n
             << " #B=" << r.cover.B.size() << " mu(T)=" << r.mu_T << " literal " << r.remark_bound
             << " corrected " << r.corrected_bound;
      }
    } catch (const Error& e) {
      ++errors;
      rows << "\n      error on " << describe(configs[i]) << ": " << e.what();
    }
  }
  std::ostringstream sink;
  const int acc = cli::run({"demo", "accumulation"}, sink, sink);
  std::ostringstream err;
  std::string path = DENSITY_LAB_SOURCE_DIR;
  path += "/instances/accumulation.json";
  const int rejected = cli::run({"pipeline", "--instance", path}, sink, err);
  std::ostringstream d;
  d << "cover verified " << covered << "/20, mu(T) <= (1+eps)mu(H-H)/mu(H) " << literal << "/20, mu(T) <= #B mu(H-H) "
    << translate << "/20, mu(T) <= (1+eps)mu(H-H)^2/mu(H) " << corrected << "/20, accumulation exit " << rejected
    << " (demo " << acc << ")" << rows.str();
  return {9, covered == 20 && literal == 20 && errors == 0 && rejected == cli::kPrecondition && acc == 0, d.str()};
}

Line criterion10() {
  int bad = 0;
  std::int64_t worst_slack = -1;
  for (int i = 0; i < 100; ++i) {
    const auto m = uniform(1, 24);
    const auto res = random_residues(m, uniform(1, 5) / 10.0);
    const auto A = periodic1(m, res);
    const auto out = greedy_translates(kZ, A);
    std::int64_t maxB = 0;
    for (const auto& b : out.B) {
      const auto v = std::get<IntVec>(b)[0];
      if (v < 0) ++bad;
      maxB = std::max(maxB, v);
    }
    // Max gap of D ∩ ℕ from residue arithmetic over three periods.
    const auto D = testing::diff_mod(res, m);
    std::int64_t prev = 0, gap = 0;
    for (std::int64_t x = 1; x <= 3 * m; ++x) {
      if (D.count(testing::mod(x, m))) {
        if (prev > 0) gap = std::max(gap, x - prev);
        prev = x;
      }
    }
    const auto report = gap_analysis(kZ, difference_set(kZ, A).set);
    if (report.max_gap != gap || gap - 1 > maxB) ++bad;
    worst_slack = std::max(worst_slack, gap - 1 - maxB);
  }
  std::ostringstream d;
  d << "100 sets, " << bad << " violations, max(gap - 1 - max B) = " << worst_slack;
  return {10, bad == 0, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::function<Line()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                    criterion6, criterion7, criterion8, criterion9, criterion10};
  int unexpected = 0, passed = 0;
  for (const auto& run : criteria) {
    const auto t0 = Clock::now();
    Line line;
    try {
      line = run();
    } catch (const std::exception& e) {
      line = {static_cast<int>(&run - criteria.data()) + 1, false, std::string("uncaught: ") + e.what()};
    }
    const bool known = kKnownFailures.count(line.id) > 0;
    std::printf("criterion %2d: %s  %s  [%.2f s]\n", line.id,
                line.pass ? "PASS" : (known ? "FAIL (known)" : "FAIL"), line.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (line.pass) ++passed;
    if (!line.pass && !known) ++unexpected;
  }
  std::printf("%d/%zu criteria pass, %d unexpected failures\n", passed, criteria.size(), unexpected);
  return unexpected == 0 ? 0 : 1;
}
