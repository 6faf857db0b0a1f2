#include "density_lab/structure.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "density_lab/detail/overloaded.hpp"
#include "density_lab/errors.hpp"
#include "density_lab/setops.hpp"
#include "engine.hpp"

namespace density_lab {

using detail::overloaded;

namespace {

constexpr std::int64_t kMaxCoverDomain = 1 << 16;
constexpr std::size_t kMaxColoringPoints = 1'000'000;

IntervalUnion points_union(const std::vector<Element>& pts) {
  std::vector<Interval> parts;
  for (const auto& e : pts) {
    const auto& q = std::get<Rational>(e);
    parts.push_back({q, q});
  }
  return IntervalUnion(std::move(parts));
}

std::variant<DiscreteSet, ChainSet> discrete_input(const CoverInput& A) {
  return std::visit(overloaded{
                        [](const DiscreteSet& d) -> std::variant<DiscreteSet, ChainSet> { return d; },
                        [](const ChainSet& c) -> std::variant<DiscreteSet, ChainSet> { return c; },
                        [](const PeriodicPattern&) -> std::variant<DiscreteSet, ChainSet> {
                          throw ShapeError("periodic patterns live on the real line");
                        },
                    },
                    A);
}

const PeriodicPattern& line_input(const GroupSpec& group, const CoverInput& A) {
  const auto* p = std::get_if<PeriodicPattern>(&A);
  if (!p) throw ShapeError("sets on R are periodic patterns here");
  if (!std::holds_alternative<RealLine>(group)) throw ShapeError("periodic patterns need the real line, got " + describe(group));
  return *p;
}

CoverResult greedy_discrete(const GroupSpec& group, const CoverInput& input) {
  const auto ts = detail::torus_of(group, discrete_input(input));
  const auto& T = ts.torus;
  const std::int64_t n = T.size();
  if (n > kMaxCoverDomain) throw CapExceeded("cover domain " + ts.domain + " exceeds " + std::to_string(kMaxCoverDomain) + " cells");
  std::vector<std::int64_t> a;
  for (std::int64_t i = 0; i < n; ++i) {
    if (ts.member[static_cast<std::size_t>(i)]) a.push_back(i);
  }
  if (a.empty()) throw PreconditionError("A is empty, so it has no translates to pack");
  std::vector<char> D(static_cast<std::size_t>(n), 0);
  for (const auto x : a) {
    for (const auto y : a) D[static_cast<std::size_t>(T.sub(x, y))] = 1;
  }
  CoverResult out;
  out.domain = ts.domain;
  out.density = Rational(static_cast<long long>(a.size()), n);
  out.size_bound = n / static_cast<std::int64_t>(a.size());
  std::vector<std::int64_t> B;
  for (std::int64_t c = 0; c < n; ++c) {
    std::optional<std::int64_t> blocker;
    for (const auto b : B) {
      if (D[static_cast<std::size_t>(T.sub(c, b))]) {
        blocker = b;
        break;
      }
    }
    if (!blocker) {
      B.push_back(c);
    } else {
      out.maximality.push_back({T.lift(c), T.lift(*blocker), T.lift(T.sub(c, *blocker))});
    }
  }
  for (const auto b : B) out.B.push_back(T.lift(b));
  out.verified_packing = true;
  for (const auto b : B) {
    for (const auto b2 : B) {
      if (b != b2 && D[static_cast<std::size_t>(T.sub(b, b2))]) out.verified_packing = false;
    }
  }
  out.verified_cover = true;
  for (std::int64_t c = 0; c < n && out.verified_cover; ++c) {
    out.verified_cover = std::any_of(B.begin(), B.end(), [&](auto b) { return D[static_cast<std::size_t>(T.sub(c, b))] != 0; });
  }
  return out;
}

CoverResult greedy_line(const PeriodicPattern& A) {
  if (A.density().is_zero()) throw PreconditionError("A has zero density, so no finite B covers");
  const Rational& p = A.period();
  const PeriodicPattern D = difference_set(A);
  CoverResult out;
  out.domain = "[0, " + p.str() + ")";
  out.density = A.density();
  out.size_bound = (Rational(1) / out.density).floor().to_int64();
  std::vector<Element> B{Element(Rational(0))};
  for (std::int64_t it = 0;; ++it) {
    if (static_cast<std::int64_t>(B.size()) > out.size_bound) {
      throw VerificationError("greedy translates exceeded the size bound " + std::to_string(out.size_bound),
                              "B = " + points_union(B).str());
    }
    const PeriodicPattern covered = minkowski_sum(D, points_union(B));
    const auto g = gaps(covered.pattern(), Rational(0), p);
    if (g.empty()) break;
    const Rational m = (g.front().lo + g.front().hi) / 2;
    B.push_back(Element(m));
  }
  out.B = B;
  for (const auto& e : B) {
    const auto& b = std::get<Rational>(e);
    const IntervalUnion pieces = D.shifted(b).materialize(Rational(0), p);
    for (const auto& piece : pieces.parts()) out.line_maximality.push_back({piece, b});
  }
  out.verified_packing = true;
  for (const auto& x : B) {
    for (const auto& y : B) {
      if (x != y && D.contains(std::get<Rational>(x) - std::get<Rational>(y))) out.verified_packing = false;
    }
  }
  out.verified_cover = minkowski_sum(D, points_union(B)).covers_line();
  return out;
}

}  // namespace

CoverResult greedy_translates(const GroupSpec& group, const CoverInput& A) {
  if (std::holds_alternative<PeriodicPattern>(A)) return greedy_line(line_input(group, A));
  if (std::holds_alternative<RealLine>(group)) throw ShapeError("sets on R are periodic patterns here");
  return greedy_discrete(group, A);
}

void verify_cover(const GroupSpec& group, const CoverInput& A, const CoverResult& result) {
  if (static_cast<std::int64_t>(result.B.size()) > result.size_bound) {
    throw VerificationError("#B exceeds the size bound", std::to_string(result.B.size()) + " > " + std::to_string(result.size_bound));
  }
  if (std::holds_alternative<PeriodicPattern>(A)) {
    const auto& a = line_input(group, A);
    const PeriodicPattern D = difference_set(a);
    if (Rational(static_cast<long long>(result.B.size())) * a.density() > Rational(1)) {
      throw VerificationError("translates of A overlap in measure", "#B |A| > period");
    }
    for (const auto& x : result.B) {
      for (const auto& y : result.B) {
        const Rational d = std::get<Rational>(x) - std::get<Rational>(y);
        if (x != y && D.contains(d)) throw VerificationError("packing fails", to_string(x) + " - " + to_string(y) + " = " + d.str() + " lies in A - A");
      }
    }
    const PeriodicPattern sum = minkowski_sum(D, points_union(result.B));
    if (!sum.covers_line()) {
      const auto g = gaps(sum.pattern(), Rational(0), sum.period());
      throw VerificationError("A - A + B does not cover R", "uncovered point " + ((g.front().lo + g.front().hi) / 2).str());
    }
    std::vector<Interval> pieces;
    for (const auto& lb : result.line_maximality) {
      if (!D.materialize(lb.piece.lo - lb.blocker, lb.piece.hi - lb.blocker).contains(Interval{lb.piece.lo - lb.blocker, lb.piece.hi - lb.blocker})) {
        throw VerificationError("maximality witness is wrong", "[" + lb.piece.lo.str() + ", " + lb.piece.hi.str() + "] - " + lb.blocker.str());
      }
      pieces.push_back(lb.piece);
    }
    if (!IntervalUnion(std::move(pieces)).contains(Interval{Rational(0), a.period()})) {
      throw VerificationError("maximality witness does not cover the domain", result.domain);
    }
    return;
  }
  const auto ts = detail::torus_of(group, discrete_input(A));
  const auto& T = ts.torus;
  std::vector<Element> members;
  for (std::int64_t i = 0; i < T.size(); ++i) {
    if (ts.member[static_cast<std::size_t>(i)]) members.push_back(T.lift(i));
  }
  std::vector<char> D(static_cast<std::size_t>(T.size()), 0);
  for (const auto& x : members) {
    for (const auto& y : members) D[static_cast<std::size_t>(T.index(std::get<IntVec>(subtract(x, y, group))))] = 1;
  }
  auto in_D = [&](const Element& g) { return D[static_cast<std::size_t>(T.index(std::get<IntVec>(g)))] != 0; };
  std::vector<char> inB(static_cast<std::size_t>(T.size()), 0);
  for (const auto& x : result.B) {
    inB[static_cast<std::size_t>(T.index(std::get<IntVec>(x)))] = 1;
    for (const auto& y : result.B) {
      if (x != y && in_D(subtract(x, y, group))) throw VerificationError("packing fails", to_string(x) + " - " + to_string(y) + " lies in A - A");
    }
  }
  for (std::int64_t i = 0; i < T.size(); ++i) {
    const Element c = T.lift(i);
    const bool hit = std::any_of(result.B.begin(), result.B.end(), [&](const Element& b) { return in_D(subtract(c, b, group)); });
    if (!hit) throw VerificationError("A - A + B does not cover the group", "uncovered " + to_string(c));
  }
  std::vector<char> blocked(static_cast<std::size_t>(T.size()), 0);
  for (const auto& w : result.maximality) {
    if (!inB[static_cast<std::size_t>(T.index(std::get<IntVec>(w.blocker)))] ||
        subtract(w.candidate, w.blocker, group) != normalize(w.difference, group) || !in_D(w.difference) ||
        w.difference == zero(group)) {
      throw VerificationError("maximality witness is wrong", to_string(w.candidate));
    }
    blocked[static_cast<std::size_t>(T.index(std::get<IntVec>(w.candidate)))] = 1;
  }
  for (std::int64_t i = 0; i < T.size(); ++i) {
    if (!inB[static_cast<std::size_t>(i)] && !blocked[static_cast<std::size_t>(i)]) {
      throw VerificationError("B is not shown maximal", "no witness for " + to_string(T.lift(i)));
    }
  }
}

namespace {

Rational line_diameter(const IntervalUnion& H) {
  if (H.empty()) throw PreconditionError("H is empty");
  return H.diameter();
}

const IntervalUnion& line_H(const CompactSet& H) {
  const auto* u = std::get_if<IntervalUnion>(&H);
  if (!u) throw ShapeError("H on R is a finite union of intervals");
  return *u;
}

const ExplicitFinite& discrete_H(const CompactSet& H) {
  const auto* f = std::get_if<ExplicitFinite>(&H);
  if (!f) throw ShapeError("H on a discrete group is a finite set");
  if (f->elements.empty()) throw PreconditionError("H is empty");
  return *f;
}

const PointConfig& line_S(const PointSet& S) {
  const auto* c = std::get_if<PointConfig>(&S);
  if (!c) throw ShapeError("S on R is a point configuration");
  if (const auto* l = std::get_if<PerturbedLattice>(&c->body); l && !l->removed.empty()) {
    throw PreconditionError("difference sets of lattices with removed points are not supported: " + describe(*c));
  }
  return *c;
}

const DiscreteSet& discrete_S(const PointSet& S) {
  const auto* d = std::get_if<DiscreteSet>(&S);
  if (!d) throw ShapeError("S on a discrete group is a discrete set");
  return *d;
}

void require_packing_group(const GroupSpec& group) {
  if (std::holds_alternative<SigmaFiniteChain>(group)) throw ShapeError("packing questions are posed on Z^d, finite groups or R");
}

std::vector<Element> nonzero_differences(const GroupSpec& group, const ExplicitFinite& H) {
  const auto diff = difference_set(group, DiscreteSet(H)).set;
  std::vector<Element> out;
  for (const auto& e : std::get<ExplicitFinite>(diff).elements) {
    if (e != zero(group)) out.push_back(e);
  }
  return out;
}

Rational exact_rho(const GroupSpec& group, const PointSet& S) {
  const DensityReport r = std::holds_alternative<RealLine>(group) ? counting_density(group, line_S(S))
                                                                  : kahane_density(group, counting(discrete_S(S)));
  if (!r.is_exact()) throw PreconditionError("density of S is " + r.summary() + "; an exact finite value is required");
  if (r.exact->is_zero()) throw PreconditionError("S has density 0");
  return *r.exact;
}

Rational measure_of(const CompactSet& H) {
  return std::visit(overloaded{
                        [](const IntervalUnion& u) { return u.length(); },
                        [](const ExplicitFinite& f) { return Rational(static_cast<long long>(f.elements.size())); },
                    },
                    H);
}

}  // namespace

std::optional<Element> find_packing_violation(const GroupSpec& group, const PointSet& S, const CompactSet& H) {
  require_packing_group(group);
  if (std::holds_alternative<RealLine>(group)) {
    const auto& h = line_H(H);
    const auto& s = line_S(S);
    const IntervalUnion hh = difference_set(h).set;
    const Rational delta = line_diameter(h);
    const auto diffs = difference_set(s, -delta, delta).set;
    std::optional<Rational> best;
    for (const auto& d : std::get<FinitePoints>(diffs.body).points) {
      if (d.is_zero() || !hh.contains(d)) continue;
      if (!best || d.abs() < best->abs() || (d.abs() == best->abs() && d.sign() > 0)) best = d;
    }
    if (best) return Element(*best);
    return std::nullopt;
  }
  const auto& s = discrete_S(S);
  const auto ss = difference_set(group, s).set;
  for (const auto& h : nonzero_differences(group, discrete_H(H))) {
    if (contains(group, ss, h)) return h;
  }
  return std::nullopt;
}

PackingVerdict packing_bound_check(const GroupSpec& group, const PointSet& S, const CompactSet& H) {
  if (const auto v = find_packing_violation(group, S, H)) {
    throw PreconditionError("packing condition fails: " + to_string(*v) + " lies in both (H - H) \\ {0} and S - S");
  }
  PackingVerdict out;
  out.rho = exact_rho(group, S);
  out.mu_H = measure_of(H);
  out.slack = Rational(1) / out.rho - out.mu_H;
  if (out.slack.sign() < 0) {
    throw VerificationError("packing bound mu(H) <= 1/rho fails", "mu(H) = " + out.mu_H.str() + ", 1/rho = " + (Rational(1) / out.rho).str());
  }
  return out;
}

FattenResult fatten(const PointConfig& S, const IntervalUnion& H) {
  if (!S.is_periodic()) throw PreconditionError("fattening needs a periodic configuration, got " + describe(S));
  const GroupSpec line = RealLine{};
  const auto verdict = packing_bound_check(line, S, H);
  std::vector<Interval> pts;
  for (const auto& o : S.offsets()) pts.push_back({o, o});
  FattenResult out{minkowski_sum(PeriodicPattern(S.period(), IntervalUnion(std::move(pts))), H), verdict.rho, verdict.mu_H,
                   verdict.rho * verdict.mu_H, Rational(0)};
  out.measured = out.A.density();
  if (out.measured < out.bound) {
    throw VerificationError("density of S + H is below rho mu(H)", out.measured.str() + " < " + out.bound.str());
  }
  return out;
}

namespace {

std::vector<int> first_fit(std::size_t n, const std::function<void(std::size_t, std::vector<int>&)>& earlier_neighbors) {
  std::vector<int> color(n, -1);
  std::vector<int> seen;
  std::vector<char> used;
  for (std::size_t i = 0; i < n; ++i) {
    seen.clear();
    earlier_neighbors(i, seen);
    used.assign(seen.size() + 1, 0);
    for (const int j : seen) {
      const int c = color[static_cast<std::size_t>(j)];
      if (c >= 0 && static_cast<std::size_t>(c) < used.size()) used[static_cast<std::size_t>(c)] = 1;
    }
    int c = 0;
    while (used[static_cast<std::size_t>(c)]) ++c;
    color[i] = c;
  }
  return color;
}

PartitionResult partition_line(const PointConfig& S, const IntervalUnion& H) {
  if (S.has_accumulation || std::holds_alternative<HarmonicSequence>(S.body)) {
    throw PreconditionError("S accumulates, so (H - H) meets S - S for every H of positive measure");
  }
  const IntervalUnion hh = difference_set(H).set;
  const Rational delta = line_diameter(H);
  PartitionResult out;
  out.H = H;
  if (S.is_periodic()) {
    const Rational& p = S.period();
    const auto& offs = S.offsets();
    const std::int64_t M = (delta / p).floor().to_int64() + 1;
    const Rational cycle = p * Rational(M);
    if (offs.size() * static_cast<std::size_t>(M) > kMaxColoringPoints) throw CapExceeded("coloring cycle too large");
    out.cycle_periods = M;
    std::vector<Rational> u;
    for (std::int64_t j = 0; j < M; ++j) {
      for (const auto& o : offs) u.push_back(o + p * Rational(j));
    }
    const auto color = first_fit(u.size(), [&](std::size_t i, std::vector<int>& nb) {
      for (std::size_t j = i; j-- > 0 && u[i] - u[j] <= delta;) {
        if (hh.contains(u[i] - u[j])) nb.push_back(static_cast<int>(j));
      }
      for (std::size_t j = 0; j < i && u[j] <= u[i] - cycle + delta; ++j) {
        if (hh.contains(u[i] - u[j] - cycle)) nb.push_back(static_cast<int>(j));
      }
    });
    const int n = *std::max_element(color.begin(), color.end()) + 1;
    std::vector<std::vector<Rational>> cls(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < u.size(); ++i) cls[static_cast<std::size_t>(color[i])].push_back(u[i]);
    for (auto& c : cls) out.classes.push_back(lattice(cycle, std::move(c)));
    const detail::LineMeasure nu(counting(S));
    for (const auto& o : offs) out.k_bound = std::max(out.k_bound, nu.mass(hh, o).value().to_int64());
  } else {
    const auto* f = std::get_if<FinitePoints>(&S.body);
    if (!f) throw PreconditionError("partition needs a periodic or finite configuration, got " + describe(S));
    const auto& u = f->points;
    const auto color = first_fit(u.size(), [&](std::size_t i, std::vector<int>& nb) {
      for (std::size_t j = i; j-- > 0 && u[i] - u[j] <= delta;) {
        if (hh.contains(u[i] - u[j])) nb.push_back(static_cast<int>(j));
      }
    });
    const int n = color.empty() ? 0 : *std::max_element(color.begin(), color.end()) + 1;
    std::vector<std::vector<Rational>> cls(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < u.size(); ++i) cls[static_cast<std::size_t>(color[i])].push_back(u[i]);
    for (auto& c : cls) out.classes.push_back(finite_points(std::move(c)));
    for (const auto& s : u) {
      std::int64_t k = 0;
      for (const auto& piece : hh.parts()) {
        const auto lo = std::lower_bound(u.begin(), u.end(), s + piece.lo);
        const auto hi = std::upper_bound(u.begin(), u.end(), s + piece.hi);
        k += hi - lo;
      }
      out.k_bound = std::max(out.k_bound, k);
    }
  }
  out.n = static_cast<std::int64_t>(out.classes.size());
  const GroupSpec line = RealLine{};
  for (const auto& c : out.classes) out.densities.push_back(counting_density(line, std::get<PointConfig>(c)));
  return out;
}

PartitionResult partition_discrete(const GroupSpec& group, const DiscreteSet& S, const ExplicitFinite& H) {
  const auto hh = nonzero_differences(group, H);
  PartitionResult out;
  out.H = H;
  std::vector<std::vector<IntVec>> cls;
  std::vector<IntVec> pts;
  std::vector<int> color;
  if (const auto* per = std::get_if<PeriodicDiscrete>(&S); per || std::holds_alternative<FiniteAbelian>(group)) {
    IntVec big;
    detail::Torus small;
    std::vector<IntVec> residues;
    if (const auto* fa = std::get_if<FiniteAbelian>(&group)) {
      big = fa->moduli;
      for (const auto& e : std::get<ExplicitFinite>(S).elements) residues.push_back(std::get<IntVec>(e));
    } else {
      const auto d = per->period.size();
      big.resize(d);
      for (std::size_t i = 0; i < d; ++i) {
        std::int64_t lo = 0, hi = 0;
        bool first = true;
        for (const auto& e : H.elements) {
          const auto v = std::get<IntVec>(e)[i];
          lo = first ? v : std::min(lo, v);
          hi = first ? v : std::max(hi, v);
          first = false;
        }
        const std::int64_t M = (hi - lo) / per->period[i] + 1;
        out.cycle_periods *= M;
        big[i] = M * per->period[i];
      }
      for (const auto& cell : BoxDomain{big}.cells()) {
        if (std::binary_search(per->residues.begin(), per->residues.end(), reduce_mod(cell, per->period))) residues.push_back(cell);
      }
    }
    const detail::Torus T{big};
    if (T.size() > static_cast<std::int64_t>(kMaxColoringPoints)) throw CapExceeded("coloring torus too large");
    std::vector<int> at(static_cast<std::size_t>(T.size()), -1);
    std::sort(residues.begin(), residues.end(), [&](const IntVec& a, const IntVec& b) { return T.index(a) < T.index(b); });
    for (std::size_t i = 0; i < residues.size(); ++i) at[static_cast<std::size_t>(T.index(residues[i]))] = static_cast<int>(i);
    std::vector<std::int64_t> hidx;
    for (const auto& h : hh) hidx.push_back(T.index(std::get<IntVec>(h)));
    color = first_fit(residues.size(), [&](std::size_t i, std::vector<int>& nb) {
      const auto ui = T.index(residues[i]);
      for (const auto h : hidx) {
        const int j = at[static_cast<std::size_t>(T.sub(ui, h))];
        if (j >= 0 && static_cast<std::size_t>(j) < i) nb.push_back(j);
      }
    });
    pts = residues;
    const int n = color.empty() ? 0 : *std::max_element(color.begin(), color.end()) + 1;
    cls.resize(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < pts.size(); ++i) cls[static_cast<std::size_t>(color[i])].push_back(pts[i]);
    for (auto& c : cls) {
      if (std::holds_alternative<FiniteAbelian>(group)) {
        std::vector<Element> es(c.begin(), c.end());
        out.classes.push_back(DiscreteSet(make_explicit(group, std::move(es))));
      } else {
        out.classes.push_back(DiscreteSet(make_periodic(big, std::move(c))));
      }
    }
    for (std::size_t i = 0; i < residues.size(); ++i) {
      std::int64_t k = 1;
      for (const auto h : hidx) k += at[static_cast<std::size_t>(T.add(T.index(residues[i]), h))] >= 0;
      out.k_bound = std::max(out.k_bound, k);
    }
  } else {
    const auto& e = std::get<ExplicitFinite>(S).elements;
    std::map<IntVec, int> at;
    for (std::size_t i = 0; i < e.size(); ++i) at.emplace(std::get<IntVec>(e[i]), static_cast<int>(i));
    color = first_fit(e.size(), [&](std::size_t i, std::vector<int>& nb) {
      for (const auto& h : hh) {
        const auto it = at.find(std::get<IntVec>(subtract(e[i], h, group)));
        if (it != at.end() && static_cast<std::size_t>(it->second) < i) nb.push_back(it->second);
      }
    });
    const int n = color.empty() ? 0 : *std::max_element(color.begin(), color.end()) + 1;
    std::vector<std::vector<Element>> ecls(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < e.size(); ++i) ecls[static_cast<std::size_t>(color[i])].push_back(e[i]);
    for (auto& c : ecls) out.classes.push_back(DiscreteSet(make_explicit(group, std::move(c))));
    for (const auto& x : e) {
      std::int64_t k = 1;
      for (const auto& h : hh) k += at.count(std::get<IntVec>(add(x, h, group))) > 0;
      out.k_bound = std::max(out.k_bound, k);
    }
  }
  out.n = static_cast<std::int64_t>(out.classes.size());
  for (const auto& c : out.classes) out.densities.push_back(kahane_density(group, counting(std::get<DiscreteSet>(c))));
  return out;
}

// Points of a periodic line configuration in [0, P).
std::vector<Rational> cycle_points(const PointConfig& c, const Rational& P) {
  std::vector<Rational> out;
  const std::int64_t copies = (P / c.period()).to_int64();
  for (std::int64_t j = 0; j < copies; ++j) {
    for (const auto& o : c.offsets()) out.push_back(o + c.period() * Rational(j));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

PartitionResult partition_by_coloring(const GroupSpec& group, const PointSet& S, const CompactSet& H) {
  require_packing_group(group);
  PartitionResult out = std::holds_alternative<RealLine>(group)
                            ? partition_line(line_S(S), line_H(H))
                            : partition_discrete(group, discrete_S(S), discrete_H(H));
  verify_partition(group, S, out);
  return out;
}

void verify_partition(const GroupSpec& group, const PointSet& S, const PartitionResult& result) {
  if (result.n != static_cast<std::int64_t>(result.classes.size())) throw VerificationError("class count mismatch", std::to_string(result.n));
  if (result.n > result.k_bound) {
    throw VerificationError("more classes than the local count bound", std::to_string(result.n) + " > " + std::to_string(result.k_bound));
  }
  for (std::size_t j = 0; j < result.classes.size(); ++j) {
    const PointSet cls = std::visit([](const auto& c) { return PointSet(c); }, result.classes[j]);
    if (const auto v = find_packing_violation(group, cls, result.H)) {
      throw VerificationError("class " + std::to_string(j) + " is not H-separated", to_string(*v) + " lies in (H - H) and S_j - S_j");
    }
  }
  if (std::holds_alternative<RealLine>(group)) {
    const auto& s = std::get<PointConfig>(S);
    std::vector<Rational> all, want;
    if (s.is_periodic()) {
      const Rational P = s.period() * Rational(result.cycle_periods);
      for (const auto& c : result.classes) {
        const auto& pc = std::get<PointConfig>(c);
        if (!pc.is_periodic() || pc.period() != P) throw VerificationError("class period differs from the coloring cycle", describe(pc));
        const auto pts = cycle_points(pc, P);
        all.insert(all.end(), pts.begin(), pts.end());
      }
      want = cycle_points(s, P);
    } else {
      for (const auto& c : result.classes) {
        const auto& pts = std::get<FinitePoints>(std::get<PointConfig>(c).body).points;
        all.insert(all.end(), pts.begin(), pts.end());
      }
      want = std::get<FinitePoints>(s.body).points;
    }
    std::sort(all.begin(), all.end());
    if (all != want) {
      std::vector<Rational> diff;
      std::set_symmetric_difference(all.begin(), all.end(), want.begin(), want.end(), std::back_inserter(diff));
      throw VerificationError("classes do not partition S", diff.empty() ? "a point is repeated" : "point " + diff.front().str());
    }
    return;
  }
  const auto& s = std::get<DiscreteSet>(S);
  std::vector<IntVec> all, want;
  if (const auto* per = std::get_if<PeriodicDiscrete>(&s); per && !std::holds_alternative<FiniteAbelian>(group)) {
    const auto& big = std::get<PeriodicDiscrete>(std::get<DiscreteSet>(result.classes.front())).period;
    for (const auto& c : result.classes) {
      const auto& pc = std::get<PeriodicDiscrete>(std::get<DiscreteSet>(c));
      if (pc.period != big) throw VerificationError("class period differs", to_string(pc.period));
      all.insert(all.end(), pc.residues.begin(), pc.residues.end());
    }
    for (const auto& cell : BoxDomain{big}.cells()) {
      if (contains(group, s, Element(cell))) want.push_back(cell);
    }
  } else {
    for (const auto& c : result.classes) {
      for (const auto& e : std::get<ExplicitFinite>(std::get<DiscreteSet>(c)).elements) all.push_back(std::get<IntVec>(e));
    }
    for (const auto& e : std::get<ExplicitFinite>(s).elements) want.push_back(std::get<IntVec>(e));
  }
  std::sort(all.begin(), all.end());
  std::sort(want.begin(), want.end());
  if (all != want) throw VerificationError("classes do not partition S", "union or disjointness fails");
}

AutoHResult auto_H(const PointConfig& S, const Rational& eps) {
  if (eps.sign() <= 0) throw PreconditionError("eps must be positive, got " + eps.str());
  if (S.has_accumulation || std::holds_alternative<HarmonicSequence>(S.body)) {
    throw PreconditionError("S accumulates, so its counting density is infinite");
  }
  if (!S.is_periodic()) {
    throw PreconditionError("choosing H needs the exact density of a periodic configuration; " + describe(S) +
                            " only has an estimated density");
  }
  if (S.empty()) throw PreconditionError("S is empty");
  AutoHResult out;
  out.eps = eps;
  const Rational& p = S.period();
  const auto& x = S.offsets();
  const std::size_t q = x.size();
  out.rho = Rational(static_cast<long long>(q)) / p;
  const Rational target = out.rho + eps / 2;
  // g[m-1]: least span of m consecutive points. Longer runs repeat these
  // spans shifted by whole periods and their ratios tend monotonically to rho.
  std::vector<Rational> g(q);
  for (std::size_t m = 1; m <= q; ++m) {
    std::optional<Rational> best;
    for (std::size_t i = 0; i < q; ++i) {
      const std::size_t j = i + m - 1;
      const Rational xj = x[j % q] + p * Rational(static_cast<long long>(j / q));
      if (!best || xj - x[i] < *best) best = xj - x[i];
    }
    g[m - 1] = *best;
  }
  auto c_ok = [&](const Rational& c) {
    for (std::size_t m = 1; m <= q; ++m) {
      if (!(Rational(static_cast<long long>(m)) < target * (g[m - 1] + c * 2))) return false;
    }
    return true;
  };
  out.c = Rational(1);
  while (!c_ok(out.c)) out.c *= 2;
  out.eta = (eps / 2) * out.rho / target;
  out.rudin = rudin_window(RealLine{}, BoundedSet(IntervalUnion::closed(-out.c, out.c)), out.eta);
  out.L = out.rudin.L;
  const detail::LineMeasure nu(counting(S));
  for (int tries = 0;; ++tries) {
    const IntervalUnion Q = IntervalUnion::closed(-out.L, out.L);
    out.k = 0;
    for (const auto& o : x) out.k = std::max(out.k, nu.mass(Q, o).value().to_int64());
    out.count_bound = (Rational(1) + eps) * out.rho * Q.length();
    if (Rational(out.k) <= out.count_bound) break;
    if (tries > 62) throw VerificationError("no window length met the local count bound", "last L = " + out.L.str());
    out.L *= 2;
    out.extra_doublings.push_back(out.L);
  }
  out.verified = true;
  out.H = IntervalUnion::closed(Rational(0), out.L);
  return out;
}

SubadditivityVerdict subadditivity_check(const GroupSpec& group, const std::vector<MeasureSpec>& measures,
                                         const EstimationSettings& settings) {
  if (measures.empty()) throw PreconditionError("no measures given");
  SubadditivityVerdict out;
  out.sum_of_parts = Rational(0);
  for (const auto& m : measures) {
    out.parts.push_back(kahane_density(group, m, settings));
    if (out.parts.back().kind == ValueKind::Estimated) {
      throw PreconditionError("density of " + describe(m) + " is only estimated: " + out.parts.back().summary());
    }
    out.sum_of_parts = out.sum_of_parts + out.parts.back().value();
  }
  out.total = kahane_density(group, measure_sum(measures), settings);
  if (out.total.kind == ValueKind::Estimated) throw PreconditionError("density of the sum is only estimated: " + out.total.summary());
  const ExtRational total = out.total.value();
  out.holds = total <= out.sum_of_parts;
  if (total.is_finite() && out.sum_of_parts.is_finite()) out.slack = out.sum_of_parts.value() - total.value();
  if (!out.holds) throw VerificationError("density of the sum exceeds the sum of densities", total.str() + " > " + out.sum_of_parts.str());
  return out;
}

PipelineResult syndetic_pipeline(const PointConfig& S, const Rational& eps, const std::optional<IntervalUnion>& H) {
  if (S.has_accumulation || std::holds_alternative<HarmonicSequence>(S.body)) {
    std::string at;
    if (const auto* h = std::get_if<HarmonicSequence>(&S.body)) at = " at " + h->center.str();
    if (S.accumulation_point) at = " at " + S.accumulation_point->str();
    throw PreconditionError("S accumulates" + at +
                            ", so its counting density is infinite; without finite density no finite B makes B + S - S "
                            "cover, and S - S need not be syndetic");
  }
  if (!S.is_periodic()) throw PreconditionError("the pipeline needs a periodic configuration, got " + describe(S));
  if (S.empty()) throw PreconditionError("S is empty");
  PipelineResult out;
  out.eps = eps;
  out.rho = Rational(static_cast<long long>(S.offsets().size())) / S.period();
  if (H) {
    out.H = *H;
  } else {
    out.auto_h = auto_H(S, eps);
    out.H = out.auto_h->H;
  }
  const Rational mu_H = out.H.length();
  if (mu_H.is_zero()) throw PreconditionError("H has measure 0");
  const GroupSpec line = RealLine{};
  out.partition = partition_by_coloring(line, S, out.H);
  std::optional<Rational> best;
  for (std::size_t j = 0; j < out.partition.densities.size(); ++j) {
    const auto& d = out.partition.densities[j];
    if (!d.is_exact()) throw VerificationError("class density is not exact", std::to_string(j));
    if (!best || *d.exact > *best) {
      best = *d.exact;
      out.selected = j;
    }
  }
  out.rho_j = *best;
  if (out.rho_j * Rational(out.partition.n) < out.rho) {
    throw VerificationError("selected class density is below rho/n", out.rho_j.str() + " < " + out.rho.str() + "/" + std::to_string(out.partition.n));
  }
  const auto& Sj = std::get<PointConfig>(out.partition.classes[out.selected]);
  out.fattened = fatten(Sj, out.H);
  out.cover = greedy_translates(line, out.fattened->A);
  verify_cover(line, out.fattened->A, out.cover);
  const IntervalUnion hh = difference_set(out.H).set;
  out.T = minkowski_sum(points_union(out.cover.B), hh);
  out.mu_T = out.T.length();
  std::vector<Rational> diffs;
  const Rational& P = Sj.period();
  for (const auto& a : Sj.offsets()) {
    for (const auto& b : Sj.offsets()) diffs.push_back(mod(a - b, P));
  }
  out.covering = syndetic_check(line, lattice(P, std::move(diffs)), TranslateSet(out.T));
  if (!out.covering.verified) {
    throw VerificationError("(S_j - S_j) + T does not cover R",
                            "uncovered " + (out.covering.counterexample ? to_string(*out.covering.counterexample) : std::string("?")));
  }
  const Rational mu_hh = hh.length();
  out.remark_bound = (Rational(1) + eps) * mu_hh / mu_H;
  out.remark_holds = out.mu_T <= out.remark_bound;
  out.translate_bound = Rational(static_cast<long long>(out.cover.B.size())) * mu_hh;
  out.translate_bound_holds = out.mu_T <= out.translate_bound;
  out.corrected_bound = (Rational(1) + eps) * mu_hh * mu_hh / mu_H;
  out.corrected_holds = out.mu_T <= out.corrected_bound;
  return out;
}

}  // namespace density_lab
