#include "density_lab/setops.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "density_lab/detail/overloaded.hpp"
#include "density_lab/errors.hpp"
#include "engine.hpp"

namespace density_lab {

using detail::overloaded;

namespace {

constexpr std::size_t kMaxPairs = 20'000'000;

const ZLattice& require_lattice(const GroupSpec& group, std::size_t dim) {
  const auto* z = std::get_if<ZLattice>(&group);
  if (!z) throw ShapeError("periodic sets need a Z^d group, got " + describe(group));
  if (static_cast<std::size_t>(z->dimension) != dim)
    throw ShapeError("periodic set of dimension " + std::to_string(dim) + " used on " + describe(group));
  return *z;
}

// Residues of `p` listed over the larger period `big` (a multiple of p.period).
std::vector<IntVec> expand(const PeriodicDiscrete& p, const IntVec& big) {
  std::vector<IntVec> out;
  IntVec copies(p.period.size());
  std::size_t total = p.residues.size();
  for (std::size_t i = 0; i < big.size(); ++i) {
    copies[i] = big[i] / p.period[i];
    total *= static_cast<std::size_t>(copies[i]);
    if (total > kMaxPairs) throw CapExceeded("common period box too large for exact sumset");
  }
  BoxDomain box{copies};
  for (const auto& r : p.residues) {
    for (const auto& k : box.cells()) {
      IntVec v(r.size());
      for (std::size_t i = 0; i < r.size(); ++i) v[i] = r[i] + k[i] * p.period[i];
      out.push_back(std::move(v));
    }
  }
  return out;
}

IntVec add_vec(const IntVec& a, const IntVec& b, int sign = 1) {
  IntVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + sign * b[i];
  return out;
}

void check_pairs(std::size_t a, std::size_t b) {
  if (a != 0 && b > kMaxPairs / a) throw CapExceeded("sumset needs more than " + std::to_string(kMaxPairs) + " pairs");
}

}  // namespace

DiscreteSet minkowski_sum(const GroupSpec& group, const DiscreteSet& a, const DiscreteSet& b) {
  if (const auto* pa = std::get_if<PeriodicDiscrete>(&a)) {
    require_lattice(group, pa->period.size());
    if (const auto* pb = std::get_if<PeriodicDiscrete>(&b)) {
      require_lattice(group, pb->period.size());
      IntVec L(pa->period.size());
      for (std::size_t i = 0; i < L.size(); ++i) L[i] = std::lcm(pa->period[i], pb->period[i]);
      const auto ra = expand(*pa, L);
      const auto rb = expand(*pb, L);
      check_pairs(ra.size(), rb.size());
      std::vector<IntVec> sums;
      sums.reserve(ra.size() * rb.size());
      for (const auto& x : ra) {
        for (const auto& y : rb) sums.push_back(add_vec(x, y));
      }
      return make_periodic(L, std::move(sums));
    }
    const auto& eb = std::get<ExplicitFinite>(b);
    check_pairs(pa->residues.size(), eb.elements.size());
    std::vector<IntVec> sums;
    for (const auto& r : pa->residues) {
      for (const auto& e : eb.elements) {
        const auto* v = std::get_if<IntVec>(&e);
        if (!v || v->size() != r.size()) throw ShapeError("element " + to_string(e) + " does not fit the periodic set");
        sums.push_back(add_vec(r, *v));
      }
    }
    return make_periodic(pa->period, std::move(sums));
  }
  if (std::holds_alternative<PeriodicDiscrete>(b)) return minkowski_sum(group, b, a);
  const auto& ea = std::get<ExplicitFinite>(a);
  const auto& eb = std::get<ExplicitFinite>(b);
  check_pairs(ea.elements.size(), eb.elements.size());
  std::vector<Element> sums;
  sums.reserve(ea.elements.size() * eb.elements.size());
  for (const auto& x : ea.elements) {
    for (const auto& y : eb.elements) sums.push_back(add(x, y, group));
  }
  return make_explicit(group, std::move(sums));
}

Flagged<DiscreteSet> difference_set(const GroupSpec& group, const DiscreteSet& s) {
  const bool empty = is_empty(s);
  if (const auto* p = std::get_if<PeriodicDiscrete>(&s)) {
    require_lattice(group, p->period.size());
    check_pairs(p->residues.size(), p->residues.size());
    std::vector<IntVec> diffs;
    for (const auto& x : p->residues) {
      for (const auto& y : p->residues) diffs.push_back(add_vec(x, y, -1));
    }
    return {make_periodic(p->period, std::move(diffs)), empty};
  }
  const auto& e = std::get<ExplicitFinite>(s);
  check_pairs(e.elements.size(), e.elements.size());
  std::vector<Element> diffs;
  for (const auto& x : e.elements) {
    for (const auto& y : e.elements) diffs.push_back(subtract(x, y, group));
  }
  return {make_explicit(group, std::move(diffs)), empty};
}

Flagged<IntervalUnion> difference_set(const IntervalUnion& s) {
  return {minkowski_sum(s, s.negated()), s.empty()};
}

Flagged<PointConfig> difference_set(const PointConfig& s, const Rational& lo, const Rational& hi) {
  std::vector<Rational> out;
  // Pairs (x, t) with x in xs, t in S and x - t in [lo, hi].
  auto against = [&](const std::vector<Rational>& xs, const PointConfig& others) {
    for (const auto& x : xs) {
      for (auto& t : points_within(others, x - hi, x - lo)) out.push_back(x - t);
      if (out.size() > kMaxPairs) throw CapExceeded("truncated difference set too large");
    }
  };
  std::visit(overloaded{
                 [&](const FinitePoints& f) { against(f.points, s); },
                 [&](const PerturbedLattice& l) {
                   for (const auto& a : l.offsets) {
                     for (const auto& b : l.offsets) {
                       const Rational base = a - b;
                       const Rational k0 = ((lo - base) / l.step).ceil();
                       const Rational k1 = ((hi - base) / l.step).floor();
                       if ((k1 - k0) > Rational(static_cast<long long>(kMaxPairs))) throw CapExceeded("truncated difference set too large");
                       for (Rational k = k0; k <= k1; k += 1) out.push_back(base + k * l.step);
                     }
                   }
                   if (!l.extra.empty()) {
                     // Extras against the whole configuration, and the reverse.
                     against(l.extra, s);
                     const auto hits = points_within(s, l.extra.front() + lo, l.extra.back() + hi);
                     for (const auto& x : hits) {
                       for (const auto& e : l.extra) {
                         const Rational d = x - e;
                         if (lo <= d && d <= hi) out.push_back(d);
                       }
                     }
                   }
                 },
                 [&](const HarmonicSequence&) {
                   throw PreconditionError("difference set of " + describe(s) + " accumulates in every window around 0");
                 },
             },
             s.body);
  PointConfig result = finite_points(std::move(out));
  if (s.has_accumulation) result = with_accumulation(std::move(result), Rational(0));
  return {std::move(result), s.empty()};
}

ExtRational window_mass(const GroupSpec& group, const MeasureSpec& measure, const Element& x, const Window& window) {
  validate(group, measure);
  return std::visit(
      overloaded{
          [&](const RealLine&) -> ExtRational {
            const auto* q = std::get_if<Rational>(&x);
            if (!q) throw ShapeError("center " + to_string(x) + " is not a real number");
            const detail::LineMeasure m(measure);
            return std::visit(overloaded{
                                  [&](const IntervalUnion& w) { return m.mass(w, *q); },
                                  [&](const BoxRadius& b) {
                                    if (b.r.sign() < 0) throw PreconditionError("negative window radius");
                                    return m.mass(*q - b.r, *q + b.r);
                                  },
                                  [&](const ExplicitFinite& f) {
                                    ExtRational total(0);
                                    for (const auto& p : f.elements) {
                                      const Rational y = std::get<Rational>(normalize(p, group)) + *q;
                                      total = total + m.mass(y, y);
                                    }
                                    return total;
                                  },
                              },
                              window);
          },
          [&](const ZLattice& z) -> ExtRational {
            const auto xv = std::get<IntVec>(normalize(x, group));
            const detail::LatticeMeasure m(z, measure);
            return std::visit(overloaded{
                                  [&](const IntervalUnion&) -> Rational {
                                    throw ShapeError("interval windows need the real line");
                                  },
                                  [&](const BoxRadius& b) {
                                    if (!b.r.is_integer() || b.r.sign() < 0)
                                      throw PreconditionError("cube radius must be a nonnegative integer, got " + b.r.str());
                                    return m.cube_mass(xv, b.r.to_int64());
                                  },
                                  [&](const ExplicitFinite& f) {
                                    std::vector<IntVec> w;
                                    for (const auto& e : f.elements) w.push_back(std::get<IntVec>(normalize(e, group)));
                                    return m.set_mass(xv, w);
                                  },
                              },
                              window);
          },
          [&](const FiniteAbelian& fa) -> ExtRational {
            const auto xv = std::get<IntVec>(normalize(x, group));
            const auto weights = detail::finite_weights(fa, measure);
            std::vector<IntVec> cells;
            std::visit(overloaded{
                           [&](const IntervalUnion&) { throw ShapeError("interval windows need the real line"); },
                           [&](const BoxRadius& b) {
                             if (!b.r.is_integer() || b.r.sign() < 0)
                               throw PreconditionError("cube radius must be a nonnegative integer, got " + b.r.str());
                             const auto r = b.r.to_int64();
                             IntVec ext(fa.moduli.size());
                             for (std::size_t i = 0; i < ext.size(); ++i) ext[i] = std::min(2 * r + 1, fa.moduli[i]);
                             for (auto c : BoxDomain{ext}.cells()) {
                               for (auto& v : c) v -= r;
                               cells.push_back(std::move(c));
                             }
                           },
                           [&](const ExplicitFinite& f) {
                             for (const auto& e : f.elements) cells.push_back(std::get<IntVec>(normalize(e, group)));
                           },
                       },
                       window);
            std::vector<std::int64_t> idx;
            for (const auto& c : cells) {
              idx.push_back(lex_index(std::get<IntVec>(normalize(add_vec(c, xv), group)), fa.moduli));
            }
            std::sort(idx.begin(), idx.end());
            idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
            Rational total(0);
            for (const auto i : idx) total += weights[static_cast<std::size_t>(i)];
            return total;
          },
          [&](const SigmaFiniteChain& chain) -> ExtRational {
            const auto* f = std::get_if<ExplicitFinite>(&window);
            if (!f) throw ShapeError("windows on a chain group are finite sets");
            const auto xv = std::get<IntVec>(normalize(x, group));
            std::vector<IntVec> pts;
            for (const auto& e : f->elements) pts.push_back(std::get<IntVec>(add(e, Element(xv), group)));
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
            std::function<Rational(const MeasureSpec&)> eval = [&](const MeasureSpec& m) -> Rational {
              return std::visit(overloaded{
                                    [&](const Counting& c) {
                                      const auto& s = std::get<ChainSet>(c.of);
                                      return Rational(static_cast<long long>(std::count_if(pts.begin(), pts.end(), [&](const IntVec& p) { return contains(chain, s, p); })));
                                    },
                                    [&](const HaarTrace& h) {
                                      const auto& s = std::get<ChainSet>(h.of);
                                      return Rational(static_cast<long long>(std::count_if(pts.begin(), pts.end(), [&](const IntVec& p) { return contains(chain, s, p); })));
                                    },
                                    [&](const DiracAtZero&) {
                                      return Rational(std::binary_search(pts.begin(), pts.end(), IntVec{}) ? 1 : 0);
                                    },
                                    [&](const WeightedDiracs& w) {
                                      Rational t(0);
                                      for (const auto& [a, weight] : w.atoms) {
                                        if (std::binary_search(pts.begin(), pts.end(), std::get<IntVec>(normalize(a, group)))) t += weight;
                                      }
                                      return t;
                                    },
                                    [&](const MeasureSum& s) {
                                      Rational t(0);
                                      for (const auto& part : s.parts) t += eval(part);
                                      return t;
                                    },
                                },
                                m.kind);
            };
            return eval(measure);
          },
      },
      group);
}

HaarValue haar(const GroupSpec& group, const SetSpec& set) {
  return std::visit(
      overloaded{
          [&](const DiscreteSet& s) -> HaarValue {
            if (const auto* p = std::get_if<PeriodicDiscrete>(&s)) {
              require_lattice(group, p->period.size());
              if (p->residues.empty()) return {Rational(0), Rational(0), Period(p->period)};
              return {ExtRational::infinity(), Rational(static_cast<long long>(p->residues.size())), Period(p->period)};
            }
            return {Rational(static_cast<long long>(std::get<ExplicitFinite>(s).elements.size())), std::nullopt, std::nullopt};
          },
          [](const IntervalUnion& u) -> HaarValue { return {u.length(), std::nullopt, std::nullopt}; },
          [](const PeriodicPattern& p) -> HaarValue {
            if (p.pattern().length().is_zero()) return {Rational(0), Rational(0), Period(p.period())};
            return {ExtRational::infinity(), p.mass_per_period(), Period(p.period())};
          },
          [&](const ChainSet& s) -> HaarValue {
            const auto* chain = std::get_if<SigmaFiniteChain>(&group);
            if (!chain) throw ShapeError("chain set used on " + describe(group));
            return std::visit(overloaded{
                                  [](const Cylinder& c) -> HaarValue {
                                    if (c.allowed.empty()) return {Rational(0), std::nullopt, std::nullopt};
                                    return {ExtRational::infinity(), std::nullopt, std::nullopt};
                                  },
                                  [&](const ChainSubgroup& h) -> HaarValue {
                                    return {Rational(chain_order(*chain, h.n)), std::nullopt, std::nullopt};
                                  },
                                  [](const WholeChain&) -> HaarValue { return {ExtRational::infinity(), std::nullopt, std::nullopt}; },
                                  [](const ExplicitFinite& e) -> HaarValue {
                                    return {Rational(static_cast<long long>(e.elements.size())), std::nullopt, std::nullopt};
                                  },
                              },
                              s);
          },
          [](const PointConfig&) -> HaarValue { return {Rational(0), std::nullopt, std::nullopt}; },
      },
      set);
}

DiscreteSet shifted(const GroupSpec& group, const DiscreteSet& set, const Element& g) {
  return std::visit(overloaded{
                        [&](const ExplicitFinite& e) -> DiscreteSet {
                          std::vector<Element> out;
                          for (const auto& x : e.elements) out.push_back(add(x, g, group));
                          return make_explicit(group, std::move(out));
                        },
                        [&](const PeriodicDiscrete& p) -> DiscreteSet {
                          const IntVec v = std::get<IntVec>(normalize(g, group));
                          std::vector<IntVec> out;
                          for (const auto& r : p.residues) out.push_back(add_vec(r, v));
                          return make_periodic(p.period, std::move(out));
                        },
                    },
                    set);
}

namespace {

ChainSet shifted_chain(const SigmaFiniteChain& chain, const ChainSet& set, const IntVec& g) {
  const GroupSpec group = chain;
  return std::visit(
      overloaded{
          [&](const Cylinder& c) -> ChainSet {
            const std::size_t coords = std::max(c.coords, g.size());
            std::vector<IntVec> allowed;
            IntVec ext;
            for (std::size_t i = c.coords; i < coords; ++i) ext.push_back(chain.moduli[i]);
            const auto tails = BoxDomain{ext}.cells();
            if (c.allowed.size() * std::max<std::size_t>(tails.size(), 1) > kMaxPairs)
              throw CapExceeded("shifted cylinder too large");
            for (const auto& a : c.allowed) {
              for (const auto& t : tails) {
                IntVec v = a;
                v.insert(v.end(), t.begin(), t.end());
                for (std::size_t i = 0; i < g.size(); ++i) v[i] += g[i];
                allowed.push_back(std::move(v));
              }
            }
            return make_cylinder(chain, coords, std::move(allowed));
          },
          [&](const ChainSubgroup& h) -> ChainSet {
            if (g.size() > h.n) throw PreconditionError("coset of H_" + std::to_string(h.n) + " is not representable");
            return h;
          },
          [](const WholeChain& w) -> ChainSet { return w; },
          [&](const ExplicitFinite& e) -> ChainSet {
            std::vector<Element> out;
            for (const auto& x : e.elements) out.push_back(add(x, Element(g), group));
            return make_explicit(group, std::move(out));
          },
      },
      set);
}

}  // namespace

MeasureSpec shifted(const GroupSpec& group, const MeasureSpec& measure, const Element& g) {
  const Element h = normalize(g, group);
  return std::visit(
      overloaded{
          [&](const Counting& c) -> MeasureSpec {
            return std::visit(overloaded{
                                  [&](const DiscreteSet& s) { return counting(shifted(group, s, h)); },
                                  [&](const PointConfig& p) { return counting(shifted(p, std::get<Rational>(h))); },
                                  [&](const ChainSet& s) {
                                    return counting(shifted_chain(std::get<SigmaFiniteChain>(group), s, std::get<IntVec>(h)));
                                  },
                              },
                              c.of);
          },
          [&](const HaarTrace& t) -> MeasureSpec {
            return std::visit(overloaded{
                                  [&](const DiscreteSet& s) { return MeasureSpec{HaarTrace{shifted(group, s, h)}}; },
                                  [&](const IntervalUnion& u) { return haar_trace(u.shifted(std::get<Rational>(h))); },
                                  [&](const PeriodicPattern& p) { return haar_trace(p.shifted(std::get<Rational>(h))); },
                                  [&](const ChainSet& s) {
                                    return MeasureSpec{HaarTrace{shifted_chain(std::get<SigmaFiniteChain>(group), s, std::get<IntVec>(h))}};
                                  },
                              },
                              t.of);
          },
          [&](const DiracAtZero&) { return weighted_diracs({{h, Rational(1)}}); },
          [&](const WeightedDiracs& w) {
            std::vector<std::pair<Element, Rational>> atoms;
            for (const auto& [x, weight] : w.atoms) atoms.emplace_back(add(x, h, group), weight);
            return weighted_diracs(std::move(atoms));
          },
          [&](const MeasureSum& s) {
            std::vector<MeasureSpec> parts;
            for (const auto& p : s.parts) parts.push_back(shifted(group, p, h));
            return measure_sum(std::move(parts));
          },
      },
      measure.kind);
}

}  // namespace density_lab
