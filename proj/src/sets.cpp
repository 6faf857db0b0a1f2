#include "density_lab/sets.hpp"

#include <algorithm>
#include <sstream>

#include "density_lab/detail/overloaded.hpp"
#include "density_lab/errors.hpp"

namespace density_lab {

using detail::overloaded;

namespace {

constexpr std::size_t kMaxMaterializedPoints = 10'000'000;

template <class T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool is_lattice_point(const PerturbedLattice& l, const Rational& x) {
  return std::binary_search(l.offsets.begin(), l.offsets.end(), mod(x, l.step));
}

std::int64_t coord(const IntVec& g, std::size_t i) { return i < g.size() ? g[i] : 0; }

template <class Body>
PointConfig wrap(Body body) {
  PointConfig c;
  c.body = std::move(body);
  return c;
}

}  // namespace

ExplicitFinite make_explicit(const GroupSpec& group, std::vector<Element> elements) {
  for (auto& e : elements) e = normalize(e, group);
  sort_unique(elements);
  return ExplicitFinite{std::move(elements)};
}

PeriodicDiscrete make_periodic(IntVec period, std::vector<IntVec> residues) {
  if (period.empty()) throw PreconditionError("periodic set needs a period");
  for (const auto m : period) {
    if (m <= 0) throw PreconditionError("period must be positive, got " + std::to_string(m));
  }
  for (auto& r : residues) r = reduce_mod(r, period);
  sort_unique(residues);
  return PeriodicDiscrete{std::move(period), std::move(residues)};
}

bool contains(const GroupSpec& group, const DiscreteSet& set, const Element& g) {
  return std::visit(overloaded{
                        [&](const ExplicitFinite& e) {
                          const Element x = normalize(g, group);
                          return std::binary_search(e.elements.begin(), e.elements.end(), x);
                        },
                        [&](const PeriodicDiscrete& p) {
                          const auto* v = std::get_if<IntVec>(&g);
                          if (!v) throw ShapeError("periodic lattice set queried with a rational");
                          const IntVec r = reduce_mod(*v, p.period);
                          return std::binary_search(p.residues.begin(), p.residues.end(), r);
                        },
                    },
                    set);
}

bool is_empty(const DiscreteSet& set) {
  return std::visit(overloaded{
                        [](const ExplicitFinite& e) { return e.elements.empty(); },
                        [](const PeriodicDiscrete& p) { return p.residues.empty(); },
                    },
                    set);
}

bool PointConfig::is_periodic() const {
  const auto* l = std::get_if<PerturbedLattice>(&body);
  return l && l->extra.empty() && l->removed.empty() && !has_accumulation;
}

const Rational& PointConfig::period() const {
  if (const auto* l = std::get_if<PerturbedLattice>(&body); l && is_periodic()) return l->step;
  throw PreconditionError("point configuration is not periodic: " + describe(*this));
}

const std::vector<Rational>& PointConfig::offsets() const {
  if (const auto* l = std::get_if<PerturbedLattice>(&body); l && is_periodic()) return l->offsets;
  throw PreconditionError("point configuration is not periodic: " + describe(*this));
}

bool PointConfig::empty() const {
  return std::visit(overloaded{
                        [](const FinitePoints& f) { return f.points.empty(); },
                        [](const PerturbedLattice& l) { return l.offsets.empty() && l.extra.empty(); },
                        [](const HarmonicSequence&) { return false; },
                    },
                    body);
}

PointConfig finite_points(std::vector<Rational> points) {
  sort_unique(points);
  return wrap(FinitePoints{std::move(points)});
}

PointConfig lattice(Rational step, std::vector<Rational> offsets, std::vector<Rational> extra,
                    std::vector<Rational> removed) {
  if (step.sign() <= 0) throw PreconditionError("lattice step must be positive, got " + step.str());
  for (auto& o : offsets) o = mod(o, step);
  sort_unique(offsets);
  PerturbedLattice l{std::move(step), std::move(offsets), {}, {}};
  sort_unique(extra);
  for (auto& e : extra) {
    if (!is_lattice_point(l, e)) l.extra.push_back(e);
  }
  sort_unique(removed);
  for (const auto& r : removed) {
    if (!is_lattice_point(l, r)) throw PreconditionError("removed point " + r.str() + " is not a lattice point");
  }
  l.removed = std::move(removed);
  return wrap(std::move(l));
}

PointConfig harmonic(Rational center, std::int64_t first) {
  if (first < 1) throw PreconditionError("harmonic sequence index must start at >= 1");
  PointConfig c = wrap(HarmonicSequence{center, first});
  c.has_accumulation = true;
  c.accumulation_point = std::move(center);
  return c;
}

PointConfig with_accumulation(PointConfig config, Rational at) {
  config.has_accumulation = true;
  config.accumulation_point = std::move(at);
  return config;
}

std::vector<Rational> points_within(const PointConfig& config, const Rational& lo, const Rational& hi) {
  std::vector<Rational> out;
  if (hi < lo) return out;
  std::visit(overloaded{
                 [&](const FinitePoints& f) {
                   for (const auto& p : f.points) {
                     if (lo <= p && p <= hi) out.push_back(p);
                   }
                 },
                 [&](const PerturbedLattice& l) {
                   const Rational span = (hi - lo) / l.step + 1;
                   if (span * Rational(static_cast<long long>(l.offsets.size())) > Rational(static_cast<long long>(kMaxMaterializedPoints)))
                     throw CapExceeded("too many lattice points in [" + lo.str() + ", " + hi.str() + "]");
                   for (const auto& o : l.offsets) {
                     const Rational k0 = ((lo - o) / l.step).ceil();
                     const Rational k1 = ((hi - o) / l.step).floor();
                     for (Rational k = k0; k <= k1; k += 1) {
                       Rational x = o + k * l.step;
                       if (!std::binary_search(l.removed.begin(), l.removed.end(), x)) out.push_back(std::move(x));
                     }
                   }
                   for (const auto& e : l.extra) {
                     if (lo <= e && e <= hi) out.push_back(e);
                   }
                   std::sort(out.begin(), out.end());
                 },
                 [&](const HarmonicSequence& h) {
                   if (lo <= h.center && h.center < hi)
                     throw PreconditionError("window [" + lo.str() + ", " + hi.str() +
                                             "] contains the accumulation point " + h.center.str());
                   if (hi <= h.center) return;
                   // center + 1/n in [lo, hi] with lo > center.
                   const Rational n0 = max(Rational(h.first), (Rational(1) / (hi - h.center)).ceil());
                   const Rational n1 = (Rational(1) / (lo - h.center)).floor();
                   if (n1 - n0 > Rational(static_cast<long long>(kMaxMaterializedPoints)))
                     throw CapExceeded("too many harmonic points in window");
                   for (Rational n = n1; n >= n0; n -= 1) out.push_back(h.center + Rational(1) / n);
                 },
             },
             config.body);
  return out;
}

PointConfig shifted(const PointConfig& config, const Rational& d) {
  PointConfig out = std::visit(
      overloaded{
          [&](const FinitePoints& f) {
            std::vector<Rational> pts = f.points;
            for (auto& p : pts) p += d;
            return finite_points(std::move(pts));
          },
          [&](const PerturbedLattice& l) {
            auto shift_all = [&](std::vector<Rational> v) {
              for (auto& x : v) x += d;
              return v;
            };
            return lattice(l.step, shift_all(l.offsets), shift_all(l.extra), shift_all(l.removed));
          },
          [&](const HarmonicSequence& h) { return harmonic(h.center + d, h.first); },
      },
      config.body);
  out.has_accumulation = config.has_accumulation;
  if (config.accumulation_point) out.accumulation_point = *config.accumulation_point + d;
  return out;
}

Cylinder make_cylinder(const SigmaFiniteChain& chain, std::size_t coords, std::vector<IntVec> allowed) {
  if (coords > chain.depth())
    throw CapExceeded("cylinder uses " + std::to_string(coords) + " coordinates, chain materialized to depth " +
                      std::to_string(chain.depth()));
  for (auto& a : allowed) {
    if (a.size() != coords) throw ShapeError("cylinder prefix " + to_string(a) + " must have " + std::to_string(coords) + " coordinates");
    for (std::size_t i = 0; i < coords; ++i) {
      const auto m = chain.moduli[i];
      a[i] = ((a[i] % m) + m) % m;
    }
  }
  sort_unique(allowed);
  return Cylinder{coords, std::move(allowed)};
}

bool contains(const SigmaFiniteChain& chain, const ChainSet& set, const IntVec& g) {
  const IntVec x = std::get<IntVec>(normalize(g, chain));
  return std::visit(overloaded{
                        [&](const Cylinder& c) {
                          IntVec prefix(c.coords);
                          for (std::size_t i = 0; i < c.coords; ++i) prefix[i] = coord(x, i);
                          return std::binary_search(c.allowed.begin(), c.allowed.end(), prefix);
                        },
                        [&](const ChainSubgroup& s) { return x.size() <= s.n; },
                        [](const WholeChain&) { return true; },
                        [&](const ExplicitFinite& e) {
                          return std::binary_search(e.elements.begin(), e.elements.end(), Element(x));
                        },
                    },
                    set);
}

std::int64_t count_in_subgroup(const SigmaFiniteChain& chain, const ChainSet& set, std::size_t n) {
  if (n > chain.depth()) throw CapExceeded("depth " + std::to_string(n) + " exceeds materialization cap " + std::to_string(chain.depth()));
  return std::visit(overloaded{
                        [&](const Cylinder& c) -> std::int64_t {
                          if (c.coords <= n) {
                            std::int64_t count = static_cast<std::int64_t>(c.allowed.size());
                            for (std::size_t i = c.coords; i < n; ++i) count *= chain.moduli[i];
                            return count;
                          }
                          return std::count_if(c.allowed.begin(), c.allowed.end(), [&](const IntVec& a) {
                            return std::all_of(a.begin() + static_cast<long>(n), a.end(), [](auto v) { return v == 0; });
                          });
                        },
                        [&](const ChainSubgroup& s) { return chain_order(chain, std::min(s.n, n)); },
                        [&](const WholeChain&) { return chain_order(chain, n); },
                        [&](const ExplicitFinite& e) -> std::int64_t {
                          return std::count_if(e.elements.begin(), e.elements.end(), [&](const Element& g) {
                            return std::get<IntVec>(g).size() <= n;
                          });
                        },
                    },
                    set);
}

MeasureSpec counting(DiscreteSet set) { return MeasureSpec{Counting{std::move(set)}}; }
MeasureSpec counting(PointConfig config) { return MeasureSpec{Counting{std::move(config)}}; }
MeasureSpec counting(ChainSet set) { return MeasureSpec{Counting{std::move(set)}}; }
MeasureSpec haar_trace(IntervalUnion set) { return MeasureSpec{HaarTrace{std::move(set)}}; }
MeasureSpec haar_trace(PeriodicPattern set) { return MeasureSpec{HaarTrace{std::move(set)}}; }
MeasureSpec dirac_at_zero() { return MeasureSpec{DiracAtZero{}}; }
MeasureSpec weighted_diracs(std::vector<std::pair<Element, Rational>> atoms) {
  return MeasureSpec{WeightedDiracs{std::move(atoms)}};
}
MeasureSpec measure_sum(std::vector<MeasureSpec> parts) { return MeasureSpec{MeasureSum{std::move(parts)}}; }

namespace {

void validate_discrete(const GroupSpec& group, const DiscreteSet& set) {
  if (!is_discrete(group)) throw ShapeError("discrete set used on " + describe(group));
  std::visit(overloaded{
                 [&](const ExplicitFinite& e) {
                   if (std::holds_alternative<SigmaFiniteChain>(group))
                     throw ShapeError("use a chain set (cylinder/subgroup/whole/finite) on a chain group");
                   for (const auto& g : e.elements) {
                     if (normalize(g, group) != g) throw ShapeError("element " + to_string(g) + " is not in canonical form");
                   }
                 },
                 [&](const PeriodicDiscrete& p) {
                   const auto* z = std::get_if<ZLattice>(&group);
                   if (!z || static_cast<std::size_t>(z->dimension) != p.period.size())
                     throw ShapeError("periodic set of dimension " + std::to_string(p.period.size()) + " used on " +
                                      describe(group));
                 },
             },
             set);
}

}  // namespace

void validate(const GroupSpec& group, const MeasureSpec& measure) {
  validate(group);
  std::visit(overloaded{
                 [&](const Counting& c) {
                   std::visit(overloaded{
                                  [&](const DiscreteSet& s) { validate_discrete(group, s); },
                                  [&](const PointConfig&) {
                                    if (!std::holds_alternative<RealLine>(group))
                                      throw ShapeError("point configurations live on R, not " + describe(group));
                                  },
                                  [&](const ChainSet&) {
                                    if (!std::holds_alternative<SigmaFiniteChain>(group))
                                      throw ShapeError("chain set used on " + describe(group));
                                  },
                              },
                              c.of);
                 },
                 [&](const HaarTrace& h) {
                   std::visit(overloaded{
                                  [&](const DiscreteSet& s) { validate_discrete(group, s); },
                                  [&](const IntervalUnion&) {
                                    if (!std::holds_alternative<RealLine>(group))
                                      throw ShapeError("interval unions live on R, not " + describe(group));
                                  },
                                  [&](const PeriodicPattern&) {
                                    if (!std::holds_alternative<RealLine>(group))
                                      throw ShapeError("periodic patterns live on R, not " + describe(group));
                                  },
                                  [&](const ChainSet&) {
                                    if (!std::holds_alternative<SigmaFiniteChain>(group))
                                      throw ShapeError("chain set used on " + describe(group));
                                  },
                              },
                              h.of);
                 },
                 [](const DiracAtZero&) {},
                 [&](const WeightedDiracs& w) {
                   for (const auto& [x, weight] : w.atoms) {
                     (void)normalize(x, group);
                     if (weight.sign() <= 0) throw PreconditionError("Dirac weights must be positive, got " + weight.str());
                   }
                 },
                 [&](const MeasureSum& s) {
                   for (const auto& p : s.parts) validate(group, p);
                 },
             },
             measure.kind);
}

bool has_accumulation(const MeasureSpec& measure) {
  return std::visit(overloaded{
                        [](const Counting& c) {
                          const auto* p = std::get_if<PointConfig>(&c.of);
                          return p && p->has_accumulation;
                        },
                        [](const MeasureSum& s) {
                          return std::any_of(s.parts.begin(), s.parts.end(), [](const auto& m) { return has_accumulation(m); });
                        },
                        [](const auto&) { return false; },
                    },
                    measure.kind);
}

namespace {

template <class T>
std::string join_values(const std::vector<T>& v, std::size_t limit = 8) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < v.size() && i < limit; ++i) {
    if (i) os << ", ";
    if constexpr (std::is_same_v<T, Rational>) {
      os << v[i].str();
    } else {
      os << to_string(v[i]);
    }
  }
  if (v.size() > limit) os << ", ... (" << v.size() << " total)";
  os << '}';
  return os.str();
}

}  // namespace

std::string describe(const DiscreteSet& set) {
  return std::visit(overloaded{
                        [](const ExplicitFinite& e) { return join_values(e.elements); },
                        [](const PeriodicDiscrete& p) {
                          return join_values(p.residues) + " mod " + to_string(p.period);
                        },
                    },
                    set);
}

std::string describe(const PointConfig& config) {
  std::string s = std::visit(overloaded{
                                 [](const FinitePoints& f) { return join_values(f.points); },
                                 [](const PerturbedLattice& l) {
                                   std::string out = join_values(l.offsets) + " + " + l.step.str() + "Z";
                                   if (!l.extra.empty()) out += " + extra " + join_values(l.extra);
                                   if (!l.removed.empty()) out += " - removed " + join_values(l.removed);
                                   return out;
                                 },
                                 [](const HarmonicSequence& h) {
                                   return "{" + h.center.str() + " + 1/n : n >= " + std::to_string(h.first) + "}";
                                 },
                             },
                             config.body);
  if (config.has_accumulation && !std::holds_alternative<HarmonicSequence>(config.body))
    s += " (accumulating at " + (config.accumulation_point ? config.accumulation_point->str() : std::string("?")) + ")";
  return s;
}

std::string describe(const ChainSet& set) {
  return std::visit(overloaded{
                        [](const Cylinder& c) {
                          return "cylinder on " + std::to_string(c.coords) + " coords, prefixes " + join_values(c.allowed);
                        },
                        [](const ChainSubgroup& s) { return "H_" + std::to_string(s.n); },
                        [](const WholeChain&) { return std::string("G"); },
                        [](const ExplicitFinite& e) { return join_values(e.elements); },
                    },
                    set);
}

std::string describe(const MeasureSpec& measure) {
  return std::visit(
      overloaded{
          [](const Counting& c) {
            return "counting(" +
                   std::visit(overloaded{[](const auto& s) { return describe(s); }}, c.of) + ")";
          },
          [](const HaarTrace& h) {
            return "haar(" +
                   std::visit(overloaded{
                                  [](const DiscreteSet& s) { return describe(s); },
                                  [](const IntervalUnion& u) { return u.str(); },
                                  [](const PeriodicPattern& p) { return p.str(); },
                                  [](const ChainSet& s) { return describe(s); },
                              },
                              h.of) +
                   ")";
          },
          [](const DiracAtZero&) { return std::string("dirac(0)"); },
          [](const WeightedDiracs& w) {
            std::string s = "weighted{";
            for (std::size_t i = 0; i < w.atoms.size(); ++i)
              s += (i ? ", " : "") + w.atoms[i].second.str() + "@" + to_string(w.atoms[i].first);
            return s + "}";
          },
          [](const MeasureSum& m) {
            std::string s = "sum(";
            for (std::size_t i = 0; i < m.parts.size(); ++i) s += (i ? " + " : "") + describe(m.parts[i]);
            return s + ")";
          },
      },
      measure.kind);
}

}  // namespace density_lab
