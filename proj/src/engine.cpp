#include "engine.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "density_lab/detail/overloaded.hpp"
#include "density_lab/errors.hpp"

namespace density_lab::detail {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// #{v in [lo, hi] : v ≡ res (mod m)}.
std::int64_t count_residue(std::int64_t lo, std::int64_t hi, std::int64_t res, std::int64_t m) {
  if (hi < lo) return 0;
  return std::max<std::int64_t>(0, floor_div(hi - res, m) - ceil_div(lo - res, m) + 1);
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

void check_cap(std::size_t n) {
  if (n > kMaxEventPoints)
    throw CapExceeded("event-point enumeration needs " + std::to_string(n) + " points (cap " +
                      std::to_string(kMaxEventPoints) + ")");
}

// Calls f on every cell of the box ∏ [lo_i, lo_i + extent_i).
template <class F>
void for_each_cell(const IntVec& lo, const IntVec& extent, F&& f) {
  const std::size_t d = lo.size();
  IntVec x = lo;
  if (std::any_of(extent.begin(), extent.end(), [](auto e) { return e <= 0; })) return;
  while (true) {
    f(x);
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (++x[i] < lo[i] + extent[i]) break;
      x[i] = lo[i];
      if (i == 0) return;
    }
    if (d == 0) return;
  }
}

// Calls f on every point of the product of the per-coordinate candidate lists.
template <class F>
void for_each_product(const std::vector<std::vector<std::int64_t>>& axes, F&& f) {
  const std::size_t d = axes.size();
  for (const auto& a : axes) {
    if (a.empty()) return;
  }
  std::vector<std::size_t> idx(d, 0);
  IntVec x(d);
  while (true) {
    for (std::size_t i = 0; i < d; ++i) x[i] = axes[i][idx[i]];
    f(x);
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (++idx[i] < axes[i].size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
    if (d == 0) return;
  }
}

}  // namespace

// ---------------------------------------------------------------- LineMeasure

LineMeasure::LineMeasure(const MeasureSpec& measure) {
  add(measure);
  finish();
}

void LineMeasure::add(const MeasureSpec& m) {
  std::visit(overloaded{
                 [&](const Counting& c) {
                   const auto* p = std::get_if<PointConfig>(&c.of);
                   if (!p) throw ShapeError("counting measure on R needs a point configuration");
                   add_points(*p);
                 },
                 [&](const HaarTrace& h) {
                   if (const auto* u = std::get_if<IntervalUnion>(&h.of)) {
                     if (!u->empty()) intervals_.push_back(*u);
                   } else if (const auto* p = std::get_if<PeriodicPattern>(&h.of)) {
                     if (!p->pattern().empty()) patterns_.push_back(*p);
                   } else {
                     throw ShapeError("Haar trace on R needs an interval union or a periodic pattern");
                   }
                 },
                 [&](const DiracAtZero&) { atoms_.push_back({Rational(0), Rational(1)}); },
                 [&](const WeightedDiracs& w) {
                   for (const auto& [x, weight] : w.atoms) {
                     const auto* q = std::get_if<Rational>(&x);
                     if (!q) throw ShapeError("weighted atom " + to_string(x) + " is not a real number");
                     atoms_.push_back({*q, weight});
                   }
                 },
                 [&](const MeasureSum& s) {
                   for (const auto& part : s.parts) add(part);
                 },
             },
             m.kind);
}

void LineMeasure::add_points(const PointConfig& config) {
  std::visit(overloaded{
                 [&](const FinitePoints& f) {
                   for (const auto& x : f.points) atoms_.push_back({x, Rational(1)});
                 },
                 [&](const PerturbedLattice& l) {
                   if (!l.offsets.empty()) lattices_.push_back({l.step, l.offsets});
                   for (const auto& x : l.extra) atoms_.push_back({x, Rational(1)});
                   for (const auto& x : l.removed) atoms_.push_back({x, Rational(-1)});
                 },
                 [&](const HarmonicSequence& h) { harmonics_.push_back(h); },
             },
             config.body);
  if (config.has_accumulation && !std::holds_alternative<HarmonicSequence>(config.body)) {
    if (config.accumulation_point) {
      accumulation_.push_back(*config.accumulation_point);
    } else {
      unlocated_accumulation_ = true;
    }
  }
}

void LineMeasure::finish() {
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  std::vector<Atom> merged;
  for (auto& a : atoms_) {
    if (!merged.empty() && merged.back().x == a.x) {
      merged.back().w += a.w;
    } else {
      merged.push_back(std::move(a));
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Atom& a) { return a.w.is_zero(); }),
               merged.end());
  atoms_ = std::move(merged);
  prefix_.assign(1, Rational(0));
  for (const auto& a : atoms_) {
    prefix_.push_back(prefix_.back() + a.w);
    if (a.w.sign() < 0) negative_atoms_ = true;
  }
}

bool LineMeasure::has_positive_atoms() const {
  return !lattices_.empty() || !harmonics_.empty() ||
         std::any_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.w.sign() > 0; });
}

std::optional<Rational> LineMeasure::period() const {
  std::optional<Rational> p;
  auto fold = [&](const Rational& q) { p = p ? lcm(*p, q) : q; };
  for (const auto& l : lattices_) fold(l.step);
  for (const auto& pat : patterns_) fold(pat.period());
  return p;
}

Rational LineMeasure::periodic_density() const {
  Rational d(0);
  for (const auto& l : lattices_) d += Rational(static_cast<long long>(l.offsets.size())) / l.step;
  for (const auto& pat : patterns_) d += pat.density();
  return d;
}

std::vector<Rational> LineMeasure::finite_features() const {
  std::vector<Rational> f;
  for (const auto& a : atoms_) f.push_back(a.x);
  for (const auto& u : intervals_) {
    for (const auto& p : u.parts()) {
      f.push_back(p.lo);
      f.push_back(p.hi);
    }
  }
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

std::optional<Rational> LineMeasure::some_atom() const {
  auto positive = [&](const Rational& x) {
    const auto v = mass(x, x);
    return v.is_infinite() || v > ExtRational(0);
  };
  for (const auto& a : atoms_) {
    if (a.w.sign() > 0 && positive(a.x)) return a.x;
  }
  for (const auto& l : lattices_) {
    for (const auto& o : l.offsets) {
      for (std::size_t k = 0; k <= atoms_.size(); ++k) {
        const Rational x = o + Rational(static_cast<long long>(k)) * l.step;
        if (positive(x)) return x;
      }
    }
  }
  if (!harmonics_.empty()) return harmonics_.front().center + Rational(1) / Rational(harmonics_.front().first);
  return std::nullopt;
}

std::optional<Rational> LineMeasure::accumulation_point() const {
  if (!harmonics_.empty()) return harmonics_.front().center;
  if (!accumulation_.empty()) return accumulation_.front();
  return std::nullopt;
}

ExtRational LineMeasure::piece_mass(const Rational& a, const Rational& b) const {
  for (const auto& h : harmonics_) {
    if (a <= h.center && h.center < b) return ExtRational::infinity();
  }
  for (const auto& q : accumulation_) {
    if (a < q && q < b) return ExtRational::infinity();
  }
  Rational total(0);
  if (!atoms_.empty()) {
    const auto lo = std::lower_bound(atoms_.begin(), atoms_.end(), a, [](const Atom& x, const Rational& v) { return x.x < v; });
    const auto hi = std::upper_bound(atoms_.begin(), atoms_.end(), b, [](const Rational& v, const Atom& x) { return v < x.x; });
    total += prefix_[static_cast<std::size_t>(hi - atoms_.begin())] - prefix_[static_cast<std::size_t>(lo - atoms_.begin())];
  }
  for (const auto& l : lattices_) {
    for (const auto& o : l.offsets) {
      const Rational k = ((b - o) / l.step).floor() - ((a - o) / l.step).ceil() + 1;
      if (k.sign() > 0) total += k;
    }
  }
  for (const auto& u : intervals_) total += measure_within(u, a, b);
  for (const auto& p : patterns_) total += p.mass(a, b);
  for (const auto& h : harmonics_) {
    if (b <= h.center) continue;
    const Rational n0 = max(Rational(h.first), (Rational(1) / (b - h.center)).ceil());
    const Rational n1 = (Rational(1) / (a - h.center)).floor();
    if (n1 >= n0) total += n1 - n0 + 1;
  }
  return total;
}

ExtRational LineMeasure::mass(const Rational& a, const Rational& b) const {
  if (b < a) return Rational(0);
  return piece_mass(a, b);
}

ExtRational LineMeasure::mass(const IntervalUnion& window, const Rational& x) const {
  ExtRational total(0);
  for (const auto& p : window.parts()) {
    total = total + piece_mass(p.lo + x, p.hi + x);
    if (total.is_infinite()) break;
  }
  return total;
}

ShiftSup LineMeasure::sup_shift(const IntervalUnion& window) const {
  if (window.empty()) return {Rational(0), Element(Rational(0)), true};

  const auto fat = std::find_if(window.parts().begin(), window.parts().end(),
                                [](const Interval& p) { return p.length().sign() > 0; });
  if (fat != window.parts().end()) {
    if (!harmonics_.empty()) return {ExtRational::infinity(), Element(harmonics_.front().center - fat->lo), true};
    if (!accumulation_.empty())
      return {ExtRational::infinity(), Element(accumulation_.front() - (fat->lo + fat->hi) / 2), true};
  }

  std::vector<Rational> edges;
  for (const auto& p : window.parts()) {
    edges.push_back(p.lo);
    edges.push_back(p.hi);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<Rational> cand;
  const auto features = finite_features();
  Rational hull_lo(0), hull_hi(0);
  if (!features.empty()) {
    hull_lo = features.front() - edges.back();
    hull_hi = features.back() - edges.front();
    check_cap(features.size() * edges.size());
    for (const auto& f : features) {
      for (const auto& e : edges) cand.push_back(f - e);
    }
  }

  if (const auto P = period()) {
    // Periodic features with their own period.
    std::vector<std::pair<Rational, Rational>> pf;
    for (const auto& l : lattices_) {
      for (const auto& o : l.offsets) pf.emplace_back(o, l.step);
    }
    for (const auto& pat : patterns_) {
      for (const auto& piece : pat.pattern().parts()) {
        pf.emplace_back(piece.lo, pat.period());
        pf.emplace_back(piece.hi, pat.period());
      }
    }
    std::vector<Rational> cycle;
    for (const auto& [f, q] : pf) {
      const std::int64_t copies = (*P / q).to_int64();
      check_cap(cycle.size() + static_cast<std::size_t>(copies) * edges.size());
      for (const auto& e : edges) {
        const Rational base = mod(f - e, q);
        for (std::int64_t j = 0; j < copies; ++j) cycle.push_back(base + Rational(j) * q);
      }
    }
    std::sort(cycle.begin(), cycle.end());
    cycle.erase(std::unique(cycle.begin(), cycle.end()), cycle.end());
    cycle.push_back(cycle.front() + *P);
    if (features.empty()) {
      cand.insert(cand.end(), cycle.begin(), cycle.end());
    } else {
      // A copy of the cycle to the right of every finite feature, where the
      // measure is purely periodic, plus the cycle copies meeting the hull.
      const Rational k0 = ((hull_hi - cycle.front()) / *P).floor() + 1;
      for (const auto& c : cycle) cand.push_back(c + k0 * *P);
      const Rational k_lo = ((hull_lo - cycle.back()) / *P).floor();
      const Rational k_hi = ((hull_hi - cycle.front()) / *P).ceil();
      const Rational reps = (k_hi - k_lo + 1) * Rational(static_cast<long long>(cycle.size()));
      if (reps > Rational(static_cast<long long>(kMaxEventPoints))) check_cap(kMaxEventPoints + 1);
      for (Rational k = k_lo; k <= k_hi; k += 1) {
        for (const auto& c : cycle) {
          const Rational x = c + k * *P;
          if (hull_lo <= x && x <= hull_hi) cand.push_back(x);
        }
      }
    }
  }

  if (cand.empty()) return {Rational(0), Element(Rational(0)), true};
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  ShiftSup best{mass(window, cand.front()), Element(cand.front()), true};
  auto consider = [&](const ExtRational& v, const Rational& x, bool attained) {
    if (v > best.sup) best = {v, Element(x), attained};
  };
  for (std::size_t i = 1; i < cand.size(); ++i) consider(mass(window, cand[i]), cand[i], true);
  if (negative_atoms_) {
    const bool haar = !intervals_.empty() || !patterns_.empty();
    for (std::size_t i = 0; i + 1 < cand.size(); ++i) {
      const Rational w = cand[i + 1] - cand[i];
      const Rational m1 = cand[i] + w / 3;
      const Rational m2 = cand[i] + w * Rational(2, 3);
      const ExtRational v1 = mass(window, m1);
      consider(v1, m1, true);
      if (!haar) continue;
      const ExtRational v2 = mass(window, m2);
      consider(v2, m2, true);
      if (v1.is_infinite() || v2.is_infinite()) continue;
      const Rational slope = v2.value() - v1.value();
      consider(v1.value() - slope, cand[i], false);
      consider(v2.value() + slope, cand[i + 1], false);
    }
  }
  return best;
}

// ------------------------------------------------------------- LatticeMeasure

LatticeMeasure::LatticeMeasure(const ZLattice& group, const MeasureSpec& measure) : d_(group.dimension) {
  add(measure);
  std::sort(atoms_.begin(), atoms_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<IntVec, Rational>> merged;
  for (auto& a : atoms_) {
    if (!merged.empty() && merged.back().first == a.first) {
      merged.back().second += a.second;
    } else {
      merged.push_back(std::move(a));
    }
  }
  atoms_ = std::move(merged);
}

void LatticeMeasure::add(const MeasureSpec& m) {
  auto add_set = [&](const DiscreteSet& s) {
    std::visit(overloaded{
                   [&](const ExplicitFinite& e) {
                     for (const auto& g : e.elements) {
                       const auto* v = std::get_if<IntVec>(&g);
                       if (!v || static_cast<int>(v->size()) != d_) throw ShapeError("element " + to_string(g) + " is not in Z^" + std::to_string(d_));
                       atoms_.emplace_back(*v, Rational(1));
                     }
                   },
                   [&](const PeriodicDiscrete& p) {
                     if (static_cast<int>(p.period.size()) != d_) throw ShapeError("periodic set of wrong dimension");
                     if (!p.residues.empty()) periodic_.push_back({p.period, p.residues});
                   },
               },
               s);
  };
  std::visit(overloaded{
                 [&](const Counting& c) {
                   const auto* s = std::get_if<DiscreteSet>(&c.of);
                   if (!s) throw ShapeError("counting measure on Z^d needs a discrete set");
                   add_set(*s);
                 },
                 [&](const HaarTrace& h) {
                   const auto* s = std::get_if<DiscreteSet>(&h.of);
                   if (!s) throw ShapeError("Haar trace on Z^d needs a discrete set");
                   add_set(*s);
                 },
                 [&](const DiracAtZero&) { atoms_.emplace_back(IntVec(static_cast<std::size_t>(d_), 0), Rational(1)); },
                 [&](const WeightedDiracs& w) {
                   for (const auto& [x, weight] : w.atoms) {
                     const auto* v = std::get_if<IntVec>(&x);
                     if (!v || static_cast<int>(v->size()) != d_) throw ShapeError("atom " + to_string(x) + " is not in Z^" + std::to_string(d_));
                     atoms_.emplace_back(*v, weight);
                   }
                 },
                 [&](const MeasureSum& s) {
                   for (const auto& part : s.parts) add(part);
                 },
             },
             m.kind);
}

IntVec LatticeMeasure::period() const {
  if (periodic_.empty()) return {};
  IntVec p(static_cast<std::size_t>(d_), 1);
  for (const auto& c : periodic_) {
    for (int i = 0; i < d_; ++i) p[i] = lcm64(p[i], c.period[i]);
  }
  return p;
}

Rational LatticeMeasure::periodic_density() const {
  Rational d(0);
  for (const auto& c : periodic_) {
    std::int64_t vol = 1;
    for (const auto m : c.period) vol *= m;
    d += Rational(static_cast<long long>(c.residues.size()), vol);
  }
  return d;
}

Rational LatticeMeasure::point_mass(const IntVec& y) const {
  std::int64_t count = 0;
  for (const auto& c : periodic_) {
    if (std::binary_search(c.residues.begin(), c.residues.end(), reduce_mod(y, c.period))) ++count;
  }
  Rational total(count);
  const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), y, [](const auto& a, const IntVec& v) { return a.first < v; });
  if (it != atoms_.end() && it->first == y) total += it->second;
  return total;
}

Rational LatticeMeasure::cube_mass(const IntVec& x, std::int64_t r) const {
  std::int64_t count = 0;
  for (const auto& c : periodic_) {
    for (const auto& res : c.residues) {
      std::int64_t prod = 1;
      for (int i = 0; i < d_ && prod > 0; ++i) prod *= count_residue(x[i] - r, x[i] + r, res[i], c.period[i]);
      count += prod;
    }
  }
  Rational total(count);
  if (d_ == 1) {
    const auto lo = std::lower_bound(atoms_.begin(), atoms_.end(), x[0] - r, [](const auto& a, std::int64_t v) { return a.first[0] < v; });
    for (auto it = lo; it != atoms_.end() && it->first[0] <= x[0] + r; ++it) total += it->second;
  } else {
    for (const auto& [a, w] : atoms_) {
      bool inside = true;
      for (int i = 0; i < d_ && inside; ++i) inside = x[i] - r <= a[i] && a[i] <= x[i] + r;
      if (inside) total += w;
    }
  }
  return total;
}

Rational LatticeMeasure::set_mass(const IntVec& x, const std::vector<IntVec>& window) const {
  Rational total(0);
  IntVec y(static_cast<std::size_t>(d_));
  for (const auto& w : window) {
    for (int i = 0; i < d_; ++i) y[i] = x[i] + w[i];
    total += point_mass(y);
  }
  return total;
}

ShiftSup LatticeMeasure::sup_cube(std::int64_t r) const {
  const IntVec P = period();
  std::optional<ShiftSup> best;
  auto consider = [&](const IntVec& x) {
    const Rational v = cube_mass(x, r);
    if (!best || ExtRational(v) > best->sup) best = ShiftSup{v, Element(x), true};
  };
  if (!atoms_.empty()) {
    std::vector<std::vector<std::int64_t>> axes(static_cast<std::size_t>(d_));
    std::size_t total = 1;
    for (int i = 0; i < d_; ++i) {
      std::int64_t lo = atoms_.front().first[i], hi = lo;
      for (const auto& [a, w] : atoms_) {
        lo = std::min(lo, a[i]);
        hi = std::max(hi, a[i]);
        axes[i].push_back(a[i] + r);
      }
      for (const auto& c : periodic_) {
        for (const auto& res : c.residues) {
          const std::int64_t m = c.period[i];
          check_cap(axes[i].size() + static_cast<std::size_t>((hi - lo + 2 * r) / m + 2));
          for (std::int64_t v = lo - 2 * r + ((res[i] - (lo - 2 * r)) % m + m) % m; v <= hi; v += m) axes[i].push_back(v + r);
        }
      }
      std::sort(axes[i].begin(), axes[i].end());
      axes[i].erase(std::unique(axes[i].begin(), axes[i].end()), axes[i].end());
      total *= axes[i].size();
      check_cap(total);
    }
    for_each_product(axes, consider);
  }
  if (!P.empty()) {
    std::size_t cells = 1;
    for (const auto m : P) {
      cells *= static_cast<std::size_t>(m);
      check_cap(cells);
    }
    IntVec lo(static_cast<std::size_t>(d_), 0);
    if (!atoms_.empty()) {
      std::int64_t hi0 = atoms_.front().first[0];
      for (const auto& [a, w] : atoms_) hi0 = std::max(hi0, a[0]);
      lo[0] = (floor_div(hi0 + r, P[0]) + 1) * P[0];
    }
    for_each_cell(lo, P, consider);
  }
  if (!best) return {Rational(0), Element(IntVec(static_cast<std::size_t>(d_), 0)), true};
  return *best;
}

ShiftSup LatticeMeasure::sup_set(const std::vector<IntVec>& window) const {
  const IntVec zero_v(static_cast<std::size_t>(d_), 0);
  if (window.empty()) return {Rational(0), Element(zero_v), true};
  std::vector<IntVec> cand;
  for (const auto& [a, w] : atoms_) {
    for (const auto& u : window) {
      IntVec x(static_cast<std::size_t>(d_));
      for (int i = 0; i < d_; ++i) x[i] = a[i] - u[i];
      cand.push_back(std::move(x));
    }
    check_cap(cand.size());
  }
  const IntVec P = period();
  if (!P.empty()) {
    IntVec lo(static_cast<std::size_t>(d_), 0);
    if (!atoms_.empty()) {
      std::int64_t hi0 = atoms_.front().first[0], wmin = window.front()[0];
      for (const auto& [a, w] : atoms_) hi0 = std::max(hi0, a[0]);
      for (const auto& u : window) wmin = std::min(wmin, u[0]);
      lo[0] = (floor_div(hi0 - wmin, P[0]) + 1) * P[0];
    }
    std::size_t cells = 1;
    for (const auto m : P) {
      cells *= static_cast<std::size_t>(m);
      check_cap(cells + cand.size());
    }
    for_each_cell(lo, P, [&](const IntVec& x) { cand.push_back(x); });
  }
  if (cand.empty()) return {Rational(0), Element(zero_v), true};
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  ShiftSup best{set_mass(cand.front(), window), Element(cand.front()), true};
  for (std::size_t i = 1; i < cand.size(); ++i) {
    const Rational v = set_mass(cand[i], window);
    if (ExtRational(v) > best.sup) best = {v, Element(cand[i]), true};
  }
  return best;
}

// -------------------------------------------------------------------- Torus

std::int64_t Torus::size() const {
  std::int64_t n = 1;
  for (const auto m : moduli) n *= m;
  return n;
}

std::int64_t Torus::index(const IntVec& x) const {
  IntVec v(moduli.size(), 0);
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    const std::int64_t xi = i < x.size() ? x[i] : 0;
    v[i] = ((xi % moduli[i]) + moduli[i]) % moduli[i];
  }
  return lex_index(v, moduli);
}

IntVec Torus::cell(std::int64_t i) const { return lex_element(i, moduli); }

Element Torus::lift(std::int64_t i) const {
  IntVec v = cell(i);
  if (trim) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  }
  return Element(std::move(v));
}

std::int64_t Torus::add(std::int64_t a, std::int64_t b) const {
  const IntVec x = cell(a), y = cell(b);
  IntVec s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = (x[i] + y[i]) % moduli[i];
  return lex_index(s, moduli);
}

std::int64_t Torus::sub(std::int64_t a, std::int64_t b) const {
  const IntVec x = cell(a), y = cell(b);
  IntVec s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = ((x[i] - y[i]) % moduli[i] + moduli[i]) % moduli[i];
  return lex_index(s, moduli);
}

TorusSet torus_of(const GroupSpec& group, const std::variant<DiscreteSet, ChainSet>& set) {
  constexpr std::int64_t kMaxCells = 1 << 22;
  TorusSet out;
  auto fill_explicit = [&](const ExplicitFinite& e) {
    out.member.assign(static_cast<std::size_t>(out.torus.size()), 0);
    for (const auto& g : e.elements) out.member[static_cast<std::size_t>(out.torus.index(std::get<IntVec>(g)))] = 1;
  };
  std::visit(
      overloaded{
          [&](const FiniteAbelian& fa) {
            const auto* s = std::get_if<DiscreteSet>(&set);
            const auto* e = s ? std::get_if<ExplicitFinite>(s) : nullptr;
            if (!e) throw ShapeError("sets on a finite group are explicit element lists");
            out.torus.moduli = fa.moduli;
            if (out.torus.size() > kMaxCells) throw CapExceeded("group too large to enumerate");
            out.domain = describe(group);
            fill_explicit(*e);
          },
          [&](const ZLattice& z) {
            const auto* s = std::get_if<DiscreteSet>(&set);
            const auto* p = s ? std::get_if<PeriodicDiscrete>(s) : nullptr;
            if (!p) throw PreconditionError("only periodic subsets of Z^d reduce to a fundamental domain");
            if (static_cast<int>(p->period.size()) != z.dimension) throw ShapeError("periodic set of wrong dimension");
            out.torus.moduli = p->period;
            if (out.torus.size() > kMaxCells) throw CapExceeded("period box too large to enumerate");
            out.domain = "period box " + to_string(p->period);
            out.member.assign(static_cast<std::size_t>(out.torus.size()), 0);
            for (const auto& r : p->residues) out.member[static_cast<std::size_t>(out.torus.index(r))] = 1;
          },
          [&](const SigmaFiniteChain& chain) {
            const auto* c = std::get_if<ChainSet>(&set);
            if (!c) throw ShapeError("sets on a chain group are chain sets");
            std::size_t coords = 0;
            std::visit(overloaded{
                           [&](const Cylinder& cy) { coords = cy.coords; },
                           [&](const ChainSubgroup&) {
                             throw PreconditionError("a finite subgroup of an infinite chain has no finite quotient");
                           },
                           [](const WholeChain&) {},
                           [&](const ExplicitFinite&) {
                             throw PreconditionError("a finite subset of an infinite chain has no finite quotient");
                           },
                       },
                       *c);
            out.torus.moduli.assign(chain.moduli.begin(), chain.moduli.begin() + static_cast<long>(coords));
            out.torus.trim = true;
            if (out.torus.size() > kMaxCells) throw CapExceeded("quotient H_c too large to enumerate");
            out.domain = "H_" + std::to_string(coords) + " (quotient by the coordinates >= " + std::to_string(coords) + ")";
            out.member.assign(static_cast<std::size_t>(out.torus.size()), 0);
            for (std::int64_t i = 0; i < out.torus.size(); ++i) {
              out.member[static_cast<std::size_t>(i)] = contains(chain, *c, std::get<IntVec>(out.torus.lift(i))) ? 1 : 0;
            }
          },
          [&](const RealLine&) { throw ShapeError("the real line has no finite quotient; use interval methods"); },
      },
      group);
  return out;
}

std::vector<char> expand_to(const TorusSet& s, const Torus& big) {
  std::vector<char> out(static_cast<std::size_t>(big.size()), 0);
  for (std::int64_t i = 0; i < big.size(); ++i) {
    out[static_cast<std::size_t>(i)] = s.member[static_cast<std::size_t>(s.torus.index(big.cell(i)))];
  }
  return out;
}

// ------------------------------------------------------------ finite groups

std::vector<Rational> finite_weights(const FiniteAbelian& group, const MeasureSpec& measure) {
  const GroupSpec g = group;
  const auto n = static_cast<std::size_t>(*order(g));
  std::vector<Rational> w(n, Rational(0));
  auto add_elem = [&](const Element& e, const Rational& weight) {
    const auto v = std::get<IntVec>(normalize(e, g));
    w[static_cast<std::size_t>(lex_index(v, group.moduli))] += weight;
  };
  auto add_set = [&](const DiscreteSet& s) {
    const auto* e = std::get_if<ExplicitFinite>(&s);
    if (!e) throw ShapeError("periodic sets are not defined on a finite group; list the elements");
    for (const auto& x : e->elements) add_elem(x, Rational(1));
  };
  std::function<void(const MeasureSpec&)> add = [&](const MeasureSpec& m) {
    std::visit(overloaded{
                   [&](const Counting& c) {
                     const auto* s = std::get_if<DiscreteSet>(&c.of);
                     if (!s) throw ShapeError("counting measure on a finite group needs a discrete set");
                     add_set(*s);
                   },
                   [&](const HaarTrace& h) {
                     const auto* s = std::get_if<DiscreteSet>(&h.of);
                     if (!s) throw ShapeError("Haar trace on a finite group needs a discrete set");
                     add_set(*s);
                   },
                   [&](const DiracAtZero&) { add_elem(zero(g), Rational(1)); },
                   [&](const WeightedDiracs& wd) {
                     for (const auto& [x, weight] : wd.atoms) add_elem(x, weight);
                   },
                   [&](const MeasureSum& s) {
                     for (const auto& part : s.parts) add(part);
                   },
               },
               m.kind);
  };
  add(measure);
  return w;
}

}  // namespace density_lab::detail
