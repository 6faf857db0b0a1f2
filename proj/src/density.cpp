#include "density_lab/density.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "density_lab/detail/overloaded.hpp"
#include "density_lab/errors.hpp"
#include "density_lab/setops.hpp"
#include "engine.hpp"

namespace density_lab {

using detail::overloaded;

CustomK custom_k(IntervalUnion K) {
  if (K.length() != Rational(1)) throw PreconditionError("window shape K must have length 1, got " + K.length().str());
  return CustomK{std::move(K)};
}

std::string describe(const WindowShape& shape) {
  return std::visit(overloaded{
                        [](const CenteredCube&) { return std::string("centered cube"); },
                        [](const IntervalShape&) { return std::string("interval [x-r, x+r]"); },
                        [](const CustomK& k) { return "K = " + k.K.str(); },
                    },
                    shape);
}

std::string to_string(Method m) {
  switch (m) {
    case Method::ClosedForm: return "closed-form";
    case Method::WindowScan: return "window-scan";
    case Method::BruteForce: return "brute-force";
    case Method::CertifiedLowerBound: return "certified-lower-bound";
  }
  return "?";
}

std::string to_string(ValueKind k) {
  switch (k) {
    case ValueKind::Exact: return "exact";
    case ValueKind::Estimated: return "estimated";
    case ValueKind::Infinite: return "infinite";
  }
  return "?";
}

ExtRational DensityReport::value() const {
  if (kind == ValueKind::Infinite) return ExtRational::infinity();
  if (kind == ValueKind::Exact) return *exact;
  throw PreconditionError("density is only estimated (last ratio " + std::to_string(extrapolated) + ")");
}

double DensityReport::approx() const {
  if (kind == ValueKind::Infinite) return std::numeric_limits<double>::infinity();
  if (kind == ValueKind::Exact) return exact->to_double();
  return extrapolated;
}

std::string DensityReport::summary() const {
  char buf[64];
  switch (kind) {
    case ValueKind::Exact:
      return exact->str() + " (exact, " + to_string(method) + ")";
    case ValueKind::Infinite:
      return std::string("Infinite (certified: ") +
             (witness && !witness->eta_schedule.empty() ? "eta schedule" : "accumulation window") + ")";
    case ValueKind::Estimated:
      std::snprintf(buf, sizeof buf, "%.6g", extrapolated);
      return std::string("~") + buf + " (estimated, " + to_string(method) + ", " +
             (converged ? "converged" : "not converged") + ")";
  }
  return "?";
}

namespace {

DensityReport exact_report(Rational v, Method method, std::string note = {}) {
  DensityReport r;
  r.kind = ValueKind::Exact;
  r.exact = std::move(v);
  r.method = method;
  if (!note.empty()) r.notes.push_back(std::move(note));
  return r;
}

// Counting measures of nonempty explicit finite lists stand for truncations
// of infinite sets and are estimated rather than given the value 0.
bool has_truncated_part(const MeasureSpec& m) {
  return std::visit(overloaded{
                        [](const Counting& c) {
                          return std::visit(overloaded{
                                                [](const DiscreteSet& s) {
                                                  const auto* e = std::get_if<ExplicitFinite>(&s);
                                                  return e && !e->elements.empty();
                                                },
                                                [](const PointConfig& p) {
                                                  const auto* f = std::get_if<FinitePoints>(&p.body);
                                                  return f && !f->points.empty();
                                                },
                                                [](const ChainSet&) { return false; },
                                            },
                                            c.of);
                        },
                        [](const HaarTrace& h) {
                          const auto* s = std::get_if<DiscreteSet>(&h.of);
                          const auto* e = s ? std::get_if<ExplicitFinite>(s) : nullptr;
                          return e && !e->elements.empty();
                        },
                        [](const MeasureSum& s) {
                          return std::any_of(s.parts.begin(), s.parts.end(), [](const auto& p) { return has_truncated_part(p); });
                        },
                        [](const auto&) { return false; },
                    },
                    m.kind);
}

DensityReport infinite_from_accumulation(const detail::LineMeasure& m) {
  DensityReport r;
  r.kind = ValueKind::Infinite;
  r.method = Method::ClosedForm;
  Witness w;
  if (const auto q = m.accumulation_point()) {
    w.window = IntervalUnion::closed(*q - Rational(1, 2), *q + Rational(1, 2));
    w.x = Element(*q);
    w.ratio = ExtRational::infinity();
    w.description = "nu(" + w.window->str() + ") is infinite: the configuration accumulates at " + q->str();
  } else {
    w.description = "configuration flagged as accumulating";
  }
  r.witness = std::move(w);
  r.notes.push_back("a bounded window of infinite mass makes every ratio infinite");
  return r;
}

std::optional<DensityReport> closed_form(const GroupSpec& group, const MeasureSpec& nu) {
  return std::visit(
      overloaded{
          [&](const FiniteAbelian& fa) -> std::optional<DensityReport> {
            return kahane_density_finite_group(fa, nu, FiniteMode::ClosedForm);
          },
          [&](const RealLine&) -> std::optional<DensityReport> {
            const detail::LineMeasure m(nu);
            if (m.accumulates()) return infinite_from_accumulation(m);
            if (has_truncated_part(nu)) return std::nullopt;
            auto r = exact_report(m.periodic_density(), Method::ClosedForm,
                                  "periodic part density; bounded parts contribute 0");
            if (const auto p = m.period()) r.notes.push_back("common period " + p->str());
            return r;
          },
          [&](const ZLattice& z) -> std::optional<DensityReport> {
            if (has_truncated_part(nu)) return std::nullopt;
            const detail::LatticeMeasure m(z, nu);
            auto r = exact_report(m.periodic_density(), Method::ClosedForm,
                                  "residues per period; finitely supported parts contribute 0");
            if (m.has_periodic_part()) r.notes.push_back("common period " + to_string(m.period()));
            return r;
          },
          [&](const SigmaFiniteChain&) -> std::optional<DensityReport> { return std::nullopt; },
      },
      group);
}

struct ShapeWindow {
  IntervalUnion base;  // window at x = 0 on R
  Rational measure;
};

ShapeWindow line_window(const WindowShape& K, const Rational& r) {
  return std::visit(overloaded{
                        [&](const IntervalShape&) { return ShapeWindow{IntervalUnion::closed(-r, r), r * 2}; },
                        [&](const CustomK& k) { return ShapeWindow{k.K.scaled(r), r}; },
                        [](const CenteredCube&) -> ShapeWindow { throw ShapeError("centered cubes are windows on Z^d"); },
                    },
                    K);
}

}  // namespace

DensityReport classical_upper_density(const GroupSpec& group, const DiscreteSet& A, std::int64_t n_max) {
  const auto* z = std::get_if<ZLattice>(&group);
  if (!z || z->dimension != 1) throw ShapeError("classical upper density needs Z, got " + describe(group));
  if (const auto* p = std::get_if<PeriodicDiscrete>(&A)) {
    return exact_report(Rational(static_cast<long long>(p->residues.size()), p->period[0]), Method::ClosedForm,
                        "residues per period");
  }
  const auto& e = std::get<ExplicitFinite>(A);
  std::vector<std::int64_t> pos;
  for (const auto& x : e.elements) {
    const auto v = std::get<IntVec>(x)[0];
    if (v >= 1) pos.push_back(v);
  }
  if (pos.empty()) return exact_report(Rational(0), Method::ClosedForm, "no positive elements");
  DensityReport r;
  r.kind = ValueKind::Estimated;
  r.method = Method::WindowScan;
  r.settings.r_max = Rational(n_max);
  for (std::int64_t n = 8; n <= n_max; n *= 2) {
    const auto count = std::upper_bound(pos.begin(), pos.end(), n) - pos.begin();
    r.schedule.push_back({Rational(n), Rational(static_cast<long long>(count), n), std::nullopt, true});
  }
  if (!r.schedule.empty()) {
    const auto& last = r.schedule.back().ratio.value();
    r.extrapolated = last.to_double();
    if (r.schedule.size() >= 2) {
      const auto& prev = r.schedule[r.schedule.size() - 2].ratio.value();
      r.converged = (last - prev).abs() <= r.settings.tol * last.abs();
    }
  }
  r.notes.push_back("explicit list treated as a truncation; A(n)/n schedule");
  return r;
}

std::vector<Rational> geometric_schedule(const EstimationSettings& settings) {
  if (settings.r0.sign() <= 0) throw PreconditionError("r0 must be positive");
  std::vector<Rational> out;
  Rational r = settings.r0;
  for (int k = 0; k <= settings.kmax; ++k, r *= 2) {
    if (settings.r_max && r > *settings.r_max) break;
    out.push_back(r);
  }
  return out;
}

std::vector<ScheduleEntry> window_density_profile(const GroupSpec& group, const MeasureSpec& nu, const WindowShape& K,
                                                  const std::vector<Rational>& schedule) {
  validate(group, nu);
  std::vector<ScheduleEntry> out;
  std::visit(overloaded{
                 [&](const RealLine&) {
                   const detail::LineMeasure m(nu);
                   for (const auto& r : schedule) {
                     if (r.sign() <= 0) throw PreconditionError("window scale must be positive, got " + r.str());
                     const auto w = line_window(K, r);
                     const auto s = m.sup_shift(w.base);
                     const ExtRational ratio = s.sup.is_infinite() ? s.sup : ExtRational(s.sup.value() / w.measure);
                     out.push_back({r, ratio, s.argmax, s.attained});
                   }
                 },
                 [&](const ZLattice& z) {
                   if (!std::holds_alternative<CenteredCube>(K)) throw ShapeError("windows on Z^d are centered cubes");
                   const detail::LatticeMeasure m(z, nu);
                   for (const auto& r : schedule) {
                     if (!r.is_integer() || r.sign() < 0) throw PreconditionError("cube radius must be a nonnegative integer, got " + r.str());
                     const auto ri = r.to_int64();
                     const auto s = m.sup_cube(ri);
                     Rational vol(1);
                     for (int i = 0; i < z.dimension; ++i) vol *= Rational(2 * ri + 1);
                     out.push_back({r, s.sup.value() / vol, s.argmax, true});
                   }
                 },
                 [&](const auto&) { throw ShapeError("window profiles need Z^d or R, got " + describe(group)); },
             },
             group);
  return out;
}

DensityReport auud_window(const GroupSpec& group, const MeasureSpec& nu, const WindowShape& K,
                          const EstimationSettings& settings) {
  validate(group, nu);
  if (!settings.scan_only) {
    if (auto cf = closed_form(group, nu)) {
      cf->settings = settings;
      return *cf;
    }
  }
  DensityReport r;
  r.settings = settings;
  r.method = Method::WindowScan;
  r.schedule = window_density_profile(group, nu, K, geometric_schedule(settings));
  r.notes.push_back("window shape: " + describe(K));
  if (r.schedule.empty()) throw PreconditionError("empty estimation schedule");
  const auto inf = std::find_if(r.schedule.begin(), r.schedule.end(), [](const auto& e) { return e.ratio.is_infinite(); });
  Witness w;
  const auto& pick = inf != r.schedule.end() ? *inf : r.schedule.back();
  w.x = pick.argmax;
  w.r = pick.r;
  w.ratio = pick.ratio;
  if (std::holds_alternative<RealLine>(group) && pick.argmax) {
    w.window = line_window(K, pick.r).base.shifted(std::get<Rational>(*pick.argmax));
  }
  if (inf != r.schedule.end()) {
    r.kind = ValueKind::Infinite;
    w.description = "window of infinite mass";
    r.witness = std::move(w);
    return r;
  }
  w.description = "maximizing window at the largest scale";
  r.witness = std::move(w);
  r.kind = ValueKind::Estimated;
  const auto& last = r.schedule.back().ratio.value();
  r.extrapolated = last.to_double();
  if (r.schedule.size() >= 2) {
    const auto& prev = r.schedule[r.schedule.size() - 2].ratio.value();
    r.converged = (last - prev).abs() <= settings.tol * last.abs();
    if (last.is_zero()) r.converged = prev.is_zero();
  }
  return r;
}

// ----------------------------------------------------------- finite groups

FiniteGroupOracle::FiniteGroupOracle(const FiniteAbelian& group, std::int64_t cap) : group_(group) {
  const GroupSpec g = group;
  validate(g);
  const auto ord = *density_lab::order(g);
  if (ord > cap || ord > kHardOracleCap)
    throw CapExceeded("brute force needs |G| <= " + std::to_string(std::min(cap, kHardOracleCap)) + ", got " + std::to_string(ord));
  n_ = static_cast<std::size_t>(ord);
  elements_ = enumerate(g);
  const std::uint32_t full = 1u << n_;
  // Translation tables: T[g][mask] = mask shifted by element g.
  std::vector<std::vector<std::uint32_t>> T(n_, std::vector<std::uint32_t>(full, 0));
  for (std::size_t a = 0; a < n_; ++a) {
    std::vector<std::size_t> perm(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      perm[i] = static_cast<std::size_t>(lex_index(std::get<IntVec>(add(elements_[i], elements_[a], g)), group.moduli));
    }
    for (std::uint32_t mask = 1; mask < full; ++mask) {
      const auto low = static_cast<std::size_t>(std::countr_zero(mask));
      T[a][mask] = T[a][mask & (mask - 1)] | (1u << perm[low]);
    }
  }
  sumsize_.assign(static_cast<std::size_t>(full) * full, 0);
  for (std::uint32_t C = 1; C < full; ++C) {
    for (std::uint32_t V = 1; V < full; ++V) {
      std::uint32_t s = 0;
      for (std::uint32_t c = C; c; c &= c - 1) s |= T[static_cast<std::size_t>(std::countr_zero(c))][V];
      sumsize_[static_cast<std::size_t>(C) * full + V] = static_cast<std::uint8_t>(std::popcount(s));
    }
  }
}

FiniteGroupOracle::Result FiniteGroupOracle::evaluate_counts(const std::vector<std::int64_t>& w) const {
  if (w.size() != n_) throw ShapeError("weight vector has the wrong length");
  const std::uint32_t full = 1u << n_;
  std::vector<std::int64_t> nuV(full, 0);
  for (std::uint32_t V = 1; V < full; ++V) {
    nuV[V] = nuV[V & (V - 1)] + w[static_cast<std::size_t>(std::countr_zero(V))];
  }
  __int128 inf_num = -1, inf_den = 1;
  Result res;
  for (std::uint32_t C = 1; C < full; ++C) {
    const std::uint8_t* row = &sumsize_[static_cast<std::size_t>(C) * full];
    __int128 sup_num = -1, sup_den = 1;
    std::uint32_t sup_V = 0;
    for (std::uint32_t V = 1; V < full; ++V) {
      if (static_cast<__int128>(nuV[V]) * sup_den > sup_num * row[V]) {
        sup_num = nuV[V];
        sup_den = row[V];
        sup_V = V;
      }
    }
    if (inf_num < 0 || sup_num * inf_den < inf_num * sup_den) {
      inf_num = sup_num;
      inf_den = sup_den;
      res.C = C;
      res.V = sup_V;
    }
  }
  res.value = Rational(static_cast<long long>(inf_num), static_cast<long long>(inf_den));
  return res;
}

FiniteGroupOracle::Result FiniteGroupOracle::evaluate(const std::vector<Rational>& weights) const {
  mpz_class den = 1;
  for (const auto& x : weights) {
    if (x.sign() < 0) throw PreconditionError("measure weights must be nonnegative");
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.denominator().get_mpz_t());
  }
  std::vector<std::int64_t> ints;
  mpz_class total = 0;
  for (const auto& x : weights) {
    const mpz_class v = x.numerator() * (den / x.denominator());
    total += v;
    if (!total.fits_slong_p()) throw CapExceeded("measure weights too large for the exact brute-force kernel");
    ints.push_back(v.get_si());
  }
  auto res = evaluate_counts(ints);
  res.value = res.value / Rational(mpq_class(den));
  return res;
}

std::vector<Element> FiniteGroupOracle::elements_of(std::uint32_t mask) const {
  std::vector<Element> out;
  for (std::size_t i = 0; i < n_; ++i) {
    if (mask & (1u << i)) out.push_back(elements_[i]);
  }
  return out;
}

DensityReport kahane_density_finite_group(const FiniteAbelian& group, const MeasureSpec& nu, FiniteMode mode,
                                          std::int64_t cap) {
  const GroupSpec g = group;
  validate(g, nu);
  const auto weights = detail::finite_weights(group, nu);
  if (mode == FiniteMode::ClosedForm) {
    Rational total(0);
    for (const auto& w : weights) total += w;
    auto r = exact_report(total / Rational(*density_lab::order(g)), Method::ClosedForm, "nu(G)/|G|: C = G forces every ratio to nu(G)/|G|");
    Witness w;
    if (*density_lab::order(g) <= 64) {
      w.C = enumerate(g);
      w.V = w.C;
    }
    w.ratio = *r.exact;
    w.description = "C = G, V = G";
    r.witness = std::move(w);
    return r;
  }
  const FiniteGroupOracle oracle(group, cap);
  const auto res = oracle.evaluate(weights);
  auto r = exact_report(res.value, Method::BruteForce, "inf over all nonempty C of sup over all nonempty V");
  Witness w;
  w.C = oracle.elements_of(res.C);
  w.V = oracle.elements_of(res.V);
  w.ratio = res.value;
  w.description = "minimizing C with its maximizing V";
  r.witness = std::move(w);
  if (cap > 10) r.notes.push_back("warning: brute-force cap above 10 is slow");
  return r;
}

DensityReport kahane_density(const GroupSpec& group, const MeasureSpec& nu, const EstimationSettings& settings) {
  validate(group, nu);
  return std::visit(overloaded{
                        [&](const FiniteAbelian& fa) { return kahane_density_finite_group(fa, nu); },
                        [&](const ZLattice&) {
                          auto r = auud_window(group, nu, CenteredCube{}, settings);
                          r.notes.push_back("computed through the window equivalence D(nu) = D_K(nu)");
                          return r;
                        },
                        [&](const RealLine&) {
                          auto r = auud_window(group, nu, IntervalShape{}, settings);
                          r.notes.push_back("computed through the window equivalence D(nu) = D_K(nu)");
                          return r;
                        },
                        [&](const SigmaFiniteChain&) -> DensityReport {
                          throw PreconditionError("on a chain group use the Hegyvari density along H_n");
                        },
                    },
                    group);
}

DensityReport counting_density(const GroupSpec& group, const PointConfig& S, const EstimationSettings& settings) {
  return kahane_density(group, counting(S), settings);
}

DensityReport delta_density(const GroupSpec& group, const MeasureSpec& nu, const EstimationSettings& settings) {
  validate(group, nu);
  if (is_discrete(group)) {
    auto r = kahane_density(group, nu, settings);
    r.notes.push_back("discrete group: every compact C is finite, so the finite-set density equals D");
    return r;
  }
  const detail::LineMeasure m(nu);
  // A positive point mass x0: V = [x0 - η/2, x0 + η/2] and F = {0} give ν(V)/η.
  const std::optional<Rational> x0 = m.some_atom();
  if (x0) {
    DensityReport r;
    r.kind = ValueKind::Infinite;
    r.method = Method::CertifiedLowerBound;
    r.settings = settings;
    Witness w;
    w.C = {Element(Rational(0))};
    Rational eta(1);
    for (int k = 0; k <= 7; ++k, eta /= 10) {
      const auto mass = m.mass(*x0 - eta / 2, *x0 + eta / 2);
      w.eta_schedule.emplace_back(eta, mass.is_infinite() ? mass : ExtRational(mass.value() / eta));
    }
    eta *= 10;
    w.x = Element(*x0);
    w.window = IntervalUnion::closed(*x0 - eta / 2, *x0 + eta / 2);
    w.V = {Element(*x0)};
    w.ratio = w.eta_schedule.back().second;
    w.description = "F = {0}, V = [x0 - eta/2, x0 + eta/2] around the atom x0; for any finite F the ratio is at least nu({x0})/(#F eta)";
    r.witness = std::move(w);
    r.notes.push_back("lower bound nu(V)/mu(F+V) diverges as eta -> 0");
    return r;
  }
  auto r = kahane_density(group, nu, settings);
  r.method = Method::CertifiedLowerBound;
  r.notes.push_back("no atoms: reporting the certified lower bound given by D");
  return r;
}

DensityReport hegyvari_density(const SigmaFiniteChain& chain, const ChainSet& A, std::size_t n_max) {
  if (n_max > chain.depth())
    throw CapExceeded("depth " + std::to_string(n_max) + " exceeds the materialized depth " + std::to_string(chain.depth()));
  DensityReport r;
  r.method = Method::ClosedForm;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto count = count_in_subgroup(chain, A, n);
    r.schedule.push_back({Rational(static_cast<long long>(n)), Rational(count) / Rational(chain_order(chain, n)), std::nullopt, true});
  }
  r.kind = ValueKind::Exact;
  r.exact = std::visit(overloaded{
                           [&](const Cylinder& c) {
                             return Rational(static_cast<long long>(c.allowed.size())) / Rational(chain_order(chain, c.coords));
                           },
                           [](const ChainSubgroup&) { return Rational(0); },
                           [](const WholeChain&) { return Rational(1); },
                           [](const ExplicitFinite&) { return Rational(0); },
                       },
                       A);
  r.notes.push_back(std::holds_alternative<Cylinder>(A) ? "cylindrical set: ratio is constant once H_n sees every constrained coordinate"
                                                         : "finite or trivial set along the chain");
  if (!r.schedule.empty()) r.extrapolated = r.schedule.back().ratio.value().to_double();
  return r;
}

TranslationResult translation_witness(const GroupSpec& group, const MeasureSpec& nu, const TestWindow& W,
                                      const Rational& gamma) {
  validate(group, nu);
  const Rational muW = std::visit(overloaded{
                                      [](const IntervalUnion& u) { return u.length(); },
                                      [](const ExplicitFinite& f) { return Rational(static_cast<long long>(f.elements.size())); },
                                  },
                                  W);
  TranslationResult out;
  out.target = gamma * muW;
  const Element origin = zero(group);
  const Window win = std::visit([](const auto& w) -> Window { return w; }, W);
  out.mass_at_x = window_mass(group, nu, origin, win);
  if (out.mass_at_x >= ExtRational(out.target)) {
    out.x = origin;
    out.scanned_sup = out.mass_at_x;
    return out;
  }
  std::optional<Element> best;
  std::visit(overloaded{
                 [&](const RealLine&) {
                   const auto* u = std::get_if<IntervalUnion>(&W);
                   if (!u) throw ShapeError("test windows on R are interval unions");
                   const detail::LineMeasure m(nu);
                   const auto s = m.sup_shift(*u);
                   out.scanned_sup = s.sup;
                   best = s.argmax;
                 },
                 [&](const ZLattice& z) {
                   const auto* f = std::get_if<ExplicitFinite>(&W);
                   if (!f) throw ShapeError("test windows on Z^d are finite sets");
                   std::vector<IntVec> w;
                   for (const auto& e : f->elements) w.push_back(std::get<IntVec>(normalize(e, group)));
                   const detail::LatticeMeasure m(z, nu);
                   const auto s = m.sup_set(w);
                   out.scanned_sup = s.sup;
                   best = s.argmax;
                 },
                 [&](const auto&) {
                   out.scanned_sup = Rational(0);
                   for (const auto& x : enumerate(group)) {
                     const auto v = window_mass(group, nu, x, win);
                     if (v > out.scanned_sup) {
                       out.scanned_sup = v;
                       best = x;
                     }
                   }
                 },
             },
             group);
  if (best) {
    const auto v = window_mass(group, nu, *best, win);
    if (v >= ExtRational(out.target)) {
      out.x = best;
      out.mass_at_x = v;
    }
  }
  return out;
}

Rational rudin_sum_measure(const GroupSpec& group, const BoundedSet& C, const Rational& L) {
  return std::visit(
      overloaded{
          [&](const RealLine&) {
            const IntervalUnion V = IntervalUnion::closed(-L, L);
            return std::visit(overloaded{
                                  [&](const IntervalUnion& u) { return minkowski_sum(u, V).length(); },
                                  [&](const ExplicitFinite& f) {
                                    std::vector<Interval> parts;
                                    for (const auto& e : f.elements) {
                                      const auto& x = std::get<Rational>(e);
                                      parts.push_back({x - L, x + L});
                                    }
                                    return IntervalUnion(std::move(parts)).length();
                                  },
                              },
                              C);
          },
          [&](const ZLattice& z) {
            const auto* f = std::get_if<ExplicitFinite>(&C);
            if (!f) throw ShapeError("C on Z^d must be a finite set");
            if (z.dimension == 1) {
              std::vector<Interval> parts;
              for (const auto& e : f->elements) {
                const Rational x(std::get<IntVec>(e)[0]);
                parts.push_back({x - L, x + L});
              }
              Rational count(0);
              const IntervalUnion merged(std::move(parts));
              for (const auto& p : merged.parts()) count += p.length() + 1;
              return count;
            }
            const auto l = L.to_int64();
            IntVec ext(static_cast<std::size_t>(z.dimension), 2 * l + 1);
            if (BoxDomain{ext}.size() * static_cast<std::int64_t>(f->elements.size()) > (1 << 24))
              throw CapExceeded("cube sum too large to enumerate");
            std::vector<IntVec> pts;
            for (const auto& e : f->elements) {
              const auto& c = std::get<IntVec>(e);
              for (auto v : BoxDomain{ext}.cells()) {
                for (std::size_t i = 0; i < v.size(); ++i) v[i] += c[i] - l;
                pts.push_back(std::move(v));
              }
            }
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
            return Rational(static_cast<long long>(pts.size()));
          },
          [&](const auto&) -> Rational { throw ShapeError("Rudin windows are built on R or Z^d, not " + describe(group)); },
      },
      group);
}

RudinWindow rudin_window(const GroupSpec& group, const BoundedSet& C, const Rational& eps) {
  if (eps.sign() <= 0) throw PreconditionError("epsilon must be positive, got " + eps.str());
  int dim = 1;
  if (const auto* z = std::get_if<ZLattice>(&group)) dim = z->dimension;
  auto muV = [&](const Rational& L) {
    if (std::holds_alternative<RealLine>(group)) return L * 2;
    Rational v(1);
    for (int i = 0; i < dim; ++i) v *= L * 2 + 1;
    return v;
  };
  RudinWindow out;
  auto holds = [&](const Rational& L) {
    const bool ok = rudin_sum_measure(group, C, L) < (Rational(1) + eps) * muV(L);
    out.trace.emplace_back(L, ok);
    return ok;
  };
  Rational hi(1);
  while (!holds(hi)) {
    hi *= 2;
    if (hi > Rational(std::int64_t{1} << 62)) throw PreconditionError("no window found below 2^62");
  }
  if (hi > Rational(1)) {
    Rational lo = hi / 2;  // fails
    while (hi - lo > Rational(1)) {
      const Rational mid = ((lo + hi) / 2).floor();
      if (holds(mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
  }
  out.L = hi;
  out.W = IntervalUnion::closed(Rational(0), hi);
  out.V = IntervalUnion::closed(-hi, hi);
  out.mu_CV = rudin_sum_measure(group, C, hi);
  out.mu_V = muV(hi);
  out.verified = out.mu_CV < (Rational(1) + eps) * out.mu_V;
  if (!out.verified) throw VerificationError("window inequality failed on re-check", "L = " + hi.str());
  return out;
}

}  // namespace density_lab
