#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "density_lab/additive.hpp"
#include "density_lab/density.hpp"
#include "density_lab/detail/overloaded.hpp"
#include "density_lab/errors.hpp"
#include "density_lab/io.hpp"
#include "density_lab/setops.hpp"
#include "density_lab/structure.hpp"

namespace density_lab::cli {

using detail::overloaded;

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

struct Options {
  std::string instance;
  std::string out_file;
  std::string notion = "kahane";
  std::string object;
  std::string K;
  std::string H;
  std::string objects;
  std::optional<std::string> tol, rmax, r0, eps, lo, hi;
  std::optional<int> kmax;
  std::optional<std::int64_t> n_max;
  bool scan_only = false;
  bool oracle = false;
  std::string demo;
  std::int64_t cap = kDefaultOracleCap;
};

struct Run {
  std::ostream& out;
  std::ostream& err;
  Json result = Json::object();
  std::string digest = fnv1a_hex("");
  int status = kOk;
};

std::string show(const Rational& q) {
  if (q.is_integer()) return q.str();
  return q.str() + " (~" + approx6(q.to_double()) + ")";
}

std::string show(const ExtRational& q) { return q.is_infinite() ? "inf" : show(q.value()); }

std::string show_elements(const std::vector<Element>& v, std::size_t limit = 24) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size() && i < limit; ++i) s += (i ? ", " : "") + to_string(v[i]);
  if (v.size() > limit) s += ", ... (" + std::to_string(v.size()) + " total)";
  return s + "}";
}

void rule(std::ostream& os) { os << std::string(72, '-') << "\n"; }

void header(std::ostream& os, const std::string& command) {
  os << "density-lab " << kVersion << " | " << command << "\n";
  os << "defaults: tol=1/1000  r0=8  k<=12  oracle cap=" << kDefaultOracleCap << " (hard " << kHardOracleCap
     << ")  exact cover cap=" << kExactCoverCap << "\n";
  os << "values: p/q is authoritative; (~x) is a 6-digit approximation\n";
  rule(os);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read instance file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Instance load(const Options& o, Run& run) {
  if (o.instance.empty()) throw ParseError("--instance is required");
  const std::string text = read_file(o.instance);
  run.digest = fnv1a_hex(text);
  return parse_instance(text);
}

const InstanceObject& pick(const Instance& inst, const std::string& name, std::initializer_list<const char*> defaults) {
  if (!name.empty()) {
    const auto it = inst.objects.find(name);
    if (it == inst.objects.end()) throw ParseError("instance has no object named '" + name + "'");
    return it->second;
  }
  for (const char* d : defaults) {
    const auto it = inst.objects.find(d);
    if (it != inst.objects.end()) return it->second;
  }
  if (inst.objects.size() == 1) return inst.objects.begin()->second;
  std::string want;
  for (const char* d : defaults) want += std::string(want.empty() ? "" : ", ") + d;
  throw ParseError("instance needs an object named one of: " + want);
}

const InstanceObject* find(const Instance& inst, const std::string& name, const char* fallback) {
  const auto it = inst.objects.find(name.empty() ? fallback : name);
  if (it == inst.objects.end()) {
    if (!name.empty()) throw ParseError("instance has no object named '" + name + "'");
    return nullptr;
  }
  return &it->second;
}

MeasureSpec as_measure(const InstanceObject& obj) {
  return std::visit(overloaded{
                        [](const DiscreteSet& s) { return counting(s); },
                        [](const PointConfig& s) { return counting(s); },
                        [](const ChainSet& s) { return counting(s); },
                        [](const IntervalUnion& u) { return haar_trace(u); },
                        [](const PeriodicPattern& p) { return haar_trace(p); },
                        [](const MeasureSpec& m) { return m; },
                    },
                    obj);
}

EstimationSettings settings_from(const Instance& inst, const Options& o) {
  EstimationSettings s;
  if (inst.params.tol) s.tol = *inst.params.tol;
  if (inst.params.r0) s.r0 = *inst.params.r0;
  if (inst.params.kmax) s.kmax = static_cast<int>(*inst.params.kmax);
  if (inst.params.rmax) s.r_max = *inst.params.rmax;
  if (o.tol) s.tol = Rational::parse(*o.tol);
  if (o.r0) s.r0 = Rational::parse(*o.r0);
  if (o.kmax) s.kmax = *o.kmax;
  if (o.rmax) s.r_max = Rational::parse(*o.rmax);
  s.scan_only = o.scan_only;
  if (s.tol.sign() <= 0) throw PreconditionError("tolerance must be positive");
  if (s.r0.sign() <= 0) throw PreconditionError("r0 must be positive");
  if (s.kmax < 0 || s.kmax > 40) throw PreconditionError("kmax must be in [0, 40]");
  return s;
}

Rational eps_from(const Instance& inst, const Options& o) {
  Rational e = inst.params.eps ? *inst.params.eps : kDefaultEps;
  if (o.eps) e = Rational::parse(*o.eps);
  if (e.sign() <= 0) throw PreconditionError("eps must be positive");
  return e;
}

void render(std::ostream& os, const DensityReport& r) {
  os << "density: " << r.summary() << "\n";
  if (r.is_exact()) os << "value:   " << show(*r.exact) << "\n";
  if (!r.schedule.empty()) {
    os << std::left << std::setw(22) << "r" << std::setw(30) << "sup ratio" << "argmax\n";
    for (const auto& e : r.schedule) {
      os << std::setw(22) << e.r.str() << std::setw(30) << (show(e.ratio) + (e.attained ? "" : " (limit)"))
         << (e.argmax ? to_string(*e.argmax) : "-") << "\n";
    }
  }
  if (r.witness) {
    const auto& w = *r.witness;
    os << "witness: " << w.description << "\n";
    if (!w.C.empty()) os << "  C = " << show_elements(w.C) << "\n";
    if (!w.V.empty()) os << "  V = " << show_elements(w.V) << "\n";
    for (const auto& [eta, b] : w.eta_schedule) os << "  eta " << std::setw(14) << eta.str() << " lower bound " << show(b) << "\n";
  }
  for (const auto& n : r.notes) os << "note: " << n << "\n";
}

// ---------------------------------------------------------------- density

void cmd_density(const Options& o, Run& run) {
  const auto inst = load(o, run);
  const auto settings = settings_from(inst, o);
  const auto& obj = pick(inst, o.object, {"nu", "S", "A"});
  header(run.out, "density --notion " + o.notion);
  DensityReport r;
  if (o.notion == "kahane") {
    if (o.oracle) {
      const auto* fa = std::get_if<FiniteAbelian>(&inst.group);
      if (!fa) throw PreconditionError("--oracle needs a finite group");
      r = kahane_density_finite_group(*fa, as_measure(obj), FiniteMode::Oracle, inst.params.cap.value_or(o.cap));
    } else {
      r = kahane_density(inst.group, as_measure(obj), settings);
    }
  } else if (o.notion == "window") {
    WindowShape K = IntervalShape{};
    if (std::holds_alternative<ZLattice>(inst.group)) K = CenteredCube{};
    if (!o.K.empty()) {
      const auto& k = pick(inst, o.K, {});
      const auto* u = std::get_if<IntervalUnion>(&k);
      if (!u) throw PreconditionError("--K must name an interval union");
      K = custom_k(*u);
    }
    if (const auto* fa = std::get_if<FiniteAbelian>(&inst.group)) {
      r = kahane_density_finite_group(*fa, as_measure(obj));
    } else {
      r = auud_window(inst.group, as_measure(obj), K, settings);
    }
    run.out << "window shape: " << describe(K) << "\n";
  } else if (o.notion == "delta") {
    r = delta_density(inst.group, as_measure(obj), settings);
  } else if (o.notion == "classical") {
    const auto* s = std::get_if<DiscreteSet>(&obj);
    if (!s) throw PreconditionError("classical density needs a discrete set in Z");
    r = classical_upper_density(inst.group, *s, o.n_max.value_or(inst.params.n_max.value_or(1 << 16)));
  } else if (o.notion == "hegyvari") {
    const auto* c = std::get_if<SigmaFiniteChain>(&inst.group);
    const auto* s = std::get_if<ChainSet>(&obj);
    if (!c || !s) throw PreconditionError("the Hegyvari density needs a chain group and a chain set");
    r = hegyvari_density(*c, *s, static_cast<std::size_t>(o.n_max.value_or(inst.params.n_max.value_or(static_cast<std::int64_t>(c->depth())))));
  } else {
    throw PreconditionError("unknown notion '" + o.notion + "'");
  }
  render(run.out, r);
  run.result = Json{{"notion", o.notion}, {"report", to_json(r)}};
}

// ---------------------------------------------------------------- diffset

void cmd_diffset(const Options& o, Run& run) {
  const auto inst = load(o, run);
  const auto& obj = pick(inst, o.object, {"S", "A"});
  header(run.out, "diffset");
  Json res;
  std::visit(overloaded{
                 [&](const DiscreteSet& s) {
                   const auto d = difference_set(inst.group, s);
                   run.out << "S - S = " << describe(d.set) << "\n";
                   res["difference_set"] = object_to_json(InstanceObject(d.set));
                   res["empty_input"] = d.empty_input;
                   if (const auto* z = std::get_if<ZLattice>(&inst.group); z && z->dimension == 1 && !d.empty_input) {
                     const auto g = gap_analysis(inst.group, d.set, inst.params.range.value_or(1 << 16));
                     run.out << "positive elements: ";
                     for (std::size_t i = 0; i < g.positives.size() && i < 24; ++i) run.out << (i ? ", " : "") << g.positives[i];
                     run.out << (g.positives.size() > 24 ? ", ..." : "") << "\n";
                     run.out << "max gap " << g.max_gap << (g.bounded ? " (bounded, period " + std::to_string(*g.period) + ")" : " over the scanned range") << "\n";
                     res["gaps"] = to_json(g);
                   }
                 },
                 [&](const IntervalUnion& u) {
                   const auto d = difference_set(u);
                   run.out << "S - S = " << d.set.str() << "\n";
                   res["difference_set"] = to_json(d.set);
                   res["empty_input"] = d.empty_input;
                 },
                 [&](const PeriodicPattern& p) {
                   const auto d = difference_set(p);
                   run.out << "S - S = " << d.str() << "\n";
                   res["difference_set"] = to_json(d);
                 },
                 [&](const PointConfig& c) {
                   const Rational lo = o.lo ? Rational::parse(*o.lo) : Rational(-1);
                   const Rational hi = o.hi ? Rational::parse(*o.hi) : Rational(1);
                   const auto d = difference_set(c, lo, hi);
                   run.out << "(S - S) within [" << lo << ", " << hi << "] = " << describe(d.set) << "\n";
                   if (d.set.has_accumulation) run.out << "warning: S - S accumulates at 0\n";
                   res["window"] = Json::array({lo.str(), hi.str()});
                   res["difference_set"] = object_to_json(InstanceObject(d.set));
                   res["empty_input"] = d.empty_input;
                 },
                 [&](const ChainSet&) { throw PreconditionError("difference sets of chain sets are not supported"); },
                 [&](const MeasureSpec&) { throw PreconditionError("diffset needs a set, not a measure"); },
             },
             obj);
  run.result = res;
}

// ---------------------------------------------------------------- syndetic

TranslateSet as_translates(const GroupSpec& group, const InstanceObject& obj) {
  return std::visit(overloaded{
                        [](const IntervalUnion& u) -> TranslateSet { return u; },
                        [](const DiscreteSet& s) -> TranslateSet {
                          if (const auto* e = std::get_if<ExplicitFinite>(&s)) return *e;
                          throw PreconditionError("translate sets are finite");
                        },
                        [](const ChainSet& s) -> TranslateSet {
                          if (const auto* e = std::get_if<ExplicitFinite>(&s)) return *e;
                          throw PreconditionError("translate sets are finite");
                        },
                        [&](const PointConfig& c) -> TranslateSet {
                          const auto* f = std::get_if<FinitePoints>(&c.body);
                          if (!f) throw PreconditionError("translate sets are finite");
                          std::vector<Element> es(f->points.begin(), f->points.end());
                          return make_explicit(group, std::move(es));
                        },
                        [](const auto&) -> TranslateSet { throw PreconditionError("K must be a finite set or an interval union"); },
                    },
                    obj);
}

SyndeticSet as_syndetic(const InstanceObject& obj) {
  return std::visit(overloaded{
                        [](const DiscreteSet& s) -> SyndeticSet { return s; },
                        [](const PeriodicPattern& s) -> SyndeticSet { return s; },
                        [](const PointConfig& s) -> SyndeticSet { return s; },
                        [](const ChainSet& s) -> SyndeticSet { return s; },
                        [](const auto&) -> SyndeticSet { throw PreconditionError("S must be a discrete set, pattern or point configuration"); },
                    },
                    obj);
}

void render(std::ostream& os, const SyndeticCertificate& c) {
  os << "domain: " << c.domain << "\n";
  os << "S + K covers: " << (c.verified ? "yes" : "no") << "\n";
  if (!c.cells.empty()) {
    os << std::left << std::setw(24) << "cell" << "translate\n";
    for (std::size_t i = 0; i < c.cells.size() && i < 64; ++i) os << std::setw(24) << to_string(c.cells[i].first) << to_string(c.cells[i].second) << "\n";
    if (c.cells.size() > 64) os << "... " << c.cells.size() << " cells\n";
  }
  if (c.covered) os << "(S + K) within one period: " << c.covered->str() << "\n";
  if (c.counterexample) os << "counterexample: " << to_string(*c.counterexample) << " is not covered\n";
}

void cmd_syndetic(const Options& o, Run& run) {
  const auto inst = load(o, run);
  const auto& S = pick(inst, o.object, {"S"});
  const auto& K = pick(inst, o.K, {"K"});
  header(run.out, "syndetic");
  const auto cert = syndetic_check(inst.group, as_syndetic(S), as_translates(inst.group, K));
  render(run.out, cert);
  run.result = to_json(cert);
}

// ---------------------------------------------------------------- cover

CoverInput as_cover_input(const InstanceObject& obj) {
  return std::visit(overloaded{
                        [](const DiscreteSet& s) -> CoverInput { return s; },
                        [](const ChainSet& s) -> CoverInput { return s; },
                        [](const PeriodicPattern& s) -> CoverInput { return s; },
                        [](const auto&) -> CoverInput { throw PreconditionError("A must be a discrete set, chain set or periodic pattern"); },
                    },
                    obj);
}

void render(std::ostream& os, const CoverResult& c) {
  os << "domain: " << c.domain << "\n";
  os << "density of A: " << show(c.density) << "\n";
  os << "B = " << show_elements(c.B) << "\n";
  os << "bound " << c.size_bound << ", used " << c.B.size() << "\n";
  os << "A - A + B = G: " << (c.verified_cover ? "verified" : "FAILED") << "   (A - A) ∩ (B - B) = {0}: "
     << (c.verified_packing ? "verified" : "FAILED") << "\n";
  if (!c.maximality.empty()) {
    os << std::left << std::setw(20) << "rejected" << std::setw(20) << "blocked by" << "difference in A - A\n";
    for (std::size_t i = 0; i < c.maximality.size() && i < 32; ++i) {
      const auto& m = c.maximality[i];
      os << std::setw(20) << to_string(m.candidate) << std::setw(20) << to_string(m.blocker) << to_string(m.difference) << "\n";
    }
    if (c.maximality.size() > 32) os << "... " << c.maximality.size() << " rejected candidates\n";
  }
  for (const auto& m : c.line_maximality) os << "[" << m.piece.lo << ", " << m.piece.hi << "] ⊂ (A - A) + " << m.blocker << "\n";
}

void cmd_cover(const Options& o, Run& run) {
  const auto inst = load(o, run);
  const auto& obj = pick(inst, o.object, {"A", "S"});
  header(run.out, "cover");
  const auto A = as_cover_input(obj);
  const auto c = greedy_translates(inst.group, A);
  verify_cover(inst.group, A, c);
  render(run.out, c);
  run.result = Json{{"cover", to_json(c)}};
  if (const auto* d = std::get_if<DiscreteSet>(&obj)) {
    const auto diff = difference_set(inst.group, *d).set;
    const auto best = minimal_translates(inst.group, diff, inst.params.cap.value_or(kExactCoverCap));
    run.out << "least K with (A - A) + K = G: " << show_elements(best.K) << (best.exact ? " (exact)" : " (greedy set cover, above cap)") << "\n";
    run.result["minimal"] = to_json(best);
  }
}

// ---------------------------------------------------------------- partition, packing

PointSet as_point_set(const InstanceObject& obj) {
  return std::visit(overloaded{
                        [](const DiscreteSet& s) -> PointSet { return s; },
                        [](const PointConfig& s) -> PointSet { return s; },
                        [](const auto&) -> PointSet { throw PreconditionError("S must be a point configuration or discrete set"); },
                    },
                    obj);
}

CompactSet as_compact(const InstanceObject& obj) {
  return std::visit(overloaded{
                        [](const IntervalUnion& u) -> CompactSet { return u; },
                        [](const DiscreteSet& s) -> CompactSet {
                          if (const auto* e = std::get_if<ExplicitFinite>(&s)) return *e;
                          throw PreconditionError("H must be finite");
                        },
                        [](const auto&) -> CompactSet { throw PreconditionError("H must be an interval union or a finite set"); },
                    },
                    obj);
}

void render(std::ostream& os, const PartitionResult& p) {
  os << "classes: " << p.n << "   local count bound k: " << p.k_bound << "   periods on the coloring cycle: " << p.cycle_periods << "\n";
  for (std::size_t j = 0; j < p.classes.size(); ++j) {
    const std::string d = std::visit(overloaded{
                                         [](const PointConfig& c) { return describe(c); },
                                         [](const DiscreteSet& s) { return describe(s); },
                                     },
                                     p.classes[j]);
    os << "  S_" << j + 1 << " = " << d << "   density " << p.densities[j].summary() << "\n";
  }
}

void cmd_partition(const Options& o, Run& run) {
  const auto inst = load(o, run);
  const auto S = as_point_set(pick(inst, o.object, {"S"}));
  const auto H = as_compact(pick(inst, o.H, {"H"}));
  header(run.out, "partition");
  const auto p = partition_by_coloring(inst.group, S, H);
  render(run.out, p);
  run.out << "every class re-verified: (S_j - S_j) ∩ (H - H) = {0}\n";
  run.result = to_json(p);
}

void cmd_packing(const Options& o, Run& run) {
  const auto inst = load(o, run);
  const auto S = as_point_set(pick(inst, o.object, {"S"}));
  const auto H = as_compact(pick(inst, o.H, {"H"}));
  header(run.out, "packing");
  const auto v = packing_bound_check(inst.group, S, H);
  run.out << "packing condition (H - H) ∩ (S - S) = {0}: holds\n";
  run.out << "rho = " << show(v.rho) << "   mu(H) = " << show(v.mu_H) << "   1/rho - mu(H) = " << show(v.slack) << "\n";
  run.result = Json{{"rho", to_json(v.rho)}, {"mu_H", to_json(v.mu_H)}, {"slack", to_json(v.slack)}};
}

// ---------------------------------------------------------------- pipeline

void render(std::ostream& os, const PipelineResult& p) {
  os << "rho = " << show(p.rho) << "   eps = " << p.eps << "\n";
  if (p.auto_h) {
    const auto& a = *p.auto_h;
    os << "H chosen: C = [-" << a.c << ", " << a.c << "], eta = " << a.eta << ", L = " << a.L << "; max #(S ∩ (s + H - H)) = "
       << a.k << " <= " << show(a.count_bound) << "\n";
  }
  os << "H = " << p.H.str() << "\n";
  rule(os);
  render(os, p.partition);
  os << "selected S_" << p.selected + 1 << " with density " << show(p.rho_j) << " >= rho/n = " << show(p.rho / Rational(p.partition.n)) << "\n";
  if (p.fattened) {
    os << "A = S_j + H = " << p.fattened->A.str() << "   density " << show(p.fattened->measured) << " >= " << show(p.fattened->bound) << "\n";
  }
  rule(os);
  render(os, p.cover);
  rule(os);
  os << "T = B + (H - H) = " << p.T.str() << "   mu(T) = " << show(p.mu_T) << "\n";
  os << "(S_j - S_j) + T covers R: " << (p.covering.verified ? "verified" : "FAILED") << " over " << p.covering.domain << "\n";
  os << "mu(T) <= (1+eps) mu(H-H)/mu(H) = " << show(p.remark_bound) << ": " << (p.remark_holds ? "holds" : "FAILS") << "\n";
  os << "mu(T) <= #B mu(H-H) = " << show(p.translate_bound) << ": " << (p.translate_bound_holds ? "holds" : "FAILS") << "\n";
  os << "mu(T) <= (1+eps) mu(H-H)^2/mu(H) = " << show(p.corrected_bound) << ": " << (p.corrected_holds ? "holds" : "FAILS") << "\n";
}

void cmd_pipeline(const Options& o, Run& run) {
  const auto inst = load(o, run);
  const auto& obj = pick(inst, o.object, {"S"});
  const auto* S = std::get_if<PointConfig>(&obj);
  if (!S) throw PreconditionError("the pipeline needs a point configuration on R");
  std::optional<IntervalUnion> H;
  if (const auto* h = find(inst, o.H, "H")) {
    const auto* u = std::get_if<IntervalUnion>(h);
    if (!u) throw PreconditionError("H must be an interval union");
    H = *u;
  }
  const Rational eps = eps_from(inst, o);
  header(run.out, "pipeline");
  const auto p = syndetic_pipeline(*S, eps, H);
  render(run.out, p);
  run.result = to_json(p);
  if (!p.remark_holds) {
    run.err << "verification failed: mu(T) = " << p.mu_T << " exceeds (1+eps) mu(H-H)/mu(H) = " << p.remark_bound << "\n";
    run.status = kVerification;
  }
}

// ---------------------------------------------------------------- subadditivity

void cmd_subadd(const Options& o, Run& run) {
  const auto inst = load(o, run);
  std::vector<MeasureSpec> ms;
  std::vector<std::string> names;
  if (!o.objects.empty()) {
    std::stringstream ss(o.objects);
    for (std::string n; std::getline(ss, n, ',');) names.push_back(n);
  } else {
    for (const auto& [n, _] : inst.objects) names.push_back(n);
  }
  for (const auto& n : names) ms.push_back(as_measure(pick(inst, n, {})));
  header(run.out, "subadd");
  const auto v = subadditivity_check(inst.group, ms, settings_from(inst, o));
  for (std::size_t i = 0; i < names.size(); ++i) run.out << "  " << std::left << std::setw(16) << names[i] << v.parts[i].summary() << "\n";
  run.out << "density of the sum: " << v.total.summary() << "\n";
  run.out << "sum of densities:   " << show(v.sum_of_parts) << "\n";
  run.out << "subadditive: " << (v.holds ? "yes" : "no") << (v.slack ? ", slack " + show(*v.slack) : std::string()) << "\n";
  run.result = to_json(v);
}

// ---------------------------------------------------------------- demos

void demo_totik(Run& run) {
  const GroupSpec line = RealLine{};
  const auto nu = dirac_at_zero();
  run.out << "Statement: on a non-discrete group there is a probability measure with Delta(nu) > D(nu).\n";
  run.out << "Instance: nu = delta_0 on R.\n";
  rule(run.out);
  const auto d = kahane_density(line, nu);
  run.out << "D(delta_0):     " << d.summary() << "\n";
  std::vector<Rational> radii;
  for (Rational r(1); r <= Rational(1000000); r *= 10) radii.push_back(r);
  const auto profile = window_density_profile(line, nu, IntervalShape{}, radii);
  run.out << "window profile sup_x nu([x-r, x+r])/2r:\n";
  for (const auto& e : profile) run.out << "  r = " << std::setw(10) << e.r.str() << "  " << show(e.ratio) << "\n";
  const auto delta = delta_density(line, nu);
  run.out << "Delta(delta_0): " << delta.summary() << "\n";
  run.out << "lower bounds nu(V)/mu(F+V) with F = {0}, V = [-eta/2, eta/2]:\n";
  for (const auto& [eta, b] : delta.witness->eta_schedule) run.out << "  eta = " << std::setw(10) << eta.str() << "  " << show(b) << "\n";
  run.out << "gap exhibited: Delta(delta_0) = inf > 0 = D(delta_0)\n";
  Json prof = Json::array();
  for (const auto& e : profile) prof.push_back(Json{{"r", to_json(e.r)}, {"ratio", to_json(e.ratio)}});
  run.result = Json{{"D", to_json(d)}, {"profile", prof}, {"Delta", to_json(delta)}};
}

void demo_accumulation(Run& run) {
  const GroupSpec line = RealLine{};
  const auto S = harmonic(Rational(0));
  run.out << "Statement: finite counting density is needed; S = {1/n : n >= 1} has S - S ⊂ [-1, 1], which is not syndetic.\n";
  rule(run.out);
  const auto d = counting_density(line, S);
  run.out << "counting density of S: " << d.summary() << "\n";
  if (d.witness) run.out << "  " << d.witness->description << "\n";
  const auto pts = points_within(S, Rational(1, 8), Rational(1));
  run.out << "S ∩ [1/8, 1] = " << describe(finite_points(pts)) << "; every point of S lies in (0, 1], so S - S ⊂ [-1, 1]\n";
  const auto sample = difference_set(finite_points(pts), Rational(-2), Rational(2)).set;
  const auto& sp = std::get<FinitePoints>(sample.body).points;
  run.out << "sampled differences span [" << sp.front() << ", " << sp.back() << "]\n";
  const auto cert = syndetic_check(line, lattice(Rational(1), {Rational(0)}), TranslateSet(IntervalUnion::closed(Rational(-1), Rational(1))));
  run.out << "a bounded set such as [-1, 1] needs infinitely many translates to cover R; ";
  run.out << "for contrast Z + [-1, 1] covers: " << (cert.verified ? "yes" : "no") << "\n";
  std::string rejection;
  try {
    syndetic_pipeline(S);
  } catch (const PreconditionError& e) {
    rejection = e.what();
  }
  run.out << "pipeline on S: rejected (precondition): " << rejection << "\n";
  run.result = Json{{"density", to_json(d)}, {"sample_differences", Json::array({sp.front().str(), sp.back().str()})}, {"pipeline_rejection", rejection}};
}

void demo_erdos_sarkozy(Run& run) {
  const GroupSpec Z = ZLattice{1};
  run.out << "Statement: for A ⊂ N of positive upper density the gaps of D(A) = A - A are bounded by the\n"
             "largest element of a translate set B with A - A + B ⊇ N.\n";
  rule(run.out);
  Json rows = Json::array();
  const std::vector<std::pair<std::int64_t, std::vector<IntVec>>> cases{
      {5, {{0}, {1}}}, {7, {{0}, {1}, {3}}}, {12, {{0}, {5}}}, {10, {{2}}}};
  run.out << std::left << std::setw(28) << "A" << std::setw(10) << "density" << std::setw(10) << "max gap" << std::setw(24) << "B" << "gap - 1 <= max B\n";
  for (const auto& [m, res] : cases) {
    const DiscreteSet A = make_periodic({m}, res);
    const auto D = difference_set(Z, A).set;
    const auto g = gap_analysis(Z, D);
    const auto c = greedy_translates(Z, A);
    verify_cover(Z, A, c);
    std::int64_t maxB = 0;
    for (const auto& b : c.B) maxB = std::max(maxB, std::get<IntVec>(b)[0]);
    const bool ok = g.max_gap - 1 <= maxB;
    run.out << std::setw(28) << describe(A) << std::setw(10) << c.density.str() << std::setw(10) << g.max_gap << std::setw(24)
            << show_elements(c.B, 8) << " " << (ok ? "yes" : "NO") << "\n";
    rows.push_back(Json{{"A", object_to_json(InstanceObject(A))}, {"gaps", to_json(g)}, {"cover", to_json(c)}, {"holds", ok}});
    if (!ok) run.status = kVerification;
  }
  run.result = Json{{"cases", rows}};
}

void demo_hegyvari(Run& run) {
  const SigmaFiniteChain chain{IntVec(8, 2)};
  const GroupSpec G = chain;
  run.out << "Statement: in a sigma-finite group a set of positive density has a finite B with A - A + B = G.\n";
  run.out << "Instance: G = sum of Z_2 (8 coordinates materialized).\n";
  rule(run.out);
  const ChainSet A = make_cylinder(chain, 1, {{0}});
  const auto d = hegyvari_density(chain, A, chain.depth());
  run.out << "A = {x : x_1 = 0}: " << d.summary() << "\n";
  const auto h1 = hegyvari_density(chain, ChainSubgroup{1}, chain.depth());
  run.out << "A = H_1: " << h1.summary() << "   schedule";
  for (const auto& e : h1.schedule) run.out << " " << show(e.ratio);
  run.out << "\n";
  const auto whole = hegyvari_density(chain, WholeChain{}, chain.depth());
  run.out << "A = G: " << whole.summary() << "\n";
  const auto c = greedy_translates(G, A);
  verify_cover(G, A, c);
  run.out << "translates for A = {x_1 = 0}: B = " << show_elements(c.B) << ", bound " << c.size_bound << "\n";
  run.result = Json{{"cylinder", to_json(d)}, {"subgroup", to_json(h1)}, {"whole", to_json(whole)}, {"cover", to_json(c)}};
}

void demo_theorem3(Run& run) {
  const GroupSpec line = RealLine{};
  const PeriodicPattern P(Rational(1), IntervalUnion({{Rational(0), Rational(1, 3)}, {Rational(1, 2), Rational(2, 3)}}));
  const auto nu = haar_trace(P);
  run.out << "Statement: the window density does not depend on the choice of K.\n";
  run.out << "Instance: Haar trace of " << P.str() << ", exact density " << show(P.density()) << "\n";
  rule(run.out);
  EstimationSettings s;
  s.scan_only = true;
  s.r0 = Rational(1);
  const std::vector<IntervalUnion> shapes{
      IntervalUnion::closed(Rational(-1, 2), Rational(1, 2)),
      IntervalUnion({{Rational(0), Rational(1, 2)}, {Rational(3, 4), Rational(5, 4)}}),
      IntervalUnion({{Rational(0), Rational(1, 4)}, {Rational(1, 2), Rational(3, 4)}, {Rational(1), Rational(3, 2)}}),
  };
  Json rows = Json::array();
  for (const auto& k : shapes) {
    const auto r = auud_window(line, nu, custom_k(k), s);
    run.out << "K = " << std::left << std::setw(36) << k.str() << r.summary() << "   last ratio " << show(r.schedule.back().ratio) << "\n";
    rows.push_back(Json{{"K", to_json(k)}, {"report", to_json(r)}});
  }
  run.out << "closed form: " << kahane_density(line, nu).summary() << "\n";
  run.result = Json{{"exact", to_json(P.density())}, {"shapes", rows}};
}

void cmd_demo(const Options& o, Run& run) {
  header(run.out, "demo " + o.demo);
  if (o.demo == "totik") return demo_totik(run);
  if (o.demo == "accumulation") return demo_accumulation(run);
  if (o.demo == "erdos-sarkozy") return demo_erdos_sarkozy(run);
  if (o.demo == "hegyvari") return demo_hegyvari(run);
  if (o.demo == "theorem3") return demo_theorem3(run);
  throw PreconditionError("unknown demo '" + o.demo + "'");
}

// ---------------------------------------------------------------- selftest

std::vector<IntVec> compositions(std::int64_t cap) {
  std::vector<IntVec> out{{}};
  std::function<void(IntVec&, std::int64_t)> grow = [&](IntVec& cur, std::int64_t prod) {
    for (std::int64_t m = 2; prod * m <= cap; ++m) {
      cur.push_back(m);
      out.push_back(cur);
      grow(cur, prod * m);
      cur.pop_back();
    }
  };
  IntVec cur;
  grow(cur, 1);
  std::stable_sort(out.begin(), out.end(), [](const IntVec& a, const IntVec& b) {
    std::int64_t pa = 1, pb = 1;
    for (auto x : a) pa *= x;
    for (auto x : b) pb *= x;
    return pa < pb;
  });
  return out;
}

unsigned thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DENSITY_LAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return n;
}

void cmd_selftest(const Options& o, Run& run) {
  if (o.cap < 1) throw PreconditionError("--cap must be at least 1");
  if (o.cap > kHardOracleCap) throw CapExceeded("--cap above the hard limit " + std::to_string(kHardOracleCap));
  header(run.out, "selftest --cap " + std::to_string(o.cap));
  if (o.cap > 10) run.err << "warning: brute force above order 10 is slow\n";
  const unsigned threads = thread_count();
  run.out << "brute force inf_C sup_V nu(V)/|C+V| against |A|/|G| for every subset A\n";
  run.out << std::left << std::setw(20) << "group" << std::setw(8) << "order" << std::setw(10) << "subsets" << std::setw(10) << "status" << "seconds\n";
  Json groups = Json::array();
  std::int64_t total = 0;
  for (const auto& moduli : compositions(o.cap)) {
    const FiniteAbelian fa{moduli};
    const auto t0 = std::chrono::steady_clock::now();
    const FiniteGroupOracle oracle(fa, o.cap);
    const std::size_t n = oracle.order();
    const std::uint32_t subsets = 1u << n;
    std::atomic<std::uint32_t> next{0};
    std::atomic<bool> bad{false};
    std::optional<std::pair<std::uint32_t, FiniteGroupOracle::Result>> mismatch;
    std::mutex mu;
    auto work = [&] {
      for (std::uint32_t a; !bad && (a = next++) < subsets;) {
        std::vector<std::int64_t> w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = (a >> i) & 1u;
        const auto res = oracle.evaluate_counts(w);
        const Rational want(static_cast<long long>(std::popcount(a)), static_cast<long long>(n));
        if (res.value != want) {
          std::lock_guard lock(mu);
          if (!mismatch || a < mismatch->first) mismatch = std::make_pair(a, res);
          bad = true;
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    total += subsets;
    const std::string gname = describe(GroupSpec(fa));
    run.out << std::setw(20) << gname << std::setw(8) << n << std::setw(10) << subsets << std::setw(10) << (mismatch ? "MISMATCH" : "pass")
            << approx6(secs) << "\n";
    Json row{{"group", group_to_json(fa)}, {"order", n}, {"subsets", subsets}, {"pass", !mismatch}};
    if (mismatch) {
      const auto& [a, res] = *mismatch;
      std::vector<Element> A;
      for (std::size_t i = 0; i < n; ++i) {
        if (a & (1u << i)) A.push_back(lex_element(static_cast<std::int64_t>(i), moduli));
      }
      run.err << "mismatch in " << gname << ": A = " << show_elements(A) << ", brute force " << res.value << " with C = "
              << show_elements(oracle.elements_of(res.C)) << ", V = " << show_elements(oracle.elements_of(res.V)) << "\n";
      row["A"] = Json::array();
      for (const auto& e : A) row["A"].push_back(to_json(e));
      row["value"] = to_json(res.value);
      run.status = kVerification;
    }
    groups.push_back(row);
  }
  run.out << "groups " << groups.size() << ", subsets " << total << ", threads " << threads << "\n";
  run.result = Json{{"cap", o.cap}, {"groups", groups}};
}

Json defaults_json() {
  return Json{{"tol", "1/1000"},
              {"r0", "8"},
              {"kmax", 12},
              {"oracle_cap", kDefaultOracleCap},
              {"oracle_hard_cap", kHardOracleCap},
              {"exact_cover_cap", kExactCoverCap},
              {"eps", kDefaultEps.str()}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact densities, difference sets and syndetic translate sets", "density-lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  auto common = [&](CLI::App* sub, bool instance = true) {
    if (instance) sub->add_option("--instance", o.instance, "instance file (JSON)")->required();
    sub->add_option("--out", o.out_file, "write the serialized report here");
  };
  auto settings = [&](CLI::App* sub) {
    sub->add_option("--tol", o.tol, "relative convergence tolerance, e.g. 1/1000");
    sub->add_option("--rmax", o.rmax, "largest window radius");
    sub->add_option("--r0", o.r0, "first window radius");
    sub->add_option("--kmax", o.kmax, "number of doublings of the radius");
    sub->add_flag("--scan", o.scan_only, "always scan windows, even when a closed form exists");
  };

  auto* density = app.add_subcommand("density", "density of a set or measure");
  common(density);
  settings(density);
  density->add_option("--notion", o.notion, "classical | window | kahane | delta | hegyvari")
      ->check(CLI::IsMember({"classical", "window", "kahane", "delta", "hegyvari"}));
  density->add_option("--object", o.object, "object to measure (default nu, S or A)");
  density->add_option("--K", o.K, "interval-union object used as window shape");
  density->add_option("--nmax", o.n_max, "scan length for classical / depth for hegyvari");
  density->add_flag("--oracle", o.oracle, "brute-force the definition on a finite group");
  density->add_option("--cap", o.cap, "brute-force order cap");

  auto* diffset = app.add_subcommand("diffset", "difference set S - S with gap analysis on Z");
  common(diffset);
  diffset->add_option("--object", o.object, "set (default S)");
  diffset->add_option("--lo", o.lo, "window for point configurations (default -1)");
  diffset->add_option("--hi", o.hi, "window for point configurations (default 1)");

  auto* syndetic = app.add_subcommand("syndetic", "check S + K = G");
  common(syndetic);
  syndetic->add_option("--object", o.object, "set (default S)");
  syndetic->add_option("--K", o.K, "translate set (default K)");

  auto* cover = app.add_subcommand("cover", "greedy B with A - A + B = G");
  common(cover);
  cover->add_option("--object", o.object, "set (default A or S)");

  auto* partition = app.add_subcommand("partition", "split S into H-separated classes");
  common(partition);
  partition->add_option("--object", o.object, "point set (default S)");
  partition->add_option("--H", o.H, "compact set (default H)");

  auto* packing = app.add_subcommand("packing", "packing condition and mu(H) <= 1/rho");
  common(packing);
  packing->add_option("--object", o.object, "point set (default S)");
  packing->add_option("--H", o.H, "compact set (default H)");

  auto* pipeline = app.add_subcommand("pipeline", "translate set T with (S_j - S_j) + T = R");
  common(pipeline);
  pipeline->add_option("--object", o.object, "point configuration (default S)");
  pipeline->add_option("--H", o.H, "interval union (default H, else chosen automatically)");
  pipeline->add_option("--eps", o.eps, "epsilon (default 1/2)");

  auto* subadd = app.add_subcommand("subadd", "density of a sum of measures against the sum of densities");
  common(subadd);
  settings(subadd);
  subadd->add_option("--objects", o.objects, "comma-separated object names (default all)");

  auto* demo = app.add_subcommand("demo", "canned scenarios");
  common(demo, false);
  demo->add_option("name", o.demo, "totik | accumulation | erdos-sarkozy | hegyvari | theorem3")
      ->required()
      ->check(CLI::IsMember({"totik", "accumulation", "erdos-sarkozy", "hegyvari", "theorem3"}));

  auto* selftest = app.add_subcommand("selftest", "brute force against the closed form on all small groups");
  common(selftest, false);
  selftest->add_option("--cap", o.cap, "largest group order (at most 12; slow above 10)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParse;
  }

  Run r{out, err};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (density->parsed()) cmd_density(o, r);
    else if (diffset->parsed()) cmd_diffset(o, r);
    else if (syndetic->parsed()) cmd_syndetic(o, r);
    else if (cover->parsed()) cmd_cover(o, r);
    else if (partition->parsed()) cmd_partition(o, r);
    else if (packing->parsed()) cmd_packing(o, r);
    else if (pipeline->parsed()) cmd_pipeline(o, r);
    else if (subadd->parsed()) cmd_subadd(o, r);
    else if (demo->parsed()) cmd_demo(o, r);
    else if (selftest->parsed()) cmd_selftest(o, r);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << "\n";
    return kVerification;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << "\n";
    return kPrecondition;
  } catch (const ShapeError& e) {
    err << "precondition failed: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rule(out);
  out << "wall time " << approx6(secs) << " s\n";
  if (!o.out_file.empty()) {
    Json report;
    report["version"] = kVersion;
    report["command"] = args;
    report["input_digest"] = "fnv1a64:" + r.digest;
    report["defaults"] = defaults_json();
    report["result"] = r.result;
    report["status"] = r.status;
    report["wall_time_s"] = approx6(secs);
    std::ofstream f(o.out_file, std::ios::binary);
    if (!f) {
      err << "cannot write " << o.out_file << "\n";
      return kInternal;
    }
    f << report.dump(2) << "\n";
  }
  return r.status;
}

}  // namespace density_lab::cli
