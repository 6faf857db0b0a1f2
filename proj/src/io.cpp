#include "density_lab/io.hpp"

#include <cstdio>
#include <initializer_list>

#include "density_lab/detail/overloaded.hpp"
#include "density_lab/errors.hpp"
#include "density_lab/setops.hpp"

namespace density_lab {

using detail::overloaded;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ParseError(path + ": " + what); }

void allow_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) fail(path, "unknown field '" + it.key() + "'");
  }
}

const Json& need(const Json& j, const std::string& path, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

Rational read_rational(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) fail(path, "expected an exact rational string such as \"1/3\"");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

std::int64_t read_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

IntVec read_intvec(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return {j.get<std::int64_t>()};
  if (!j.is_array()) fail(path, "expected an integer tuple");
  IntVec out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_int(j[i], path + "/" + std::to_string(i)));
  return out;
}

std::vector<Rational> read_rationals(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_rational(j[i], path + "/" + std::to_string(i)));
  return out;
}

std::vector<IntVec> read_intvecs(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list");
  std::vector<IntVec> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_intvec(j[i], path + "/" + std::to_string(i)));
  return out;
}

Element read_element(const Json& j, const GroupSpec& group, const std::string& path) {
  if (std::holds_alternative<RealLine>(group)) return read_rational(j, path);
  return read_intvec(j, path);
}

IntervalUnion read_parts(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list of [lo, hi] pairs");
  std::vector<Interval> parts;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    if (!j[i].is_array() || j[i].size() != 2) fail(p, "expected [lo, hi]");
    Interval iv{read_rational(j[i][0], p + "/0"), read_rational(j[i][1], p + "/1")};
    if (iv.hi < iv.lo) fail(p, "interval with hi < lo");
    parts.push_back(std::move(iv));
  }
  return IntervalUnion(std::move(parts));
}

GroupSpec read_group(const Json& j) {
  const std::string path = "/group";
  if (!j.is_object()) fail(path, "expected an object");
  const auto& fam = need(j, path, "family");
  if (!fam.is_string()) fail(path + "/family", "expected a string");
  const auto family = fam.get<std::string>();
  GroupSpec g;
  if (family == "integers") {
    allow_keys(j, path, {"family", "dimension"});
    g = ZLattice{j.contains("dimension") ? static_cast<int>(read_int(j["dimension"], path + "/dimension")) : 1};
  } else if (family == "finite") {
    allow_keys(j, path, {"family", "moduli"});
    g = FiniteAbelian{read_intvec(need(j, path, "moduli"), path + "/moduli")};
  } else if (family == "real") {
    allow_keys(j, path, {"family"});
    g = RealLine{};
  } else if (family == "chain") {
    allow_keys(j, path, {"family", "moduli", "modulus", "depth"});
    if (j.contains("moduli")) {
      if (j.contains("modulus") || j.contains("depth")) fail(path, "give either moduli or modulus with depth");
      g = SigmaFiniteChain{read_intvec(j["moduli"], path + "/moduli")};
    } else {
      const auto m = read_int(need(j, path, "modulus"), path + "/modulus");
      const auto d = read_int(need(j, path, "depth"), path + "/depth");
      if (d < 1 || d > 64) fail(path + "/depth", "depth must be in [1, 64]");
      g = SigmaFiniteChain{IntVec(static_cast<std::size_t>(d), m)};
    }
  } else {
    fail(path + "/family", "unknown family '" + family + "' (integers, finite, real, chain)");
  }
  try {
    validate(g);
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return g;
}

InstanceObject read_object(const Json& j, const GroupSpec& group, const std::string& path);

MeasureSpec read_measure(const Json& j, const GroupSpec& group, const std::string& path) {
  const auto obj = read_object(j, group, path);
  if (const auto* m = std::get_if<MeasureSpec>(&obj)) return *m;
  fail(path, "expected a measure (counting, haar, dirac, diracs, sum)");
}

PointConfig flag(PointConfig c, const Json& j, const std::string& path) {
  if (j.contains("accumulation")) return with_accumulation(std::move(c), read_rational(j["accumulation"], path + "/accumulation"));
  return c;
}

InstanceObject read_object(const Json& j, const GroupSpec& group, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto& t = need(j, path, "type");
  if (!t.is_string()) fail(path + "/type", "expected a string");
  const auto type = t.get<std::string>();
  const bool real = std::holds_alternative<RealLine>(group);
  const bool chain = std::holds_alternative<SigmaFiniteChain>(group);
  auto need_real = [&](bool want) {
    if (real != want) fail(path, "'" + type + "' objects " + (want ? "need" : "cannot be used on") + " the real line");
  };
  if (type == "explicit") {
    allow_keys(j, path, {"type", "elements"});
    const auto& es = need(j, path, "elements");
    if (!es.is_array()) fail(path + "/elements", "expected a list");
    std::vector<Element> elements;
    for (std::size_t i = 0; i < es.size(); ++i) elements.push_back(read_element(es[i], group, path + "/elements/" + std::to_string(i)));
    if (real) {
      std::vector<Rational> pts;
      for (auto& e : elements) pts.push_back(std::get<Rational>(e));
      return finite_points(std::move(pts));
    }
    auto ex = make_explicit(group, std::move(elements));
    if (chain) return ChainSet(std::move(ex));
    return DiscreteSet(std::move(ex));
  }
  if (type == "periodic") {
    allow_keys(j, path, {"type", "period", "residues"});
    if (!std::holds_alternative<ZLattice>(group)) fail(path, "periodic sets live on Z^d");
    auto p = make_periodic(read_intvec(need(j, path, "period"), path + "/period"), read_intvecs(need(j, path, "residues"), path + "/residues"));
    if (static_cast<int>(p.period.size()) != std::get<ZLattice>(group).dimension) fail(path + "/period", "dimension mismatch");
    return DiscreteSet(std::move(p));
  }
  if (type == "intervals") {
    allow_keys(j, path, {"type", "parts"});
    need_real(true);
    return read_parts(need(j, path, "parts"), path + "/parts");
  }
  if (type == "pattern") {
    allow_keys(j, path, {"type", "period", "parts"});
    need_real(true);
    return PeriodicPattern(read_rational(need(j, path, "period"), path + "/period"), read_parts(need(j, path, "parts"), path + "/parts"));
  }
  if (type == "points") {
    allow_keys(j, path, {"type", "points", "accumulation"});
    need_real(true);
    return flag(finite_points(read_rationals(need(j, path, "points"), path + "/points")), j, path);
  }
  if (type == "lattice") {
    allow_keys(j, path, {"type", "step", "offsets", "extra", "removed", "accumulation"});
    need_real(true);
    auto c = lattice(read_rational(need(j, path, "step"), path + "/step"), read_rationals(need(j, path, "offsets"), path + "/offsets"),
                     j.contains("extra") ? read_rationals(j["extra"], path + "/extra") : std::vector<Rational>{},
                     j.contains("removed") ? read_rationals(j["removed"], path + "/removed") : std::vector<Rational>{});
    return flag(std::move(c), j, path);
  }
  if (type == "harmonic") {
    allow_keys(j, path, {"type", "center", "first"});
    need_real(true);
    return harmonic(read_rational(need(j, path, "center"), path + "/center"), j.contains("first") ? read_int(j["first"], path + "/first") : 1);
  }
  if (type == "cylinder" || type == "subgroup" || type == "whole") {
    if (!chain) fail(path, "'" + type + "' objects need a chain group");
    const auto& c = std::get<SigmaFiniteChain>(group);
    if (type == "cylinder") {
      allow_keys(j, path, {"type", "coords", "allowed"});
      return ChainSet(make_cylinder(c, static_cast<std::size_t>(read_int(need(j, path, "coords"), path + "/coords")),
                                    read_intvecs(need(j, path, "allowed"), path + "/allowed")));
    }
    if (type == "subgroup") {
      allow_keys(j, path, {"type", "n"});
      const auto n = read_int(need(j, path, "n"), path + "/n");
      if (n < 0 || static_cast<std::size_t>(n) > c.depth()) fail(path + "/n", "subgroup index beyond the materialized depth");
      return ChainSet(ChainSubgroup{static_cast<std::size_t>(n)});
    }
    allow_keys(j, path, {"type"});
    return ChainSet(WholeChain{});
  }
  MeasureSpec m;
  if (type == "counting" || type == "haar") {
    allow_keys(j, path, {"type", "of"});
    const auto of = read_object(need(j, path, "of"), group, path + "/of");
    m = std::visit(overloaded{
                       [&](const DiscreteSet& s) { return type == "counting" ? counting(s) : MeasureSpec{HaarTrace{s}}; },
                       [&](const ChainSet& s) { return type == "counting" ? counting(s) : MeasureSpec{HaarTrace{s}}; },
                       [&](const PointConfig& s) -> MeasureSpec {
                         if (type == "haar") fail(path, "point configurations have Haar measure 0; use counting");
                         return counting(s);
                       },
                       [&](const IntervalUnion& s) -> MeasureSpec {
                         if (type == "counting") fail(path, "counting measure of an interval is not locally finite");
                         return haar_trace(s);
                       },
                       [&](const PeriodicPattern& s) -> MeasureSpec {
                         if (type == "counting") fail(path, "counting measure of a pattern is not locally finite");
                         return haar_trace(s);
                       },
                       [&](const MeasureSpec&) -> MeasureSpec { fail(path + "/of", "expected a set"); },
                   },
                   of);
  } else if (type == "dirac") {
    allow_keys(j, path, {"type"});
    m = dirac_at_zero();
  } else if (type == "diracs") {
    allow_keys(j, path, {"type", "atoms"});
    const auto& as = need(j, path, "atoms");
    if (!as.is_array()) fail(path + "/atoms", "expected a list of [element, weight]");
    std::vector<std::pair<Element, Rational>> atoms;
    for (std::size_t i = 0; i < as.size(); ++i) {
      const std::string p = path + "/atoms/" + std::to_string(i);
      if (!as[i].is_array() || as[i].size() != 2) fail(p, "expected [element, weight]");
      atoms.emplace_back(read_element(as[i][0], group, p + "/0"), read_rational(as[i][1], p + "/1"));
    }
    m = weighted_diracs(std::move(atoms));
  } else if (type == "sum") {
    allow_keys(j, path, {"type", "parts"});
    const auto& ps = need(j, path, "parts");
    if (!ps.is_array()) fail(path + "/parts", "expected a list of measures");
    std::vector<MeasureSpec> parts;
    for (std::size_t i = 0; i < ps.size(); ++i) parts.push_back(read_measure(ps[i], group, path + "/parts/" + std::to_string(i)));
    m = measure_sum(std::move(parts));
  } else {
    fail(path + "/type", "unknown object type '" + type + "'");
  }
  try {
    validate(group, m);
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return m;
}

InstanceParams read_params(const Json& j) {
  const std::string path = "/params";
  allow_keys(j, path, {"tol", "r0", "kmax", "rmax", "eps", "gamma", "cap", "n_max", "range"});
  InstanceParams p;
  auto rat = [&](const char* k, std::optional<Rational>& out) {
    if (j.contains(k)) out = read_rational(j[k], path + "/" + k);
  };
  auto integer = [&](const char* k, std::optional<std::int64_t>& out) {
    if (j.contains(k)) out = read_int(j[k], path + "/" + k);
  };
  rat("tol", p.tol);
  rat("r0", p.r0);
  integer("kmax", p.kmax);
  rat("rmax", p.rmax);
  rat("eps", p.eps);
  rat("gamma", p.gamma);
  integer("cap", p.cap);
  integer("n_max", p.n_max);
  integer("range", p.range);
  return p;
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Json elem_text(const Element& g) {
  return std::visit(overloaded{
                        [](const IntVec& v) { return Json(v); },
                        [](const Rational& q) { return Json(q.str()); },
                    },
                    g);
}

Json parts_text(const IntervalUnion& u) {
  Json out = Json::array();
  for (const auto& p : u.parts()) out.push_back(Json::array({p.lo.str(), p.hi.str()}));
  return out;
}

Json rats_text(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(q.str());
  return out;
}

Json point_config_text(const PointConfig& c) {
  Json out;
  std::visit(overloaded{
                 [&](const FinitePoints& f) {
                   out["type"] = "points";
                   out["points"] = rats_text(f.points);
                 },
                 [&](const PerturbedLattice& l) {
                   out["type"] = "lattice";
                   out["step"] = l.step.str();
                   out["offsets"] = rats_text(l.offsets);
                   if (!l.extra.empty()) out["extra"] = rats_text(l.extra);
                   if (!l.removed.empty()) out["removed"] = rats_text(l.removed);
                 },
                 [&](const HarmonicSequence& h) {
                   out["type"] = "harmonic";
                   out["center"] = h.center.str();
                   out["first"] = h.first;
                 },
             },
             c.body);
  if (!std::holds_alternative<HarmonicSequence>(c.body) && c.accumulation_point) out["accumulation"] = c.accumulation_point->str();
  return out;
}

Json set_text(const DiscreteSet& s) {
  return std::visit(overloaded{
                        [](const ExplicitFinite& e) {
                          Json es = Json::array();
                          for (const auto& x : e.elements) es.push_back(elem_text(x));
                          return Json{{"type", "explicit"}, {"elements", es}};
                        },
                        [](const PeriodicDiscrete& p) { return Json{{"type", "periodic"}, {"period", p.period}, {"residues", p.residues}}; },
                    },
                    s);
}

Json chain_text(const ChainSet& s) {
  return std::visit(overloaded{
                        [](const Cylinder& c) { return Json{{"type", "cylinder"}, {"coords", c.coords}, {"allowed", c.allowed}}; },
                        [](const ChainSubgroup& c) { return Json{{"type", "subgroup"}, {"n", c.n}}; },
                        [](const WholeChain&) { return Json{{"type", "whole"}}; },
                        [](const ExplicitFinite& e) { return set_text(DiscreteSet(e)); },
                    },
                    s);
}

Json measure_text(const MeasureSpec& m) {
  return std::visit(overloaded{
                        [](const Counting& c) {
                          return Json{{"type", "counting"},
                                      {"of", std::visit(overloaded{
                                                            [](const DiscreteSet& s) { return set_text(s); },
                                                            [](const PointConfig& p) { return point_config_text(p); },
                                                            [](const ChainSet& s) { return chain_text(s); },
                                                        },
                                                        c.of)}};
                        },
                        [](const HaarTrace& h) {
                          return Json{{"type", "haar"},
                                      {"of", std::visit(overloaded{
                                                            [](const DiscreteSet& s) { return set_text(s); },
                                                            [](const IntervalUnion& u) { return Json{{"type", "intervals"}, {"parts", parts_text(u)}}; },
                                                            [](const PeriodicPattern& p) {
                                                              return Json{{"type", "pattern"}, {"period", p.period().str()}, {"parts", parts_text(p.pattern())}};
                                                            },
                                                            [](const ChainSet& s) { return chain_text(s); },
                                                        },
                                                        h.of)}};
                        },
                        [](const DiracAtZero&) { return Json{{"type", "dirac"}}; },
                        [](const WeightedDiracs& w) {
                          Json atoms = Json::array();
                          for (const auto& [x, wt] : w.atoms) atoms.push_back(Json::array({elem_text(x), wt.str()}));
                          return Json{{"type", "diracs"}, {"atoms", atoms}};
                        },
                        [](const MeasureSum& s) {
                          Json parts = Json::array();
                          for (const auto& p : s.parts) parts.push_back(measure_text(p));
                          return Json{{"type", "sum"}, {"parts", parts}};
                        },
                    },
                    m.kind);
}

}  // namespace

Json group_to_json(const GroupSpec& group) {
  return std::visit(overloaded{
                        [](const ZLattice& z) { return Json{{"family", "integers"}, {"dimension", z.dimension}}; },
                        [](const FiniteAbelian& f) { return Json{{"family", "finite"}, {"moduli", f.moduli}}; },
                        [](const RealLine&) { return Json{{"family", "real"}}; },
                        [](const SigmaFiniteChain& c) { return Json{{"family", "chain"}, {"moduli", c.moduli}}; },
                    },
                    group);
}

Json object_to_json(const InstanceObject& object) {
  return std::visit(overloaded{
                        [](const DiscreteSet& s) { return set_text(s); },
                        [](const IntervalUnion& u) { return Json{{"type", "intervals"}, {"parts", parts_text(u)}}; },
                        [](const PeriodicPattern& p) {
                          return Json{{"type", "pattern"}, {"period", p.period().str()}, {"parts", parts_text(p.pattern())}};
                        },
                        [](const ChainSet& s) { return chain_text(s); },
                        [](const PointConfig& c) { return point_config_text(c); },
                        [](const MeasureSpec& m) { return measure_text(m); },
                    },
                    object);
}

Instance parse_instance(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(std::string("malformed JSON: ") + e.what(), line, col);
  }
  allow_keys(j, "", {"group", "objects", "params"});
  Instance out;
  out.group = read_group(need(j, "", "group"));
  if (j.contains("objects")) {
    const auto& objs = j["objects"];
    if (!objs.is_object()) fail("/objects", "expected an object");
    for (auto it = objs.begin(); it != objs.end(); ++it) {
      const std::string path = "/objects/" + it.key();
      try {
        out.objects.emplace(it.key(), read_object(it.value(), out.group, path));
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        fail(path, e.what());
      }
    }
  }
  if (j.contains("params")) out.params = read_params(j["params"]);
  return out;
}

std::string print_instance(const Instance& instance) {
  Json j;
  j["group"] = group_to_json(instance.group);
  Json objs = Json::object();
  for (const auto& [name, obj] : instance.objects) objs[name] = object_to_json(obj);
  j["objects"] = objs;
  Json p = Json::object();
  const auto& ps = instance.params;
  if (ps.tol) p["tol"] = ps.tol->str();
  if (ps.r0) p["r0"] = ps.r0->str();
  if (ps.kmax) p["kmax"] = *ps.kmax;
  if (ps.rmax) p["rmax"] = ps.rmax->str();
  if (ps.eps) p["eps"] = ps.eps->str();
  if (ps.gamma) p["gamma"] = ps.gamma->str();
  if (ps.cap) p["cap"] = *ps.cap;
  if (ps.n_max) p["n_max"] = *ps.n_max;
  if (ps.range) p["range"] = *ps.range;
  if (!p.empty()) j["params"] = p;
  return j.dump(2) + "\n";
}

std::string approx6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Json to_json(const Rational& q) { return Json{{"exact", q.str()}, {"approx", approx6(q.to_double())}}; }

Json to_json(const ExtRational& q) {
  if (q.is_infinite()) return Json{{"exact", "inf"}, {"approx", "inf"}};
  return to_json(q.value());
}

Json to_json(const Element& g) { return elem_text(g); }

Json to_json(const IntervalUnion& u) { return Json{{"parts", parts_text(u)}, {"measure", to_json(u.length())}}; }

Json to_json(const PeriodicPattern& p) {
  return Json{{"period", p.period().str()}, {"parts", parts_text(p.pattern())}, {"density", to_json(p.density())}};
}

Json to_json(const EstimationSettings& s) {
  Json out{{"tol", s.tol.str()}, {"r0", s.r0.str()}, {"kmax", s.kmax}};
  out["rmax"] = s.r_max ? Json(s.r_max->str()) : Json(nullptr);
  out["scan_only"] = s.scan_only;
  return out;
}

namespace {

Json elements(const std::vector<Element>& v) {
  Json out = Json::array();
  for (const auto& e : v) out.push_back(elem_text(e));
  return out;
}

Json witness_json(const Witness& w) {
  Json out;
  if (w.x) out["x"] = elem_text(*w.x);
  if (w.r) out["r"] = to_json(*w.r);
  if (w.window) out["window"] = parts_text(*w.window);
  if (!w.C.empty()) out["C"] = elements(w.C);
  if (!w.V.empty()) out["V"] = elements(w.V);
  if (w.ratio) out["ratio"] = to_json(*w.ratio);
  if (!w.eta_schedule.empty()) {
    Json eta = Json::array();
    for (const auto& [e, b] : w.eta_schedule) eta.push_back(Json{{"eta", to_json(e)}, {"lower_bound", to_json(b)}});
    out["eta_schedule"] = eta;
  }
  out["description"] = w.description;
  return out;
}

}  // namespace

Json to_json(const DensityReport& r) {
  Json out;
  out["summary"] = r.summary();
  out["kind"] = to_string(r.kind);
  out["method"] = to_string(r.method);
  if (r.kind == ValueKind::Exact) {
    out["value"] = to_json(*r.exact);
  } else if (r.kind == ValueKind::Infinite) {
    out["value"] = to_json(ExtRational::infinity());
  } else {
    out["value"] = nullptr;
    out["estimate"] = approx6(r.extrapolated);
    out["converged"] = r.converged;
  }
  Json sched = Json::array();
  for (const auto& e : r.schedule) {
    Json row{{"r", to_json(e.r)}, {"ratio", to_json(e.ratio)}};
    row["argmax"] = e.argmax ? elem_text(*e.argmax) : Json(nullptr);
    row["attained"] = e.attained;
    sched.push_back(row);
  }
  out["schedule"] = sched;
  if (r.witness) out["witness"] = witness_json(*r.witness);
  out["notes"] = r.notes;
  out["settings"] = to_json(r.settings);
  return out;
}

Json to_json(const GapReport& g) {
  Json out{{"positives", g.positives}, {"gaps", g.gaps}, {"max_gap", g.max_gap}, {"bounded", g.bounded}};
  out["period"] = g.period ? Json(*g.period) : Json(nullptr);
  return out;
}

Json to_json(const SyndeticCertificate& c) {
  Json out;
  out["K"] = std::visit(overloaded{
                            [](const ExplicitFinite& f) { return elements(f.elements); },
                            [](const IntervalUnion& u) { return parts_text(u); },
                        },
                        c.K);
  out["verified"] = c.verified;
  out["domain"] = c.domain;
  Json cells = Json::array();
  for (const auto& [cell, k] : c.cells) cells.push_back(Json{{"cell", elem_text(cell)}, {"translate", elem_text(k)}});
  out["cells"] = cells;
  if (c.covered) out["covered"] = parts_text(*c.covered);
  out["counterexample"] = c.counterexample ? elem_text(*c.counterexample) : Json(nullptr);
  if (c.uncovered_gap) out["uncovered_gap"] = Json::array({c.uncovered_gap->lo.str(), c.uncovered_gap->hi.str()});
  return out;
}

Json to_json(const MinimalCover& c) {
  return Json{{"K", elements(c.K)}, {"size", c.K.size()}, {"exact", c.exact}, {"domain", c.domain}, {"nodes", c.nodes}};
}

Json to_json(const CoverResult& c) {
  Json out{{"B", elements(c.B)},          {"size", c.B.size()},
           {"size_bound", c.size_bound},  {"density", to_json(c.density)},
           {"verified_cover", c.verified_cover}, {"verified_packing", c.verified_packing},
           {"domain", c.domain}};
  Json m = Json::array();
  for (const auto& b : c.maximality) {
    m.push_back(Json{{"candidate", elem_text(b.candidate)}, {"blocker", elem_text(b.blocker)}, {"difference", elem_text(b.difference)}});
  }
  for (const auto& b : c.line_maximality) {
    m.push_back(Json{{"piece", Json::array({b.piece.lo.str(), b.piece.hi.str()})}, {"blocker", b.blocker.str()}});
  }
  out["maximality"] = m;
  return out;
}

Json to_json(const PartitionResult& p) {
  Json out;
  out["H"] = std::visit(overloaded{
                            [](const IntervalUnion& u) { return parts_text(u); },
                            [](const ExplicitFinite& f) { return elements(f.elements); },
                        },
                        p.H);
  out["n"] = p.n;
  out["k_bound"] = p.k_bound;
  out["cycle_periods"] = p.cycle_periods;
  Json cls = Json::array();
  for (std::size_t j = 0; j < p.classes.size(); ++j) {
    Json c;
    c["set"] = std::visit(overloaded{
                              [](const PointConfig& s) { return point_config_text(s); },
                              [](const DiscreteSet& s) { return set_text(s); },
                          },
                          p.classes[j]);
    c["density"] = to_json(p.densities[j]);
    cls.push_back(c);
  }
  out["classes"] = cls;
  return out;
}

Json to_json(const RudinWindow& w) {
  Json trace = Json::array();
  for (const auto& [L, ok] : w.trace) trace.push_back(Json{{"L", L.str()}, {"holds", ok}});
  return Json{{"L", w.L.str()},          {"W", parts_text(w.W)},       {"V", parts_text(w.V)},
              {"mu_CV", to_json(w.mu_CV)}, {"mu_V", to_json(w.mu_V)}, {"verified", w.verified},
              {"trace", trace}};
}

Json to_json(const AutoHResult& a) {
  return Json{{"H", parts_text(a.H)},       {"L", a.L.str()},         {"c", a.c.str()},
              {"eta", to_json(a.eta)},      {"rho", to_json(a.rho)},  {"eps", a.eps.str()},
              {"k", a.k},                   {"count_bound", to_json(a.count_bound)},
              {"verified", a.verified},     {"rudin", to_json(a.rudin)},
              {"extra_doublings", rats_text(a.extra_doublings)}};
}

Json to_json(const TranslationResult& t) {
  Json out;
  out["x"] = t.x ? elem_text(*t.x) : Json(nullptr);
  out["found"] = t.x.has_value();
  out["mass_at_x"] = to_json(t.mass_at_x);
  out["scanned_sup"] = to_json(t.scanned_sup);
  out["target"] = to_json(t.target);
  return out;
}

Json to_json(const SubadditivityVerdict& v) {
  Json parts = Json::array();
  for (const auto& p : v.parts) parts.push_back(to_json(p));
  Json out{{"parts", parts}, {"total", to_json(v.total)}, {"sum_of_parts", to_json(v.sum_of_parts)}, {"holds", v.holds}};
  out["slack"] = v.slack ? to_json(*v.slack) : Json(nullptr);
  return out;
}

Json to_json(const PipelineResult& p) {
  Json out;
  out["eps"] = p.eps.str();
  out["rho"] = to_json(p.rho);
  out["H"] = parts_text(p.H);
  if (p.auto_h) out["auto_H"] = to_json(*p.auto_h);
  out["partition"] = to_json(p.partition);
  out["selected"] = p.selected;
  out["rho_j"] = to_json(p.rho_j);
  if (p.fattened) {
    out["fattened"] = Json{{"A", to_json(p.fattened->A)},
                           {"bound", to_json(p.fattened->bound)},
                           {"measured", to_json(p.fattened->measured)}};
  }
  out["cover"] = to_json(p.cover);
  out["T"] = to_json(p.T);
  out["mu_T"] = to_json(p.mu_T);
  out["covering"] = to_json(p.covering);
  out["remark_bound"] = Json{{"value", to_json(p.remark_bound)}, {"holds", p.remark_holds}};
  out["translate_bound"] = Json{{"value", to_json(p.translate_bound)}, {"holds", p.translate_bound_holds}};
  out["corrected_bound"] = Json{{"value", to_json(p.corrected_bound)}, {"holds", p.corrected_holds}};
  return out;
}

}  // namespace density_lab
