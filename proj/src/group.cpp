#include "density_lab/group.hpp"

#include <numeric>
#include <sstream>

#include "density_lab/detail/overloaded.hpp"
#include "density_lab/errors.hpp"

namespace density_lab {

using detail::overloaded;

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

void check_moduli(const IntVec& moduli) {
  for (const auto m : moduli) {
    if (m < 2) throw ShapeError("group moduli must be >= 2, got " + std::to_string(m));
  }
}

const IntVec& int_coords(const Element& g) {
  if (const auto* v = std::get_if<IntVec>(&g)) return *v;
  throw ShapeError("expected an integer tuple, got rational " + std::get<Rational>(g).str());
}

}  // namespace

void validate(const GroupSpec& group) {
  std::visit(overloaded{
                 [](const ZLattice& z) {
                   if (z.dimension < 1) throw ShapeError("lattice dimension must be >= 1");
                 },
                 [](const FiniteAbelian& f) { check_moduli(f.moduli); },
                 [](const RealLine&) {},
                 [](const SigmaFiniteChain& c) {
                   if (c.moduli.empty()) throw ShapeError("chain needs at least one materialized modulus");
                   check_moduli(c.moduli);
                 },
             },
             group);
}

std::string describe(const GroupSpec& group) {
  auto join = [](const IntVec& m) {
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "x" : "") + std::string("Z_") + std::to_string(m[i]);
    return s.empty() ? std::string("{0}") : s;
  };
  return std::visit(overloaded{
                        [](const ZLattice& z) {
                          return z.dimension == 1 ? std::string("Z") : "Z^" + std::to_string(z.dimension);
                        },
                        [&](const FiniteAbelian& f) { return join(f.moduli); },
                        [](const RealLine&) { return std::string("R"); },
                        [&](const SigmaFiniteChain& c) {
                          return "(+)" + join(c.moduli) + " (depth " + std::to_string(c.depth()) + ")";
                        },
                    },
                    group);
}

bool is_discrete(const GroupSpec& group) { return !std::holds_alternative<RealLine>(group); }

std::optional<std::int64_t> order(const GroupSpec& group) {
  if (const auto* f = std::get_if<FiniteAbelian>(&group)) {
    std::int64_t n = 1;
    for (const auto m : f->moduli) {
      if (n > (std::int64_t{1} << 62) / m) throw CapExceeded("group order overflows int64");
      n *= m;
    }
    return n;
  }
  return std::nullopt;
}

std::int64_t chain_order(const SigmaFiniteChain& chain, std::size_t n) {
  if (n > chain.depth()) throw CapExceeded("chain depth " + std::to_string(n) + " exceeds materialized depth " + std::to_string(chain.depth()));
  std::int64_t out = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (out > (std::int64_t{1} << 62) / chain.moduli[i]) throw CapExceeded("chain order overflows int64");
    out *= chain.moduli[i];
  }
  return out;
}

Element zero(const GroupSpec& group) {
  return std::visit(overloaded{
                        [](const ZLattice& z) -> Element { return IntVec(static_cast<std::size_t>(z.dimension), 0); },
                        [](const FiniteAbelian& f) -> Element { return IntVec(f.moduli.size(), 0); },
                        [](const RealLine&) -> Element { return Rational(0); },
                        [](const SigmaFiniteChain&) -> Element { return IntVec{}; },
                    },
                    group);
}

Element normalize(const Element& g, const GroupSpec& group) {
  return std::visit(
      overloaded{
          [&](const ZLattice& z) -> Element {
            const auto& v = int_coords(g);
            if (v.size() != static_cast<std::size_t>(z.dimension))
              throw ShapeError("element " + to_string(g) + " does not belong to " + describe(group));
            return v;
          },
          [&](const FiniteAbelian& f) -> Element {
            auto v = int_coords(g);
            if (v.size() != f.moduli.size())
              throw ShapeError("element " + to_string(g) + " does not belong to " + describe(group));
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = floor_mod(v[i], f.moduli[i]);
            return v;
          },
          [&](const RealLine&) -> Element {
            if (const auto* r = std::get_if<Rational>(&g)) return *r;
            throw ShapeError("element " + to_string(g) + " does not belong to R");
          },
          [&](const SigmaFiniteChain& c) -> Element {
            auto v = int_coords(g);
            while (!v.empty() && v.back() == 0) v.pop_back();
            if (v.size() > c.depth())
              throw ShapeError("element " + to_string(g) + " has support beyond materialized depth " +
                               std::to_string(c.depth()));
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = floor_mod(v[i], c.moduli[i]);
            while (!v.empty() && v.back() == 0) v.pop_back();
            return v;
          },
      },
      group);
}

Element add(const Element& g, const Element& h, const GroupSpec& group) {
  const Element a = normalize(g, group);
  const Element b = normalize(h, group);
  if (std::holds_alternative<RealLine>(group)) return std::get<Rational>(a) + std::get<Rational>(b);
  IntVec x = std::get<IntVec>(a);
  const IntVec& y = std::get<IntVec>(b);
  if (x.size() < y.size()) x.resize(y.size(), 0);  // chain elements of different support
  for (std::size_t i = 0; i < y.size(); ++i) x[i] += y[i];
  return normalize(x, group);
}

Element negate(const Element& g, const GroupSpec& group) {
  const Element a = normalize(g, group);
  if (std::holds_alternative<RealLine>(group)) return -std::get<Rational>(a);
  IntVec x = std::get<IntVec>(a);
  for (auto& c : x) c = -c;
  return normalize(x, group);
}

Element subtract(const Element& g, const Element& h, const GroupSpec& group) {
  return add(g, negate(h, group), group);
}

std::int64_t lex_index(const IntVec& g, const IntVec& moduli) {
  std::int64_t idx = 0;
  for (std::size_t i = 0; i < moduli.size(); ++i) idx = idx * moduli[i] + (i < g.size() ? g[i] : 0);
  return idx;
}

IntVec lex_element(std::int64_t index, const IntVec& moduli) {
  IntVec g(moduli.size(), 0);
  for (std::size_t i = moduli.size(); i-- > 0;) {
    g[i] = index % moduli[i];
    index /= moduli[i];
  }
  return g;
}

std::vector<Element> enumerate(const GroupSpec& group, std::int64_t cap) {
  IntVec moduli;
  bool chain = false;
  if (const auto* f = std::get_if<FiniteAbelian>(&group)) {
    moduli = f->moduli;
  } else if (const auto* c = std::get_if<SigmaFiniteChain>(&group)) {
    moduli = c->moduli;
    chain = true;
  } else {
    throw PreconditionError("enumerate requires a finite group or a materialized chain, got " + describe(group));
  }
  validate(group);
  std::int64_t n = 1;
  for (const auto m : moduli) {
    if (n > cap / m) throw CapExceeded("group order exceeds enumeration cap " + std::to_string(cap));
    n *= m;
  }
  std::vector<Element> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    IntVec g = lex_element(i, moduli);
    if (chain) {
      while (!g.empty() && g.back() == 0) g.pop_back();
    }
    out.emplace_back(std::move(g));
  }
  return out;
}

std::string to_string(const IntVec& g) {
  if (g.size() == 1) return std::to_string(g[0]);
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < g.size(); ++i) os << (i ? "," : "") << g[i];
  os << ')';
  return os.str();
}

std::string to_string(const Element& g) {
  if (const auto* r = std::get_if<Rational>(&g)) return r->str();
  return to_string(std::get<IntVec>(g));
}

std::int64_t BoxDomain::size() const {
  return std::accumulate(extents.begin(), extents.end(), std::int64_t{1}, std::multiplies<>());
}

bool BoxDomain::contains(const IntVec& x) const {
  if (x.size() != extents.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0 || x[i] >= extents[i]) return false;
  }
  return true;
}

IntVec BoxDomain::reduce(const IntVec& x) const { return reduce_mod(x, extents); }

std::vector<IntVec> BoxDomain::cells() const {
  std::vector<IntVec> out;
  const std::int64_t n = size();
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) out.push_back(lex_element(i, extents));
  return out;
}

IntVec reduce_mod(const IntVec& x, const IntVec& period) {
  if (x.size() != period.size()) throw ShapeError("dimension mismatch between " + to_string(x) + " and period " + to_string(period));
  IntVec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = floor_mod(x[i], period[i]);
  return out;
}

FundamentalDomain fundamental_domain(const Period& period) {
  if (const auto* p = std::get_if<Rational>(&period)) {
    if (p->sign() <= 0) throw PreconditionError("period must be positive, got " + p->str());
    return IntervalDomain{*p};
  }
  const auto& m = std::get<IntVec>(period);
  if (m.empty()) throw PreconditionError("period lattice needs at least one dimension");
  for (const auto v : m) {
    if (v <= 0) throw PreconditionError("period must be positive, got " + std::to_string(v));
  }
  return BoxDomain{m};
}

}  // namespace density_lab
