#include "density_lab/additive.hpp"

#include <algorithm>
#include <bit>
#include <functional>

#include "density_lab/detail/overloaded.hpp"
#include "density_lab/errors.hpp"
#include "engine.hpp"

namespace density_lab {

using detail::overloaded;

GapReport gap_analysis(const GroupSpec& group, const DiscreteSet& D, std::int64_t range) {
  const auto* z = std::get_if<ZLattice>(&group);
  if (!z || z->dimension != 1) throw ShapeError("gap analysis needs Z, got " + describe(group));
  GapReport out;
  if (const auto* p = std::get_if<PeriodicDiscrete>(&D)) {
    if (p->residues.empty()) throw PreconditionError("set has no positive elements");
    const std::int64_t m = p->period[0];
    std::int64_t first = m;
    for (const auto& r : p->residues) {
      if (r[0] > 0) first = std::min(first, r[0]);
    }
    for (std::int64_t k = 0; k <= 2; ++k) {
      for (const auto& r : p->residues) {
        const std::int64_t v = r[0] + k * m;
        if (v > 0 && v <= first + m) out.positives.push_back(v);
      }
    }
    std::sort(out.positives.begin(), out.positives.end());
    out.bounded = true;
    out.period = m;
  } else {
    for (const auto& e : std::get<ExplicitFinite>(D).elements) {
      const auto v = std::get<IntVec>(e)[0];
      if (v > 0 && v <= range) out.positives.push_back(v);
    }
    if (out.positives.empty()) throw PreconditionError("set has no positive elements in [1, " + std::to_string(range) + "]");
  }
  for (std::size_t i = 1; i < out.positives.size(); ++i) out.gaps.push_back(out.positives[i] - out.positives[i - 1]);
  if (!out.gaps.empty()) out.max_gap = *std::max_element(out.gaps.begin(), out.gaps.end());
  return out;
}

namespace {

IntervalUnion as_union(const TranslateSet& K) {
  return std::visit(overloaded{
                        [](const IntervalUnion& u) { return u; },
                        [](const ExplicitFinite& f) {
                          std::vector<Interval> parts;
                          for (const auto& e : f.elements) {
                            const auto* q = std::get_if<Rational>(&e);
                            if (!q) throw ShapeError("translates on R are real numbers, got " + to_string(e));
                            parts.push_back({*q, *q});
                          }
                          return IntervalUnion(std::move(parts));
                        },
                    },
                    K);
}

SyndeticCertificate check_line(const PeriodicPattern& S, const TranslateSet& K) {
  SyndeticCertificate out;
  out.K = K;
  const PeriodicPattern sum = minkowski_sum(S, as_union(K));
  out.domain = "[0, " + sum.period().str() + ")";
  out.covered = sum.pattern();
  out.verified = sum.covers_line();
  if (!out.verified) {
    const auto g = gaps(sum.pattern(), Rational(0), sum.period());
    if (!g.empty()) {
      out.uncovered_gap = g.front();
      out.counterexample = Element((g.front().lo + g.front().hi) / 2);
    }
  }
  return out;
}

}  // namespace

SyndeticCertificate syndetic_check(const GroupSpec& group, const SyndeticSet& S, const TranslateSet& K) {
  if (std::holds_alternative<RealLine>(group)) {
    return std::visit(overloaded{
                          [&](const PeriodicPattern& p) { return check_line(p, K); },
                          [&](const PointConfig& c) {
                            if (!c.is_periodic()) throw PreconditionError("syndetic check on R needs a periodic configuration");
                            std::vector<Interval> pts;
                            for (const auto& o : c.offsets()) pts.push_back({o, o});
                            return check_line(PeriodicPattern(c.period(), IntervalUnion(std::move(pts))), K);
                          },
                          [&](const auto&) -> SyndeticCertificate {
                            throw ShapeError("sets on R are periodic patterns or point configurations");
                          },
                      },
                      S);
  }
  const auto* k = std::get_if<ExplicitFinite>(&K);
  if (!k) throw ShapeError("translate sets on discrete groups are finite");
  const std::variant<DiscreteSet, ChainSet> set = std::visit(
      overloaded{
          [](const DiscreteSet& d) -> std::variant<DiscreteSet, ChainSet> { return d; },
          [](const ChainSet& c) -> std::variant<DiscreteSet, ChainSet> { return c; },
          [](const auto&) -> std::variant<DiscreteSet, ChainSet> { throw ShapeError("interval sets need the real line"); },
      },
      S);
  const auto ts = detail::torus_of(group, set);
  SyndeticCertificate out;
  out.K = K;
  out.domain = ts.domain;
  std::vector<std::int64_t> kidx;
  for (const auto& e : k->elements) kidx.push_back(ts.torus.index(std::get<IntVec>(normalize(e, group))));
  out.verified = true;
  for (std::int64_t i = 0; i < ts.torus.size(); ++i) {
    std::optional<std::size_t> hit;
    for (std::size_t j = 0; j < kidx.size() && !hit; ++j) {
      if (ts.member[static_cast<std::size_t>(ts.torus.sub(i, kidx[j]))]) hit = j;
    }
    if (!hit) {
      out.verified = false;
      out.counterexample = ts.torus.lift(i);
      break;
    }
    out.cells.emplace_back(ts.torus.lift(i), k->elements[*hit]);
  }
  return out;
}

MinimalCover minimal_translates(const GroupSpec& group, const DiscreteSet& S, std::int64_t cap) {
  if (is_empty(S)) throw PreconditionError("S is empty, so no translates cover the group");
  const auto ts = detail::torus_of(group, S);
  const auto n = ts.torus.size();
  MinimalCover out;
  out.domain = ts.domain;
  std::int64_t s_size = 0;
  for (const auto c : ts.member) s_size += c;

  auto covered_by = [&](std::int64_t k, std::int64_t cell) {
    return ts.member[static_cast<std::size_t>(ts.torus.sub(cell, k))] != 0;
  };

  if (n <= cap && n <= 31) {
    std::vector<std::uint32_t> cover(static_cast<std::size_t>(n), 0);
    for (std::int64_t k = 0; k < n; ++k) {
      for (std::int64_t c = 0; c < n; ++c) {
        if (covered_by(k, c)) cover[static_cast<std::size_t>(k)] |= 1u << c;
      }
    }
    const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
    std::vector<std::int64_t> chosen;
    // Combinations in lexicographic order; the first hit of size t is the
    // lexicographically least minimum cover.
    std::function<bool(std::int64_t, std::uint32_t, std::int64_t)> dfs = [&](std::int64_t start, std::uint32_t got,
                                                                            std::int64_t left) -> bool {
      ++out.nodes;
      if (got == full) return true;
      if (left == 0) return false;
      if (static_cast<std::int64_t>(std::popcount(full & ~got)) > left * s_size) return false;
      for (std::int64_t k = start; k < n; ++k) {
        chosen.push_back(k);
        if (dfs(k + 1, got | cover[static_cast<std::size_t>(k)], left - 1)) return true;
        chosen.pop_back();
      }
      return false;
    };
    for (std::int64_t t = 1; t <= n; ++t) {
      chosen.clear();
      if (dfs(0, 0, t)) break;
    }
    for (const auto k : chosen) out.K.push_back(ts.torus.lift(k));
    return out;
  }

  out.exact = false;
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  std::int64_t remaining = n;
  while (remaining > 0) {
    std::int64_t best = -1, best_gain = 0;
    for (std::int64_t k = 0; k < n; ++k) {
      std::int64_t gain = 0;
      for (std::int64_t c = 0; c < n; ++c) {
        if (!done[static_cast<std::size_t>(c)] && covered_by(k, c)) ++gain;
      }
      if (gain > best_gain) {
        best = k;
        best_gain = gain;
      }
    }
    ++out.nodes;
    out.K.push_back(ts.torus.lift(best));
    for (std::int64_t c = 0; c < n; ++c) {
      if (!done[static_cast<std::size_t>(c)] && covered_by(best, c)) {
        done[static_cast<std::size_t>(c)] = 1;
        --remaining;
      }
    }
  }
  return out;
}

}  // namespace density_lab
