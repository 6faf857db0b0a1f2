#include "density_lab/interval_union.hpp"

#include <algorithm>
#include <sstream>

#include "density_lab/errors.hpp"

namespace density_lab {

IntervalUnion::IntervalUnion(std::vector<Interval> parts) {
  for (const auto& p : parts) {
    if (p.hi < p.lo) throw PreconditionError("interval [" + p.lo.str() + ", " + p.hi.str() + "] has hi < lo");
  }
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  for (auto& p : parts) {
    if (!parts_.empty() && p.lo <= parts_.back().hi) {
      if (parts_.back().hi < p.hi) parts_.back().hi = p.hi;
    } else {
      parts_.push_back(std::move(p));
    }
  }
}

Rational IntervalUnion::length() const {
  Rational total;
  for (const auto& p : parts_) total += p.length();
  return total;
}

bool IntervalUnion::contains(const Rational& x) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                             [](const Rational& v, const Interval& p) { return v < p.lo; });
  if (it == parts_.begin()) return false;
  return x <= std::prev(it)->hi;
}

bool IntervalUnion::contains(const Interval& piece) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), piece.lo,
                             [](const Rational& v, const Interval& p) { return v < p.lo; });
  if (it == parts_.begin()) return false;
  --it;
  return it->lo <= piece.lo && piece.hi <= it->hi;
}

bool IntervalUnion::contains_in_interior(const Rational& x) const {
  for (const auto& p : parts_) {
    if (p.lo < x && x < p.hi) return true;
  }
  return false;
}

Rational IntervalUnion::min() const {
  if (parts_.empty()) throw PreconditionError("min of empty interval union");
  return parts_.front().lo;
}

Rational IntervalUnion::max() const {
  if (parts_.empty()) throw PreconditionError("max of empty interval union");
  return parts_.back().hi;
}

Rational IntervalUnion::diameter() const { return parts_.empty() ? Rational(0) : max() - min(); }

IntervalUnion IntervalUnion::shifted(const Rational& d) const {
  IntervalUnion out = *this;
  for (auto& p : out.parts_) {
    p.lo += d;
    p.hi += d;
  }
  return out;
}

IntervalUnion IntervalUnion::scaled(const Rational& k) const {
  if (k.sign() <= 0) throw PreconditionError("scale factor must be positive");
  IntervalUnion out = *this;
  for (auto& p : out.parts_) {
    p.lo *= k;
    p.hi *= k;
  }
  return out;
}

IntervalUnion IntervalUnion::negated() const {
  std::vector<Interval> parts;
  parts.reserve(parts_.size());
  for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) parts.push_back({-it->hi, -it->lo});
  return IntervalUnion(std::move(parts));
}

std::string IntervalUnion::str() const {
  if (parts_.empty()) return "{}";
  std::ostringstream os;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) os << " u ";
    os << '[' << parts_[i].lo << ", " << parts_[i].hi << ']';
  }
  return os.str();
}

IntervalUnion unite(const IntervalUnion& a, const IntervalUnion& b) {
  std::vector<Interval> parts = a.parts();
  parts.insert(parts.end(), b.parts().begin(), b.parts().end());
  return IntervalUnion(std::move(parts));
}

IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b) {
  std::vector<Interval> out;
  std::size_t i = 0;
  std::size_t j = 0;
  const auto& pa = a.parts();
  const auto& pb = b.parts();
  while (i < pa.size() && j < pb.size()) {
    const Rational lo = max(pa[i].lo, pb[j].lo);
    const Rational hi = min(pa[i].hi, pb[j].hi);
    if (lo <= hi) out.push_back({lo, hi});
    if (pa[i].hi < pb[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return IntervalUnion(std::move(out));
}

IntervalUnion minkowski_sum(const IntervalUnion& a, const IntervalUnion& b) {
  std::vector<Interval> parts;
  parts.reserve(a.parts().size() * b.parts().size());
  for (const auto& x : a.parts()) {
    for (const auto& y : b.parts()) parts.push_back({x.lo + y.lo, x.hi + y.hi});
  }
  return IntervalUnion(std::move(parts));
}

std::vector<Interval> gaps(const IntervalUnion& a, const Rational& lo, const Rational& hi) {
  std::vector<Interval> out;
  Rational cursor = lo;
  for (const auto& p : a.parts()) {
    if (p.hi < cursor) continue;
    if (p.lo > hi) break;
    if (cursor < p.lo) out.push_back({cursor, p.lo});
    cursor = max(cursor, p.hi);
  }
  if (cursor < hi) out.push_back({cursor, hi});
  return out;
}

Rational measure_within(const IntervalUnion& a, const Rational& lo, const Rational& hi) {
  Rational total;
  for (const auto& p : a.parts()) {
    if (p.hi <= lo) continue;
    if (p.lo >= hi) break;
    total += min(p.hi, hi) - max(p.lo, lo);
  }
  return total;
}

namespace {

// Reduce arbitrary closed pieces modulo p into the canonical [0, p] form.
IntervalUnion reduce_pattern(const Rational& p, const std::vector<Interval>& pieces) {
  std::vector<Interval> out;
  for (const auto& piece : pieces) {
    if (piece.length() >= p) {
      out.push_back({Rational(0), p});
      continue;
    }
    const Rational a = mod(piece.lo, p);
    const Rational b = a + piece.length();
    if (b <= p) {
      out.push_back({a, b});
    } else {
      out.push_back({a, p});
      out.push_back({Rational(0), b - p});
    }
  }
  IntervalUnion u(std::move(out));
  const bool has0 = u.contains(Rational(0));
  const bool hasp = u.contains(p);
  if (has0 && !hasp) u = unite(u, IntervalUnion::point(p));
  if (hasp && !has0) u = unite(u, IntervalUnion::point(Rational(0)));
  return u;
}

}  // namespace

PeriodicPattern::PeriodicPattern(Rational period, const IntervalUnion& pattern) : period_(std::move(period)) {
  if (period_.sign() <= 0) throw PreconditionError("pattern period must be positive, got " + period_.str());
  pattern_ = reduce_pattern(period_, pattern.parts());
}

bool PeriodicPattern::contains(const Rational& x) const { return pattern_.contains(mod(x, period_)); }

Rational PeriodicPattern::cumulative(const Rational& x) const {
  const Rational q = (x / period_).floor();
  const Rational t = x - q * period_;
  return q * mass_per_period() + measure_within(pattern_, Rational(0), t);
}

IntervalUnion PeriodicPattern::materialize(const Rational& lo, const Rational& hi) const {
  if (hi < lo) return {};
  const Rational first = (lo / period_).floor();
  const Rational last = (hi / period_).floor();
  std::vector<Interval> parts;
  for (Rational k = first; k <= last; k += 1) {
    const Rational base = k * period_;
    for (const auto& p : pattern_.parts()) parts.push_back({p.lo + base, p.hi + base});
  }
  return intersect(IntervalUnion(std::move(parts)), IntervalUnion::closed(lo, hi));
}

PeriodicPattern PeriodicPattern::with_period(const Rational& multiple) const {
  const Rational k = multiple / period_;
  if (!k.is_integer() || k.sign() <= 0)
    throw PreconditionError(multiple.str() + " is not a positive multiple of period " + period_.str());
  return PeriodicPattern(multiple, materialize(Rational(0), multiple));
}

bool PeriodicPattern::covers_line() const { return pattern_.contains(Interval{Rational(0), period_}); }

PeriodicPattern PeriodicPattern::shifted(const Rational& d) const {
  return PeriodicPattern(period_, pattern_.shifted(d));
}

PeriodicPattern PeriodicPattern::negated() const { return PeriodicPattern(period_, pattern_.negated()); }

std::string PeriodicPattern::str() const { return "(" + pattern_.str() + ") mod " + period_.str(); }

PeriodicPattern minkowski_sum(const PeriodicPattern& a, const IntervalUnion& b) {
  return PeriodicPattern(a.period(), minkowski_sum(a.pattern(), b));
}

PeriodicPattern minkowski_sum(const PeriodicPattern& a, const PeriodicPattern& b, long max_tiles) {
  const Rational common = lcm(a.period(), b.period());
  const Rational ta = common / a.period();
  const Rational tb = common / b.period();
  if (ta > Rational(max_tiles) || tb > Rational(max_tiles))
    throw CapExceeded("common period " + common.str() + " needs too many tiles");
  const IntervalUnion one_a = a.materialize(Rational(0), common);
  const IntervalUnion one_b = b.materialize(Rational(0), common);
  return PeriodicPattern(common, minkowski_sum(one_a, one_b));
}

PeriodicPattern difference_set(const PeriodicPattern& a) {
  // A - A = pattern - pattern over one period, reduced modulo p.
  return PeriodicPattern(a.period(), minkowski_sum(a.pattern(), a.pattern().negated()));
}

}  // namespace density_lab
