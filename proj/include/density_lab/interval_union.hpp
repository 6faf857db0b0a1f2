#pragma once

#include <optional>
#include <string>
#include <vector>

#include "density_lab/rational.hpp"

namespace density_lab {

// Closed interval [lo, hi] with lo <= hi; degenerate points are allowed.
struct Interval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Finite union of closed intervals with exact endpoints. Construction
// canonicalizes: sorted, overlapping or touching pieces merged, so the
// stored pieces are pairwise separated by strictly positive gaps.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  explicit IntervalUnion(std::vector<Interval> parts);

  static IntervalUnion closed(const Rational& lo, const Rational& hi) { return IntervalUnion({{lo, hi}}); }
  static IntervalUnion point(const Rational& x) { return IntervalUnion({{x, x}}); }

  const std::vector<Interval>& parts() const noexcept { return parts_; }
  bool empty() const noexcept { return parts_.empty(); }
  Rational length() const;
  bool contains(const Rational& x) const;
  bool contains(const Interval& piece) const;
  // x lies in the interior of one of the pieces.
  bool contains_in_interior(const Rational& x) const;
  Rational min() const;
  Rational max() const;
  // max - min; zero for the empty set.
  Rational diameter() const;

  IntervalUnion shifted(const Rational& d) const;
  IntervalUnion scaled(const Rational& k) const;  // k > 0
  IntervalUnion negated() const;

  std::string str() const;

  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

 private:
  std::vector<Interval> parts_;
};

IntervalUnion unite(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion minkowski_sum(const IntervalUnion& a, const IntervalUnion& b);
// Maximal stretches of [lo, hi] not covered by `a`, as (lo_i, hi_i) with
// lo_i < hi_i. Endpoints belong to `a` except where they coincide with
// lo or hi.
std::vector<Interval> gaps(const IntervalUnion& a, const Rational& lo, const Rational& hi);
// Length of a ∩ [lo, hi].
Rational measure_within(const IntervalUnion& a, const Rational& lo, const Rational& hi);

// A + pℤ for a closed pattern A. The stored pattern is (A + pℤ) ∩ [0, p],
// so it contains 0 exactly when it contains p.
class PeriodicPattern {
 public:
  PeriodicPattern(Rational period, const IntervalUnion& pattern);

  const Rational& period() const noexcept { return period_; }
  const IntervalUnion& pattern() const noexcept { return pattern_; }

  Rational mass_per_period() const { return pattern_.length(); }
  Rational density() const { return pattern_.length() / period_; }
  bool contains(const Rational& x) const;
  // |A ∩ [0, x]| for x >= 0 and -|A ∩ [x, 0]| for x < 0.
  Rational cumulative(const Rational& x) const;
  // |A ∩ [a, b]|.
  Rational mass(const Rational& a, const Rational& b) const { return cumulative(b) - cumulative(a); }
  // A ∩ [lo, hi] as a finite union.
  IntervalUnion materialize(const Rational& lo, const Rational& hi) const;
  // Same set described with a period that is a positive integer multiple.
  PeriodicPattern with_period(const Rational& multiple) const;
  bool covers_line() const;

  PeriodicPattern shifted(const Rational& d) const;
  PeriodicPattern negated() const;

  std::string str() const;

  friend bool operator==(const PeriodicPattern&, const PeriodicPattern&) = default;

 private:
  Rational period_;
  IntervalUnion pattern_;
};

PeriodicPattern minkowski_sum(const PeriodicPattern& a, const IntervalUnion& b);
// Periods combined by lcm; throws CapExceeded if the common period needs
// more than `max_tiles` copies of either pattern.
PeriodicPattern minkowski_sum(const PeriodicPattern& a, const PeriodicPattern& b, long max_tiles = 1 << 16);
PeriodicPattern difference_set(const PeriodicPattern& a);

}  // namespace density_lab
