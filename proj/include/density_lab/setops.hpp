#pragma once

#include <string>
#include <variant>
#include <vector>

#include "density_lab/group.hpp"
#include "density_lab/interval_union.hpp"
#include "density_lab/rational.hpp"
#include "density_lab/sets.hpp"

namespace density_lab {

// Result of an operation that reports a warning instead of failing.
template <class T>
struct Flagged {
  T set;
  bool empty_input = false;  // input was empty, so 0 is not in the result
};

// Exact sumset. Periodic + periodic uses the lcm of the periods;
// periodic + finite shifts the residues; finite + finite is pairwise.
DiscreteSet minkowski_sum(const GroupSpec& group, const DiscreteSet& a, const DiscreteSet& b);

Flagged<DiscreteSet> difference_set(const GroupSpec& group, const DiscreteSet& s);
Flagged<IntervalUnion> difference_set(const IntervalUnion& s);
// (S - S) ∩ [lo, hi]. The result carries the accumulation flag of S, moved
// to 0.
Flagged<PointConfig> difference_set(const PointConfig& s, const Rational& lo, const Rational& hi);

// Cube [-r, r]^d on Z^d, or the interval [-r, r] on R.
struct BoxRadius {
  Rational r;
};
using Window = std::variant<IntervalUnion, BoxRadius, ExplicitFinite>;

// ν(x + window). Infinite when an accumulation point of ν lies inside.
ExtRational window_mass(const GroupSpec& group, const MeasureSpec& measure, const Element& x, const Window& window);

struct HaarValue {
  ExtRational value;
  // Mass per period for an unbounded periodic set; value is then Infinite.
  std::optional<Rational> per_period;
  std::optional<Period> period;
};

using SetSpec = std::variant<DiscreteSet, IntervalUnion, PeriodicPattern, ChainSet, PointConfig>;

HaarValue haar(const GroupSpec& group, const SetSpec& set);

// The measure A ↦ ν(A - g).
MeasureSpec shifted(const GroupSpec& group, const MeasureSpec& measure, const Element& g);
DiscreteSet shifted(const GroupSpec& group, const DiscreteSet& set, const Element& g);

}  // namespace density_lab
