#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "density_lab/group.hpp"
#include "density_lab/interval_union.hpp"
#include "density_lab/sets.hpp"

namespace density_lab {

struct GapReport {
  std::vector<std::int64_t> positives;  // scanned positive elements in increasing order
  std::vector<std::int64_t> gaps;       // consecutive differences of `positives`
  std::int64_t max_gap = 0;
  bool bounded = false;
  std::optional<std::int64_t> period;   // certifies boundedness for periodic input
};

// Gaps between consecutive positive elements of D ⊂ ℤ. Periodic D is
// scanned over one period past its least positive element; explicit D over
// its positive elements up to `range`.
GapReport gap_analysis(const GroupSpec& group, const DiscreteSet& D, std::int64_t range = 1 << 16);

using SyndeticSet = std::variant<DiscreteSet, PeriodicPattern, PointConfig, ChainSet>;
using TranslateSet = std::variant<ExplicitFinite, IntervalUnion>;

struct SyndeticCertificate {
  TranslateSet K;
  bool verified = false;
  std::string domain;
  // Discrete groups: each cell of the domain with a translate k ∈ K such
  // that cell ∈ S + k.
  std::vector<std::pair<Element, Element>> cells;
  // Real line: (S + K) ∩ [0, p] as computed.
  std::optional<IntervalUnion> covered;
  // Least uncovered cell, or the midpoint of the first uncovered gap on ℝ.
  std::optional<Element> counterexample;
  std::optional<Interval> uncovered_gap;
};

SyndeticCertificate syndetic_check(const GroupSpec& group, const SyndeticSet& S, const TranslateSet& K);

inline constexpr std::int64_t kExactCoverCap = 20;

struct MinimalCover {
  std::vector<Element> K;
  bool exact = true;  // false: greedy set cover over a domain above the cap
  std::string domain;
  std::int64_t nodes = 0;  // search nodes visited
};

// Smallest K with S + K = G, lexicographically least among the minimum
// ones. Works on a finite group or a periodic set in ℤ^d.
MinimalCover minimal_translates(const GroupSpec& group, const DiscreteSet& S, std::int64_t cap = kExactCoverCap);

}  // namespace density_lab
