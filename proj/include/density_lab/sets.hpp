#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "density_lab/group.hpp"
#include "density_lab/interval_union.hpp"
#include "density_lab/rational.hpp"

namespace density_lab {

// Finite subset of a discrete group (or of ℝ for degenerate uses), sorted
// and deduplicated in the canonical element order.
struct ExplicitFinite {
  std::vector<Element> elements;
  friend bool operator==(const ExplicitFinite&, const ExplicitFinite&) = default;
};

// R + diag(period)·ℤ^d with residues reduced into the fundamental box.
struct PeriodicDiscrete {
  IntVec period;
  std::vector<IntVec> residues;
  friend bool operator==(const PeriodicDiscrete&, const PeriodicDiscrete&) = default;
};

using DiscreteSet = std::variant<ExplicitFinite, PeriodicDiscrete>;

ExplicitFinite make_explicit(const GroupSpec& group, std::vector<Element> elements);
PeriodicDiscrete make_periodic(IntVec period, std::vector<IntVec> residues);
bool contains(const GroupSpec& group, const DiscreteSet& set, const Element& g);
bool is_empty(const DiscreteSet& set);

// Finite list of reals.
struct FinitePoints {
  std::vector<Rational> points;
  friend bool operator==(const FinitePoints&, const FinitePoints&) = default;
};

// offsets + step·ℤ, plus finitely many extra points, minus finitely many
// removed lattice points.
struct PerturbedLattice {
  Rational step;
  std::vector<Rational> offsets;
  std::vector<Rational> extra;
  std::vector<Rational> removed;
  friend bool operator==(const PerturbedLattice&, const PerturbedLattice&) = default;
};

// {center + 1/n : n >= first}; accumulates at center from the right.
struct HarmonicSequence {
  Rational center;
  std::int64_t first = 1;
  friend bool operator==(const HarmonicSequence&, const HarmonicSequence&) = default;
};

// Locally finite point configuration on ℝ. `has_accumulation` marks a
// configuration whose counting measure is infinite near
// `accumulation_point`; it is set by the factory for harmonic sequences and
// by instance authors for truncations of accumulating sequences.
struct PointConfig {
  std::variant<FinitePoints, PerturbedLattice, HarmonicSequence> body;
  bool has_accumulation = false;
  std::optional<Rational> accumulation_point;

  bool is_periodic() const;
  // Period of a periodic configuration; throws PreconditionError otherwise.
  const Rational& period() const;
  // Offsets of a periodic configuration within [0, period).
  const std::vector<Rational>& offsets() const;
  bool empty() const;

  friend bool operator==(const PointConfig&, const PointConfig&) = default;
};

PointConfig finite_points(std::vector<Rational> points);
PointConfig lattice(Rational step, std::vector<Rational> offsets, std::vector<Rational> extra = {},
                    std::vector<Rational> removed = {});
PointConfig harmonic(Rational center, std::int64_t first = 1);
// Marks a configuration as a truncation of a sequence accumulating at `at`.
PointConfig with_accumulation(PointConfig config, Rational at);
// Points of the configuration inside [lo, hi]; throws PreconditionError
// when that is infinite.
std::vector<Rational> points_within(const PointConfig& config, const Rational& lo, const Rational& hi);
PointConfig shifted(const PointConfig& config, const Rational& d);

// Subsets of a σ-finite chain ⊕ℤ_{m_i}.
struct Cylinder {
  std::size_t coords = 0;          // membership depends on the first `coords` coordinates
  std::vector<IntVec> allowed;     // admissible prefixes, each of length `coords`
  friend bool operator==(const Cylinder&, const Cylinder&) = default;
};
struct ChainSubgroup {
  std::size_t n = 0;  // H_n
  friend bool operator==(const ChainSubgroup&, const ChainSubgroup&) = default;
};
struct WholeChain {
  friend bool operator==(const WholeChain&, const WholeChain&) = default;
};
using ChainSet = std::variant<Cylinder, ChainSubgroup, WholeChain, ExplicitFinite>;

Cylinder make_cylinder(const SigmaFiniteChain& chain, std::size_t coords, std::vector<IntVec> allowed);
bool contains(const SigmaFiniteChain& chain, const ChainSet& set, const IntVec& g);
// #(A ∩ H_n).
std::int64_t count_in_subgroup(const SigmaFiniteChain& chain, const ChainSet& set, std::size_t n);

struct MeasureSpec;

struct Counting {
  std::variant<DiscreteSet, PointConfig, ChainSet> of;
  friend bool operator==(const Counting&, const Counting&) = default;
};
struct HaarTrace {
  std::variant<DiscreteSet, IntervalUnion, PeriodicPattern, ChainSet> of;
  friend bool operator==(const HaarTrace&, const HaarTrace&) = default;
};
struct DiracAtZero {
  friend bool operator==(const DiracAtZero&, const DiracAtZero&) = default;
};
struct WeightedDiracs {
  std::vector<std::pair<Element, Rational>> atoms;  // positive weights
  friend bool operator==(const WeightedDiracs&, const WeightedDiracs&) = default;
};
struct MeasureSum {
  std::vector<MeasureSpec> parts;
  friend bool operator==(const MeasureSum&, const MeasureSum&);
};

struct MeasureSpec {
  std::variant<Counting, HaarTrace, DiracAtZero, WeightedDiracs, MeasureSum> kind;
  friend bool operator==(const MeasureSpec&, const MeasureSpec&) = default;
};

inline bool operator==(const MeasureSum& a, const MeasureSum& b) { return a.parts == b.parts; }

MeasureSpec counting(DiscreteSet set);
MeasureSpec counting(PointConfig config);
MeasureSpec counting(ChainSet set);
MeasureSpec haar_trace(IntervalUnion set);
MeasureSpec haar_trace(PeriodicPattern set);
MeasureSpec dirac_at_zero();
MeasureSpec weighted_diracs(std::vector<std::pair<Element, Rational>> atoms);
MeasureSpec measure_sum(std::vector<MeasureSpec> parts);

// Checks that every component fits `group` (element shapes, weights > 0).
void validate(const GroupSpec& group, const MeasureSpec& measure);
bool has_accumulation(const MeasureSpec& measure);

std::string describe(const DiscreteSet& set);
std::string describe(const PointConfig& config);
std::string describe(const ChainSet& set);
std::string describe(const MeasureSpec& measure);

}  // namespace density_lab
