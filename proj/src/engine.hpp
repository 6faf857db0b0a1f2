#pragma once

// Exact evaluation engines for measures on ℝ and on ℤ^d / finite groups.
// Internal to the library.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "density_lab/group.hpp"
#include "density_lab/interval_union.hpp"
#include "density_lab/rational.hpp"
#include "density_lab/sets.hpp"

namespace density_lab::detail {

inline constexpr std::size_t kMaxEventPoints = 4'000'000;

struct ShiftSup {
  ExtRational sup;
  Element argmax;
  // False when the supremum is a one-sided limit at `argmax` that no shift
  // attains (signed atoms next to Haar parts).
  bool attained = true;
};

class LineMeasure {
 public:
  explicit LineMeasure(const MeasureSpec& measure);

  // ν([a, b]).
  ExtRational mass(const Rational& a, const Rational& b) const;
  // ν(x + window).
  ExtRational mass(const IntervalUnion& window, const Rational& x) const;
  // Exact sup over x of ν(x + window), least maximizing event point.
  ShiftSup sup_shift(const IntervalUnion& window) const;

  bool has_periodic_part() const { return !lattices_.empty() || !patterns_.empty(); }
  bool has_finite_part() const { return !atoms_.empty() || !intervals_.empty(); }
  bool has_positive_atoms() const;
  bool accumulates() const { return !harmonics_.empty() || !accumulation_.empty() || unlocated_accumulation_; }
  // Common period of the periodic components.
  std::optional<Rational> period() const;
  // Mass per common period of the periodic components.
  Rational periodic_density() const;
  // Sorted positions where the measure has a point mass or a Haar edge,
  // restricted to the finite part.
  std::vector<Rational> finite_features() const;
  // Some point of positive mass, if any.
  std::optional<Rational> some_atom() const;
  // A located accumulation point, if any.
  std::optional<Rational> accumulation_point() const;

 private:
  struct Atom {
    Rational x;
    Rational w;
  };
  struct Lattice {
    Rational step;
    std::vector<Rational> offsets;
  };

  void add(const MeasureSpec& m);
  void add_points(const PointConfig& config);
  void finish();
  ExtRational piece_mass(const Rational& a, const Rational& b) const;

  std::vector<Atom> atoms_;
  std::vector<Rational> prefix_;  // prefix_[i] = Σ_{j<i} atoms_[j].w
  std::vector<Lattice> lattices_;
  std::vector<IntervalUnion> intervals_;
  std::vector<PeriodicPattern> patterns_;
  std::vector<HarmonicSequence> harmonics_;
  std::vector<Rational> accumulation_;
  bool unlocated_accumulation_ = false;
  bool negative_atoms_ = false;
};

class LatticeMeasure {
 public:
  LatticeMeasure(const ZLattice& group, const MeasureSpec& measure);

  int dimension() const { return d_; }
  // ν({y}).
  Rational point_mass(const IntVec& y) const;
  // ν(x + [-r, r]^d).
  Rational cube_mass(const IntVec& x, std::int64_t r) const;
  // ν(x + W) for a finite W.
  Rational set_mass(const IntVec& x, const std::vector<IntVec>& window) const;
  ShiftSup sup_cube(std::int64_t r) const;
  ShiftSup sup_set(const std::vector<IntVec>& window) const;

  bool has_periodic_part() const { return !periodic_.empty(); }
  bool has_finite_part() const { return !atoms_.empty(); }
  // Per-coordinate lcm of the periodic components.
  IntVec period() const;
  Rational periodic_density() const;

 private:
  struct Periodic {
    IntVec period;
    std::vector<IntVec> residues;
  };
  void add(const MeasureSpec& m);

  int d_;
  std::vector<Periodic> periodic_;
  std::vector<std::pair<IntVec, Rational>> atoms_;  // sorted, merged
};

// Finite quotient ∏ ℤ_{m_i} on which a finite or periodic discrete problem
// is exact. Cells are numbered in lexicographic order.
struct Torus {
  IntVec moduli;
  // Trim trailing zeros of lifted cells (chain groups).
  bool trim = false;

  std::int64_t size() const;
  std::int64_t index(const IntVec& x) const;
  IntVec cell(std::int64_t i) const;
  Element lift(std::int64_t i) const;
  std::int64_t add(std::int64_t a, std::int64_t b) const;
  std::int64_t sub(std::int64_t a, std::int64_t b) const;
};

struct TorusSet {
  Torus torus;
  std::vector<char> member;
  std::string domain;  // human description of the quotient
};

// Reduces a discrete set to its quotient: a finite group itself, the
// period box of a periodic set in ℤ^d, or H_c for a chain cylinder on c
// coordinates. Throws PreconditionError for sets with no finite quotient.
TorusSet torus_of(const GroupSpec& group, const std::variant<DiscreteSet, ChainSet>& set);
// Same set viewed on a torus whose moduli are multiples of its own.
std::vector<char> expand_to(const TorusSet& s, const Torus& big);

// Weights ν({g}) of a measure on a finite group, indexed by lex_index.
std::vector<Rational> finite_weights(const FiniteAbelian& group, const MeasureSpec& measure);

}  // namespace density_lab::detail
