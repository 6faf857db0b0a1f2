#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "density_lab/additive.hpp"
#include "density_lab/density.hpp"
#include "density_lab/group.hpp"
#include "density_lab/interval_union.hpp"
#include "density_lab/sets.hpp"

namespace density_lab {

using CoverInput = std::variant<DiscreteSet, ChainSet, PeriodicPattern>;

// A candidate b' left out of B, with b ∈ B and b' - b ∈ (A - A) \ {0}.
struct Blocking {
  Element candidate;
  Element blocker;
  Element difference;
};

// Every b' in `piece` satisfies b' - blocker ∈ A - A.
struct LineBlocking {
  Interval piece;
  Rational blocker;
};

struct CoverResult {
  std::vector<Element> B;
  std::int64_t size_bound = 0;  // ⌊1 / density⌋
  Rational density;             // density of A used for the bound
  bool verified_cover = false;    // A - A + B = G
  bool verified_packing = false;  // (A - A) ∩ (B - B) = {0}
  std::vector<Blocking> maximality;
  std::vector<LineBlocking> line_maximality;
  std::string domain;  // canonical search domain
};

// Greedy maximal B with (A - A) ∩ (B - B) = {0} over the canonical search
// domain: the quotient torus for discrete A, [0, p) for a pattern of
// period p (lowest uncovered gap midpoint first).
CoverResult greedy_translates(const GroupSpec& group, const CoverInput& A);
// Re-derives cover, packing, maximality and the size bound from scratch.
// Throws VerificationError.
void verify_cover(const GroupSpec& group, const CoverInput& A, const CoverResult& result);

using PointSet = std::variant<PointConfig, DiscreteSet>;
using CompactSet = std::variant<IntervalUnion, ExplicitFinite>;

// Least nonzero common element of H - H and S - S (positive one first on R).
std::optional<Element> find_packing_violation(const GroupSpec& group, const PointSet& S, const CompactSet& H);

struct PackingVerdict {
  Rational rho;   // counting density of S
  Rational mu_H;
  Rational slack;  // 1/rho - mu(H)
};

// Throws PreconditionError when the packing condition fails or the density
// is not an exact positive number; VerificationError if μ(H) > 1/ρ.
PackingVerdict packing_bound_check(const GroupSpec& group, const PointSet& S, const CompactSet& H);

struct FattenResult {
  PeriodicPattern A;
  Rational rho;
  Rational mu_H;
  Rational bound;     // rho · mu(H)
  Rational measured;  // exact density of A
};

FattenResult fatten(const PointConfig& S, const IntervalUnion& H);

using ClassSet = std::variant<PointConfig, DiscreteSet>;

struct PartitionResult {
  std::vector<ClassSet> classes;
  CompactSet H;
  std::int64_t n = 0;
  std::int64_t k_bound = 0;        // max over s of #(S ∩ (s + H - H))
  std::int64_t cycle_periods = 1;  // periods materialized on the coloring cycle
  std::vector<DensityReport> densities;
};

// First-fit coloring of the conflict graph s ~ t ⇔ t - s ∈ (H - H) \ {0}
// in canonical point order. Periodic inputs are colored on a cycle of
// enough periods that no point conflicts with its own translates.
PartitionResult partition_by_coloring(const GroupSpec& group, const PointSet& S, const CompactSet& H);
// Disjointness, union, per-class packing and n ≤ k_bound. Throws
// VerificationError.
void verify_partition(const GroupSpec& group, const PointSet& S, const PartitionResult& result);

struct AutoHResult {
  IntervalUnion H;  // [0, L]
  Rational L;
  Rational c;    // C = [-c, c]
  Rational eta;
  Rational rho;
  Rational eps;
  std::int64_t k = 0;       // max over s of #(S ∩ (s + H - H))
  Rational count_bound;     // (1 + eps) · rho · mu(H - H)
  bool verified = false;
  RudinWindow rudin;
  std::vector<Rational> extra_doublings;  // L values tried after the window lemma
};

inline const Rational kDefaultEps{1, 2};

AutoHResult auto_H(const PointConfig& S, const Rational& eps = kDefaultEps);

struct SubadditivityVerdict {
  std::vector<DensityReport> parts;
  DensityReport total;
  ExtRational sum_of_parts;
  std::optional<Rational> slack;
  bool holds = false;
};

SubadditivityVerdict subadditivity_check(const GroupSpec& group, const std::vector<MeasureSpec>& measures,
                                         const EstimationSettings& settings = {});

struct PipelineResult {
  Rational eps;
  Rational rho;
  IntervalUnion H;
  std::optional<AutoHResult> auto_h;
  PartitionResult partition;
  std::size_t selected = 0;
  Rational rho_j;
  std::optional<FattenResult> fattened;
  CoverResult cover;
  IntervalUnion T;  // B + (H - H)
  Rational mu_T;
  SyndeticCertificate covering;  // (S_j - S_j) + T over one period
  Rational remark_bound;         // (1 + eps) · mu(H - H) / mu(H)
  bool remark_holds = false;
  Rational translate_bound;      // #B · mu(H - H)
  bool translate_bound_holds = false;
  Rational corrected_bound;      // (1 + eps) · mu(H - H)^2 / mu(H)
  bool corrected_holds = false;
};

PipelineResult syndetic_pipeline(const PointConfig& S, const Rational& eps = kDefaultEps,
                                 const std::optional<IntervalUnion>& H = std::nullopt);

}  // namespace density_lab
