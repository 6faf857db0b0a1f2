#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "density_lab/rational.hpp"

namespace density_lab {

using IntVec = std::vector<std::int64_t>;

// ℤ^d with counting Haar measure.
struct ZLattice {
  int dimension = 1;
  friend bool operator==(const ZLattice&, const ZLattice&) = default;
};

// ∏ ℤ_{m_i}. An empty moduli list is the trivial group.
struct FiniteAbelian {
  IntVec moduli;
  friend bool operator==(const FiniteAbelian&, const FiniteAbelian&) = default;
};

// ℝ with Lebesgue measure; elements are exact rationals.
struct RealLine {
  friend bool operator==(const RealLine&, const RealLine&) = default;
};

// ⊕ ℤ_{m_i} materialized to depth moduli.size(); H_n is spanned by the
// first n coordinates.
struct SigmaFiniteChain {
  IntVec moduli;
  std::size_t depth() const noexcept { return moduli.size(); }
  friend bool operator==(const SigmaFiniteChain&, const SigmaFiniteChain&) = default;
};

using GroupSpec = std::variant<ZLattice, FiniteAbelian, RealLine, SigmaFiniteChain>;

// Integer tuple for the discrete families, exact rational on the real line.
// Chain elements are stored with trailing zero coordinates trimmed.
using Element = std::variant<IntVec, Rational>;

inline constexpr std::int64_t kDefaultEnumerationCap = 1 << 20;

void validate(const GroupSpec& group);
std::string describe(const GroupSpec& group);
bool is_discrete(const GroupSpec& group);
// Order for finite groups, nullopt otherwise.
std::optional<std::int64_t> order(const GroupSpec& group);
// Order of H_n = ∏_{i<n} m_i.
std::int64_t chain_order(const SigmaFiniteChain& chain, std::size_t n);

Element zero(const GroupSpec& group);
// Checks shape and returns the canonical representative (reduced
// coordinates, trimmed chain support). Throws ShapeError.
Element normalize(const Element& g, const GroupSpec& group);

Element add(const Element& g, const Element& h, const GroupSpec& group);
Element negate(const Element& g, const GroupSpec& group);
Element subtract(const Element& g, const Element& h, const GroupSpec& group);

// All elements of a finite group (or of H_depth for a chain) in
// lexicographic order, first coordinate most significant.
std::vector<Element> enumerate(const GroupSpec& group, std::int64_t cap = kDefaultEnumerationCap);

// Mixed-radix position of a finite-group element in enumerate() order.
std::int64_t lex_index(const IntVec& g, const IntVec& moduli);
IntVec lex_element(std::int64_t index, const IntVec& moduli);

std::string to_string(const Element& g);
std::string to_string(const IntVec& g);

// Box [0,m_1)×…×[0,m_d) of a diagonal period lattice in ℤ^d.
struct BoxDomain {
  IntVec extents;

  std::int64_t size() const;
  bool contains(const IntVec& x) const;
  IntVec reduce(const IntVec& x) const;
  std::vector<IntVec> cells() const;
};

// [0, p) on the real line.
struct IntervalDomain {
  Rational period;

  bool contains(const Rational& x) const { return x.sign() >= 0 && x < period; }
  Rational reduce(const Rational& x) const { return mod(x, period); }
};

using Period = std::variant<IntVec, Rational>;
using FundamentalDomain = std::variant<BoxDomain, IntervalDomain>;

FundamentalDomain fundamental_domain(const Period& period);

// Componentwise floor-mod; periods must be positive and of matching length.
IntVec reduce_mod(const IntVec& x, const IntVec& period);

}  // namespace density_lab
