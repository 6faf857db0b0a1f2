#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "density_lab/group.hpp"
#include "density_lab/interval_union.hpp"
#include "density_lab/rational.hpp"

namespace testing {

using density_lab::IntVec;
using density_lab::Rational;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng());
}

// Random nonempty subset of {0..m-1}.
inline std::vector<std::int64_t> random_residues(std::int64_t m, double p = 0.4) {
  std::vector<std::int64_t> out;
  std::bernoulli_distribution coin(p);
  for (std::int64_t i = 0; i < m; ++i) {
    if (coin(rng())) out.push_back(i);
  }
  if (out.empty()) out.push_back(uniform(0, m - 1));
  return out;
}

inline std::vector<IntVec> as_residues(const std::vector<std::int64_t>& v) {
  std::vector<IntVec> out;
  for (auto x : v) out.push_back({x});
  return out;
}

inline std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

// Differences of a residue set modulo m, by plain integer arithmetic.
inline std::set<std::int64_t> diff_mod(const std::vector<std::int64_t>& a, std::int64_t m) {
  std::set<std::int64_t> out;
  for (auto x : a) {
    for (auto y : a) out.insert(mod(x - y, m));
  }
  return out;
}

// Random interval union inside [0, span] with endpoints on a grid of 1/den.
inline density_lab::IntervalUnion random_union(int pieces, std::int64_t span_num, std::int64_t den) {
  std::vector<density_lab::Interval> parts;
  for (int i = 0; i < pieces; ++i) {
    auto a = uniform(0, span_num), b = uniform(0, span_num);
    if (a > b) std::swap(a, b);
    parts.push_back({Rational(a, den), Rational(b, den)});
  }
  return density_lab::IntervalUnion(std::move(parts));
}

}  // namespace testing
