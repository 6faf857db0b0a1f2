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
#include "density_lab/sets.hpp"

namespace density_lab {

// x + [-r, r]^d on Z^d, measured by (2r+1)^d.
struct CenteredCube {
  friend bool operator==(const CenteredCube&, const CenteredCube&) = default;
};
// [x - r, x + r] on R, measured by 2r.
struct IntervalShape {
  friend bool operator==(const IntervalShape&, const IntervalShape&) = default;
};
// rK + x on R for a fixed K of length 1, measured by r.
struct CustomK {
  IntervalUnion K;
  friend bool operator==(const CustomK&, const CustomK&) = default;
};
using WindowShape = std::variant<CenteredCube, IntervalShape, CustomK>;

// Throws PreconditionError unless |K| = 1.
CustomK custom_k(IntervalUnion K);
std::string describe(const WindowShape& shape);

enum class Method { ClosedForm, WindowScan, BruteForce, CertifiedLowerBound };
enum class ValueKind { Exact, Estimated, Infinite };

std::string to_string(Method m);
std::string to_string(ValueKind k);

struct ScheduleEntry {
  Rational r;
  ExtRational ratio;
  std::optional<Element> argmax;
  bool attained = true;  // false: ratio is a one-sided limit at argmax
};

struct Witness {
  std::optional<Element> x;
  std::optional<Rational> r;
  std::optional<IntervalUnion> window;  // a window realizing the claim on R
  std::vector<Element> C;
  std::vector<Element> V;
  std::optional<ExtRational> ratio;
  std::vector<std::pair<Rational, ExtRational>> eta_schedule;  // (η, lower bound)
  std::string description;
};

struct EstimationSettings {
  Rational tol{1, 1000};
  Rational r0{8};
  int kmax = 12;
  std::optional<Rational> r_max;
  // Skip closed forms and always scan windows.
  bool scan_only = false;
};

struct DensityReport {
  ValueKind kind = ValueKind::Exact;
  std::optional<Rational> exact;
  std::vector<ScheduleEntry> schedule;
  double extrapolated = 0.0;
  bool converged = false;
  Method method = Method::ClosedForm;
  std::optional<Witness> witness;
  std::vector<std::string> notes;
  EstimationSettings settings;

  // Exact value or infinity; throws PreconditionError for estimates.
  ExtRational value() const;
  // Best available decimal: exact value, extrapolated estimate, or +inf.
  double approx() const;
  bool is_exact() const { return kind == ValueKind::Exact; }
  bool is_infinite() const { return kind == ValueKind::Infinite; }
  // One line such as "1/3 (exact, closed-form)".
  std::string summary() const;
};

// Upper density lim sup A(n)/n of A ∩ ℕ with A(n) = #(A ∩ [1, n]).
DensityReport classical_upper_density(const GroupSpec& group, const DiscreteSet& A, std::int64_t n_max = 1 << 16);

// sup_x ν(x + rK) / |rK| for every r of the schedule.
std::vector<ScheduleEntry> window_density_profile(const GroupSpec& group, const MeasureSpec& nu, const WindowShape& K,
                                                  const std::vector<Rational>& schedule);

// r0·2^k for k = 0..kmax, cut at r_max.
std::vector<Rational> geometric_schedule(const EstimationSettings& settings);

// Closed form where the instance admits one, otherwise the window profile
// over the geometric schedule.
DensityReport auud_window(const GroupSpec& group, const MeasureSpec& nu, const WindowShape& K,
                          const EstimationSettings& settings = {});

enum class FiniteMode { ClosedForm, Oracle };
inline constexpr std::int64_t kDefaultOracleCap = 8;
inline constexpr std::int64_t kHardOracleCap = 12;

DensityReport kahane_density_finite_group(const FiniteAbelian& group, const MeasureSpec& nu,
                                          FiniteMode mode = FiniteMode::ClosedForm,
                                          std::int64_t cap = kDefaultOracleCap);

// Exhaustive inf over nonempty C of sup over nonempty V of ν(V)/|C+V| on a
// finite group, with the subset-sum table reused across measures.
class FiniteGroupOracle {
 public:
  explicit FiniteGroupOracle(const FiniteAbelian& group, std::int64_t cap = kDefaultOracleCap);

  struct Result {
    Rational value;
    std::uint32_t C = 0;  // bitmask over enumerate() order
    std::uint32_t V = 0;
  };
  // weights[i] = ν({enumerate()[i]}), all nonnegative.
  Result evaluate(const std::vector<Rational>& weights) const;
  // Same with integer weights, e.g. the indicator of a subset.
  Result evaluate_counts(const std::vector<std::int64_t>& weights) const;
  std::vector<Element> elements_of(std::uint32_t mask) const;
  std::size_t order() const { return n_; }

 private:
  FiniteAbelian group_;
  std::size_t n_;
  std::vector<Element> elements_;
  std::vector<std::uint8_t> sumsize_;  // |C + V| at C * 2^n + V
};

DensityReport kahane_density(const GroupSpec& group, const MeasureSpec& nu, const EstimationSettings& settings = {});
DensityReport delta_density(const GroupSpec& group, const MeasureSpec& nu, const EstimationSettings& settings = {});
DensityReport hegyvari_density(const SigmaFiniteChain& chain, const ChainSet& A, std::size_t n_max);

// Kahane density of the counting measure of S.
DensityReport counting_density(const GroupSpec& group, const PointConfig& S, const EstimationSettings& settings = {});

struct TranslationResult {
  std::optional<Element> x;  // nullopt: not found
  ExtRational mass_at_x;
  ExtRational scanned_sup;
  Rational target;  // γ·μ(W)
};
using TestWindow = std::variant<IntervalUnion, ExplicitFinite>;

TranslationResult translation_witness(const GroupSpec& group, const MeasureSpec& nu, const TestWindow& W,
                                      const Rational& gamma);

struct RudinWindow {
  Rational L;
  // W = [0, L] (or {0..L}^d) and V = W - W = [-L, L] (or {-L..L}^d).
  IntervalUnion W;
  IntervalUnion V;
  Rational mu_CV;
  Rational mu_V;
  bool verified = false;  // μ(C + V) < (1 + ε) μ(V), re-checked exactly
  std::vector<std::pair<Rational, bool>> trace;  // (L tried, inequality held)
};

using BoundedSet = std::variant<IntervalUnion, ExplicitFinite>;

// Least integer L found by doubling from 1 and bisecting.
RudinWindow rudin_window(const GroupSpec& group, const BoundedSet& C, const Rational& eps);
// μ(C + [-L, L]) on R or #(C + {-L..L}^d) on Z^d.
Rational rudin_sum_measure(const GroupSpec& group, const BoundedSet& C, const Rational& L);

}  // namespace density_lab
