#pragma once

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "density_lab/additive.hpp"
#include "density_lab/density.hpp"
#include "density_lab/group.hpp"
#include "density_lab/interval_union.hpp"
#include "density_lab/sets.hpp"
#include "density_lab/structure.hpp"

namespace density_lab {

using Json = nlohmann::ordered_json;

using InstanceObject = std::variant<DiscreteSet, IntervalUnion, PeriodicPattern, ChainSet, PointConfig, MeasureSpec>;

struct InstanceParams {
  std::optional<Rational> tol;
  std::optional<Rational> r0;
  std::optional<std::int64_t> kmax;
  std::optional<Rational> rmax;
  std::optional<Rational> eps;
  std::optional<Rational> gamma;
  std::optional<std::int64_t> cap;
  std::optional<std::int64_t> n_max;
  std::optional<std::int64_t> range;
  friend bool operator==(const InstanceParams&, const InstanceParams&) = default;
};

// One group, named objects and task parameters.
//
//   {"group": {"family": "integers", "dimension": 1},
//    "objects": {"S": {"type": "periodic", "period": [3], "residues": [[0]]}},
//    "params": {"tol": "1/1000"}}
struct Instance {
  GroupSpec group;
  std::map<std::string, InstanceObject> objects;
  InstanceParams params;
  friend bool operator==(const Instance&, const Instance&) = default;
};

// Throws ParseError with line and column for malformed JSON and with the
// offending path for unknown or ill-typed fields.
Instance parse_instance(std::string_view text);
// Canonical form; parse_instance(print_instance(x)) == x.
std::string print_instance(const Instance& instance);

Json group_to_json(const GroupSpec& group);
Json object_to_json(const InstanceObject& object);

// Exact value with a labeled 6-significant-digit approximation.
Json to_json(const Rational& q);
Json to_json(const ExtRational& q);
Json to_json(const Element& g);
Json to_json(const IntervalUnion& u);
Json to_json(const PeriodicPattern& p);
Json to_json(const EstimationSettings& s);
Json to_json(const DensityReport& r);
Json to_json(const GapReport& g);
Json to_json(const SyndeticCertificate& c);
Json to_json(const MinimalCover& c);
Json to_json(const CoverResult& c);
Json to_json(const PartitionResult& p);
Json to_json(const AutoHResult& a);
Json to_json(const PipelineResult& p);
Json to_json(const RudinWindow& w);
Json to_json(const TranslationResult& t);
Json to_json(const SubadditivityVerdict& v);

std::string approx6(double x);

}  // namespace density_lab
