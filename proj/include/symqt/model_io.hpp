#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "symqt/group.hpp"

namespace symqt {

constexpr int kSchemaVersion = 1;

// Which irreducible copy of the regular representation serves as state space.
struct StateSpaceSelector {
  int irrep_dim = 0;
  int copy = 0;
};

struct ModelDocument {
  int schema_version = kSchemaVersion;
  GroupPtr group;
  std::shared_ptr<const GroupAction> action;
  std::vector<ParametricFunction> parameters;
  // Optional numeric value per label, keyed by parameter name.
  std::map<std::string, std::map<std::string, double>> encodings;
  std::optional<StateSpaceSelector> state_space;
  std::optional<std::uint64_t> seed;

  const ParametricFunction& parameter(const std::string& name) const;
  // Numeric value of each label of theta: model encoding, else numeric labels, else value index.
  std::vector<double> encoding(const ParametricFunction& theta) const;
};

ModelDocument model_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json model_to_json(const ModelDocument& doc);
ModelDocument load_model_file(const std::string& path);
ModelDocument parse_model(const std::string& text);
std::string dump_model(const ModelDocument& doc);

// Numeric labels if all parse, otherwise 0, 1, 2, ... in value order.
std::vector<double> identity_encoding(const ParametricFunction& theta);

}  // namespace symqt
