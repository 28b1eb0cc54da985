#include "symqt/model_io.hpp"

#include <fstream>
#include <sstream>

#include "symqt/error.hpp"

namespace symqt {

using json = nlohmann::ordered_json;

namespace {

const json& field(const json& j, const char* name) {
  if (!j.contains(name)) throw ValidationError(std::string("missing field '") + name + "'");
  return j.at(name);
}

Table int_table(const json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError("field '" + what + "' must be an array of rows");
  Table t;
  for (size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array()) throw ValidationError("field '" + what + "' row " + std::to_string(r) + " is not an array");
    std::vector<int> row;
    for (size_t c = 0; c < j[r].size(); ++c) {
      if (!j[r][c].is_number_integer())
        throw ValidationError("field '" + what + "' cell [" + std::to_string(r) + "][" + std::to_string(c) +
                              "] is not an integer");
      row.push_back(j[r][c].get<int>());
    }
    t.push_back(std::move(row));
  }
  return t;
}

std::vector<std::string> string_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError("field '" + what + "' must be an array of strings");
  std::vector<std::string> out;
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string())
      throw ValidationError("field '" + what + "' entry " + std::to_string(i) + " is not a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

}  // namespace

const ParametricFunction& ModelDocument::parameter(const std::string& name) const {
  for (const auto& p : parameters)
    if (p.name() == name) return p;
  throw ValidationError("unknown parameter '" + name + "'");
}

std::vector<double> identity_encoding(const ParametricFunction& theta) {
  std::vector<double> out;
  for (const auto& v : theta.values()) {
    std::istringstream is(v);
    double x;
    if (!(is >> x) || !is.eof()) {
      out.clear();
      for (int k = 0; k < theta.value_count(); ++k) out.push_back(k);
      return out;
    }
    out.push_back(x);
  }
  return out;
}

std::vector<double> ModelDocument::encoding(const ParametricFunction& theta) const {
  auto it = encodings.find(theta.name());
  if (it == encodings.end()) return identity_encoding(theta);
  std::vector<double> out;
  for (const auto& v : theta.values()) {
    auto e = it->second.find(v);
    if (e == it->second.end()) throw ValidationError("encoding of " + theta.name() + " lacks value '" + v + "'");
    out.push_back(e->second);
  }
  return out;
}

ModelDocument model_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("model document must be a JSON object");
  ModelDocument doc;
  const json& sv = field(j, "schema_version");
  if (!sv.is_number_integer() || sv.get<int>() != kSchemaVersion)
    throw ValidationError("field 'schema_version' must be " + std::to_string(kSchemaVersion));
  auto elements = string_list(field(j, "elements"), "elements");
  Table cayley = int_table(field(j, "cayley"), "cayley");
  if (cayley.size() != elements.size())
    throw ValidationError("field 'cayley' needs " + std::to_string(elements.size()) + " rows");
  try {
    doc.group = FiniteGroup::from_cayley(std::move(cayley), elements);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("field 'cayley': ") + e.what());
  }
  auto points = string_list(field(j, "points"), "points");
  Table action = int_table(field(j, "action"), "action");
  try {
    doc.action = std::make_shared<GroupAction>(doc.group, std::move(action), points);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("field 'action': ") + e.what());
  }
  const json& params = field(j, "parameters");
  if (!params.is_object()) throw ValidationError("field 'parameters' must be an object");
  for (auto it = params.begin(); it != params.end(); ++it) {
    auto labels = string_list(it.value(), "parameters." + it.key());
    if (labels.size() != points.size())
      throw ValidationError("field 'parameters." + it.key() + "' needs one label per point");
    doc.parameters.emplace_back(it.key(), std::move(labels));
  }
  if (j.contains("encodings")) {
    const json& enc = j.at("encodings");
    if (!enc.is_object()) throw ValidationError("field 'encodings' must be an object");
    for (auto it = enc.begin(); it != enc.end(); ++it) {
      doc.parameter(it.key());
      if (!it.value().is_object()) throw ValidationError("field 'encodings." + it.key() + "' must be an object");
      for (auto v = it.value().begin(); v != it.value().end(); ++v) {
        if (!v.value().is_number())
          throw ValidationError("field 'encodings." + it.key() + "." + v.key() + "' must be a number");
        doc.encodings[it.key()][v.key()] = v.value().get<double>();
      }
    }
  }
  if (j.contains("state_space")) {
    const json& s = j.at("state_space");
    if (!s.is_object() || !s.contains("irrep_dim") || !s.at("irrep_dim").is_number_integer())
      throw ValidationError("field 'state_space' must be an object with integer 'irrep_dim'");
    StateSpaceSelector sel;
    sel.irrep_dim = s.at("irrep_dim").get<int>();
    if (s.contains("copy")) {
      if (!s.at("copy").is_number_integer()) throw ValidationError("field 'state_space.copy' must be an integer");
      sel.copy = s.at("copy").get<int>();
    }
    doc.state_space = sel;
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ValidationError("field 'seed' must be a non-negative integer");
    doc.seed = j.at("seed").get<std::uint64_t>();
  }
  return doc;
}

json model_to_json(const ModelDocument& doc) {
  json j;
  j["schema_version"] = doc.schema_version;
  j["elements"] = doc.group->names();
  j["cayley"] = doc.group->cayley();
  j["points"] = doc.action->point_names();
  j["action"] = doc.action->table();
  json params = json::object();
  for (const auto& p : doc.parameters) params[p.name()] = p.labels();
  j["parameters"] = params;
  if (!doc.encodings.empty()) {
    json enc = json::object();
    for (const auto& p : doc.parameters) {
      auto it = doc.encodings.find(p.name());
      if (it == doc.encodings.end()) continue;
      json m = json::object();
      for (const auto& v : p.values()) {
        auto e = it->second.find(v);
        if (e != it->second.end()) m[v] = e->second;
      }
      enc[p.name()] = m;
    }
    j["encodings"] = enc;
  }
  if (doc.state_space) j["state_space"] = {{"irrep_dim", doc.state_space->irrep_dim}, {"copy", doc.state_space->copy}};
  if (doc.seed) j["seed"] = *doc.seed;
  return j;
}

ModelDocument parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("model is not valid JSON: ") + e.what());
  }
  return model_from_json(j);
}

ModelDocument load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string dump_model(const ModelDocument& doc) { return model_to_json(doc).dump(2) + "\n"; }

}  // namespace symqt
