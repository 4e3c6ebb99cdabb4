#include "offrl/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace offrl {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.what() carries the byte offset of the failure.
    throw ValidationError(what + ": " + e.what());
  }
}

double number_at(const json& node, const std::string& path) {
  if (!node.is_number())
    throw ValidationError(path + ": expected a number");
  return node.get<double>();
}

// Flattens a nested JSON array with the given dimensions into `out`,
// reporting the exact index path on any shape or type mismatch.
void read_tensor(const json& node, std::span<const int> dims,
                 const std::string& path, std::vector<double>& out) {
  if (dims.empty()) {
    out.push_back(number_at(node, path));
    return;
  }
  if (!node.is_array() || static_cast<int>(node.size()) != dims[0])
    throw ValidationError(path + ": expected an array of length " +
                          std::to_string(dims[0]));
  for (int i = 0; i < dims[0]; ++i)
    read_tensor(node[i], dims.subspan(1), path + "[" + std::to_string(i) + "]",
                out);
}

json tensor_to_json(std::span<const double> data, std::span<const int> dims) {
  if (dims.size() == 1) {
    json arr = json::array();
    for (int i = 0; i < dims[0]; ++i) arr.push_back(data[i]);
    return arr;
  }
  std::size_t stride = 1;
  for (std::size_t d = 1; d < dims.size(); ++d) stride *= dims[d];
  json arr = json::array();
  for (int i = 0; i < dims[0]; ++i)
    arr.push_back(tensor_to_json(data.subspan(i * stride, stride), dims.subspan(1)));
  return arr;
}

int int_field(const json& doc, const std::string& key) {
  if (!doc.contains(key) || !doc[key].is_number_integer())
    throw ValidationError(key + ": missing or not an integer");
  return doc[key].get<int>();
}

}  // namespace

TabularMdp parse_mdp(const std::string& json_text) {
  const json doc = parse_json(json_text, "mdp file");
  TabularMdp mdp;
  mdp.num_states = int_field(doc, "S");
  mdp.num_actions = int_field(doc, "A");
  mdp.horizon = int_field(doc, "H");
  if (mdp.num_states <= 0 || mdp.num_actions <= 0 || mdp.horizon <= 0)
    throw ValidationError("S, A, H must all be positive");
  const int dims_p[] = {mdp.num_states, mdp.num_actions, mdp.num_states};
  const int dims_r[] = {mdp.num_states, mdp.num_actions};
  const int dims_d[] = {mdp.num_states};
  if (!doc.contains("P")) throw ValidationError("P: missing");
  if (!doc.contains("r")) throw ValidationError("r: missing");
  if (!doc.contains("d1")) throw ValidationError("d1: missing");
  read_tensor(doc["P"], dims_p, "P", mdp.transition);
  read_tensor(doc["r"], dims_r, "r", mdp.reward);
  read_tensor(doc["d1"], dims_d, "d1", mdp.initial);
  mdp.validate();
  return mdp;
}

TabularMdp load_mdp(const std::string& path) {
  return parse_mdp(read_file(path));
}

std::string mdp_to_json(const TabularMdp& mdp) {
  const int dims_p[] = {mdp.num_states, mdp.num_actions, mdp.num_states};
  const int dims_r[] = {mdp.num_states, mdp.num_actions};
  const int dims_d[] = {mdp.num_states};
  json doc;
  doc["S"] = mdp.num_states;
  doc["A"] = mdp.num_actions;
  doc["H"] = mdp.horizon;
  doc["P"] = tensor_to_json(mdp.transition, dims_p);
  doc["r"] = tensor_to_json(mdp.reward, dims_r);
  doc["d1"] = tensor_to_json(mdp.initial, dims_d);
  return doc.dump();
}

void save_mdp(const TabularMdp& mdp, const std::string& path) {
  write_file(path, mdp_to_json(mdp));
}

Policy parse_policy(const std::string& json_text) {
  const json doc = parse_json(json_text, "policy file");
  if (!doc.contains("probs") || !doc["probs"].is_array() || doc["probs"].empty())
    throw ValidationError("probs: missing or empty");
  const json& probs = doc["probs"];
  if (!probs[0].is_array() || probs[0].empty() || !probs[0][0].is_array())
    throw ValidationError("probs: expected an HxSxA nested array");
  Policy pi;
  pi.horizon = static_cast<int>(probs.size());
  pi.num_states = static_cast<int>(probs[0].size());
  pi.num_actions = static_cast<int>(probs[0][0].size());
  const int dims[] = {pi.horizon, pi.num_states, pi.num_actions};
  read_tensor(probs, dims, "probs", pi.probs);
  pi.validate();
  return pi;
}

Policy load_policy(const std::string& path) {
  return parse_policy(read_file(path));
}

std::string policy_to_json(const Policy& pi) {
  const int dims[] = {pi.horizon, pi.num_states, pi.num_actions};
  json doc;
  doc["probs"] = tensor_to_json(pi.probs, dims);
  return doc.dump();
}

void save_policy(const Policy& pi, const std::string& path) {
  write_file(path, policy_to_json(pi));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << contents;
}

}  // namespace offrl
