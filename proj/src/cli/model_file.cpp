#include <json.hpp>

#include "eqpl/cli.hpp"
#include "eqpl/semantics.hpp"

namespace eqpl::cli {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error("model file: " + what); }

int qubit_of(const std::string& name, const AliasTable& aliases) {
  if (auto q = aliases.lookup(name)) return *q;
  if (name.size() > 2 && name.compare(0, 2, "qb") == 0 &&
      name.find_first_not_of("0123456789", 2) == std::string::npos)
    return std::stoi(name.substr(2));
  bad("unknown qubit name '" + name + "'");
}

std::string name_of(int q, const AliasTable& aliases) {
  if (auto n = aliases.name_of(q)) return *n;
  return "qb" + std::to_string(q);
}

// Qubits in the order listed.
std::vector<int> qubit_list(const json& j, const AliasTable& aliases) {
  if (!j.is_array()) bad("expected a list of qubit names");
  std::vector<int> out;
  for (const auto& n : j) {
    if (!n.is_string()) bad("qubit names must be strings");
    out.push_back(qubit_of(n.get<std::string>(), aliases));
  }
  if (make_set(out).size() != out.size()) bad("repeated qubit in a list");
  return out;
}

// Mask over sorted(listed) from a bitstring over `listed`.
Mask mask_of(const std::string& bits, const std::vector<int>& listed) {
  if (bits.size() != listed.size() || bits.find_first_not_of("01") != std::string::npos)
    bad("bitstring '" + bits + "' does not match " + std::to_string(listed.size()) + " qubits");
  const QubitSet sorted = make_set(listed);
  QubitSet on;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] == '1') on.push_back(listed[i]);
  return valuation_of(sorted, make_set(on));
}

Complex complex_of(const json& j) {
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_string()) {
    const Ptr u = parse(j.get<std::string>(), Category::Complex);
    const Symbols s = free_symbols(u);
    if (!s.real_vars.empty() || !s.complex_vars.empty() || !s.qubits.empty())
      bad("amplitude '" + j.get<std::string>() + "' is not a constant");
    return Evaluator(nullptr, Assignment{}).complex(*u);
  }
  bad("expected [re, im], a number or a constant term");
}

json pair_of(Complex z) { return json::array({z.real(), z.imag()}); }

json names(const QubitSet& s, const AliasTable& aliases) {
  json out = json::array();
  for (int q : s) out.push_back(name_of(q, aliases));
  return out;
}

}  // namespace

ModelFile load_model(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("expected an object");
  ModelFile m;
  if (j.contains("aliases")) {
    for (const auto& [name, q] : j["aliases"].items()) {
      if (!q.is_number_integer()) bad("alias '" + name + "' must map to a qubit index");
      m.aliases.add(name, q.get<int>());
    }
  }
  auto& w = m.structure;
  if (!j.contains("frame")) bad("missing frame");
  const auto frame = qubit_list(j["frame"], m.aliases);
  w.frame = make_set(frame);

  for (const auto& bits : j.value("admissible", json::array())) {
    if (!bits.is_string()) bad("admissible valuations must be bitstrings");
    w.admissible.push_back(mask_of(bits.get<std::string>(), frame));
  }
  std::sort(w.admissible.begin(), w.admissible.end());
  w.admissible.erase(std::unique(w.admissible.begin(), w.admissible.end()), w.admissible.end());

  const json partition = j.value("partition", json::array());
  const json blocks = j.value("blocks", json::array());
  if (partition.size() != blocks.size()) bad("partition and blocks differ in length");
  std::vector<std::pair<QubitSet, StateVector>> parts;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    const auto listed = qubit_list(partition[i], m.aliases);
    StateVector s{make_set(listed), std::vector<Complex>(std::size_t{1} << listed.size())};
    if (!blocks[i].is_object()) bad("block amplitudes must be an object of bitstrings");
    for (const auto& [bits, value] : blocks[i].items()) s.amps[mask_of(bits, listed)] = complex_of(value);
    parts.emplace_back(s.carrier, std::move(s));
  }
  std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [carrier, s] : parts) {
    w.partition.push_back(carrier);
    w.blocks.push_back(std::move(s));
  }

  for (const auto& o : j.value("nu_overrides", json::array())) {
    if (!o.is_object() || !o.contains("F") || !o.contains("A") || !o.contains("value"))
      bad("each override needs F, A and value");
    w.nu_overrides[{make_set(qubit_list(o["F"], m.aliases)), make_set(qubit_list(o["A"], m.aliases))}] =
        complex_of(o["value"]);
  }

  const json assignment = j.value("assignment", json::object());
  for (const auto& [name, value] : assignment.items()) {
    if (name.size() < 2 || (name[0] != 'x' && name[0] != 'z') ||
        name.find_first_not_of("0123456789", 1) != std::string::npos)
      bad("bad variable name '" + name + "'");
    const int k = std::stoi(name.substr(1));
    if (name[0] == 'x') {
      const Complex v = complex_of(value);
      if (v.imag() != 0) bad("real variable " + name + " has a complex value");
      m.assignment.reals[k] = v.real();
    } else {
      m.assignment.complexes[k] = complex_of(value);
    }
  }
  return m;
}

std::string save_model(const ModelFile& m) {
  const auto& w = m.structure;
  json j;
  j["frame"] = names(w.frame, m.aliases);
  json aliases = json::object();
  for (const auto& [name, q] : m.aliases.entries()) aliases[name] = q;
  j["aliases"] = aliases;
  json admissible = json::array();
  for (Mask v : w.admissible) admissible.push_back(bitstring(v, w.frame.size()));
  j["admissible"] = admissible;
  json partition = json::array(), blocks = json::array();
  for (std::size_t i = 0; i < w.partition.size(); ++i) {
    partition.push_back(names(w.partition[i], m.aliases));
    json amps = json::object();
    const auto& s = w.blocks[i];
    for (Mask v = 0; v < s.amps.size(); ++v)
      if (s.amps[v] != Complex{}) amps[bitstring(v, s.carrier.size())] = pair_of(s.amps[v]);
    blocks.push_back(amps);
  }
  j["partition"] = partition;
  j["blocks"] = blocks;
  json overrides = json::array();
  for (const auto& [key, value] : w.nu_overrides)
    overrides.push_back({{"F", names(key.first, m.aliases)}, {"A", names(key.second, m.aliases)}, {"value", pair_of(value)}});
  j["nu_overrides"] = overrides;
  json assignment = json::object();
  for (const auto& [k, v] : m.assignment.reals) assignment["x" + std::to_string(k)] = v;
  for (const auto& [k, v] : m.assignment.complexes) assignment["z" + std::to_string(k)] = pair_of(v);
  j["assignment"] = assignment;
  return j.dump(2) + "\n";
}

}  // namespace eqpl::cli
