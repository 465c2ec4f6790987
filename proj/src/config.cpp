#include "d1q3/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "d1q3/equiv_pde.hpp"
#include "manifest_data.hpp"

namespace d1q3 {

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "name", "lambda", "U", "alpha", "s", "sigma", "s_prime", "sigma_prime", "cubic",
      "N", "L", "T_final", "profile", "init_order", "pde_order", "modes", "rho0",
      "stationary", "tol", "max_steps", "title"};
  return keys;
}

json parse_object(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw std::invalid_argument(std::string("malformed JSON: ") + ex.what());
  }
  if (!j.is_object()) throw std::invalid_argument("configuration must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known_keys().count(key)) throw std::invalid_argument("unknown configuration key '" + key + "'");
  return j;
}

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("configuration key '") + key + "' has the wrong type");
  }
}

template <class T>
std::vector<T> scalar_or_list(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_array()) return get_as<std::vector<T>>(j, key);
  return {get_as<T>(j, key)};
}

ProfileSpec parse_rho0(const json& v) {
  if (!v.is_object() || !v.contains("kind"))
    throw std::invalid_argument("rho0 must be {\"kind\": \"sine\"|\"constant\", \"value\": x}");
  ProfileSpec p;
  p.kind = parse_initial_kind(v.at("kind").get<std::string>());
  p.value = v.value("value", 1.0);
  return p;
}

// Relaxation keys shared by both config kinds.
template <class C>
void apply_common(const json& j, C& c) {
  if (j.contains("lambda")) c.lambda = get_as<double>(j, "lambda");
  if (j.contains("U")) c.U = get_as<double>(j, "U");
  if (j.contains("alpha")) c.alpha = get_as<double>(j, "alpha");
  if (j.contains("s") && j.contains("sigma")) throw std::invalid_argument("give s or sigma, not both");
  if (j.contains("s")) c.s = get_as<double>(j, "s");
  if (j.contains("sigma")) c.s = relaxation_from_henon(get_as<double>(j, "sigma"));
  if (j.contains("s_prime") && j.contains("sigma_prime"))
    throw std::invalid_argument("give s_prime or sigma_prime, not both");
  if (j.contains("s_prime")) c.s_prime = get_as<double>(j, "s_prime");
  if (j.contains("sigma_prime")) c.s_prime = relaxation_from_henon(get_as<double>(j, "sigma_prime"));
  if (j.contains("cubic")) c.cubic = get_as<bool>(j, "cubic");
  if (j.contains("L")) c.L = get_as<double>(j, "L");
  if (j.contains("T_final")) c.T_final = get_as<double>(j, "T_final");
  if (j.contains("profile")) c.profile = parse_profile_kind(get_as<std::string>(j, "profile"));
  if (j.contains("modes")) c.modes = get_as<int>(j, "modes");
  if (j.contains("rho0")) c.rho0 = parse_rho0(j.at("rho0"));
}

}  // namespace

SchemeParams RunConfig::params() const {
  double sp = s_prime;
  if (cubic) sp = relaxation_from_henon(cubic_sigma_prime(U, alpha, henon(s)));
  return make_params(lambda, U, alpha, s, sp, N, L, T_final);
}

RunConfig parse_run_config(const std::string& text, RunConfig c) {
  const json j = parse_object(text);
  apply_common(j, c);
  if (j.contains("N")) c.N = get_as<int>(j, "N");
  if (j.contains("init_order")) c.init_order = get_as<int>(j, "init_order");
  if (j.contains("pde_order")) c.pde_order = get_as<int>(j, "pde_order");
  if (j.contains("tol")) c.tol = get_as<double>(j, "tol");
  if (j.contains("max_steps")) c.max_steps = get_as<long>(j, "max_steps");
  return c;
}

StudyConfig parse_study_config(const std::string& text, StudyConfig c) {
  const json j = parse_object(text);
  apply_common(j, c);
  if (j.contains("name")) c.name = get_as<std::string>(j, "name");
  if (j.contains("N")) c.N_list = scalar_or_list<int>(j, "N");
  if (j.contains("pde_order")) c.pde_orders = scalar_or_list<int>(j, "pde_order");
  if (j.contains("stationary")) c.stationary = get_as<bool>(j, "stationary");
  if (j.contains("tol")) c.stationary_tol = get_as<double>(j, "tol");
  if (j.contains("max_steps")) c.stationary_max_steps = get_as<long>(j, "max_steps");
  if (j.contains("init_order")) {
    c.init_orders = scalar_or_list<int>(j, "init_order");
    if (c.init_orders.size() == 1 && c.pde_orders.size() > 1)
      c.init_orders.assign(c.pde_orders.size(), c.init_orders.front());
  } else if (c.init_orders.size() != c.pde_orders.size()) {
    c.init_orders.assign(c.pde_orders.size(), c.init_orders.empty() ? 0 : c.init_orders.front());
  }
  c.validate();
  return c;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string& bundled_manifest() {
  static const std::string text(kBundledManifest);
  return text;
}

std::vector<int> manifest_tables(const std::string& manifest_text) {
  const json j = json::parse(manifest_text);
  std::set<int> ids;
  for (const auto& [key, value] : j.at("tables").items()) ids.insert(std::stoi(key));
  return {ids.begin(), ids.end()};
}

StudyConfig preset_study(int id, const std::string& manifest_text) {
  const json j = json::parse(manifest_text);
  const auto& tables = j.at("tables");
  const std::string key = std::to_string(id);
  if (!tables.contains(key)) throw std::out_of_range("no preset for table " + key);
  StudyConfig base;
  if (j.contains("defaults")) base = parse_study_config(j.at("defaults").dump(), base);
  StudyConfig c = parse_study_config(tables.at(key).dump(), base);
  if (c.name.empty()) c.name = "table" + key;
  return c;
}

}  // namespace d1q3
