#include "unruh/config_io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>

#include "unruh/errors.hpp"

namespace unruh {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_plain(const std::string& text, const std::string& whole) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw InvalidConfig("cannot parse number '" + whole + "'");
  }
  if (used != t.size()) throw InvalidConfig("cannot parse number '" + whole + "'");
  return v;
}

void check_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!obj.is_object()) throw InvalidConfig(where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw InvalidConfig("unknown key '" + it.key() + "' in " + where);
  }
}

double real_value(const nlohmann::json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_real(v.get<std::string>());
  throw InvalidConfig(key + " must be a number");
}

int int_value(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer()) throw InvalidConfig(key + " must be an integer");
  return v.get<int>();
}

std::vector<double> axis_value(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return parse_grid(v.get<std::string>());
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& x : v) out.push_back(real_value(x, key));
    return out;
  }
  throw InvalidConfig(key + " must be a 'min:max:count' string or an array");
}

}  // namespace

double parse_real(const std::string& text) {
  std::string t = trim(text);
  if (t.empty()) throw InvalidConfig("empty number");
  double denominator = 1.0;
  const std::size_t slash = t.find('/');
  if (slash != std::string::npos) {
    denominator = parse_plain(t.substr(slash + 1), text);
    t = trim(t.substr(0, slash));
    if (denominator == 0.0) throw InvalidConfig("division by zero in '" + text + "'");
  }
  double value = 0.0;
  const std::size_t pi = t.find("pi");
  if (pi == std::string::npos) {
    value = parse_plain(t, text);
  } else {
    if (pi + 2 != t.size()) throw InvalidConfig("cannot parse number '" + text + "'");
    std::string coeff = trim(t.substr(0, pi));
    if (!coeff.empty() && coeff.back() == '*') coeff = trim(coeff.substr(0, coeff.size() - 1));
    double c = 1.0;
    if (coeff == "-") {
      c = -1.0;
    } else if (!coeff.empty()) {
      c = parse_plain(coeff, text);
    }
    value = c * kPi;
  }
  return value / denominator;
}

std::vector<double> parse_grid(const std::string& text) {
  const std::size_t c1 = text.find(':');
  const std::size_t c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos) {
    throw InvalidConfig("grid must look like min:max:count, got '" + text + "'");
  }
  const double lo = parse_real(text.substr(0, c1));
  const double hi = parse_real(text.substr(c1 + 1, c2 - c1 - 1));
  const double count = parse_plain(text.substr(c2 + 1), text);
  if (count < 1 || count != std::floor(count)) throw InvalidConfig("grid count must be a positive integer");
  if (!(lo > 0.0) || !(hi >= lo)) throw InvalidConfig("grid needs 0 < min <= max");
  if (count > 1 && hi == lo) throw InvalidConfig("grid with several points needs min < max");
  return log_space(lo, hi, static_cast<int>(count));
}

void apply_json(RunConfig& config, const nlohmann::json& doc) {
  check_keys(doc, {"cell", "grid", "n_list", "output", "workers", "length_m"}, "config");
  if (doc.contains("cell")) {
    const auto& c = doc["cell"];
    check_keys(c, {"a0", "omega0", "lambda0", "n_modes", "integrator"}, "cell");
    if (c.contains("a0")) config.cell.a0 = real_value(c["a0"], "cell.a0");
    if (c.contains("omega0")) config.cell.omega0 = real_value(c["omega0"], "cell.omega0");
    if (c.contains("lambda0")) config.cell.lambda0 = real_value(c["lambda0"], "cell.lambda0");
    if (c.contains("n_modes")) config.cell.n_modes = int_value(c["n_modes"], "cell.n_modes");
    if (c.contains("integrator")) {
      const auto& in = c["integrator"];
      check_keys(in, {"initial_steps", "richardson_tol", "max_doublings"}, "cell.integrator");
      IntegratorControls& ic = config.cell.integrator;
      if (in.contains("initial_steps")) ic.initial_steps = int_value(in["initial_steps"], "initial_steps");
      if (in.contains("richardson_tol")) ic.richardson_tol = real_value(in["richardson_tol"], "richardson_tol");
      if (in.contains("max_doublings")) ic.max_doublings = int_value(in["max_doublings"], "max_doublings");
    }
    config.grid.lambda0 = config.cell.lambda0;
    config.grid.n_modes = config.cell.n_modes;
    config.grid.integrator = config.cell.integrator;
  }
  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    check_keys(g, {"a0", "omega0", "check_symplectic"}, "grid");
    if (g.contains("a0")) config.grid.a0_values = axis_value(g["a0"], "grid.a0");
    if (g.contains("omega0")) config.grid.omega0_values = axis_value(g["omega0"], "grid.omega0");
    if (g.contains("check_symplectic")) {
      if (!g["check_symplectic"].is_boolean()) throw InvalidConfig("grid.check_symplectic must be a boolean");
      config.grid.options.check_symplectic = g["check_symplectic"].get<bool>();
    }
  }
  if (doc.contains("n_list")) {
    config.n_list.clear();
    if (!doc["n_list"].is_array()) throw InvalidConfig("n_list must be an array");
    for (const auto& n : doc["n_list"]) config.n_list.push_back(int_value(n, "n_list"));
  }
  if (doc.contains("output")) {
    const auto& o = doc["output"];
    check_keys(o, {"path", "format"}, "output");
    if (o.contains("path")) config.output_path = o["path"].get<std::string>();
    if (o.contains("format")) config.format = o["format"].get<std::string>();
    if (config.format != "csv" && config.format != "json") {
      throw InvalidConfig("output.format must be csv or json");
    }
  }
  if (doc.contains("workers")) config.workers = int_value(doc["workers"], "workers");
  if (doc.contains("length_m")) config.length_m = real_value(doc["length_m"], "length_m");
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig("malformed config file '" + path + "': " + e.what());
  }
  RunConfig config;
  try {
    apply_json(config, doc);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig("bad value in config file '" + path + "': " + e.what());
  }
  return config;
}

}  // namespace unruh
