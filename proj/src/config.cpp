#include "nsf/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "nsf/errors.hpp"
#include "nsf/io.hpp"

namespace nsf {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (trim(v.substr(used)).empty()) return d;
  } catch (const std::exception&) {
  }
  throw NsfError(ErrorKind::ConfigError, "key '" + key + "': '" + v + "' is not a number");
}

int to_int(const std::string& key, const std::string& v) {
  double d = to_double(key, v);
  if (d != static_cast<int>(d)) throw NsfError(ErrorKind::ConfigError, "key '" + key + "' needs an integer");
  return static_cast<int>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  std::string s = trim(v);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw NsfError(ErrorKind::ConfigError, "key '" + key + "' needs a boolean");
}

std::vector<std::string> split_list(const std::string& v) {
  std::string s = trim(v);
  if (!s.empty() && s.front() == '[') s = s.substr(1);
  if (!s.empty() && s.back() == ']') s.pop_back();
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void flatten(const nlohmann::json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) s += ",";
      s += j[i].is_string() ? j[i].get<std::string>() : j[i].dump();
    }
    out.emplace_back(prefix, s);
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

}  // namespace

int RunConfig::max_order() const { return orders.empty() ? 0 : *std::max_element(orders.begin(), orders.end()); }

void RunConfig::validate() const {
  scaling.validate();
  if (epsilons.empty()) throw NsfError(ErrorKind::ConfigError, "epsilons must not be empty");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0 && epsilons[i] < 1.0))
      throw NsfError(ErrorKind::ConfigError, "epsilons must lie in (0, 1)");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
      throw NsfError(ErrorKind::ConfigError, "epsilons must be strictly decreasing");
  }
  if (orders.empty()) throw NsfError(ErrorKind::ConfigError, "no expansion order given");
  for (int n : orders)
    if (n < 0 || n > 3) throw NsfError(ErrorKind::ConfigError, "expansion orders must lie in 0..3");
  if (!(T > 0.0) || !(macro_dt > 0.0) || outputs < 1)
    throw NsfError(ErrorKind::ConfigError, "time.T, time.macro_dt and time.outputs must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw NsfError(ErrorKind::ConfigError, "tol.cfl must lie in (0, 1]");
  if (!(pulse.radius > 0.0)) throw NsfError(ErrorKind::ConfigError, "init.radius must be positive");
}

void set_config_value(RunConfig& c, const std::string& key_in, const std::string& raw) {
  const std::string key = trim(key_in), v = trim(raw);
  auto num = [&] { return to_double(key, v); };
  auto starts = [&](const char* p) { return key.rfind(p, 0) == 0; };

  if (key == "background.name") c.background = v;
  else if (starts("background.")) c.bg_params[key.substr(11)] = num();
  else if (key == "eos.name") c.eos = v;
  else if (starts("eos.")) c.eos_params[key.substr(4)] = num();
  else if (key == "scaling.mu_bar") c.scaling.mu_bar = num();
  else if (key == "scaling.lambda_bar") c.scaling.lambda_bar = num();
  else if (key == "scaling.kappa_bar") c.scaling.kappa_bar = num();
  else if (key == "grid.X1max") c.grid.X1max = num();
  else if (key == "grid.X2len") c.grid.X2len = num();
  else if (key == "grid.n1") c.grid.n1 = to_int(key, v);
  else if (key == "grid.n2") c.grid.n2 = to_int(key, v);
  else if (key == "grid.grading") {
    if (v == "uniform") c.grid.grading = Grading::Uniform;
    else if (v == "tanh") c.grid.grading = Grading::Tanh;
    else throw NsfError(ErrorKind::ConfigError, "grid.grading must be 'uniform' or 'tanh'");
  } else if (key == "grid.strength") c.grid.strength = num();
  else if (key == "grid.sponge_fraction") c.grid.sponge_fraction = num();
  else if (key == "grid.sponge_strength") c.grid.sponge_strength = num();
  else if (key == "layer.Zmax") c.Zmax = num();
  else if (key == "layer.dz") c.dz = num();
  else if (key == "layer.delta") c.delta = num();
  else if (key == "time.T") c.T = num();
  else if (key == "time.macro_dt") c.macro_dt = num();
  else if (key == "time.outputs") c.outputs = to_int(key, v);
  else if (key == "tol.cfl") c.cfl = num();
  else if (key == "tol.tail") c.tail_tol = num();
  else if (key == "tol.bc") c.bc_tol = num();
  else if (key == "scheme.dissipation") c.dissipation = num();
  else if (key == "epsilons") {
    c.epsilons.clear();
    for (const auto& s : split_list(v)) c.epsilons.push_back(to_double(key, s));
  } else if (key == "order") c.orders = {to_int(key, v)};
  else if (key == "orders") {
    c.orders.clear();
    for (const auto& s : split_list(v)) c.orders.push_back(to_int(key, s));
  } else if (key == "init.x1c") c.pulse.x1c = num();
  else if (key == "init.x2c") c.pulse.x2c = num();
  else if (key == "init.radius") c.pulse.radius = num();
  else if (key == "init.amp") c.pulse.amp = num();
  else if (key == "init.theta_ratio") c.pulse.theta_ratio = num();
  else if (key == "output.dir") c.out_dir = v;
  else if (key == "output.fields") c.write_fields = to_bool(key, v);
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_double(key, v));
  else if (key == "threads") c.threads = to_int(key, v);
  else if (key == "verify.flip_tau0") c.flip_tau0 = to_bool(key, v);
  else throw NsfError(ErrorKind::ConfigError, "unknown config key '" + key + "'");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(t);
    } catch (const std::exception& e) {
      throw NsfError(ErrorKind::ConfigError, std::string("invalid JSON config: ") + e.what());
    }
    std::vector<std::pair<std::string, std::string>> kv;
    flatten(j, "", kv);
    for (const auto& [k, v] : kv) set_config_value(cfg, k, v);
    return cfg;
  }
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw NsfError(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
    set_config_value(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(io::read_file(path)); }

std::string canonical_config(const RunConfig& c) {
  std::map<std::string, std::string> kv;
  auto f = io::fmt;
  kv["background.name"] = c.background;
  for (const auto& [k, v] : c.bg_params) kv["background." + k] = f(v);
  kv["eos.name"] = c.eos;
  for (const auto& [k, v] : c.eos_params) kv["eos." + k] = f(v);
  kv["scaling.mu_bar"] = f(c.scaling.mu_bar);
  kv["scaling.lambda_bar"] = f(c.scaling.lambda_bar);
  kv["scaling.kappa_bar"] = f(c.scaling.kappa_bar);
  kv["grid.X1max"] = f(c.grid.X1max);
  kv["grid.X2len"] = f(c.grid.X2len);
  kv["grid.n1"] = std::to_string(c.grid.n1);
  kv["grid.n2"] = std::to_string(c.grid.n2);
  kv["grid.grading"] = c.grid.grading == Grading::Tanh ? "tanh" : "uniform";
  kv["grid.strength"] = f(c.grid.strength);
  kv["grid.sponge_fraction"] = f(c.grid.sponge_fraction);
  kv["grid.sponge_strength"] = f(c.grid.sponge_strength);
  kv["layer.Zmax"] = f(c.Zmax);
  kv["layer.dz"] = f(c.dz);
  kv["layer.delta"] = f(c.delta);
  kv["time.T"] = f(c.T);
  kv["time.macro_dt"] = f(c.macro_dt);
  kv["time.outputs"] = std::to_string(c.outputs);
  kv["tol.cfl"] = f(c.cfl);
  kv["tol.tail"] = f(c.tail_tol);
  kv["tol.bc"] = f(c.bc_tol);
  kv["scheme.dissipation"] = f(c.dissipation);
  std::string e, o;
  for (double x : c.epsilons) e += (e.empty() ? "" : ", ") + f(x);
  for (int n : c.orders) o += (o.empty() ? "" : ", ") + std::to_string(n);
  kv["epsilons"] = e;
  kv["orders"] = o;
  kv["init.x1c"] = f(c.pulse.x1c);
  kv["init.x2c"] = f(c.pulse.x2c);
  kv["init.radius"] = f(c.pulse.radius);
  kv["init.amp"] = f(c.pulse.amp);
  kv["init.theta_ratio"] = f(c.pulse.theta_ratio);
  kv["seed"] = std::to_string(c.seed);
  kv["verify.flip_tau0"] = c.flip_tau0 ? "true" : "false";
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

EquationOfState make_eos(const RunConfig& c) {
  auto p = [&](const char* k, double d) {
    auto it = c.eos_params.find(k);
    return it == c.eos_params.end() ? d : it->second;
  };
  if (c.eos == "ideal_gas") return ideal_gas(p("cv0", 1.0), p("cv1", 0.0));
  if (c.eos == "isentropic") return isentropic_gas(p("gamma", 1.4), p("cv0", 1.0));
  throw NsfError(ErrorKind::ConfigError, "unknown eos '" + c.eos + "'");
}

StateField pulse_field(const Grid& g, const PulseSpec& ps) {
  StateField f(g);
  const double R2 = ps.radius * ps.radius;
  for (int i = 0; i < g.N1; ++i)
    for (int k = 0; k < g.N2; ++k) {
      // nearest periodic image in x2
      double dx2 = std::remainder(g.x2[k] - ps.x2c, g.spec.X2len);
      double r2 = (g.x1[i] - ps.x1c) * (g.x1[i] - ps.x1c) + dx2 * dx2;
      if (r2 >= R2) continue;
      double G = ps.amp * std::exp(1.0 - 1.0 / (1.0 - r2 / R2));
      f.at(0, i, k) = G;
      f.at(3, i, k) = ps.theta_ratio * G;
    }
  return f;
}

BackgroundState make_background(const RunConfig& c) {
  return make_background(c.background, c.bg_params, make_eos(c));
}

}  // namespace nsf
