#include "uavbf/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace uavbf {

ConfigError::ConfigError(std::string source, int line, std::string field, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) +
                         (field.empty() ? std::string() : ": field '" + field + "'") + ": " + message),
      source_(std::move(source)),
      line_(line),
      field_(std::move(field)) {}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(value);
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

struct Entry {
  int line;
  std::string value;
};

class Reader {
 public:
  Reader(std::string source, std::map<std::string, Entry> entries)
      : source_(std::move(source)), entries_(std::move(entries)) {}

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const auto it = entries_.find(key);
    throw ConfigError(source_, it == entries_.end() ? 0 : it->second.line, key, what);
  }

  template <typename T>
  T number(const std::string& key, const std::string& text) const {
    T v{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || ptr != end) fail(key, "'" + text + "' is not a valid number");
    return v;
  }

  template <typename T>
  void scalar(const std::string& key, T& out) const {
    const auto it = entries_.find(key);
    if (it != entries_.end()) out = number<T>(key, it->second.value);
  }

  template <typename T>
  void list(const std::string& key, std::vector<T>& out) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return;
    out.clear();
    for (const auto& item : split_list(it->second.value)) out.push_back(number<T>(key, item));
    if (out.empty()) fail(key, "list is empty");
  }

  void flag(const std::string& key, bool& out) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return;
    const std::string& v = it->second.value;
    if (v == "true" || v == "1" || v == "yes") out = true;
    else if (v == "false" || v == "0" || v == "no") out = false;
    else fail(key, "'" + v + "' is not a boolean (true/false)");
  }

  void schemes(const std::string& key, std::vector<Scheme>& out) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return;
    out.clear();
    for (const auto& name : split_list(it->second.value)) {
      const auto s = parse_scheme(name);
      if (!s) fail(key, "unknown scheme '" + name + "' (expected proposed, zf, mrt, nonrobust)");
      out.push_back(*s);
    }
  }

  void c2a_form(const std::string& key, C2aForm& out) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return;
    if (it->second.value == "real") out = C2aForm::real;
    else if (it->second.value == "hermitian") out = C2aForm::hermitian;
    else fail(key, "'" + it->second.value + "' is not one of real, hermitian");
  }

 private:
  std::string source_;
  std::map<std::string, Entry> entries_;
};

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "seed", "realizations", "cell_radius_m", "users", "antennas", "rho", "radius_m", "sinr_db",
      "gamma_margin_db", "schemes", "drop_c1", "mismatch", "oracle_theta_points", "oracle_location_directions",
      "carrier_frequency_hz", "bandwidth_hz", "antenna_spacing_m", "altitude_m", "noise_dbm", "per_antenna_dbm",
      "c2a_form", "tolerance", "max_iterations", "threads", "user_x_m", "user_y_m"};
  return keys;
}

} // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, Entry> entries;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line_no, "", "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(source, line_no, "", "missing key before '='");
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError(source, line_no, key, "unknown field");
    if (value.empty()) throw ConfigError(source, line_no, key, "missing value");
    if (const auto prev = entries.find(key); prev != entries.end())
      throw ConfigError(source, line_no, key, "duplicate field (first set on line " +
                                                  std::to_string(prev->second.line) + ")");
    entries.emplace(key, Entry{line_no, value});
  }

  const Reader r(source, entries);
  ExperimentConfig c;
  r.scalar("seed", c.seed);
  r.scalar("realizations", c.realizations);
  r.scalar("cell_radius_m", c.cell_radius);
  r.scalar("users", c.n_users);
  r.list("antennas", c.n_antennas);
  r.list("rho", c.rho);
  r.list("radius_m", c.radius);
  r.list("sinr_db", c.sinr_db);
  r.scalar("gamma_margin_db", c.gamma_margin_db);
  r.schemes("schemes", c.schemes);
  r.flag("drop_c1", c.drop_c1);
  r.flag("mismatch", c.mismatch);
  r.scalar("oracle_theta_points", c.oracle.theta_points);
  r.scalar("oracle_location_directions", c.oracle.location_directions);
  r.scalar("carrier_frequency_hz", c.carrier_freq);
  r.scalar("bandwidth_hz", c.bandwidth);
  r.scalar("antenna_spacing_m", c.antenna_spacing);
  r.scalar("altitude_m", c.altitude);
  r.scalar("noise_dbm", c.noise_dbm);
  r.scalar("per_antenna_dbm", c.per_antenna_dbm);
  r.c2a_form("c2a_form", c.c2a_form);
  r.scalar("tolerance", c.tolerance);
  r.scalar("max_iterations", c.max_iterations);
  r.scalar("threads", c.threads);
  std::vector<double> xs, ys;
  r.list("user_x_m", xs);
  r.list("user_y_m", ys);
  if (xs.size() != ys.size()) r.fail("user_y_m", "length differs from user_x_m");
  for (std::size_t k = 0; k < xs.size(); ++k) c.user_positions.emplace_back(xs[k], ys[k]);

  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(": ");
    r.fail(msg.substr(0, colon), colon == std::string::npos ? msg : msg.substr(colon + 2));
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "", "cannot open file");
  return parse_config(in, path);
}

std::string format_config(const ExperimentConfig& c) {
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto join = [&](const auto& xs, auto&& f) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + f(xs[i]);
    return s;
  };
  auto dbl = [&](double v) { return num(v); };
  std::ostringstream o;
  o << "seed = " << c.seed << '\n'
    << "realizations = " << c.realizations << '\n'
    << "cell_radius_m = " << num(c.cell_radius) << '\n'
    << "users = " << c.n_users << '\n'
    << "antennas = " << join(c.n_antennas, [](int v) { return std::to_string(v); }) << '\n'
    << "rho = " << join(c.rho, dbl) << '\n'
    << "radius_m = " << join(c.radius, dbl) << '\n'
    << "sinr_db = " << join(c.sinr_db, dbl) << '\n'
    << "gamma_margin_db = " << num(c.gamma_margin_db) << '\n'
    << "schemes = " << join(c.schemes, [](Scheme s) { return std::string(to_string(s)); }) << '\n'
    << "drop_c1 = " << (c.drop_c1 ? "true" : "false") << '\n'
    << "mismatch = " << (c.mismatch ? "true" : "false") << '\n'
    << "oracle_theta_points = " << c.oracle.theta_points << '\n'
    << "oracle_location_directions = " << c.oracle.location_directions << '\n'
    << "carrier_frequency_hz = " << num(c.carrier_freq) << '\n'
    << "bandwidth_hz = " << num(c.bandwidth) << '\n'
    << "antenna_spacing_m = " << num(c.antenna_spacing) << '\n'
    << "altitude_m = " << num(c.altitude) << '\n'
    << "noise_dbm = " << num(c.noise_dbm) << '\n'
    << "per_antenna_dbm = " << num(c.per_antenna_dbm) << '\n'
    << "c2a_form = " << (c.c2a_form == C2aForm::real ? "real" : "hermitian") << '\n'
    << "tolerance = " << num(c.tolerance) << '\n'
    << "max_iterations = " << c.max_iterations << '\n'
    << "threads = " << c.threads << '\n';
  if (!c.user_positions.empty()) {
    o << "user_x_m = " << join(c.user_positions, [&](const Position2D& p) { return num(p.x()); }) << '\n'
      << "user_y_m = " << join(c.user_positions, [&](const Position2D& p) { return num(p.y()); }) << '\n';
  }
  return o.str();
}

} // namespace uavbf
