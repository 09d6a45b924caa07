#include "q4/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace q4 {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

bool Config::apply(const std::string& key, const std::string& value) {
  auto as_size = [&] { return static_cast<std::size_t>(std::strtoull(value.c_str(), nullptr, 10)); };
  auto as_int = [&] { return std::atoi(value.c_str()); };
  auto as_double = [&] { return std::strtod(value.c_str(), nullptr); };
  if (key == "state_bound") state_bound = as_size();
  else if (key == "family_window") family_window = as_int();
  else if (key == "verify_exponent") verify_exponent = as_int();
  else if (key == "contraction_depth") contraction_depth = as_int();
  else if (key == "max_augment_rounds") max_augment_rounds = as_int();
  else if (key == "orbit_cap_scale") orbit_cap_scale = as_int();
  else if (key == "orbit_cap_base") orbit_cap_base = as_int();
  else if (key == "fga_curve_bound") fga_curve_bound = as_int();
  else if (key == "fga_iter_bound") fga_iter_bound = as_int();
  else if (key == "lift_initial_step") lift_initial_step = as_double();
  else if (key == "lift_separation") lift_separation = as_double();
  else if (key == "lift_min_step") lift_min_step = as_double();
  else if (key == "detour_radius") detour_radius = as_double();
  else if (key == "inf_chart_threshold") inf_chart_threshold = as_double();
  else if (key == "residual_tol") residual_tol = as_double();
  else if (key == "fixed_point_tol") fixed_point_tol = as_double();
  else return false;
  return true;
}

std::optional<Config> Config::load(const std::string& path, std::string* error) {
  std::ifstream in(path);
  if (!in) {
    if (error) *error = "cannot open config file: " + path;
    return std::nullopt;
  }
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (error) {
        std::ostringstream os;
        os << path << ":" << lineno << ": expected key = value";
        *error = os.str();
      }
      return std::nullopt;
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!cfg.apply(key, value)) {
      if (error) {
        std::ostringstream os;
        os << path << ":" << lineno << ": unknown key '" << key << "'";
        *error = os.str();
      }
      return std::nullopt;
    }
  }
  return cfg;
}

}  // namespace q4
