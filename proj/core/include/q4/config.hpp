#pragma once

#include <optional>
#include <string>

namespace q4 {

// Tunables shared across the toolkit, overridable from a key=value file.
struct Config {
  // wreath / nucleus
  std::size_t state_bound = 10000;    // acts_trivially closure states
  int family_window = 8;              // exponent sampling window [-w, w]
  int verify_exponent = 12;           // extra exponents for pattern checks
  int contraction_depth = 12;         // max restriction steps before cycling
  int max_augment_rounds = 16;
  // twist
  int orbit_cap_scale = 4;            // cap = scale * len(w) + orbit_cap_base
  int orbit_cap_base = 64;
  // curves
  int fga_curve_bound = 512;
  int fga_iter_bound = 64;
  // moduli
  double lift_initial_step = 1.0 / 256.0;
  double lift_separation = 1e-6;
  double lift_min_step = 1e-12;
  double detour_radius = 1e-3;
  double inf_chart_threshold = 10.0;
  double residual_tol = 1e-9;
  double fixed_point_tol = 1e-3;

  // Parses "key = value" lines; '#' starts a comment. Unknown keys error.
  static std::optional<Config> load(const std::string& path,
                                    std::string* error = nullptr);
  bool apply(const std::string& key, const std::string& value);
};

}  // namespace q4
