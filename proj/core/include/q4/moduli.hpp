#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "q4/config.hpp"
#include "q4/word.hpp"
#include "q4/wreath.hpp"

namespace q4 {

using Cplx = std::complex<double>;

// Rational map of degree <= 2 with coefficient triples (c0 + c1 z + c2 z^2).
struct RationalMap {
  std::array<Cplx, 3> num{};
  std::array<Cplx, 3> den{};

  Cplx eval(Cplx z) const;                 // large values stand in for inf
  Cplx eval_at_infinity() const;
  std::vector<Cplx> preimages(Cplx w) const;  // roots of num - w den
  RationalMap compose(const RationalMap& inner) const;  // this after inner
  RationalMap inverse_mobius() const;      // degree-1 maps only
  int degree() const;
};

// The seven maps on moduli space, keyed by the labels used everywhere.
struct GMap {
  std::string label;
  RationalMap map;
  RationalMap outer;      // Moebius factor transporting the base generators
  bool formal_basepoint;  // z^2: no fixed point outside {0,1,inf}
};
const std::vector<GMap>& gmaps();
const GMap* find_gmap(const std::string& label);

// M_{bullet,slot}: the involution swapping bullet with the slot value and
// the remaining two of {0,1,inf}.
std::optional<RationalMap> mobius_from_spec(Cplx bullet, int slot,
                                            std::string* error = nullptr);

// All fixed points on the sphere; an entry with huge modulus means inf.
struct FixedPoints {
  std::vector<Cplx> finite;
  bool at_infinity = false;
};
FixedPoints fixed_points(const RationalMap& g, double collision_tol = 1e-8);

using ComplexPath = std::vector<Cplx>;

struct LiftOptions {
  double initial_step = 1.0 / 256.0;
  double separation = 1e-6;
  double min_step = 1e-12;
  double residual_tol = 1e-9;
  static LiftOptions from(const Config& c) {
    return {c.lift_initial_step, c.lift_separation, c.lift_min_step,
            c.residual_tol};
  }
};

struct LiftResult {
  ComplexPath path;
  double max_residual = 0.0;
};
// Continuous branch of g^-1 along the target starting at start.
std::optional<LiftResult> lift_path(const RationalMap& g,
                                    const ComplexPath& target, Cplx start,
                                    const LiftOptions& opts,
                                    std::string* error = nullptr);

// Crossing decoder for pi_1 of the thrice-punctured sphere with the real
// cuts (-inf,0), (0,1), (1,inf); calibrated so the reference loops around
// 0 and 1 decode to a and b.
std::optional<Word> loop_to_word(const ComplexPath& loop,
                                 std::string* error = nullptr);

struct DeriveOptions {
  LiftOptions lift;
  double detour_radius = 1e-3;
  double fixed_point_tol = 1e-3;
  static DeriveOptions from(const Config& c) {
    return {LiftOptions::from(c), c.detour_radius, c.fixed_point_tol};
  }
};

struct DeriveResult {
  WreathRecursion recursion;
  double max_residual = 0.0;
  Cplx basepoint;
  Cplx other_fiber_point;
  std::string calibration = "identity";  // sign convention note
};
// Derives the wreath recursion of the named map at the given fixed point
// (ignored for z^2, whose basepoint is the formal 1/4 setup).
std::optional<DeriveResult> derive_recursion(const std::string& gmap_label,
                                             std::optional<Cplx> fixed_point,
                                             const DeriveOptions& opts,
                                             std::string* error = nullptr);

// Reference generator loops at 1/4 and path helpers (exposed for tests).
ComplexPath reference_alpha_loop();
ComplexPath reference_beta_loop();
ComplexPath map_path(const RationalMap& m, const ComplexPath& path);
ComplexPath join_paths(const std::vector<ComplexPath>& pieces);
ComplexPath reversed_path(ComplexPath path);
// Connector from z0 to target: straight segment when it clears {0,1} by
// the margin, else the real route through at most one of {0,1,inf} with a
// semicircular detour to the left of the traversal.
std::optional<ComplexPath> connector_path(Cplx z0, Cplx target, double margin,
                                          std::string* error = nullptr);

// Numeric spot check of the normalization example: the composite of
// M_{bullet,0} with 1/z^2 permutes the four marked points as the 4-cycle
// portrait demands, with the right local degrees.
bool moduli_normalization_check(std::string* detail = nullptr);

}  // namespace q4
