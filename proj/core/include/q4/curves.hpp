#pragma once

#include <optional>
#include <string>
#include <vector>

#include "q4/nucleus.hpp"
#include "q4/twist.hpp"

namespace q4 {

// Essential curve as the exact parabolic element w^-1 x w with core
// x in {a, b, g} (g = gamma = BA). Orientation is normalized: an inverted
// core describes the same unoriented curve. gamma and delta = gamma^a are
// distinct curves.
struct CurveClass {
  enum class Core : std::uint8_t { alpha, beta, gamma };
  Core core;
  Word conjugator;

  Word core_word() const;
  Word element() const;  // conjugator^-1 * core * conjugator
  std::string str() const;
  bool operator==(const CurveClass&) const = default;
  std::strong_ordering operator<=>(const CurveClass&) const = default;

  // "a", "b", "g", "d", or core@conjugator like "b@A". "d" reads as g@a.
  static std::optional<CurveClass> parse(std::string_view text);
};

// A curve or the formal sink for curves with no essential preimage.
struct CurveOrSink {
  std::optional<CurveClass> curve;  // nullopt = sink
  bool is_sink() const { return !curve.has_value(); }
  std::string str() const { return curve ? curve->str() : "o"; }
  bool operator==(const CurveOrSink&) const = default;
  std::strong_ordering operator<=>(const CurveOrSink&) const = default;
};

// Normalizes a parabolic word to its curve. Fails when the cyclic core is
// not a power of a, b or a gamma-class rotation.
std::optional<CurveClass> curve_from_word(const Word& u,
                                          std::string* error = nullptr);

// Total extension used for the pullback: phi on the domain, phi(a w) on the
// other coset. Always equal to a restriction of w.
Word phihat(const VirtualEndomorphism& ve, const Word& w);

struct PullbackResult {
  CurveOrSink image;
  int degree_exponent = 1;  // n in {1, 2}: minimal power landing in Dom(phi)
  // multiplier contribution of a fixed component: 1/degree_exponent
  int multiplier_num = 1, multiplier_den = 1;
};
std::optional<PullbackResult> pullback_curve(const VirtualEndomorphism& ve,
                                             const CurveClass& c,
                                             std::string* error = nullptr);

// Finite global attractor of the curve pullback.
struct FgaResult {
  bool finite = true;
  std::vector<std::vector<CurveOrSink>> cycles;   // when finite
  std::vector<std::string> sampled_patterns;      // when not finite
  std::string str() const;
  bool matches_cycles(const std::vector<std::vector<std::string>>& expect) const;
};

struct FgaOptions {
  int curve_bound = 512;
  int iter_bound = 64;
  int window = 8;
  int orbit_cap = 256;
};

std::optional<FgaResult> compute_fga(const VirtualEndomorphism& ve,
                                     const NucleusSet& nucleus,
                                     const FgaOptions& opts,
                                     std::string* error = nullptr);

// A pullback-fixed curve with multiplier >= 1 certifies an obstruction.
struct ObstructionCertificate {
  CurveClass curve;
  int multiplier_num = 1, multiplier_den = 1;
};
std::optional<ObstructionCertificate> check_obstruction(
    const VirtualEndomorphism& ve, const std::vector<CurveClass>& candidates);

// Seed curves used for the global search: cores conjugated by the
// phihat-periodic part of the nucleus (families sampled).
std::vector<CurveClass> fga_seed_curves(const VirtualEndomorphism& ve,
                                        const NucleusSet& nucleus,
                                        const FgaOptions& opts);

}  // namespace q4
