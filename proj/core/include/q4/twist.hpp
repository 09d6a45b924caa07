#pragma once

#include <optional>
#include <string>
#include <vector>

#include "q4/nucleus.hpp"
#include "q4/wreath.hpp"

namespace q4 {

// Restriction at one coordinate as a partial map on the index-2 subgroup of
// permutation-trivial words.
struct VirtualEndomorphism {
  WreathRecursion rec;
  int coordinate = 1;
};

// Defined exactly on words with trivial permutation.
std::optional<Word> phi(const VirtualEndomorphism& ve, const Word& w);

// Total extension used for twisting: phi(h) on the domain, a*phi(h*a^-1)
// on the other coset. Total by construction.
Word phibar(const VirtualEndomorphism& ve, const Word& w);

struct Orbit {
  std::vector<Word> tail;   // up to (excluding) the first repeated element
  std::vector<Word> cycle;  // the periodic part, starting at the repeat
};
std::optional<Orbit> phibar_orbit(const VirtualEndomorphism& ve, const Word& w,
                                  int max_iterations);

// Periodic part of phibar on N union a*N: fixed points and cycles of words,
// plus families fixed as sets (instance n maps to the same family).
struct AttractorSet {
  std::vector<std::vector<Word>> cycles;  // length-1 cycles are fixed points
  std::vector<Family> fixed_families;
  std::string str() const;
  bool matches(const AttractorSet& rhs) const;
  static std::optional<AttractorSet> parse(std::string_view text);
};

struct AttractorOptions {
  int window = 8;
  int verify_exponent = 12;
  int orbit_cap_scale = 4;
  int orbit_cap_base = 64;
};

std::optional<AttractorSet> compute_attractor(const VirtualEndomorphism& ve,
                                              const NucleusSet& nucleus,
                                              const AttractorOptions& opts,
                                              std::string* error = nullptr);

// Label of the orbit tail of h (optionally pre-twisted by a prefix, for the
// other maps in the Hurwitz class).
struct TwistLabel {
  enum class Kind { cycle, family } kind;
  std::vector<Word> cycle;   // for Kind::cycle
  std::optional<Family> family;
  int exponent = 0;          // family instance index
  std::vector<Word> trace;   // full orbit up to the attractor
  std::string str() const;
};
std::optional<TwistLabel> twist_solve(const VirtualEndomorphism& ve,
                                      const AttractorSet& attractor,
                                      const Word& h,
                                      const Word& prefix = Word{},
                                      const AttractorOptions& opts = {});

// Checks u = <v, v> with trivial permutation, the diagonal identities used
// to merge twist families.
bool equivalence_identity_check(const WreathRecursion& rec, const Word& u,
                                const Word& v);

}  // namespace q4
