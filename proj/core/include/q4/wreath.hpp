#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "q4/word.hpp"

namespace q4 {

// Wreath recursion on the binary alphabet {1,2}: each generator carries a
// pair of restriction words and a permutation in S2. Products follow
// <g1,g2>pi * <h1,h2>tau = <g1 h_pi(1), g2 h_pi(2)> pi tau.
struct WreathRecursion {
  Word a1, a2;
  bool a_swaps = false;
  Word b1, b2;
  bool b_swaps = false;

  // Text form "a=<1,1>s b=<a,b>"; trailing 's' marks the swap.
  static std::optional<WreathRecursion> parse(std::string_view text);
  std::string str() const;

  bool operator==(const WreathRecursion&) const = default;
};

struct Sections {
  Word s1, s2;
  bool swaps = false;
};

// Restrictions and permutation of an arbitrary word, by the product rule.
Sections sections(const WreathRecursion& rec, const Word& w);

// Parity homomorphism G -> S2; true means the nontrivial permutation.
bool perm_of(const WreathRecursion& rec, const Word& w);

// coord is 1 or 2.
Word restrict_to(const WreathRecursion& rec, const Word& w, int coord);

// Vertices of the binary rooted tree as strings over {1,2}.
using TreeVertex = std::vector<std::uint8_t>;
TreeVertex act(const WreathRecursion& rec, const Word& w, const TreeVertex& v);

// Coinductive triviality: w acts trivially on every level iff no element of
// the restriction closure of {w} carries the swap. Fails (bound) when the
// closure exceeds state_bound, which signals a non-contracting input.
struct TrivialityResult {
  enum class Kind { trivial, nontrivial, state_bound_exceeded };
  Kind kind;
  std::size_t states_explored = 0;
};
TrivialityResult acts_trivially(const WreathRecursion& rec, const Word& w,
                                std::size_t state_bound = 10000);

// Least k <= bound with w^k acting trivially.
struct OrderResult {
  enum class Kind { found, exceeds_bound, state_bound_exceeded };
  Kind kind;
  int order = 0;
};
OrderResult faithful_order(const WreathRecursion& rec, const Word& w,
                           int bound, std::size_t state_bound = 10000);

}  // namespace q4
