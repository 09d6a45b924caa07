#pragma once

#include <optional>
#include <string>
#include <vector>

#include "q4/word.hpp"

namespace q4 {

// Exponent range of a parametric family: all of Z or one parity class.
enum class ExponentDomain : std::uint8_t { all, even, odd };

struct ParsedFamily;

// One-parameter family of group elements prefix * base^n * suffix.
// Carries exactly one exponent slot. Construction normalizes to a
// deterministic form (base cyclically reduced and primitive, junctions
// cancellation-free, whole base powers absorbed into the exponent,
// orientation fixed by lexicographic comparison).
class Family {
public:
  Family(Word prefix, Word base, Word suffix,
         ExponentDomain domain = ExponentDomain::all);

  const Word& prefix() const { return prefix_; }
  const Word& base() const { return base_; }
  const Word& suffix() const { return suffix_; }
  ExponentDomain domain() const { return domain_; }

  bool admits(int n) const;
  Word instantiate(int n) const;

  // The unique n with instantiate(n) == w, if any.
  std::optional<int> match(const Word& w) const;

  Family inverse() const;

  // Set equality {F} == {G}, robust against representation differences.
  bool same_set(const Family& rhs) const;

  // Representation comparison (used for container ordering only).
  bool operator==(const Family&) const = default;
  std::strong_ordering operator<=>(const Family&) const = default;

  std::string str() const;

  // Parses "ab^n", "g^n", "Ba^nb", "(BA)^2n+1", ... Returns the family and
  // the affine exponent label (coef, offset) as written, e.g. "b^n+1" gives
  // coef 1 offset 1. The offset does not change the family as a set.
  static std::optional<ParsedFamily> parse(std::string_view text);

private:
  Word prefix_, base_, suffix_;
  ExponentDomain domain_;

  void normalize();
  void settle();
  void rotate_base_left();
  void rotate_base_right();
};

struct ParsedFamily {
  Family family;
  int coef = 1;
  int offset = 0;
};

// A nucleus/attractor element: either a single word or a family.
struct Element {
  std::optional<Word> word;
  std::optional<Family> family;

  static Element make(Word w) { return {std::move(w), std::nullopt}; }
  static Element make(Family f) { return {std::nullopt, std::move(f)}; }
  bool is_word() const { return word.has_value(); }
  std::string str() const { return word ? word->str() : family->str(); }
  bool operator==(const Element&) const = default;
  std::strong_ordering operator<=>(const Element&) const = default;
};

}  // namespace q4
