#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace q4 {

// Signed generator letters of the free group G = <a, b>.
// The enum order a < A < b < B is the lexicographic order used for
// all canonical-form tie-breaks.
enum class Gen : std::uint8_t { a = 0, A = 1, b = 2, B = 3 };

constexpr Gen inverse_of(Gen g) {
  return static_cast<Gen>(static_cast<std::uint8_t>(g) ^ 1u);
}
constexpr bool is_positive(Gen g) {
  return (static_cast<std::uint8_t>(g) & 1u) == 0;
}
char gen_char(Gen g);
std::optional<Gen> gen_from_char(char c);

// Freely reduced word over {a, A, b, B}. The empty word is the identity.
// Immutable after construction; all operations return new values.
class Word {
public:
  Word() = default;

  // Reduces an arbitrary letter sequence.
  static Word from_letters(std::span<const Gen> raw);

  // Accepts strings over aAbB, "1" for the identity, and the shortcuts
  // g = BA (gamma), G = ab, d = AB (delta), D = ba. Whitespace ignored.
  static std::optional<Word> parse(std::string_view text);

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const std::vector<Gen>& letters() const { return letters_; }
  Gen front() const { return letters_.front(); }
  Gen back() const { return letters_.back(); }

  Word operator*(const Word& rhs) const;
  Word inverse() const;
  Word pow(int n) const;
  // w^-1 * (*this) * w
  Word conjugated_by(const Word& w) const;

  bool operator==(const Word&) const = default;
  std::strong_ordering operator<=>(const Word& rhs) const;

  std::string str() const;

  // Least rotation of a cyclically reduced word; helper for canonical forms.
  Word rotated(std::size_t k) const;

private:
  std::vector<Gen> letters_;
};

Word operator""_w(const char* s, std::size_t n);

inline const Word kGamma = *Word::parse("BA");  // gamma = b^-1 a^-1
inline const Word kDelta = *Word::parse("AB");  // delta = a^-1 b^-1

// u = conjugator^-1 * core * conjugator, core cyclically reduced.
// The core is anchored to the named cores where possible: if some rotation
// of the cyclic reduction is a positive power of a, b or gamma = BA, that
// rotation is chosen (so delta decomposes as (w = a, core = gamma)).
// Otherwise the lexicographically least rotation is used. Among conjugators
// realizing the chosen core, the shortest and then lexicographically least
// wins.
struct CyclicDecomposition {
  Word conjugator;
  Word core;
};
CyclicDecomposition cyclic_decompose(const Word& u);

// Smallest r with u = r^k (k >= 1); u must be cyclically reduced.
Word primitive_root(const Word& u, int* power = nullptr);

bool is_cyclically_reduced(const Word& u);

struct WordHash {
  std::size_t operator()(const Word& w) const;
};

}  // namespace q4
