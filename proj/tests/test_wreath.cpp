#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "q4/wreath.hpp"

#include <cstdint>
#include <vector>

using namespace q4;

namespace {

struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  int range(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

Word random_word(Rng& rng, int max_len) {
  int len = rng.range(max_len + 1);
  std::vector<Gen> raw;
  for (int i = 0; i < len; ++i) raw.push_back(static_cast<Gen>(rng.range(4)));
  return Word::from_letters(raw);
}

// (1-2z)^2 at 1/4: a = <1,1>s, b = <a,b>
const WreathRecursion kRow1 = *WreathRecursion::parse("a=<1,1>s b=<a,b>");
// z^2: a = <1,a>s, b = <b,1>
const WreathRecursion kRowZ2 = *WreathRecursion::parse("a=<1,a>s b=<b,1>");
// 1/z^2 at (-1-sqrt3 i)/2: a = <1,g>s, b = <1,b>
const WreathRecursion kRow11 = *WreathRecursion::parse("a=<1,g>s b=<1,b>");

}  // namespace

TEST_CASE("recursion parse/print") {
  CHECK(kRow1.str() == "a=<1,1>s b=<a,b>");
  CHECK(kRow11.b2 == "b"_w);
  CHECK(kRow11.a2 == kGamma);
  CHECK_FALSE(WreathRecursion::parse("a=<1,1>s").has_value());
}

TEST_CASE("permutation parity") {
  CHECK(perm_of(kRow1, "a"_w));
  CHECK_FALSE(perm_of(kRow1, "b"_w));
  CHECK(perm_of(kRow1, *Word::parse("ab")));
  CHECK_FALSE(perm_of(kRow1, *Word::parse("aa")));
}

TEST_CASE("sections against hand-expanded products") {
  // Row 1: beta restricts to <a, b>
  CHECK(restrict_to(kRow1, "b"_w, 1) == "a"_w);
  CHECK(restrict_to(kRow1, "b"_w, 2) == "b"_w);
  // 1|x = 1
  CHECK(restrict_to(kRow1, Word{}, 1) == Word{});
  // Row 1: ab = <b, a>s
  Sections s = sections(kRow1, *Word::parse("ab"));
  CHECK(s.s1 == "b"_w);
  CHECK(s.s2 == "a"_w);
  CHECK(s.swaps);
  // Row 11 worked values: gamma = <ab, B>s and gamma^2 = <a, Bab>
  Sections g = sections(kRow11, kGamma);
  CHECK(g.s1 == *Word::parse("ab"));
  CHECK(g.s2 == *Word::parse("B"));
  CHECK(g.swaps);
  Sections g2 = sections(kRow11, kGamma.pow(2));
  CHECK(g2.s1 == "a"_w);
  CHECK(g2.s2 == *Word::parse("Bab"));
  CHECK_FALSE(g2.swaps);
}

TEST_CASE("product rule homomorphism on random words") {
  Rng rng(2024);
  for (const auto& rec : {kRow1, kRowZ2, kRow11}) {
    for (int i = 0; i < 700; ++i) {
      Word u = random_word(rng, 16), v = random_word(rng, 16);
      Sections su = sections(rec, u), sv = sections(rec, v), suv = sections(rec, u * v);
      CHECK(suv.swaps == (su.swaps != sv.swaps));
      Word r1 = su.s1 * (su.swaps ? sv.s2 : sv.s1);
      Word r2 = su.s2 * (su.swaps ? sv.s1 : sv.s2);
      CHECK(suv.s1 == r1);
      CHECK(suv.s2 == r2);
    }
  }
}

TEST_CASE("tree action") {
  // z^2 row: alpha is the binary adding machine
  TreeVertex v{1, 1, 1};
  CHECK(act(kRowZ2, "a"_w, v) == TreeVertex{2, 1, 1});
  CHECK(act(kRowZ2, "a"_w, TreeVertex{2, 1, 1}) == TreeVertex{1, 2, 1});
  CHECK(act(kRow1, Word{}, v) == v);
  CHECK(act(kRow1, "a"_w, TreeVertex{1}) == TreeVertex{2});
}

TEST_CASE("action is compatible with restriction") {
  Rng rng(31337);
  for (const auto& rec : {kRow1, kRowZ2, kRow11}) {
    for (int i = 0; i < 300; ++i) {
      Word w = random_word(rng, 12);
      TreeVertex v;
      int depth = 1 + rng.range(10);
      for (int d = 0; d < depth; ++d)
        v.push_back(static_cast<std::uint8_t>(1 + rng.range(2)));
      // act(w, xv) = pi_w(x) . act(w|x, v)
      TreeVertex full = act(rec, w, v);
      Sections s = sections(rec, w);
      std::uint8_t x = v.front();
      TreeVertex tail(v.begin() + 1, v.end());
      TreeVertex rest = act(rec, x == 1 ? s.s1 : s.s2, tail);
      TreeVertex expect;
      expect.push_back(s.swaps ? static_cast<std::uint8_t>(3 - x) : x);
      expect.insert(expect.end(), rest.begin(), rest.end());
      CHECK(full == expect);
      // composition: act(uv, .) = act(v, act(u, .)) under the product rule
      Word u = random_word(rng, 8);
      CHECK(act(rec, u * w, v) == act(rec, w, act(rec, u, v)));
    }
  }
}

TEST_CASE("coinductive triviality") {
  // z^2 row: beta = <b,1> acts trivially
  CHECK(acts_trivially(kRowZ2, "b"_w).kind == TrivialityResult::Kind::trivial);
  // row 1: alpha^2 = <1,1> trivial, alpha nontrivial
  CHECK(acts_trivially(kRow1, "aa"_w).kind == TrivialityResult::Kind::trivial);
  CHECK(acts_trivially(kRow1, "a"_w).kind == TrivialityResult::Kind::nontrivial);
  // row 1: beta nontrivial (restricts to alpha), beta^2 trivial
  CHECK(acts_trivially(kRow1, "b"_w).kind == TrivialityResult::Kind::nontrivial);
  CHECK(acts_trivially(kRow1, "bb"_w).kind == TrivialityResult::Kind::trivial);
  // z^2 row: the adding machine has infinite order; closure of a^k is small
  // but never trivial
  CHECK(acts_trivially(kRowZ2, "a"_w).kind == TrivialityResult::Kind::nontrivial);
  CHECK(acts_trivially(kRowZ2, ("a"_w).pow(8)).kind ==
        TrivialityResult::Kind::nontrivial);
}

TEST_CASE("faithful order") {
  auto r1 = faithful_order(kRow1, "a"_w, 8);
  CHECK(r1.kind == OrderResult::Kind::found);
  CHECK(r1.order == 2);
  auto r2 = faithful_order(kRowZ2, "b"_w, 8);
  CHECK(r2.kind == OrderResult::Kind::found);
  CHECK(r2.order == 1);
  auto r3 = faithful_order(kRow1, Word{}, 8);
  CHECK(r3.order == 1);
  // 1-1/(1-2z)^2 at 1+i/2: beta has order 4 in the faithful quotient
  auto rec5 = *WreathRecursion::parse("a=<1,1>s b=<g,b>");
  auto r4 = faithful_order(rec5, "b"_w, 8);
  CHECK(r4.kind == OrderResult::Kind::found);
  CHECK(r4.order == 4);
  // adding machine: no finite order
  auto r5 = faithful_order(kRowZ2, "a"_w, 8);
  CHECK(r5.kind == OrderResult::Kind::exceeds_bound);
}
