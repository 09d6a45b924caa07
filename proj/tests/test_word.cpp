#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "q4/family.hpp"
#include "q4/word.hpp"

#include <cstdint>
#include <vector>

using namespace q4;

namespace {

// Deterministic generator for property checks.
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
  raw.reserve(len);
  for (int i = 0; i < len; ++i) raw.push_back(static_cast<Gen>(rng.range(4)));
  return Word::from_letters(raw);
}

}  // namespace

TEST_CASE("free reduction") {
  CHECK(*Word::parse("aA") == Word{});
  CHECK(Word::parse("Ba")->str() == "Ba");
  CHECK(Word::parse("abBa")->str() == "aa");
  CHECK(Word::parse("1")->str() == "1");
  // gamma/delta shortcuts
  CHECK(*Word::parse("g") == *Word::parse("BA"));
  CHECK(*Word::parse("d") == *Word::parse("AB"));
  CHECK(*Word::parse("G") == Word::parse("g")->inverse());
}

TEST_CASE("multiply and invert") {
  CHECK(("a"_w * "A"_w) == Word{});
  CHECK((kGamma * "a"_w) == *Word::parse("B"));   // (BA) a = B
  CHECK((kDelta * "b"_w) == *Word::parse("A"));   // (AB) b = A
  CHECK(("1"_w).inverse() == Word{});
  CHECK(kGamma.inverse() == *Word::parse("ab"));
  CHECK(Word::parse("abb")->inverse() == *Word::parse("BBA"));
  CHECK(("ab"_w).pow(-2) == *Word::parse("BABA"));
}

TEST_CASE("reduce is idempotent on random sequences") {
  Rng rng(12345);
  for (int i = 0; i < 2000; ++i) {
    int len = rng.range(65);
    std::vector<Gen> raw;
    for (int j = 0; j < len; ++j) raw.push_back(static_cast<Gen>(rng.range(4)));
    Word once = Word::from_letters(raw);
    Word twice = Word::from_letters(once.letters());
    CHECK(once == twice);
  }
}

TEST_CASE("group laws on random words") {
  Rng rng(99);
  for (int i = 0; i < 2000; ++i) {
    Word u = random_word(rng, 24), v = random_word(rng, 24), w = random_word(rng, 24);
    CHECK(((u * v) * w) == (u * (v * w)));
    CHECK((u * u.inverse()) == Word{});
    CHECK((u.inverse() * u) == Word{});
  }
}

TEST_CASE("cyclic decomposition") {
  // beta^alpha = A b a -> conjugator a, core b
  auto d1 = cyclic_decompose(*Word::parse("Aba"));
  CHECK(d1.conjugator == "a"_w);
  CHECK(d1.core == "b"_w);

  // delta = AB -> conjugator a, core gamma = BA
  auto d2 = cyclic_decompose(kDelta);
  CHECK(d2.conjugator == "a"_w);
  CHECK(d2.core == kGamma);

  // beta is already a core
  auto d3 = cyclic_decompose("b"_w);
  CHECK(d3.conjugator == Word{});
  CHECK(d3.core == "b"_w);
}

TEST_CASE("cyclic decomposition round-trips") {
  Rng rng(4242);
  int checked = 0;
  for (int i = 0; i < 3000; ++i) {
    Word u = random_word(rng, 32);
    if (u.empty()) continue;
    auto d = cyclic_decompose(u);
    CHECK(is_cyclically_reduced(d.core));
    CHECK(d.core.conjugated_by(d.conjugator) == u);
    ++checked;
  }
  CHECK(checked > 2000);
}

TEST_CASE("primitive root") {
  int k = 0;
  CHECK(primitive_root(*Word::parse("BABA"), &k) == kGamma);
  CHECK(k == 2);
  CHECK(primitive_root(*Word::parse("ab"), &k) == *Word::parse("ab"));
  CHECK(k == 1);
}

TEST_CASE("family instantiation and matching") {
  // b^n
  Family bn("1"_w, "b"_w, "1"_w);
  CHECK(bn.instantiate(5) == *Word::parse("bbbbb"));
  CHECK(bn.match(*Word::parse("bbbbb")) == 5);
  CHECK(bn.match(*Word::parse("abbb")) == std::nullopt);

  // a b^n
  auto abn = Family::parse("ab^n");
  REQUIRE(abn.has_value());
  CHECK(abn->family.instantiate(3) == *Word::parse("abbb"));
  CHECK(abn->family.match(*Word::parse("abbb")) == 3);
  CHECK(abn->family.match(*Word::parse("bbb")) == std::nullopt);

  // B a^n b
  auto conj = Family::parse("Ba^nb");
  REQUIRE(conj.has_value());
  CHECK(conj->family.instantiate(2) == *Word::parse("Baab"));
  CHECK(conj->family.instantiate(0) == Word{});

  // gamma^n with two-letter base
  auto gn = Family::parse("g^n");
  REQUIRE(gn.has_value());
  CHECK(gn->family.match(*Word::parse("BABA")) .has_value());
}

TEST_CASE("family set semantics") {
  // b^n equals its own inverse family
  Family bn("1"_w, "b"_w, "1"_w);
  CHECK(bn.same_set(bn.inverse()));

  // a b^n inverse is B^n A
  auto abn = Family::parse("ab^n")->family;
  auto inv = abn.inverse();
  CHECK(inv.match(*Word::parse("BBBA")) .has_value());
  CHECK_FALSE(abn.same_set(Family("1"_w, "b"_w, "1"_w)));

  // same set under junction shifts: {b^n a} written as {b^(n+1) B b a}-ish
  Family f1("1"_w, "b"_w, "a"_w);
  Family f2(*Word::parse("b"), "b"_w, *Word::parse("Ba"));
  CHECK(f1.same_set(f2));

  // gamma family: (BA)^n as B(AB)^(n-1)A
  Family g1("1"_w, kGamma, "1"_w);
  Family g2(*Word::parse("B"), kDelta, *Word::parse("A"));
  CHECK(g1.same_set(g2));
}

TEST_CASE("family canonicalization is stable") {
  Rng rng(777);
  for (int i = 0; i < 500; ++i) {
    Word p = random_word(rng, 6), s = random_word(rng, 6);
    Word base = random_word(rng, 4);
    if (base.empty()) continue;
    int root_pow = 0;
    if (!is_cyclically_reduced(base)) continue;
    primitive_root(base, &root_pow);
    if (root_pow > 2) continue;
    Family f(p, base, s);
    Family again(f.prefix(), f.base(), f.suffix(), f.domain());
    CHECK(f == again);
    // the represented set is preserved (parameterization may shift)
    for (int n : {-3, 0, 4}) {
      CHECK(f.match(p * base.pow(n) * s).has_value());
    }
  }
}
