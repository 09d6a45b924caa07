#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "q4/portraits.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>

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

Portrait relabeled(const Portrait& p, Rng& rng) {
  std::vector<int> sigma(p.size());
  std::iota(sigma.begin(), sigma.end(), 0);
  for (int i = static_cast<int>(sigma.size()) - 1; i > 0; --i) {
    std::swap(sigma[i], sigma[rng.range(i + 1)]);
  }
  Portrait q;
  q.labels.resize(p.size());
  q.next.resize(p.size());
  q.degree.resize(p.size());
  for (std::size_t v = 0; v < p.size(); ++v) {
    q.labels[sigma[v]] = p.labels[v];
    q.next[sigma[v]] = sigma[p.next[v]];
    q.degree[sigma[v]] = p.degree[v];
  }
  return q;
}

}  // namespace

TEST_CASE("composition matches the table rows") {
  // (1-2z)^2 with slot 0: x => * -> 0 -> inf <=> 1 two-cycle
  auto p = compose_portrait({"(1-2z)^2", 0});
  REQUIRE(p.has_value());
  CHECK(p->size() == 5);
  // find the bullet and follow it: * -> 0 -> inf
  auto at = [&](const std::string& l) {
    return static_cast<int>(std::find(p->labels.begin(), p->labels.end(), l) -
                            p->labels.begin());
  };
  CHECK(p->next[at("x")] == at("*"));
  CHECK(p->degree[at("x")] == 2);
  CHECK(p->next[at("*")] == at("0"));
  CHECK(p->next[at("0")] == at("inf"));
  CHECK(p->next[at("inf")] == at("1"));
  CHECK(p->degree[at("inf")] == 2);
  CHECK(p->next[at("1")] == at("inf"));

  // 1/z^2 with slot 0: the 4-cycle 0 => 1 -> inf => * -> 0
  auto q = compose_portrait({"1/z^2", 0});
  REQUIRE(q.has_value());
  CHECK(q->size() == 4);
  auto qa = [&](const std::string& l) {
    return static_cast<int>(std::find(q->labels.begin(), q->labels.end(), l) -
                            q->labels.begin());
  };
  CHECK(q->next[qa("0")] == qa("1"));
  CHECK(q->degree[qa("0")] == 2);
  CHECK(q->next[qa("1")] == qa("inf"));
  CHECK(q->next[qa("inf")] == qa("*"));
  CHECK(q->degree[qa("inf")] == 2);
  CHECK(q->next[qa("*")] == qa("0"));
}

TEST_CASE("equivalence is invariant under relabeling") {
  Rng rng(99);
  EnumerationResult rows = enumerate_q4();
  for (const Portrait& p : rows.one_critical) {
    Portrait q = relabeled(p, rng);
    CHECK(portraits_equivalent(p, q));
    CHECK(portraits_equivalent(q, p));
  }
  // different cycle structure is inequivalent
  auto z2 = compose_portrait({"z^2", 2});
  auto invz2 = compose_portrait({"1/z^2", 0});
  REQUIRE(z2.has_value());
  REQUIRE(invz2.has_value());
  CHECK_FALSE(portraits_equivalent(*z2, *invz2));
}

TEST_CASE("thirteen classes, split nine plus four") {
  EnumerationResult rows = enumerate_q4();
  CHECK(rows.one_critical.size() == 9);
  CHECK(rows.two_critical.size() == 4);
  CHECK(rows.total() == 13);
  // pairwise inequivalent
  std::vector<Portrait> all(rows.one_critical);
  all.insert(all.end(), rows.two_critical.begin(), rows.two_critical.end());
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK_FALSE(portraits_equivalent(all[i], all[j]));
    }
  }
  // every portrait has exactly four postcritical vertices and at most six
  // vertices total, with exactly two critical ones
  for (const Portrait& p : all) {
    CHECK(p.size() <= 6);
    int crit = 0;
    for (std::size_t v = 0; v < p.size(); ++v) {
      if (p.degree[v] == 2) ++crit;
    }
    CHECK(crit == 2);
    std::set<int> post;
    for (std::size_t v = 0; v < p.size(); ++v) {
      if (p.degree[v] == 2) {
        int w = p.next[v];
        while (post.insert(w).second) w = p.next[w];
      }
    }
    CHECK(post.size() == 4);
  }
  // the full two-critical spec space collapses onto the four table rows
  int extra_classes = 0;
  for (const char* gm : {"z^2", "1-z^2", "1/z^2", "1/(1-z^2)"}) {
    for (int slot = 0; slot < 3; ++slot) {
      auto p = compose_portrait({gm, slot});
      if (!p) continue;
      bool known = false;
      for (const Portrait& q : rows.two_critical) {
        if (portraits_equivalent(*p, q)) known = true;
      }
      if (!known) ++extra_classes;
    }
  }
  CHECK(extra_classes == 0);
}

TEST_CASE("postcomposition group actions") {
  std::string detail;
  bool ok = postcompose_action_check(&detail);
  if (!ok) MESSAGE(detail);
  CHECK(ok);
}

TEST_CASE("invalid specs are rejected") {
  std::string err;
  CHECK_FALSE(compose_portrait({"nope", 0}, &err).has_value());
  CHECK(err.find("unknown") != std::string::npos);
  CHECK_FALSE(compose_portrait({"z^2", 7}, &err).has_value());
}
