#include "q4/wreath.hpp"

#include <cassert>
#include <deque>
#include <unordered_set>

namespace q4 {

namespace {

struct LetterData {
  const Word* s1;
  const Word* s2;
  Word inv1, inv2;  // storage for inverse letters
  bool swaps;
};

// Sections of a single signed generator letter. Inverse restrictions come
// from (g^-1)|_x = (g|_{pi_g^-1(x)})^-1.
void letter_sections(const WreathRecursion& rec, Gen g, Word& out1, Word& out2,
                     bool& swaps) {
  switch (g) {
    case Gen::a:
      out1 = rec.a1; out2 = rec.a2; swaps = rec.a_swaps; return;
    case Gen::b:
      out1 = rec.b1; out2 = rec.b2; swaps = rec.b_swaps; return;
    case Gen::A:
      if (rec.a_swaps) { out1 = rec.a2.inverse(); out2 = rec.a1.inverse(); }
      else { out1 = rec.a1.inverse(); out2 = rec.a2.inverse(); }
      swaps = rec.a_swaps;
      return;
    case Gen::B:
      if (rec.b_swaps) { out1 = rec.b2.inverse(); out2 = rec.b1.inverse(); }
      else { out1 = rec.b1.inverse(); out2 = rec.b2.inverse(); }
      swaps = rec.b_swaps;
      return;
  }
}

}  // namespace

Sections sections(const WreathRecursion& rec, const Word& w) {
  Sections acc;
  Word l1, l2;
  bool ls = false;
  for (Gen g : w.letters()) {
    letter_sections(rec, g, l1, l2, ls);
    if (!acc.swaps) {
      acc.s1 = acc.s1 * l1;
      acc.s2 = acc.s2 * l2;
    } else {
      acc.s1 = acc.s1 * l2;
      acc.s2 = acc.s2 * l1;
    }
    acc.swaps = acc.swaps != ls;
  }
  return acc;
}

bool perm_of(const WreathRecursion& rec, const Word& w) {
  bool swaps = false;
  for (Gen g : w.letters()) {
    switch (g) {
      case Gen::a:
      case Gen::A: swaps = swaps != rec.a_swaps; break;
      case Gen::b:
      case Gen::B: swaps = swaps != rec.b_swaps; break;
    }
  }
  return swaps;
}

Word restrict_to(const WreathRecursion& rec, const Word& w, int coord) {
  assert(coord == 1 || coord == 2);
  Sections s = sections(rec, w);
  return coord == 1 ? s.s1 : s.s2;
}

TreeVertex act(const WreathRecursion& rec, const Word& w, const TreeVertex& v) {
  TreeVertex out;
  out.reserve(v.size());
  Word cur = w;
  for (std::uint8_t x : v) {
    assert(x == 1 || x == 2);
    Sections s = sections(rec, cur);
    out.push_back(s.swaps ? static_cast<std::uint8_t>(3 - x) : x);
    cur = (x == 1) ? s.s1 : s.s2;
  }
  return out;
}

TrivialityResult acts_trivially(const WreathRecursion& rec, const Word& w,
                                std::size_t state_bound) {
  std::unordered_set<Word, WordHash> seen;
  std::deque<Word> queue;
  seen.insert(w);
  queue.push_back(w);
  while (!queue.empty()) {
    Word cur = std::move(queue.front());
    queue.pop_front();
    Sections s = sections(rec, cur);
    if (s.swaps)
      return {TrivialityResult::Kind::nontrivial, seen.size()};
    for (const Word& next : {s.s1, s.s2}) {
      if (seen.insert(next).second) {
        if (seen.size() > state_bound)
          return {TrivialityResult::Kind::state_bound_exceeded, seen.size()};
        queue.push_back(next);
      }
    }
  }
  return {TrivialityResult::Kind::trivial, seen.size()};
}

OrderResult faithful_order(const WreathRecursion& rec, const Word& w,
                           int bound, std::size_t state_bound) {
  assert(bound >= 1);
  for (int k = 1; k <= bound; ++k) {
    TrivialityResult t = acts_trivially(rec, w.pow(k), state_bound);
    switch (t.kind) {
      case TrivialityResult::Kind::trivial:
        return {OrderResult::Kind::found, k};
      case TrivialityResult::Kind::state_bound_exceeded:
        return {OrderResult::Kind::state_bound_exceeded, 0};
      case TrivialityResult::Kind::nontrivial:
        break;
    }
  }
  return {OrderResult::Kind::exceeds_bound, 0};
}

std::optional<WreathRecursion> WreathRecursion::parse(std::string_view text) {
  // Expected shape: a=<w,w>[s] b=<w,w>[s], whitespace-tolerant.
  WreathRecursion rec;
  bool have_a = false, have_b = false;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  while (i < text.size()) {
    skip_ws();
    if (i >= text.size()) break;
    char gen = text[i];
    if (gen != 'a' && gen != 'b') return std::nullopt;
    ++i;
    skip_ws();
    if (i >= text.size() || text[i] != '=') return std::nullopt;
    ++i;
    skip_ws();
    if (i >= text.size() || text[i] != '<') return std::nullopt;
    ++i;
    auto comma = text.find(',', i);
    if (comma == std::string_view::npos) return std::nullopt;
    auto close = text.find('>', comma);
    if (close == std::string_view::npos) return std::nullopt;
    auto w1 = Word::parse(text.substr(i, comma - i));
    auto w2 = Word::parse(text.substr(comma + 1, close - comma - 1));
    if (!w1 || !w2) return std::nullopt;
    i = close + 1;
    bool swaps = false;
    if (i < text.size() && text[i] == 's') {
      swaps = true;
      ++i;
    }
    if (gen == 'a') {
      rec.a1 = *w1; rec.a2 = *w2; rec.a_swaps = swaps;
      have_a = true;
    } else {
      rec.b1 = *w1; rec.b2 = *w2; rec.b_swaps = swaps;
      have_b = true;
    }
  }
  if (!have_a || !have_b) return std::nullopt;
  return rec;
}

std::string WreathRecursion::str() const {
  std::string s = "a=<" + a1.str() + "," + a2.str() + ">";
  if (a_swaps) s += "s";
  s += " b=<" + b1.str() + "," + b2.str() + ">";
  if (b_swaps) s += "s";
  return s;
}

}  // namespace q4
