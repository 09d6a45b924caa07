#include "q4/word.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace q4 {

char gen_char(Gen g) {
  switch (g) {
    case Gen::a: return 'a';
    case Gen::A: return 'A';
    case Gen::b: return 'b';
    case Gen::B: return 'B';
  }
  return '?';
}

std::optional<Gen> gen_from_char(char c) {
  switch (c) {
    case 'a': return Gen::a;
    case 'A': return Gen::A;
    case 'b': return Gen::b;
    case 'B': return Gen::B;
    default: return std::nullopt;
  }
}

Word Word::from_letters(std::span<const Gen> raw) {
  Word w;
  w.letters_.reserve(raw.size());
  for (Gen g : raw) {
    if (!w.letters_.empty() && w.letters_.back() == inverse_of(g)) {
      w.letters_.pop_back();
    } else {
      w.letters_.push_back(g);
    }
  }
  return w;
}

std::optional<Word> Word::parse(std::string_view text) {
  std::vector<Gen> raw;
  for (char c : text) {
    if (c == ' ' || c == '\t') continue;
    if (c == '1') continue;
    switch (c) {
      case 'g': raw.push_back(Gen::B); raw.push_back(Gen::A); continue;
      case 'G': raw.push_back(Gen::a); raw.push_back(Gen::b); continue;
      case 'd': raw.push_back(Gen::A); raw.push_back(Gen::B); continue;
      case 'D': raw.push_back(Gen::b); raw.push_back(Gen::a); continue;
      default: break;
    }
    auto g = gen_from_char(c);
    if (!g) return std::nullopt;
    raw.push_back(*g);
  }
  return from_letters(raw);
}

Word Word::operator*(const Word& rhs) const {
  Word w = *this;
  for (Gen g : rhs.letters_) {
    if (!w.letters_.empty() && w.letters_.back() == inverse_of(g)) {
      w.letters_.pop_back();
    } else {
      w.letters_.push_back(g);
    }
  }
  return w;
}

Word Word::inverse() const {
  Word w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    w.letters_.push_back(inverse_of(*it));
  }
  return w;
}

Word Word::pow(int n) const {
  if (n == 0) return Word{};
  Word base = n > 0 ? *this : inverse();
  int k = n > 0 ? n : -n;
  Word acc;
  for (int i = 0; i < k; ++i) acc = acc * base;
  return acc;
}

Word Word::conjugated_by(const Word& w) const {
  return w.inverse() * *this * w;
}

std::strong_ordering Word::operator<=>(const Word& rhs) const {
  // shortlex under a < A < b < B
  if (letters_.size() != rhs.letters_.size())
    return letters_.size() <=> rhs.letters_.size();
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (letters_[i] != rhs.letters_[i])
      return static_cast<std::uint8_t>(letters_[i]) <=>
             static_cast<std::uint8_t>(rhs.letters_[i]);
  }
  return std::strong_ordering::equal;
}

std::string Word::str() const {
  if (letters_.empty()) return "1";
  std::string s;
  s.reserve(letters_.size());
  for (Gen g : letters_) s.push_back(gen_char(g));
  return s;
}

Word Word::rotated(std::size_t k) const {
  if (letters_.empty()) return *this;
  k %= letters_.size();
  Word w;
  w.letters_.reserve(letters_.size());
  for (std::size_t i = 0; i < letters_.size(); ++i)
    w.letters_.push_back(letters_[(i + k) % letters_.size()]);
  return w;
}

Word operator""_w(const char* s, std::size_t n) {
  auto w = Word::parse(std::string_view(s, n));
  if (!w) throw std::invalid_argument("bad word literal");
  return *w;
}

bool is_cyclically_reduced(const Word& u) {
  return u.size() < 2 || u.front() != inverse_of(u.back());
}

Word primitive_root(const Word& u, int* power) {
  assert(is_cyclically_reduced(u));
  std::size_t n = u.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = 0; i + p < n && periodic; ++i) {
      if (u.letters()[i] != u.letters()[i + p]) periodic = false;
    }
    if (periodic) {
      if (power) *power = static_cast<int>(n / p);
      std::vector<Gen> head(u.letters().begin(), u.letters().begin() + p);
      return Word::from_letters(head);
    }
  }
  if (power) *power = 1;
  return u;
}

namespace {

// Is v a positive power of core?
bool is_power_of(const Word& v, const Word& core) {
  if (core.empty() || v.size() % core.size() != 0) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v.letters()[i] != core.letters()[i % core.size()]) return false;
  }
  return true;
}

}  // namespace

CyclicDecomposition cyclic_decompose(const Word& u) {
  assert(!u.empty());
  // Peel conjugating letters: u = c0^-1 * v * c0 with v cyclically reduced.
  std::vector<Gen> body(u.letters().begin(), u.letters().end());
  std::vector<Gen> c0;  // built so that conjugator = c0 read back-to-front
  while (body.size() >= 2 && body.front() == inverse_of(body.back())) {
    c0.push_back(body.back());
    body.pop_back();
    body.erase(body.begin());
  }
  Word v = Word::from_letters(body);
  std::vector<Gen> c0r(c0.rbegin(), c0.rend());
  Word conj0 = Word::from_letters(c0r);

  if (v.empty()) return {conj0, v};

  // Pick the canonical rotation of v.
  const Word cores[] = {"a"_w, "b"_w, kGamma};
  std::optional<Word> target;
  for (const Word& core : cores) {
    for (std::size_t k = 0; k < v.size() && !target; ++k) {
      Word r = v.rotated(k);
      if (is_power_of(r, core)) target = r;
    }
    if (target) break;
  }
  if (!target) {
    Word best = v;
    for (std::size_t k = 1; k < v.size(); ++k) {
      Word r = v.rotated(k);
      if (r < best) best = r;
    }
    target = best;
  }

  // Among rotation indices realizing the target, minimize the conjugator.
  std::optional<Word> best_conj;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v.rotated(k) != *target) continue;
    // v = p * rot_k(v) * p^-1 with p = first k letters, so
    // u = (p^-1 c0)^-1-free form: conjugator = p^-1 * conj0.
    std::vector<Gen> p(v.letters().begin(), v.letters().begin() + k);
    Word conj = Word::from_letters(p).inverse() * conj0;
    if (!best_conj || conj.size() < best_conj->size() ||
        (conj.size() == best_conj->size() && conj < *best_conj)) {
      best_conj = conj;
    }
  }
  return {*best_conj, *target};
}

std::size_t WordHash::operator()(const Word& w) const {
  std::size_t h = 1469598103934665603ull;
  for (Gen g : w.letters()) {
    h ^= static_cast<std::size_t>(g) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace q4
