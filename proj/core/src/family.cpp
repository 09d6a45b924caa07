#include "q4/family.hpp"

#include <cassert>
#include <cstdlib>
#include <stdexcept>
#include <tuple>

namespace q4 {

namespace {

ExponentDomain flipped(ExponentDomain d) {
  switch (d) {
    case ExponentDomain::all: return ExponentDomain::all;
    case ExponentDomain::even: return ExponentDomain::odd;
    case ExponentDomain::odd: return ExponentDomain::even;
  }
  return ExponentDomain::all;
}

bool ends_with(const Word& w, const Word& tail) {
  if (tail.empty() || w.size() < tail.size()) return false;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (w.letters()[w.size() - tail.size() + i] != tail.letters()[i])
      return false;
  }
  return true;
}

bool starts_with(const Word& w, const Word& head) {
  if (head.empty() || w.size() < head.size()) return false;
  for (std::size_t i = 0; i < head.size(); ++i) {
    if (w.letters()[i] != head.letters()[i]) return false;
  }
  return true;
}

Word single(Gen g) {
  return Word::from_letters(std::span<const Gen>(&g, 1));
}

}  // namespace

Family::Family(Word prefix, Word base, Word suffix, ExponentDomain domain)
    : prefix_(std::move(prefix)),
      base_(std::move(base)),
      suffix_(std::move(suffix)),
      domain_(domain) {
  if (base_.empty()) throw std::invalid_argument("family base must be nontrivial");
  normalize();
}

void Family::rotate_base_left() {
  // base = l R -> R l;  u (lR)^n v = (u l) (R l)^n (l^-1 v)
  Gen l = base_.front();
  std::vector<Gen> rest(base_.letters().begin() + 1, base_.letters().end());
  rest.push_back(l);
  base_ = Word::from_letters(rest);
  prefix_ = prefix_ * single(l);
  suffix_ = single(inverse_of(l)) * suffix_;
}

void Family::rotate_base_right() {
  // base = L l -> l L;  u (Ll)^n v = (u l^-1) (l L)^n (l v)
  Gen l = base_.back();
  std::vector<Gen> rest;
  rest.push_back(l);
  rest.insert(rest.end(), base_.letters().begin(), base_.letters().end() - 1);
  base_ = Word::from_letters(rest);
  prefix_ = prefix_ * single(inverse_of(l));
  suffix_ = single(l) * suffix_;
}

void Family::settle() {
  // Least rotation of the base. Partial junction cancellation in the
  // instantiations is inherent to some families and harmless; equality of
  // family sets is decided by same_set, not by the representation.
  Word best = base_;
  std::size_t best_k = 0;
  for (std::size_t k = 1; k < base_.size(); ++k) {
    Word r = base_.rotated(k);
    if (r < best) { best = r; best_k = k; }
  }
  for (std::size_t i = 0; i < best_k; ++i) rotate_base_left();

  // Absorb whole base powers at the junctions into the exponent.
  for (;;) {
    if (ends_with(prefix_, base_)) {
      prefix_ = prefix_ * base_.inverse();
      domain_ = flipped(domain_);
    } else if (ends_with(prefix_, base_.inverse())) {
      prefix_ = prefix_ * base_;
      domain_ = flipped(domain_);
    } else if (starts_with(suffix_, base_)) {
      suffix_ = base_.inverse() * suffix_;
      domain_ = flipped(domain_);
    } else if (starts_with(suffix_, base_.inverse())) {
      suffix_ = base_ * suffix_;
      domain_ = flipped(domain_);
    } else {
      break;
    }
  }
}

void Family::normalize() {
  // Cyclically reduce the base, absorbing the conjugator into the ends.
  while (base_.size() >= 2 && base_.front() == inverse_of(base_.back())) {
    Gen l = base_.front();
    std::vector<Gen> mid(base_.letters().begin() + 1, base_.letters().end() - 1);
    base_ = Word::from_letters(mid);
    prefix_ = prefix_ * single(l);
    suffix_ = single(inverse_of(l)) * suffix_;
    if (base_.empty()) throw std::invalid_argument("family base reduces to 1");
  }

  // Primitive root. A squared base becomes a parity-constrained family.
  int power = 1;
  Word root = primitive_root(base_, &power);
  if (power == 2 && domain_ == ExponentDomain::all) {
    base_ = root;
    domain_ = ExponentDomain::even;
  } else if (power != 1) {
    throw std::invalid_argument("unsupported family base power");
  }

  settle();

  // Orientation: n -> -n gives the same set; keep the smaller form.
  Family alt = *this;
  alt.base_ = alt.base_.inverse();
  alt.settle();
  if (std::tie(alt.base_, alt.prefix_, alt.suffix_) <
      std::tie(base_, prefix_, suffix_)) {
    *this = alt;
  }
}

bool Family::admits(int n) const {
  switch (domain_) {
    case ExponentDomain::all: return true;
    case ExponentDomain::even: return n % 2 == 0;
    case ExponentDomain::odd: return n % 2 != 0;
  }
  return true;
}

Word Family::instantiate(int n) const {
  assert(admits(n));
  return prefix_ * base_.pow(n) * suffix_;
}

std::optional<int> Family::match(const Word& w) const {
  // w = u x^n v exactly when x^n = u^-1 w v^-1, which pins n.
  Word m = prefix_.inverse() * w * suffix_.inverse();
  if (m.empty()) return admits(0) ? std::optional<int>(0) : std::nullopt;
  if (m.size() % base_.size() != 0) return std::nullopt;
  int n = static_cast<int>(m.size() / base_.size());
  if (m.letters()[0] == base_.letters()[0]) {
    if (!admits(n) || m != base_.pow(n)) return std::nullopt;
    return n;
  }
  if (!admits(-n) || m != base_.pow(-n)) return std::nullopt;
  return -n;
}

Family Family::inverse() const {
  return Family(suffix_.inverse(), base_.inverse(), prefix_.inverse(), domain_);
}

bool Family::same_set(const Family& rhs) const {
  if (domain_ != rhs.domain_ && (domain_ == ExponentDomain::all ||
                                 rhs.domain_ == ExponentDomain::all)) {
    return false;
  }
  int step = domain_ == ExponentDomain::all ? 1 : 2;
  int n0 = domain_ == ExponentDomain::odd ? 1 : 0;
  auto s0 = rhs.match(instantiate(n0));
  auto s1 = rhs.match(instantiate(n0 + step));
  if (!s0 || !s1) return false;
  int dir = *s1 - *s0;
  if (dir != step && dir != -step) return false;
  for (int k : {-2, -1, 2, 8, -8}) {
    int n = n0 + step * k;
    if (rhs.match(instantiate(n)) != *s0 + dir * k) return false;
  }
  return true;
}

std::string Family::str() const {
  std::string s;
  if (!prefix_.empty()) s += prefix_.str();
  if (base_ == kGamma) s += "g";
  else if (base_ == kGamma.inverse()) s += "G";
  else if (base_ == kDelta) s += "d";
  else if (base_ == kDelta.inverse()) s += "D";
  else if (base_.size() == 1) s += base_.str();
  else s += "(" + base_.str() + ")";
  switch (domain_) {
    case ExponentDomain::all: s += "^n"; break;
    case ExponentDomain::even: s += "^2n"; break;
    case ExponentDomain::odd: s += "^2n+1"; break;
  }
  if (!suffix_.empty()) s += suffix_.str();
  return s;
}

std::optional<ParsedFamily> Family::parse(std::string_view text) {
  auto caret = text.find('^');
  if (caret == std::string_view::npos || caret == 0) return std::nullopt;

  std::string_view head = text.substr(0, caret);
  std::string base_text;
  std::string_view prefix_text;
  if (head.back() == ')') {
    auto open = head.rfind('(');
    if (open == std::string_view::npos) return std::nullopt;
    base_text = std::string(head.substr(open + 1, head.size() - open - 2));
    prefix_text = head.substr(0, open);
  } else {
    base_text = std::string(1, head.back());
    prefix_text = head.substr(0, head.size() - 1);
  }

  // Exponent: [-]n, [-]2n, optionally followed by +k or -k.
  std::string_view exp = text.substr(caret + 1);
  int coef = 1;
  std::size_t i = 0;
  if (i < exp.size() && exp[i] == '-') { coef = -1; ++i; }
  if (i < exp.size() && exp[i] == '2') { coef *= 2; ++i; }
  if (i >= exp.size() || exp[i] != 'n') return std::nullopt;
  ++i;
  int offset = 0;
  std::size_t exp_end = i;
  if (i < exp.size() && (exp[i] == '+' || exp[i] == '-')) {
    int sign = exp[i] == '-' ? -1 : 1;
    std::size_t j = i + 1;
    int val = 0;
    while (j < exp.size() && exp[j] >= '0' && exp[j] <= '9') {
      val = val * 10 + (exp[j] - '0');
      ++j;
    }
    if (j == i + 1) return std::nullopt;
    offset = sign * val;
    exp_end = j;
  }
  std::string_view tail = exp.substr(exp_end);

  auto p = Word::parse(prefix_text);
  auto b = Word::parse(base_text);
  auto s = Word::parse(tail);
  if (!p || !b || !s || b->empty()) return std::nullopt;

  // As a set, x^(n+k) over all n is all of Z; x^(2n+k) is the parity class
  // of k. The (coef, offset) pair is reported for chain labels.
  ExponentDomain dom = ExponentDomain::all;
  if (coef == 2 || coef == -2)
    dom = (offset % 2 == 0) ? ExponentDomain::even : ExponentDomain::odd;

  try {
    return ParsedFamily{Family(*p, *b, *s, dom), coef, offset};
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

}  // namespace q4
