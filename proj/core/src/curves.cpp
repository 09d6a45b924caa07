#include "q4/curves.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace q4 {

Word CurveClass::core_word() const {
  switch (core) {
    case Core::alpha: return "a"_w;
    case Core::beta: return "b"_w;
    case Core::gamma: return kGamma;
  }
  return Word{};
}

Word CurveClass::element() const { return core_word().conjugated_by(conjugator); }

std::string CurveClass::str() const {
  // delta = gamma conjugated by alpha gets its own letter, as in the tables.
  if (core == Core::gamma && conjugator == "a"_w) return "d";
  std::string s;
  switch (core) {
    case Core::alpha: s = "a"; break;
    case Core::beta: s = "b"; break;
    case Core::gamma: s = "g"; break;
  }
  if (!conjugator.empty()) s += "@" + conjugator.str();
  return s;
}

std::optional<CurveClass> CurveClass::parse(std::string_view text) {
  if (text == "d") return CurveClass{Core::gamma, "a"_w};
  if (text.empty()) return std::nullopt;
  Core core;
  switch (text[0]) {
    case 'a': core = Core::alpha; break;
    case 'b': core = Core::beta; break;
    case 'g': core = Core::gamma; break;
    default: return std::nullopt;
  }
  Word conj;
  if (text.size() > 1) {
    if (text[1] != '@') return std::nullopt;
    auto w = Word::parse(text.substr(2));
    if (!w) return std::nullopt;
    conj = *w;
  }
  auto curve = curve_from_word(CurveClass{core, conj}.element());
  return curve;  // re-normalize so spellings like b@b collapse
}

std::optional<CurveClass> curve_from_word(const Word& u, std::string* error) {
  if (u.empty()) {
    if (error) *error = "identity is not a parabolic element";
    return std::nullopt;
  }
  // cyclic_decompose anchors positive powers of a, b and gamma = BA; for
  // the inverse orientations the least rotation wins, so the primitive
  // root is one of exactly a, A, b, B, BA, ab.
  auto dec = cyclic_decompose(u);
  int power = 1;
  Word root = primitive_root(dec.core, &power);

  std::optional<CurveClass::Core> core;
  const Word a = "a"_w, b = "b"_w;
  if (root == a || root == a.inverse()) core = CurveClass::Core::alpha;
  else if (root == b || root == b.inverse()) core = CurveClass::Core::beta;
  else if (root == kGamma || root == kGamma.inverse())
    core = CurveClass::Core::gamma;
  if (!core) {
    if (error)
      *error = "not parabolic of core type: cyclic core " + dec.core.str();
    return std::nullopt;
  }

  // Orientation is dropped (unoriented curves), so an inverse root keeps
  // the same conjugator. Strip leading core powers off the conjugator:
  // (x^k w)^-1 x (x^k w) = w^-1 x w.
  CurveClass out{*core, dec.conjugator};
  Word cw = out.core_word();
  auto starts_with = [](const Word& x, const Word& h) {
    if (h.empty() || x.size() < h.size()) return false;
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (x.letters()[i] != h.letters()[i]) return false;
    }
    return true;
  };
  for (;;) {
    if (starts_with(out.conjugator, cw)) {
      out.conjugator = cw.inverse() * out.conjugator;
    } else if (starts_with(out.conjugator, cw.inverse())) {
      out.conjugator = cw * out.conjugator;
    } else {
      break;
    }
  }
  return out;
}

Word phihat(const VirtualEndomorphism& ve, const Word& w) {
  if (auto in = phi(ve, w)) return *in;
  return *phi(ve, "a"_w * w);
}

std::optional<PullbackResult> pullback_curve(const VirtualEndomorphism& ve,
                                             const CurveClass& c,
                                             std::string* error) {
  Word x = c.core_word();
  int n = perm_of(ve.rec, x) ? 2 : 1;
  Word conjugate = x.pow(n).conjugated_by(c.conjugator);
  auto image = phi(ve, conjugate);
  if (!image) {
    if (error) *error = "pullback power did not land in the domain";
    return std::nullopt;
  }
  PullbackResult out;
  out.degree_exponent = n;
  out.multiplier_num = 1;
  out.multiplier_den = n;
  if (image->empty()) {
    out.image = CurveOrSink{std::nullopt};
    return out;
  }
  auto curve = curve_from_word(*image, error);
  if (!curve) return std::nullopt;
  out.image = CurveOrSink{*curve};
  return out;
}

std::vector<CurveClass> fga_seed_curves(const VirtualEndomorphism& ve,
                                        const NucleusSet& nucleus,
                                        const FgaOptions& opts) {
  // phihat-periodic part of the nucleus, families sampled.
  std::vector<Word> members{Word{}};
  for (const Word& w : nucleus.words()) members.push_back(w);
  for (const Family& f : nucleus.families()) {
    int step = f.domain() == ExponentDomain::all ? 1 : 2;
    int n0 = f.domain() == ExponentDomain::odd ? 1 : 0;
    for (int k = -opts.window; k <= opts.window; ++k) {
      members.push_back(f.instantiate(n0 + step * k));
    }
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());

  std::vector<Word> periodic;
  for (const Word& w : members) {
    // Follow phihat until a repeat; w is periodic iff it returns to w.
    Word cur = w;
    std::set<Word> seen;
    bool is_periodic = false;
    for (int i = 0; i < opts.orbit_cap; ++i) {
      cur = phihat(ve, cur);
      if (cur == w) { is_periodic = true; break; }
      if (!seen.insert(cur).second) break;
    }
    if (is_periodic) periodic.push_back(w);
  }

  std::vector<CurveClass> seeds;
  std::set<std::string> keys;
  for (const Word& w : periodic) {
    for (CurveClass::Core core : {CurveClass::Core::alpha, CurveClass::Core::beta,
                                  CurveClass::Core::gamma}) {
      CurveClass raw{core, w};
      auto canon = curve_from_word(raw.element());
      if (!canon) continue;
      if (keys.insert(canon->str()).second) seeds.push_back(*canon);
    }
  }
  return seeds;
}

std::string FgaResult::str() const {
  std::ostringstream os;
  if (!finite) {
    os << "no finite attractor; sampled patterns:";
    for (const auto& p : sampled_patterns) os << " " << p;
    return os.str();
  }
  bool first = true;
  for (const auto& c : cycles) {
    if (!first) os << "; ";
    first = false;
    if (c.size() == 1) {
      os << c[0].str();
    } else {
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) os << " -> ";
        os << c[i].str();
      }
    }
  }
  return os.str();
}

bool FgaResult::matches_cycles(
    const std::vector<std::vector<std::string>>& expect) const {
  if (!finite || cycles.size() != expect.size()) return false;
  std::vector<bool> used(cycles.size(), false);
  for (const auto& e : expect) {
    std::vector<CurveOrSink> want;
    for (const auto& s : e) {
      if (s == "o") {
        want.push_back(CurveOrSink{std::nullopt});
      } else {
        auto c = CurveClass::parse(s);
        if (!c) return false;
        want.push_back(CurveOrSink{*c});
      }
    }
    bool hit = false;
    for (std::size_t j = 0; j < cycles.size() && !hit; ++j) {
      if (used[j] || cycles[j].size() != want.size()) continue;
      // compare up to rotation
      for (std::size_t r = 0; r < want.size() && !hit; ++r) {
        std::vector<CurveOrSink> rot(want.begin(), want.end());
        std::rotate(rot.begin(), rot.begin() + r, rot.end());
        if (rot == cycles[j]) {
          used[j] = true;
          hit = true;
        }
      }
    }
    if (!hit) return false;
  }
  return true;
}

std::optional<FgaResult> compute_fga(const VirtualEndomorphism& ve,
                                     const NucleusSet& nucleus,
                                     const FgaOptions& opts,
                                     std::string* error) {
  std::vector<CurveClass> seeds = fga_seed_curves(ve, nucleus, opts);

  // Forward closure of the seeds under the pullback.
  std::map<std::string, CurveOrSink> next;
  std::set<std::string> all;
  std::vector<CurveOrSink> frontier;
  frontier.push_back(CurveOrSink{std::nullopt});  // the sink is always there
  all.insert("o");
  for (const CurveClass& c : seeds) {
    CurveOrSink cs{c};
    if (all.insert(cs.str()).second) frontier.push_back(cs);
  }

  std::vector<CurveOrSink> order(frontier);
  while (!frontier.empty()) {
    CurveOrSink cur = frontier.back();
    frontier.pop_back();
    CurveOrSink img{std::nullopt};
    if (!cur.is_sink()) {
      auto res = pullback_curve(ve, *cur.curve, error);
      if (!res) return std::nullopt;
      img = res->image;
    }
    next.emplace(cur.str(), img);
    if (all.insert(img.str()).second) {
      if (static_cast<int>(all.size()) > opts.curve_bound) {
        FgaResult out;
        out.finite = false;
        for (const auto& s : all) out.sampled_patterns.push_back(s);
        return out;
      }
      frontier.push_back(img);
      order.push_back(img);
    }
  }

  // Unbounded attractors show up as seed sets that keep growing with the
  // sampling window: every sampled conjugator family gives new periodic
  // curves. Detect: periodic curves whose conjugators exceed the base set.
  // First collect the periodic part.
  FgaResult out;
  std::set<std::string> on_cycle;
  for (const auto& [key, _] : next) {
    // follow until repeat, check if key returns to itself
    CurveOrSink cur = key == "o"
                          ? CurveOrSink{std::nullopt}
                          : CurveOrSink{*CurveClass::parse(key)};
    CurveOrSink walk = cur;
    for (int i = 0; i < opts.iter_bound; ++i) {
      auto it = next.find(walk.str());
      if (it == next.end()) {
        // image outside the closed table (shouldn't happen)
        break;
      }
      walk = it->second;
      if (walk == cur) {
        on_cycle.insert(cur.str());
        break;
      }
    }
  }

  // Group the periodic part into cycles.
  std::set<std::string> emitted;
  for (const auto& key : on_cycle) {
    if (emitted.count(key)) continue;
    std::vector<CurveOrSink> cycle;
    CurveOrSink cur =
        key == "o" ? CurveOrSink{std::nullopt} : CurveOrSink{*CurveClass::parse(key)};
    CurveOrSink walk = cur;
    do {
      cycle.push_back(walk);
      emitted.insert(walk.str());
      walk = next.at(walk.str());
    } while (!(walk == cur));
    // canonical rotation: smallest label first
    std::size_t best = 0;
    for (std::size_t i = 1; i < cycle.size(); ++i) {
      if (cycle[i].str() < cycle[best].str()) best = i;
    }
    std::rotate(cycle.begin(), cycle.begin() + best, cycle.end());
    out.cycles.push_back(std::move(cycle));
  }
  std::sort(out.cycles.begin(), out.cycles.end(),
            [](const auto& x, const auto& y) {
              return x.size() != y.size() ? x.size() < y.size()
                                          : x[0].str() < y[0].str();
            });

  // Infinite-attractor detection: a family of distinct periodic curves
  // across the sampled conjugator window.
  std::map<std::string, int> core_counts;
  for (const auto& key : on_cycle) {
    if (key == "o") continue;
    auto c = CurveClass::parse(key);
    core_counts[std::string(1, key[0])]++;
    (void)c;
  }
  for (const auto& [core, count] : core_counts) {
    if (count > 2 * opts.window) {
      out.finite = false;
      // Everything the sampled orbits met, transients included.
      out.sampled_patterns.assign(all.begin(), all.end());
      return out;
    }
  }
  return out;
}

std::optional<ObstructionCertificate> check_obstruction(
    const VirtualEndomorphism& ve, const std::vector<CurveClass>& candidates) {
  for (const CurveClass& c : candidates) {
    auto res = pullback_curve(ve, c);
    if (!res || res->image.is_sink()) continue;
    if (*res->image.curve == c && res->multiplier_num >= res->multiplier_den) {
      return ObstructionCertificate{c, res->multiplier_num, res->multiplier_den};
    }
  }
  return std::nullopt;
}

}  // namespace q4
