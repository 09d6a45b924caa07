#include "q4/twist.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

namespace q4 {

std::optional<Word> phi(const VirtualEndomorphism& ve, const Word& w) {
  if (perm_of(ve.rec, w)) return std::nullopt;
  return restrict_to(ve.rec, w, ve.coordinate);
}

Word phibar(const VirtualEndomorphism& ve, const Word& w) {
  if (auto in = phi(ve, w)) return *in;
  Word a = "a"_w;
  return a * *phi(ve, w * a.inverse());
}

std::optional<Orbit> phibar_orbit(const VirtualEndomorphism& ve, const Word& w,
                                  int max_iterations) {
  std::vector<Word> seq{w};
  std::unordered_map<Word, std::size_t, WordHash> index;
  index.emplace(w, 0);
  for (int i = 0; i < max_iterations; ++i) {
    Word next = phibar(ve, seq.back());
    auto it = index.find(next);
    if (it != index.end()) {
      Orbit orbit;
      orbit.tail.assign(seq.begin(), seq.begin() + it->second);
      orbit.cycle.assign(seq.begin() + it->second, seq.end());
      return orbit;
    }
    index.emplace(next, seq.size());
    seq.push_back(next);
  }
  return std::nullopt;
}

namespace {

std::vector<Word> rotate_canonical(std::vector<Word> cycle) {
  // Cycle representative starting at the least element.
  std::size_t best = 0;
  for (std::size_t i = 1; i < cycle.size(); ++i) {
    if (cycle[i] < cycle[best]) best = i;
  }
  std::rotate(cycle.begin(), cycle.begin() + best, cycle.end());
  return cycle;
}

}  // namespace

std::string AttractorSet::str() const {
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << "; ";
    first = false;
  };
  for (const auto& c : cycles) {
    sep();
    if (c.size() == 1) {
      os << "fix " << c[0].str();
    } else {
      os << "cycle ";
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) os << " -> ";
        os << c[i].str();
      }
    }
  }
  for (const auto& f : fixed_families) {
    sep();
    os << "fam " << f.str();
  }
  return os.str();
}

bool AttractorSet::matches(const AttractorSet& rhs) const {
  if (cycles.size() != rhs.cycles.size() ||
      fixed_families.size() != rhs.fixed_families.size())
    return false;
  std::vector<bool> used(rhs.cycles.size(), false);
  for (const auto& c : cycles) {
    bool hit = false;
    for (std::size_t j = 0; j < rhs.cycles.size() && !hit; ++j) {
      if (used[j] || rhs.cycles[j].size() != c.size()) continue;
      if (rotate_canonical(c) == rotate_canonical(rhs.cycles[j])) {
        used[j] = true;
        hit = true;
      }
    }
    if (!hit) return false;
  }
  std::vector<bool> fused(rhs.fixed_families.size(), false);
  for (const auto& f : fixed_families) {
    bool hit = false;
    for (std::size_t j = 0; j < rhs.fixed_families.size() && !hit; ++j) {
      if (fused[j]) continue;
      if (f.same_set(rhs.fixed_families[j])) {
        fused[j] = true;
        hit = true;
      }
    }
    if (!hit) return false;
  }
  return true;
}

std::optional<AttractorSet> AttractorSet::parse(std::string_view text) {
  AttractorSet out;
  std::string body(text);
  std::size_t start = 0;
  auto trim = [](std::string& s) {
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
  };
  while (start <= body.size()) {
    auto end = body.find(';', start);
    std::string entry = body.substr(
        start, end == std::string::npos ? std::string::npos : end - start);
    trim(entry);
    if (!entry.empty()) {
      if (entry.rfind("fix ", 0) == 0) {
        auto w = Word::parse(entry.substr(4));
        if (!w) return std::nullopt;
        out.cycles.push_back({*w});
      } else if (entry.rfind("fam ", 0) == 0) {
        auto f = Family::parse(entry.substr(4));
        if (!f) return std::nullopt;
        out.fixed_families.push_back(f->family);
      } else if (entry.rfind("cycle ", 0) == 0) {
        std::vector<Word> cyc;
        std::string rest = entry.substr(6);
        std::size_t p = 0;
        while (p <= rest.size()) {
          auto arrow = rest.find("->", p);
          std::string part = rest.substr(
              p, arrow == std::string::npos ? std::string::npos : arrow - p);
          trim(part);
          auto w = Word::parse(part);
          if (!w) return std::nullopt;
          cyc.push_back(*w);
          if (arrow == std::string::npos) break;
          p = arrow + 2;
        }
        if (cyc.empty()) return std::nullopt;
        out.cycles.push_back(std::move(cyc));
      } else {
        return std::nullopt;
      }
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

std::optional<AttractorSet> compute_attractor(const VirtualEndomorphism& ve,
                                              const NucleusSet& nucleus,
                                              const AttractorOptions& opts,
                                              std::string* error) {
  AttractorSet out;
  std::set<std::string> cycle_keys;
  const Word a = "a"_w;

  // Families first: a family whose every instance is a phibar fixed point
  // absorbs those instances, the published "alpha beta^n"-style rows.
  for (const Family& f : nucleus.families()) {
    for (const Word& pre : {Word{}, a}) {
      Family cand(pre * f.prefix(), f.base(), f.suffix(), f.domain());
      int step = cand.domain() == ExponentDomain::all ? 1 : 2;
      int n0 = cand.domain() == ExponentDomain::odd ? 1 : 0;
      bool fixed = true;
      for (int k = -opts.window; k <= opts.window && fixed; ++k) {
        Word inst = cand.instantiate(n0 + step * k);
        if (phibar(ve, inst) != inst) fixed = false;
      }
      if (fixed) {
        for (int k : {-opts.verify_exponent, opts.verify_exponent}) {
          Word inst = cand.instantiate(n0 + step * k);
          if (phibar(ve, inst) != inst) {
            if (error)
              *error = "family fixation failed verification: " + cand.str();
            return std::nullopt;
          }
        }
        bool dup = false;
        for (const Family& g : out.fixed_families) {
          if (g.same_set(cand)) dup = true;
        }
        if (!dup) out.fixed_families.push_back(cand);
      }
    }
  }

  auto in_fixed_family = [&](const Word& w) {
    for (const Family& g : out.fixed_families) {
      if (g.match(w)) return true;
    }
    return false;
  };

  // Concrete members of N and a*N, plus sampled family instances whose
  // orbits drain into concrete cycles.
  std::vector<Word> starts;
  for (const Word& w : nucleus.words()) {
    starts.push_back(w);
    starts.push_back(a * w);
  }
  starts.push_back(Word{});
  starts.push_back(a);
  for (const Family& f : nucleus.families()) {
    int step = f.domain() == ExponentDomain::all ? 1 : 2;
    int n0 = f.domain() == ExponentDomain::odd ? 1 : 0;
    for (int k = -opts.window; k <= opts.window; ++k) {
      starts.push_back(f.instantiate(n0 + step * k));
      starts.push_back(a * f.instantiate(n0 + step * k));
    }
  }
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  for (const Word& w : starts) {
    int cap = opts.orbit_cap_scale * static_cast<int>(w.size()) +
              opts.orbit_cap_base;
    auto orbit = phibar_orbit(ve, w, cap);
    if (!orbit) {
      if (error) *error = "phibar orbit of " + w.str() + " exceeded cap";
      return std::nullopt;
    }
    // Periodic elements inside a fixed family stay with the family.
    bool family_cycle = false;
    for (const Word& c : orbit->cycle) {
      if (in_fixed_family(c)) family_cycle = true;
    }
    if (family_cycle) continue;
    auto canon = rotate_canonical(orbit->cycle);
    std::string key;
    for (const Word& x : canon) key += x.str() + "|";
    if (cycle_keys.insert(key).second) out.cycles.push_back(canon);
  }

  std::sort(out.cycles.begin(), out.cycles.end());
  return out;
}

std::string TwistLabel::str() const {
  std::ostringstream os;
  if (kind == Kind::family) {
    os << "family " << family->str() << " at n=" << exponent;
  } else if (cycle.size() == 1) {
    os << "fixed point " << cycle[0].str();
  } else {
    os << "cycle ";
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i) os << " -> ";
      os << cycle[i].str();
    }
  }
  return os.str();
}

std::optional<TwistLabel> twist_solve(const VirtualEndomorphism& ve,
                                      const AttractorSet& attractor,
                                      const Word& h, const Word& prefix,
                                      const AttractorOptions& opts) {
  Word start = prefix * h;
  int cap = opts.orbit_cap_scale * static_cast<int>(start.size()) +
            opts.orbit_cap_base;
  TwistLabel label;
  Word cur = start;
  label.trace.push_back(cur);
  for (int i = 0; i <= cap; ++i) {
    for (const Family& f : attractor.fixed_families) {
      if (auto n = f.match(cur)) {
        label.kind = TwistLabel::Kind::family;
        label.family = f;
        label.exponent = *n;
        return label;
      }
    }
    for (const auto& c : attractor.cycles) {
      auto it = std::find(c.begin(), c.end(), cur);
      if (it != c.end()) {
        label.kind = TwistLabel::Kind::cycle;
        std::vector<Word> rot(c.begin(), c.end());
        std::rotate(rot.begin(), rot.begin() + (it - c.begin()), rot.end());
        label.cycle = rot;
        return label;
      }
    }
    cur = phibar(ve, cur);
    label.trace.push_back(cur);
  }
  return std::nullopt;
}

bool equivalence_identity_check(const WreathRecursion& rec, const Word& u,
                                const Word& v) {
  Sections s = sections(rec, u);
  return !s.swaps && s.s1 == v && s.s2 == v;
}

}  // namespace q4
