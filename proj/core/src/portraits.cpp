#include "q4/portraits.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace q4 {

namespace {

// Symbol indices for the composite bookkeeping.
//   0: "0", 1: "1", 2: "inf", 3: "x" (free critical point), 4: "bullet"
constexpr int kZero = 0, kOne = 1, kInf = 2, kX = 3, kBullet = 4;
constexpr int kNone = -1;

const char* symbol_name(int s) {
  switch (s) {
    case kZero: return "0";
    case kOne: return "1";
    case kInf: return "inf";
    case kX: return "x";
    case kBullet: return "*";
  }
  return "?";
}

// Permutation of the five symbols induced by M_{bullet,slot}.
std::array<int, 5> mobius_perm(int slot) {
  std::array<int, 5> p{kZero, kOne, kInf, kX, kBullet};
  switch (slot) {
    case 0: std::swap(p[kBullet], p[kZero]); std::swap(p[kOne], p[kInf]); break;
    case 1: std::swap(p[kBullet], p[kOne]); std::swap(p[kZero], p[kInf]); break;
    case 2: std::swap(p[kBullet], p[kInf]); std::swap(p[kZero], p[kOne]); break;
  }
  return p;
}

struct SymbolMap {
  std::array<int, 5> image;
  std::array<int, 5> deg;
};

std::optional<SymbolMap> symbol_map(const PortraitFamilySpec& spec,
                                    std::string* error) {
  const BaseMap* base = nullptr;
  for (const BaseMap& m : base_maps()) {
    if (m.name == spec.gmap) base = &m;
  }
  if (!base) {
    if (error) *error = "unknown base map: " + spec.gmap;
    return std::nullopt;
  }
  if (spec.slot < 0 || spec.slot > 2) {
    if (error) *error = "slot must be 0, 1 or 2";
    return std::nullopt;
  }
  auto perm = mobius_perm(spec.slot);
  SymbolMap out;
  for (int v = 0; v < 5; ++v) {
    out.image[v] = base->image[v] == kNone ? kNone : perm[base->image[v]];
    out.deg[v] = base->deg[v];
  }
  return out;
}

std::optional<Portrait> restrict_to_zf(const SymbolMap& m, std::string* error) {
  // Critical points, then the postcritical closure.
  std::vector<int> critical;
  for (int v = 0; v < 5; ++v) {
    if (m.image[v] != kNone && m.deg[v] == 2) critical.push_back(v);
  }
  bool in_p[5] = {false, false, false, false, false};
  for (int c : critical) {
    int v = m.image[c];
    while (!in_p[v]) {
      in_p[v] = true;
      v = m.image[v];
    }
  }
  int pcount = 0;
  for (int v = 0; v < 5; ++v) pcount += in_p[v];
  if (pcount != 4) {
    if (error) {
      std::ostringstream os;
      os << "composite has " << pcount << " postcritical points, not 4";
      *error = os.str();
    }
    return std::nullopt;
  }
  bool in_z[5];
  for (int v = 0; v < 5; ++v) in_z[v] = in_p[v];
  for (int c : critical) in_z[c] = true;

  Portrait p;
  int index[5];
  for (int v = 0; v < 5; ++v) {
    index[v] = in_z[v] ? static_cast<int>(p.labels.size()) : kNone;
    if (in_z[v]) p.labels.push_back(symbol_name(v));
  }
  for (int v = 0; v < 5; ++v) {
    if (!in_z[v]) continue;
    p.next.push_back(index[m.image[v]]);
    p.degree.push_back(m.deg[v]);
  }
  return p;
}

}  // namespace

const std::vector<BaseMap>& base_maps() {
  // Images over {0, 1, inf, x, bullet}; the bullet is a formal fixed point.
  static const std::vector<BaseMap> maps = {
      // one critical postcritical point: critical set {x, inf}
      {"(1-2z)^2", {kOne, kOne, kInf, kZero, kBullet}, {1, 1, 2, 2, 1}, true},
      {"1/(1-(1-2z)^2)", {kInf, kInf, kZero, kOne, kBullet}, {1, 1, 2, 2, 1}, true},
      {"1-1/(1-2z)^2", {kZero, kZero, kOne, kInf, kBullet}, {1, 1, 2, 2, 1}, true},
      // two critical postcritical points: critical set {0, inf}; no x
      {"z^2", {kZero, kOne, kInf, kNone, kBullet}, {2, 1, 2, 0, 1}, false},
      {"1-z^2", {kOne, kZero, kInf, kNone, kBullet}, {2, 1, 2, 0, 1}, false},
      {"1/z^2", {kInf, kOne, kZero, kNone, kBullet}, {2, 1, 2, 0, 1}, false},
      {"1/(1-z^2)", {kOne, kInf, kZero, kNone, kBullet}, {2, 1, 2, 0, 1}, false},
  };
  return maps;
}

std::string Portrait::str() const {
  std::ostringstream os;
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (v) os << "; ";
    os << labels[v] << " -" << degree[v] << "-> " << labels[next[v]];
  }
  return os.str();
}

bool portraits_equivalent(const Portrait& p, const Portrait& q) {
  if (p.size() != q.size()) return false;
  std::vector<int> sigma(p.size());
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    bool ok = true;
    for (std::size_t v = 0; v < p.size() && ok; ++v) {
      if (p.degree[v] != q.degree[sigma[v]]) ok = false;
      else if (sigma[p.next[v]] != q.next[sigma[v]]) ok = false;
    }
    if (ok) return true;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return false;
}

std::optional<Portrait> compose_portrait(const PortraitFamilySpec& spec,
                                         std::string* error) {
  auto m = symbol_map(spec, error);
  if (!m) return std::nullopt;
  return restrict_to_zf(*m, error);
}

EnumerationResult enumerate_q4() {
  EnumerationResult out;
  // Row orders follow the source tables (the group action below permutes
  // rows cyclically only in this order).
  const PortraitFamilySpec one_rows[] = {
      {"(1-2z)^2", 0},        {"(1-2z)^2", 1},        {"(1-2z)^2", 2},
      {"1/(1-(1-2z)^2)", 1},  {"1/(1-(1-2z)^2)", 2},  {"1/(1-(1-2z)^2)", 0},
      {"1-1/(1-2z)^2", 2},    {"1-1/(1-2z)^2", 0},    {"1-1/(1-2z)^2", 1},
  };
  for (const auto& spec : one_rows) {
    auto p = compose_portrait(spec);
    if (p) out.one_critical.push_back(*p);
  }
  const PortraitFamilySpec two_rows[] = {
      {"z^2", 2}, {"1-z^2", 1}, {"1/z^2", 0}, {"1/(1-z^2)", 1}};
  for (const auto& spec : two_rows) {
    auto p = compose_portrait(spec);
    if (p) out.two_critical.push_back(*p);
  }
  return out;
}

bool postcompose_action_check(std::string* detail) {
  EnumerationResult rows = enumerate_q4();
  if (rows.one_critical.size() != 9 || rows.two_critical.size() != 4) {
    if (detail) *detail = "enumeration incomplete";
    return false;
  }

  // (0 1 inf) acting on the one-critical rows: i -> i + 3 mod 9.
  const PortraitFamilySpec one_rows[] = {
      {"(1-2z)^2", 0},        {"(1-2z)^2", 1},        {"(1-2z)^2", 2},
      {"1/(1-(1-2z)^2)", 1},  {"1/(1-(1-2z)^2)", 2},  {"1/(1-(1-2z)^2)", 0},
      {"1-1/(1-2z)^2", 2},    {"1-1/(1-2z)^2", 0},    {"1-1/(1-2z)^2", 1},
  };
  auto rotate3 = [](const SymbolMap& m) {
    // postcompose with the Moebius map inducing 0 -> 1 -> inf -> 0
    std::array<int, 5> n{kOne, kInf, kZero, kX, kBullet};
    SymbolMap out = m;
    for (int v = 0; v < 5; ++v) {
      if (m.image[v] != kNone) out.image[v] = n[m.image[v]];
    }
    return out;
  };
  for (int i = 0; i < 9; ++i) {
    auto m = symbol_map(one_rows[i], nullptr);
    auto acted = restrict_to_zf(rotate3(*m), nullptr);
    if (!acted || !portraits_equivalent(*acted, rows.one_critical[(i + 3) % 9])) {
      if (detail) {
        std::ostringstream os;
        os << "one-critical action failed at row " << i + 1;
        *detail = os.str();
      }
      return false;
    }
    // three applications return to the row itself
    auto thrice = restrict_to_zf(rotate3(rotate3(rotate3(*m))), nullptr);
    if (!thrice || !portraits_equivalent(*thrice, rows.one_critical[i])) {
      if (detail) *detail = "three-fold action is not the identity";
      return false;
    }
  }

  // (0 inf) acting on the two-critical rows: i -> i + 2 mod 4.
  const PortraitFamilySpec two_rows[] = {
      {"z^2", 2}, {"1-z^2", 1}, {"1/z^2", 0}, {"1/(1-z^2)", 1}};
  auto swap0inf = [](const SymbolMap& m) {
    std::array<int, 5> n{kInf, kOne, kZero, kX, kBullet};
    SymbolMap out = m;
    for (int v = 0; v < 5; ++v) {
      if (m.image[v] != kNone) out.image[v] = n[m.image[v]];
    }
    return out;
  };
  for (int i = 0; i < 4; ++i) {
    auto m = symbol_map(two_rows[i], nullptr);
    auto acted = restrict_to_zf(swap0inf(*m), nullptr);
    if (!acted || !portraits_equivalent(*acted, rows.two_critical[(i + 2) % 4])) {
      if (detail) {
        std::ostringstream os;
        os << "two-critical action failed at row " << i + 1;
        *detail = os.str();
      }
      return false;
    }
    auto twice = restrict_to_zf(swap0inf(swap0inf(*m)), nullptr);
    if (!twice || !portraits_equivalent(*twice, rows.two_critical[i])) {
      if (detail) *detail = "two-fold action is not the identity";
      return false;
    }
  }
  return true;
}

}  // namespace q4
