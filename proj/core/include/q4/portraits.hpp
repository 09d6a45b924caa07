#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace q4 {

// Ramification portrait: finite functional graph with local degrees.
struct Portrait {
  std::vector<std::string> labels;
  std::vector<int> next;    // vertex -> image vertex
  std::vector<int> degree;  // local degree, 1 or 2

  std::size_t size() const { return labels.size(); }
  std::string str() const;  // arrow list "v -d-> w"
};

bool portraits_equivalent(const Portrait& p, const Portrait& q);

// Base maps with two or three postcritical points, as combinatorial data
// on the symbols {0, 1, inf, x (= the extra critical point), bullet}.
struct BaseMap {
  std::string name;
  // images and degrees over symbol indices; see portraits.cpp for the
  // symbol table.
  std::array<int, 5> image;
  std::array<int, 5> deg;
  bool one_critical_postcritical;  // Q(3) with |P cap C| = 1
};

const std::vector<BaseMap>& base_maps();

struct PortraitFamilySpec {
  std::string gmap;  // base map name
  int slot;          // 0, 1 or 2 for bullet <-> {0, 1, inf}
};

// Portrait of M_{bullet,slot} composed with the base map, restricted to
// P union C of the composite. Fails when the composite does not have four
// postcritical points.
std::optional<Portrait> compose_portrait(const PortraitFamilySpec& spec,
                                         std::string* error = nullptr);

struct EnumerationResult {
  std::vector<Portrait> one_critical;  // 9, in table order
  std::vector<Portrait> two_critical;  // 4, in table order
  std::size_t total() const { return one_critical.size() + two_critical.size(); }
};
EnumerationResult enumerate_q4();

// Verifies both postcomposition actions: the 3-cycle Moebius sends
// one-critical row i to row i+3 mod 9, the 0<->inf transposition sends
// two-critical row i to row i+2 mod 4.
bool postcompose_action_check(std::string* detail = nullptr);

}  // namespace q4
