#pragma once

#include <optional>
#include <string>
#include <vector>

#include "q4/config.hpp"
#include "q4/family.hpp"
#include "q4/wreath.hpp"

namespace q4 {

// Inversion-symmetric, restriction-closed set of words and Z-families.
// The identity is always a member and is not stored explicitly.
class NucleusSet {
public:
  const std::vector<Word>& words() const { return words_; }
  const std::vector<Family>& families() const { return families_; }

  bool contains(const Word& w) const;
  // Generic containment of a whole family (all but finitely many instances
  // would not do: every sampled instance must land in one matching family).
  bool contains_family(const Family& f) const;

  // Insertions keep inversion symmetry and dedupe semantically.
  void add_word(const Word& w);
  void add_family(const Family& f);

  // Drops words that some family already covers, sorts members.
  void canonicalize();

  bool same_set(const NucleusSet& rhs) const;
  std::size_t item_count() const { return words_.size() + families_.size(); }

  std::string str() const;

  // Parses "{1, a^n, b^n}" or "{1, a, b, d, bab^-1...}" style lists; entries
  // separated by commas or semicolons; inversion closure is applied.
  static std::optional<NucleusSet> parse(std::string_view text);

private:
  std::vector<Word> words_;
  std::vector<Family> families_;
};

// Element of the restriction flow: a word or a one-parameter family. The
// display string keeps the as-written form with its affine exponent label
// (e.g. "ab^n+1"); elt is the canonical set-level identity.
struct FlowNode {
  Element elt;
  std::string display;
  std::string str() const { return display.empty() ? elt.str() : display; }
};

// Out-of-nucleus restriction edge u -> v.
struct ChainEdge {
  FlowNode source;
  FlowNode target;
  std::string str() const;
};

struct ContractionReport {
  bool contracts = false;
  // Every element of N^2 lands in N after at most k restrictions.
  int k = 0;
  std::vector<ChainEdge> edges;
  // Out-of-N cycles (augmentation material). Families for pattern cycles.
  std::vector<Element> cycle_elements;
  bool window_exhausted = false;
  std::string str() const;
};

struct NucleusOptions {
  int window = 8;
  int verify_exponent = 12;
  int max_depth = 12;
  std::size_t state_bound = 10000;
  int max_rounds = 16;

  static NucleusOptions from(const Config& cfg) {
    return {cfg.family_window, cfg.verify_exponent, cfg.contraction_depth,
            cfg.state_bound, cfg.max_augment_rounds};
  }
};

// Closes seeds under restriction and inversion; self-restricting elements
// with trivial permutation are promoted to power families.
std::optional<NucleusSet> state_closure(const WreathRecursion& rec,
                                        const std::vector<Element>& seeds,
                                        const NucleusOptions& opts,
                                        std::string* error = nullptr);

ContractionReport contraction_check(const WreathRecursion& rec,
                                    const NucleusSet& nucleus,
                                    const NucleusOptions& opts);

// For each stored item (words first, then families): is it reachable from a
// cycle of the internal restriction graph? Items outside this set are held
// only by seeding, not by recurrence.
std::vector<bool> recurrent_reach(const WreathRecursion& rec,
                                  const NucleusSet& n);

struct NucleusResult {
  NucleusSet nucleus;
  ContractionReport report;
  int seed_index = 0;  // 0: {1,a,b}, 1: {1,a,g}, 2: {1,a,d}
  int rounds = 0;
  std::vector<std::string> notes;
};

// forced_seed picks the generating set by index (0: {1,a,b}, 1: {1,a,g},
// 2: {1,a,d}) the way the source tables fixed it per row; -1 selects
// automatically via the recurrence audit and the smallest-closure fallback.
std::optional<NucleusResult> compute_nucleus(const WreathRecursion& rec,
                                             const NucleusOptions& opts,
                                             std::string* error = nullptr,
                                             int forced_seed = -1);

}  // namespace q4
