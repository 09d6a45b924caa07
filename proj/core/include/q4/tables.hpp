#pragma once

#include <optional>
#include <string>
#include <vector>

#include "q4/curves.hpp"
#include "q4/moduli.hpp"
#include "q4/nucleus.hpp"
#include "q4/portraits.hpp"
#include "q4/twist.hpp"
#include "q4/wreath.hpp"

namespace q4 {

// One row of the recursion/nucleus table, keyed by a stable id.
struct TableRow {
  std::string id;
  std::string gmap;
  std::string fixed_label;
  std::optional<Cplx> fixed_point;  // nullopt: the formal z^2 basepoint
  int seed = 0;                     // 0 {1,a,b}, 1 {1,a,g}, 2 {1,a,d}
  WreathRecursion recursion;
  NucleusSet nucleus;
  std::string nucleus_note;

  std::optional<AttractorSet> attractor;
  std::string attractor_note;

  bool fga_finite = true;
  std::vector<std::vector<std::string>> fga_cycles;     // curve labels
  std::vector<std::string> fga_patterns;                // infinite case
  std::string fga_note;
};

struct GMapFixedPoints {
  std::string gmap;
  std::vector<Cplx> finite;
  bool at_infinity = false;
};

struct ObstructedRecord {
  std::string gmap;
  int slot = 0;
  std::string bullet_label;
  Family twists;
  std::string attractor_row;
};

struct Fixtures {
  std::vector<TableRow> rows;                 // 14
  std::vector<GMapFixedPoints> fixed_points;  // 7
  std::vector<ObstructedRecord> obstructed;   // 8

  const TableRow* find(const std::string& id) const;
  std::vector<std::string> row_ids() const;
};

// Loads the fixture bundle from a data directory; throws std::runtime_error
// with file/line diagnostics on schema violations.
Fixtures load_fixtures(const std::string& dir);

// Locates the data directory: explicit argument, Q4_DATA_DIR environment
// variable, or the source-tree default baked in at build time.
std::string default_data_dir();

}  // namespace q4
