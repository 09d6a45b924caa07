#include "q4/tables.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace q4 {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

[[noreturn]] void fail(const std::string& file, int lineno, const std::string& what) {
  std::ostringstream os;
  os << file << ":" << lineno << ": " << what;
  throw std::runtime_error(os.str());
}

std::optional<Cplx> parse_complex(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) return std::nullopt;
  char* end = nullptr;
  std::string re = trim(text.substr(0, comma)), im = trim(text.substr(comma + 1));
  double r = std::strtod(re.c_str(), &end);
  if (end == re.c_str()) return std::nullopt;
  double i = std::strtod(im.c_str(), &end);
  if (end == im.c_str()) return std::nullopt;
  return Cplx(r, i);
}

int parse_seed(const std::string& s, const std::string& file, int lineno) {
  if (s == "ab") return 0;
  if (s == "ag") return 1;
  if (s == "ad") return 2;
  fail(file, lineno, "seed must be ab, ag or ad");
}

// Iterates data lines (comments and blanks skipped) of a required file.
template <typename Fn>
void for_each_record(const std::string& path, int expected_fields, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    auto fields = split(body, '|');
    if (static_cast<int>(fields.size()) != expected_fields) {
      std::ostringstream os;
      os << "expected " << expected_fields << " fields, got " << fields.size();
      fail(path, lineno, os.str());
    }
    fn(fields, lineno);
  }
}

std::vector<std::vector<std::string>> parse_fga_cycles(const std::string& text,
                                                       const std::string& file,
                                                       int lineno) {
  std::vector<std::vector<std::string>> out;
  for (const std::string& entry : split(text, ';')) {
    if (entry.empty()) continue;
    std::vector<std::string> cycle;
    // "x -> y -> z" or "x <-> y" or a single label
    std::string norm = entry;
    auto arrow2 = norm.find("<->");
    if (arrow2 != std::string::npos) {
      cycle.push_back(trim(norm.substr(0, arrow2)));
      cycle.push_back(trim(norm.substr(arrow2 + 3)));
    } else {
      std::size_t start = 0;
      for (;;) {
        auto arrow = norm.find("->", start);
        if (arrow == std::string::npos) {
          cycle.push_back(trim(norm.substr(start)));
          break;
        }
        cycle.push_back(trim(norm.substr(start, arrow - start)));
        start = arrow + 2;
      }
    }
    for (const std::string& label : cycle) {
      if (label != "o" && !CurveClass::parse(label))
        fail(file, lineno, "bad curve label: " + label);
    }
    out.push_back(std::move(cycle));
  }
  return out;
}

}  // namespace

const TableRow* Fixtures::find(const std::string& id) const {
  for (const TableRow& r : rows) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::vector<std::string> Fixtures::row_ids() const {
  std::vector<std::string> out;
  for (const TableRow& r : rows) out.push_back(r.id);
  return out;
}

Fixtures load_fixtures(const std::string& dir) {
  Fixtures fx;

  std::string t4 = dir + "/table4.txt";
  for_each_record(t4, 7, [&](const std::vector<std::string>& f, int lineno) {
    TableRow row;
    row.id = f[0];
    row.gmap = f[1];
    row.fixed_label = f[2];
    if (f[2] != "formal") {
      auto z = parse_complex(f[2]);
      if (!z) fail(t4, lineno, "bad fixed point: " + f[2]);
      row.fixed_point = z;
    }
    row.seed = parse_seed(f[3], t4, lineno);
    auto rec = WreathRecursion::parse(f[4]);
    if (!rec) fail(t4, lineno, "bad recursion: " + f[4]);
    row.recursion = *rec;
    auto nuc = NucleusSet::parse(f[5]);
    if (!nuc) fail(t4, lineno, "bad nucleus: " + f[5]);
    row.nucleus = *nuc;
    row.nucleus_note = f[6];
    if (!find_gmap(row.gmap)) fail(t4, lineno, "unknown gmap: " + row.gmap);
    fx.rows.push_back(std::move(row));
  });
  if (fx.rows.size() != 14)
    throw std::runtime_error(t4 + ": expected 14 rows, got " +
                             std::to_string(fx.rows.size()));

  std::string t5a = dir + "/table5_attractors.txt";
  int attractor_rows = 0;
  for_each_record(t5a, 3, [&](const std::vector<std::string>& f, int lineno) {
    TableRow* row = nullptr;
    for (TableRow& r : fx.rows) {
      if (r.id == f[0]) row = &r;
    }
    if (!row) fail(t5a, lineno, "unknown row id: " + f[0]);
    auto att = AttractorSet::parse(f[1]);
    if (!att) fail(t5a, lineno, "bad attractor: " + f[1]);
    row->attractor = att;
    row->attractor_note = f[2];
    ++attractor_rows;
  });
  if (attractor_rows != 7)
    throw std::runtime_error(t5a + ": expected 7 rows, got " +
                             std::to_string(attractor_rows));

  std::string t5f = dir + "/table5_fga.txt";
  int fga_rows = 0;
  for_each_record(t5f, 3, [&](const std::vector<std::string>& f, int lineno) {
    TableRow* row = nullptr;
    for (TableRow& r : fx.rows) {
      if (r.id == f[0]) row = &r;
    }
    if (!row) fail(t5f, lineno, "unknown row id: " + f[0]);
    std::string body = f[1];
    if (body.rfind("infinite:", 0) == 0) {
      row->fga_finite = false;
      for (const std::string& p : split(body.substr(9), ','))
        if (!p.empty()) row->fga_patterns.push_back(p);
    } else {
      row->fga_finite = true;
      row->fga_cycles = parse_fga_cycles(body, t5f, lineno);
    }
    row->fga_note = f[2];
    ++fga_rows;
  });
  if (fga_rows != 14)
    throw std::runtime_error(t5f + ": expected 14 rows, got " +
                             std::to_string(fga_rows));

  std::string t1 = dir + "/table1.txt";
  for_each_record(t1, 2, [&](const std::vector<std::string>& f, int lineno) {
    GMapFixedPoints rec;
    rec.gmap = f[0];
    if (!find_gmap(rec.gmap)) fail(t1, lineno, "unknown gmap: " + rec.gmap);
    for (const std::string& p : split(f[1], ';')) {
      if (p == "inf") {
        rec.at_infinity = true;
      } else {
        auto z = parse_complex(p);
        if (!z) fail(t1, lineno, "bad fixed point: " + p);
        rec.finite.push_back(*z);
      }
    }
    fx.fixed_points.push_back(std::move(rec));
  });
  if (fx.fixed_points.size() != 7)
    throw std::runtime_error(t1 + ": expected 7 rows");

  std::string t6 = dir + "/table6_obstructed.txt";
  for_each_record(t6, 5, [&](const std::vector<std::string>& f, int lineno) {
    auto fam = Family::parse(f[3]);
    if (!fam) fail(t6, lineno, "bad twist family: " + f[3]);
    ObstructedRecord rec{f[0], std::atoi(f[1].c_str()), f[2], fam->family, f[4]};
    if (!find_gmap(rec.gmap)) fail(t6, lineno, "unknown gmap: " + rec.gmap);
    bool known = false;
    for (const TableRow& r : fx.rows) {
      if (r.id == rec.attractor_row) known = true;
    }
    if (!known) fail(t6, lineno, "unknown attractor row: " + rec.attractor_row);
    fx.obstructed.push_back(std::move(rec));
  });
  if (fx.obstructed.size() != 8)
    throw std::runtime_error(t6 + ": expected 8 rows");

  return fx;
}

std::string default_data_dir() {
  if (const char* env = std::getenv("Q4_DATA_DIR")) return env;
#ifdef Q4_SOURCE_DATA_DIR
  return Q4_SOURCE_DATA_DIR;
#else
  return "data";
#endif
}

}  // namespace q4
