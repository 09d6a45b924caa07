#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "q4/tables.hpp"

#include <fstream>

using namespace q4;

TEST_CASE("fixture bundle loads") {
  Fixtures fx = load_fixtures(default_data_dir());
  CHECK(fx.rows.size() == 14);
  CHECK(fx.fixed_points.size() == 7);
  CHECK(fx.obstructed.size() == 8);

  const TableRow* anchor = fx.find("q4-1m2z-sq");
  REQUIRE(anchor != nullptr);
  CHECK(anchor->recursion == *WreathRecursion::parse("a=<1,1>s b=<a,b>"));
  CHECK(anchor->attractor.has_value());
  CHECK(anchor->fga_finite);

  const TableRow* zsq = fx.find("q4-z-sq");
  REQUIRE(zsq != nullptr);
  CHECK_FALSE(zsq->fixed_point.has_value());
  CHECK_FALSE(zsq->fga_finite);
  CHECK(zsq->fga_patterns.size() >= 6);

  // every recursion has a trivial first coordinate on the active generator
  for (const TableRow& r : fx.rows) {
    CHECK(r.recursion.a_swaps);
    CHECK(r.recursion.a1 == Word{});
  }

  // 7 attractor rows
  int with_attractor = 0;
  for (const TableRow& r : fx.rows) with_attractor += r.attractor.has_value();
  CHECK(with_attractor == 7);
}

TEST_CASE("schema violations are reported with location") {
  std::string dir = "/tmp/q4_bad_fixture";
  std::system(("mkdir -p " + dir).c_str());
  {
    std::ofstream out(dir + "/table4.txt");
    out << "only | three | fields\n";
  }
  try {
    load_fixtures(dir);
    FAIL("expected a schema error");
  } catch (const std::runtime_error& e) {
    std::string what = e.what();
    CHECK(what.find("table4.txt:1") != std::string::npos);
  }
  // empty file is also a schema error (row count)
  {
    std::ofstream out(dir + "/table4.txt");
  }
  try {
    load_fixtures(dir);
    FAIL("expected a row-count error");
  } catch (const std::runtime_error& e) {
    std::string what = e.what();
    CHECK(what.find("expected 14 rows") != std::string::npos);
  }
}

TEST_CASE("obstructed records point at attractor families") {
  Fixtures fx = load_fixtures(default_data_dir());
  for (const ObstructedRecord& rec : fx.obstructed) {
    const TableRow* row = fx.find(rec.attractor_row);
    REQUIRE(row != nullptr);
    REQUIRE(row->attractor.has_value());
    bool found = false;
    for (const Family& f : row->attractor->fixed_families) {
      if (f.same_set(rec.twists)) found = true;
    }
    CAPTURE(rec.gmap);
    CHECK(found);
  }
}
