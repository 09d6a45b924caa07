#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "q4/moduli.hpp"

#include <cmath>

using namespace q4;

namespace {

bool has_fixed_point(const FixedPoints& f, Cplx z, double tol = 1e-3) {
  for (Cplx w : f.finite) {
    if (std::abs(w - z) < tol) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("fixed points of all seven maps") {
  const double s5 = std::sqrt(5.0), s3 = std::sqrt(3.0);
  auto fp = [&](const char* label) { return fixed_points(find_gmap(label)->map); };

  auto f1 = fp("(1-2z)^2");
  CHECK(has_fixed_point(f1, Cplx(0.25, 0)));
  CHECK(has_fixed_point(f1, Cplx(1, 0)));
  CHECK(f1.at_infinity);

  auto f2 = fp("1/(1-(1-2z)^2)");
  CHECK(has_fixed_point(f2, Cplx(-0.419643, 0)));
  CHECK(has_fixed_point(f2, Cplx(0.709821, 0.303150)));
  CHECK(has_fixed_point(f2, Cplx(0.709821, -0.303150)));
  CHECK_FALSE(f2.at_infinity);

  auto f3 = fp("1-1/(1-2z)^2");
  CHECK(has_fixed_point(f3, Cplx(0, 0)));
  CHECK(has_fixed_point(f3, Cplx(1, 0.5)));
  CHECK(has_fixed_point(f3, Cplx(1, -0.5)));

  auto f4 = fp("z^2");
  CHECK(has_fixed_point(f4, Cplx(0, 0)));
  CHECK(has_fixed_point(f4, Cplx(1, 0)));
  CHECK(f4.at_infinity);

  auto f5 = fp("1-z^2");
  CHECK(has_fixed_point(f5, Cplx((-1 + s5) / 2, 0)));
  CHECK(has_fixed_point(f5, Cplx((-1 - s5) / 2, 0)));

  auto f6 = fp("1/z^2");
  CHECK(has_fixed_point(f6, Cplx(1, 0)));
  CHECK(has_fixed_point(f6, Cplx(-0.5, s3 / 2)));
  CHECK(has_fixed_point(f6, Cplx(-0.5, -s3 / 2)));

  auto f7 = fp("1/(1-z^2)");
  CHECK(has_fixed_point(f7, Cplx(-1.324718, 0)));
  CHECK(has_fixed_point(f7, Cplx(0.662359, 0.562280)));
  CHECK(has_fixed_point(f7, Cplx(0.662359, -0.562280)));

  // full-precision residuals
  for (const GMap& g : gmaps()) {
    for (Cplx z : fixed_points(g.map).finite) {
      CHECK(std::abs(g.map.eval(z) - z) < 1e-9);
    }
  }
}

TEST_CASE("mobius involutions") {
  Cplx bullet(0.25, 0);
  for (int slot = 0; slot < 3; ++slot) {
    auto m = mobius_from_spec(bullet, slot);
    REQUIRE(m.has_value());
    // involution: M(M(z)) = z on sample points
    for (Cplx z : {Cplx(0.3, 0.2), Cplx(-1.5, 0.7), Cplx(2, -3)}) {
      CHECK(std::abs(m->eval(m->eval(z)) - z) < 1e-9);
    }
  }
  // slot 0 swaps bullet <-> 0 and 1 <-> inf
  auto m0 = mobius_from_spec(bullet, 0);
  CHECK(std::abs(m0->eval(Cplx(0)) - bullet) < 1e-12);
  CHECK(std::abs(m0->eval(bullet)) < 1e-12);
  CHECK(std::abs(m0->eval_at_infinity() - Cplx(1)) < 1e-12);
  // slot 1: bullet <-> 1, 0 <-> inf
  auto m1 = mobius_from_spec(bullet, 1);
  CHECK(std::abs(m1->eval(Cplx(1)) - bullet) < 1e-12);
  CHECK(std::abs(m1->eval(bullet) - Cplx(1)) < 1e-12);
  // degenerate bullet rejected
  std::string err;
  CHECK_FALSE(mobius_from_spec(Cplx(0), 0, &err).has_value());
}

TEST_CASE("path lifting") {
  const GMap* z2 = find_gmap("z^2");
  // unit-ish loop around 0 lifts to a half loop: endpoints differ
  ComplexPath target = reference_alpha_loop();
  auto lift = lift_path(z2->map, target, Cplx(0.5, 0), LiftOptions{});
  REQUIRE(lift.has_value());
  CHECK(std::abs(lift->path.back() - Cplx(-0.5, 0)) < 1e-9);
  CHECK(lift->max_residual < 1e-9);

  // constant path at a fixed point lifts to itself
  const GMap* g1 = find_gmap("(1-2z)^2");
  ComplexPath constant{Cplx(0.25, 0), Cplx(0.25, 0)};
  auto lc = lift_path(g1->map, constant, Cplx(0.25, 0), LiftOptions{});
  REQUIRE(lc.has_value());
  CHECK(std::abs(lc->path.back() - Cplx(0.25, 0)) < 1e-12);

  // 1/z^2: lift of the transported alpha loop from a preimage of 4
  const GMap* iz2 = find_gmap("1/z^2");
  ComplexPath t2 = map_path(iz2->outer, reference_alpha_loop());
  Cplx start(0.5, 0);  // 1/start^2 = 4 = t2 head
  REQUIRE(std::abs(iz2->map.eval(start) - t2.front()) < 1e-6);
  auto l2 = lift_path(iz2->map, t2, start, LiftOptions{});
  REQUIRE(l2.has_value());
  CHECK(std::abs(iz2->map.eval(l2->path.back()) - t2.back()) < 1e-9);

  // bad start rejected
  std::string err;
  CHECK_FALSE(lift_path(z2->map, target, Cplx(3, 0), LiftOptions{}, &err)
                  .has_value());
}

TEST_CASE("loop decoding") {
  CHECK(*loop_to_word(reference_alpha_loop()) == "a"_w);
  CHECK(*loop_to_word(reference_beta_loop()) == "b"_w);
  CHECK(*loop_to_word(reversed_path(reference_alpha_loop())) == *Word::parse("A"));
  CHECK(*loop_to_word(reversed_path(reference_beta_loop())) == *Word::parse("B"));
  // composite loop: alpha then beta
  ComplexPath ab = join_paths({reference_alpha_loop(), reference_beta_loop()});
  CHECK(*loop_to_word(ab) == *Word::parse("ab"));
  // a contractible loop away from the cuts
  ComplexPath dot;
  for (int i = 0; i <= 64; ++i) {
    double t = 2 * 3.14159265358979 * i / 64;
    dot.push_back(Cplx(0.4, 0.5) + 0.05 * Cplx(std::cos(t), std::sin(t)));
  }
  CHECK(*loop_to_word(dot) == Word{});
  // big circle around both punctures, clockwise from 4i: gamma = b^-1 a^-1
  ComplexPath big;
  for (int i = 0; i <= 2048; ++i) {
    double t = 3.14159265358979 / 2 - 2 * 3.14159265358979 * i / 2048;
    big.push_back(4.0 * Cplx(std::cos(t), std::sin(t)));
  }
  CHECK(*loop_to_word(big) == kGamma);
}

TEST_CASE("connector routing") {
  // clear segment
  auto c1 = connector_path(Cplx(0.7, 0.3), Cplx(4.0 / 3.0, 0), 1e-3);
  REQUIRE(c1.has_value());
  // real route with a single detour at 0
  auto c2 = connector_path(Cplx(-1.618, 0), Cplx(0.75, 0), 1e-3);
  REQUIRE(c2.has_value());
  for (Cplx z : *c2) {
    CHECK(std::abs(z) > 0.9e-3);
    CHECK(std::abs(z - Cplx(1)) > 0.9e-3);
  }
  // route through infinity when the direct one passes both punctures
  auto c3 = connector_path(Cplx(-0.4196, 0), Cplx(4.0 / 3.0, 0), 1e-3);
  REQUIRE(c3.has_value());
  double biggest = 0;
  for (Cplx z : *c3) biggest = std::max(biggest, std::abs(z));
  CHECK(biggest > 100.0);  // really goes around the back
}

TEST_CASE("normalization example") {
  std::string detail;
  bool ok = moduli_normalization_check(&detail);
  if (!ok) MESSAGE(detail);
  CHECK(ok);
}

TEST_CASE("derived recursions match the table") {
  struct Case {
    const char* gmap;
    std::optional<Cplx> fp;
    const char* expect;
  };
  const Case cases[] = {
      {"(1-2z)^2", Cplx(0.25, 0), "a=<1,1>s b=<a,b>"},
      {"1/z^2", Cplx(-0.5, -std::sqrt(3.0) / 2), "a=<1,g>s b=<1,b>"},
      {"z^2", std::nullopt, "a=<1,a>s b=<b,1>"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.gmap);
    std::string err;
    auto res = derive_recursion(c.gmap, c.fp, DeriveOptions{}, &err);
    if (!res) MESSAGE("derive failed: ", err);
    REQUIRE(res.has_value());
    CHECK(res->max_residual < 1e-9);
    auto expect = WreathRecursion::parse(c.expect);
    REQUIRE(expect.has_value());
    if (!(res->recursion == *expect)) {
      MESSAGE("derived: ", res->recursion.str());
    }
    CHECK(res->recursion == *expect);
  }
}
