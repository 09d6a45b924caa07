#include "q4/moduli.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace q4 {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInfThreshold = 1e12;

double chordal(Cplx a, Cplx b) {
  double na = std::norm(a), nb = std::norm(b);
  if (na > kInfThreshold * kInfThreshold && nb > kInfThreshold * kInfThreshold)
    return std::abs(1.0 / a - 1.0 / b);
  return std::abs(a - b) / std::sqrt((1.0 + na) * (1.0 + nb));
}

int poly_degree(const std::array<Cplx, 3>& c) {
  if (std::abs(c[2]) > 0) return 2;
  if (std::abs(c[1]) > 0) return 1;
  return 0;
}

Cplx horner(const std::array<Cplx, 3>& c, Cplx z) {
  return (c[2] * z + c[1]) * z + c[0];
}

std::vector<Cplx> solve_quadratic(Cplx c2, Cplx c1, Cplx c0) {
  std::vector<Cplx> roots;
  double scale = std::max({std::abs(c2), std::abs(c1), std::abs(c0)});
  if (scale == 0) return roots;
  if (std::abs(c2) < 1e-14 * scale) {
    if (std::abs(c1) > 1e-14 * scale) roots.push_back(-c0 / c1);
    return roots;
  }
  Cplx disc = std::sqrt(c1 * c1 - 4.0 * c2 * c0);
  // numerically stable split
  Cplx q = (std::real(std::conj(c1) * disc) >= 0) ? -0.5 * (c1 + disc)
                                                  : -0.5 * (c1 - disc);
  if (std::abs(q) > 0) {
    roots.push_back(q / c2);
    roots.push_back(c0 / q);
  } else {
    roots.push_back(Cplx(0));
    roots.push_back(Cplx(0));
  }
  return roots;
}

std::vector<Cplx> solve_cubic(Cplx c3, Cplx c2, Cplx c1, Cplx c0) {
  double scale = std::max({std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
  if (scale == 0) return {};
  if (std::abs(c3) < 1e-14 * scale) return solve_quadratic(c2, c1, c0);
  Cplx a = c2 / c3, b = c1 / c3, c = c0 / c3;
  // depressed form t^3 + p t + q with z = t - a/3
  Cplx p = b - a * a / 3.0;
  Cplx q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  Cplx shift = -a / 3.0;
  std::vector<Cplx> roots;
  Cplx inner = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  Cplx u3 = -q / 2.0 + inner;
  if (std::abs(u3) < 1e-18) u3 = -q / 2.0 - inner;
  if (std::abs(u3) < 1e-18) {
    // triple root of the depressed cubic
    for (int k = 0; k < 3; ++k) roots.push_back(shift);
    return roots;
  }
  Cplx u = std::pow(u3, 1.0 / 3.0);
  const Cplx omega(-0.5, std::sqrt(3.0) / 2.0);
  for (int k = 0; k < 3; ++k) {
    Cplx t = u - p / (3.0 * u);
    roots.push_back(t + shift);
    u *= omega;
  }
  return roots;
}

Cplx newton_polish(const std::array<Cplx, 3>& num, const std::array<Cplx, 3>& den,
                   Cplx w, Cplx z) {
  // refine a root of num(z) - w den(z)
  for (int i = 0; i < 4; ++i) {
    Cplx f = horner(num, z) - w * horner(den, z);
    Cplx df = (2.0 * num[2] * z + num[1]) - w * (2.0 * den[2] * z + den[1]);
    if (std::abs(df) < 1e-300) break;
    z -= f / df;
  }
  return z;
}

}  // namespace

Cplx RationalMap::eval(Cplx z) const {
  if (std::abs(z) > kInfThreshold) return eval_at_infinity();
  Cplx n = horner(num, z), d = horner(den, z);
  if (std::abs(d) < 1e-300) return Cplx(1e30, 0);
  return n / d;
}

Cplx RationalMap::eval_at_infinity() const {
  int dn = poly_degree(num), dd = poly_degree(den);
  if (dn > dd) return Cplx(1e30, 0);
  if (dn < dd) return Cplx(0, 0);
  return num[dn] / den[dd];
}

std::vector<Cplx> RationalMap::preimages(Cplx w) const {
  std::array<Cplx, 3> c;
  for (int i = 0; i < 3; ++i) c[i] = num[i] - w * den[i];
  auto roots = solve_quadratic(c[2], c[1], c[0]);
  for (Cplx& r : roots) r = newton_polish(num, den, w, r);
  return roots;
}

RationalMap RationalMap::compose(const RationalMap& inner) const {
  // this(inner(z)) where this is degree <= 1 in the numerator sense:
  // (p0 + p1 w)/(q0 + q1 w) with w = n(z)/d(z) gives
  // (p0 d + p1 n)/(q0 d + q1 n).
  assert(poly_degree(num) <= 1 && poly_degree(den) <= 1);
  RationalMap out;
  for (int i = 0; i < 3; ++i) {
    out.num[i] = num[0] * inner.den[i] + num[1] * inner.num[i];
    out.den[i] = den[0] * inner.den[i] + den[1] * inner.num[i];
  }
  return out;
}

RationalMap RationalMap::inverse_mobius() const {
  // (a z + b)/(c z + d) inverts to (d z - b)/(-c z + a)
  assert(poly_degree(num) <= 1 && poly_degree(den) <= 1);
  RationalMap out;
  out.num = {-num[0], den[0], 0};
  out.den = {num[1], -den[1], 0};
  return out;
}

int RationalMap::degree() const {
  return std::max(poly_degree(num), poly_degree(den));
}

const std::vector<GMap>& gmaps() {
  auto identity = RationalMap{{Cplx(0), Cplx(1), Cplx(0)}, {Cplx(1), Cplx(0), Cplx(0)}};
  auto inv_1mz = RationalMap{{Cplx(1), Cplx(0), Cplx(0)}, {Cplx(1), Cplx(-1), Cplx(0)}};   // 1/(1-z)
  auto one_m_invz = RationalMap{{Cplx(-1), Cplx(1), Cplx(0)}, {Cplx(0), Cplx(1), Cplx(0)}}; // 1-1/z
  auto one_mz = RationalMap{{Cplx(1), Cplx(-1), Cplx(0)}, {Cplx(1), Cplx(0), Cplx(0)}};    // 1-z
  auto invz = RationalMap{{Cplx(1), Cplx(0), Cplx(0)}, {Cplx(0), Cplx(1), Cplx(0)}};       // 1/z

  static const std::vector<GMap> maps = {
      {"(1-2z)^2",
       {{Cplx(1), Cplx(-4), Cplx(4)}, {Cplx(1), Cplx(0), Cplx(0)}},
       identity, false},
      {"1/(1-(1-2z)^2)",
       {{Cplx(1), Cplx(0), Cplx(0)}, {Cplx(0), Cplx(4), Cplx(-4)}},
       inv_1mz, false},
      {"1-1/(1-2z)^2",
       {{Cplx(0), Cplx(-4), Cplx(4)}, {Cplx(1), Cplx(-4), Cplx(4)}},
       one_m_invz, false},
      {"z^2",
       {{Cplx(0), Cplx(0), Cplx(1)}, {Cplx(1), Cplx(0), Cplx(0)}},
       identity, true},
      {"1-z^2",
       {{Cplx(1), Cplx(0), Cplx(-1)}, {Cplx(1), Cplx(0), Cplx(0)}},
       one_mz, false},
      {"1/z^2",
       {{Cplx(1), Cplx(0), Cplx(0)}, {Cplx(0), Cplx(0), Cplx(1)}},
       invz, false},
      {"1/(1-z^2)",
       {{Cplx(1), Cplx(0), Cplx(0)}, {Cplx(1), Cplx(0), Cplx(-1)}},
       inv_1mz, false},
  };
  return maps;
}

const GMap* find_gmap(const std::string& label) {
  for (const GMap& g : gmaps()) {
    if (g.label == label) return &g;
  }
  return nullptr;
}

std::optional<RationalMap> mobius_from_spec(Cplx bullet, int slot,
                                            std::string* error) {
  auto near = [](Cplx a, Cplx b) { return std::abs(a - b) < 1e-9; };
  if (near(bullet, Cplx(0)) || near(bullet, Cplx(1)) ||
      std::abs(bullet) > kInfThreshold) {
    if (error) *error = "bullet must avoid 0, 1, inf";
    return std::nullopt;
  }
  RationalMap m;
  switch (slot) {
    case 0:  // (bullet 0)(1 inf): (z - bullet)/(z - 1)
      m.num = {-bullet, Cplx(1), Cplx(0)};
      m.den = {Cplx(-1), Cplx(1), Cplx(0)};
      break;
    case 1:  // (bullet 1)(0 inf): bullet/z
      m.num = {bullet, Cplx(0), Cplx(0)};
      m.den = {Cplx(0), Cplx(1), Cplx(0)};
      break;
    case 2:  // (bullet inf)(0 1): bullet (z-1)/(z-bullet)
      m.num = {-bullet, bullet, Cplx(0)};
      m.den = {-bullet, Cplx(1), Cplx(0)};
      break;
    default:
      if (error) *error = "slot must be 0, 1 or 2";
      return std::nullopt;
  }
  return m;
}

FixedPoints fixed_points(const RationalMap& g, double collision_tol) {
  // num(z) - z den(z) = 0
  Cplx c0 = g.num[0];
  Cplx c1 = g.num[1] - g.den[0];
  Cplx c2 = g.num[2] - g.den[1];
  Cplx c3 = -g.den[2];
  FixedPoints out;
  auto roots = solve_cubic(c3, c2, c1, c0);
  for (Cplx& z : roots) {
    // polish on g(z) - z
    for (int i = 0; i < 6; ++i) {
      Cplx n = horner(g.num, z), d = horner(g.den, z);
      Cplx f = n - z * d;
      Cplx df = (2.0 * g.num[2] * z + g.num[1]) - d -
                z * (2.0 * g.den[2] * z + g.den[1]);
      if (std::abs(df) < 1e-300) break;
      z -= f / df;
    }
  }
  std::sort(roots.begin(), roots.end(), [](Cplx a, Cplx b) {
    if (std::real(a) != std::real(b)) return std::real(a) < std::real(b);
    return std::imag(a) < std::imag(b);
  });
  for (Cplx z : roots) {
    bool dup = false;
    for (Cplx seen : out.finite) {
      if (std::abs(seen - z) < collision_tol) dup = true;
    }
    if (!dup) out.finite.push_back(z);
  }
  out.at_infinity = poly_degree(g.num) > poly_degree(g.den);
  return out;
}

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

namespace {

ComplexPath circle_path(Cplx center, double radius, double theta0, double theta1,
                        int samples) {
  ComplexPath p;
  p.reserve(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    double t = theta0 + (theta1 - theta0) * i / samples;
    p.push_back(center + radius * Cplx(std::cos(t), std::sin(t)));
  }
  return p;
}

ComplexPath segment_path(Cplx a, Cplx b, int samples) {
  ComplexPath p;
  p.reserve(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    double t = static_cast<double>(i) / samples;
    p.push_back(a + (b - a) * t);
  }
  return p;
}

}  // namespace

ComplexPath reference_alpha_loop() {
  // positively oriented circle of radius 1/4 around 0, based at 1/4
  return circle_path(Cplx(0), 0.25, 0.0, 2.0 * kPi, 2048);
}

ComplexPath reference_beta_loop() {
  // positively oriented circle of radius 3/4 around 1, based at 1/4
  return circle_path(Cplx(1), 0.75, kPi, 3.0 * kPi, 2048);
}

ComplexPath map_path(const RationalMap& m, const ComplexPath& path) {
  // pointwise image with midpoint refinement in the source polyline
  ComplexPath out;
  if (path.empty()) return out;
  out.push_back(m.eval(path.front()));
  for (std::size_t i = 1; i < path.size(); ++i) {
    struct Piece { Cplx a, b; int depth; };
    std::vector<Piece> stack{{path[i - 1], path[i], 0}};
    while (!stack.empty()) {
      Piece p = stack.back();
      stack.pop_back();
      Cplx ia = m.eval(p.a), ib = m.eval(p.b);
      if (chordal(ia, ib) > 0.02 && p.depth < 16) {
        Cplx mid = 0.5 * (p.a + p.b);
        stack.push_back({mid, p.b, p.depth + 1});
        stack.push_back({p.a, mid, p.depth + 1});
      } else {
        out.push_back(ib);
      }
    }
  }
  return out;
}

ComplexPath join_paths(const std::vector<ComplexPath>& pieces) {
  ComplexPath out;
  for (const ComplexPath& p : pieces) {
    if (p.empty()) continue;
    std::size_t start = out.empty() ? 0 : 1;
    out.insert(out.end(), p.begin() + start, p.end());
  }
  return out;
}

ComplexPath reversed_path(ComplexPath path) {
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<ComplexPath> connector_path(Cplx z0, Cplx target, double margin,
                                          std::string* error) {
  auto seg_distance = [](Cplx a, Cplx b, Cplx p) {
    Cplx d = b - a;
    double len2 = std::norm(d);
    if (len2 == 0) return std::abs(p - a);
    double t = std::clamp(
        std::real(std::conj(d) * (p - a)) / len2, 0.0, 1.0);
    return std::abs(p - (a + t * d));
  };
  if (std::abs(z0 - target) < 1e-12) return ComplexPath{z0, target};
  if (seg_distance(z0, target, Cplx(0)) > margin &&
      seg_distance(z0, target, Cplx(1)) > margin) {
    return segment_path(z0, target, 1024);
  }

  // Real route with semicircular detours to the left of the traversal.
  if (std::abs(std::imag(z0)) > 1e-9 || std::abs(std::imag(target)) > 1e-9) {
    if (error) *error = "no clear segment and endpoints are not real";
    return std::nullopt;
  }
  double a = std::real(z0), b = std::real(target);
  auto inside = [&](double p) { return (p > std::min(a, b) + margin) &&
                                       (p < std::max(a, b) - margin); };
  int direct_hits = (inside(0.0) ? 1 : 0) + (inside(1.0) ? 1 : 0);
  auto outside = [&](double p) { return p < std::min(a, b) - margin ||
                                        p > std::max(a, b) + margin; };
  int thru_inf_hits = 1 + (outside(0.0) ? 1 : 0) + (outside(1.0) ? 1 : 0);

  auto real_walk = [&](double from, double to,
                       const std::vector<double>& punctures) {
    // straight real pieces with detours around each puncture
    double dir = to > from ? 1.0 : -1.0;
    std::vector<double> ps = punctures;
    std::sort(ps.begin(), ps.end());
    if (dir < 0) std::reverse(ps.begin(), ps.end());
    ComplexPath out{Cplx(from, 0)};
    double cur = from;
    for (double p : ps) {
      ComplexPath seg = segment_path(Cplx(cur, 0), Cplx(p - dir * margin, 0), 256);
      // left of travel: up when moving right, down when moving left
      double t0 = dir > 0 ? kPi : 0.0;
      double t1 = dir > 0 ? 0.0 : kPi;
      ComplexPath arc = circle_path(Cplx(p, 0), margin, t0, t1, 256);
      if (dir < 0) {
        // moving left: the left side is the lower half-plane
        arc = circle_path(Cplx(p, 0), margin, 0.0, -kPi, 256);
        arc.front() = Cplx(p + margin, 0);
        arc.back() = Cplx(p - margin, 0);
      }
      out = join_paths({out, seg, arc});
      cur = p + dir * margin;
    }
    out = join_paths({out, segment_path(Cplx(cur, 0), Cplx(to, 0), 256)});
    return out;
  };

  if (direct_hits == 1) {
    std::vector<double> ps;
    if (inside(0.0)) ps.push_back(0.0);
    if (inside(1.0)) ps.push_back(1.0);
    return real_walk(a, b, ps);
  }
  if (thru_inf_hits == 1) {
    // walk in the w = 1/z chart through w = 0
    double wa = 1.0 / a, wb = 1.0 / b;
    ComplexPath wpath = real_walk(wa, wb, {0.0});
    ComplexPath out;
    out.reserve(wpath.size());
    for (Cplx w : wpath) out.push_back(1.0 / w);
    out.front() = z0;
    out.back() = target;
    return out;
  }
  if (error) {
    *error = "no route from " + std::to_string(a) + " to " + std::to_string(b) +
             " passing exactly one of 0, 1, inf";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Lifting
// ---------------------------------------------------------------------------

std::optional<LiftResult> lift_path(const RationalMap& g,
                                    const ComplexPath& target, Cplx start,
                                    const LiftOptions& opts,
                                    std::string* error) {
  if (target.empty()) {
    if (error) *error = "empty target path";
    return std::nullopt;
  }
  {
    Cplx w0 = g.eval(start);
    if (chordal(w0, target.front()) > 1e-6) {
      if (error) *error = "start is not over the path head";
      return std::nullopt;
    }
  }
  LiftResult out;
  out.path.push_back(start);
  Cplx z = start;
  for (std::size_t i = 1; i < target.size(); ++i) {
    struct Piece { Cplx wa, wb; int depth; };
    std::vector<Piece> stack{{target[i - 1], target[i], 0}};
    while (!stack.empty()) {
      Piece p = stack.back();
      stack.pop_back();
      auto roots = g.preimages(p.wb);
      if (roots.empty()) {
        if (error) *error = "no preimage over a path sample";
        return std::nullopt;
      }
      std::sort(roots.begin(), roots.end(), [&](Cplx r1, Cplx r2) {
        return chordal(r1, z) < chordal(r2, z);
      });
      double d_best = chordal(roots[0], z);
      double d_next = roots.size() > 1 ? chordal(roots[1], z) : 1e9;
      bool ambiguous = roots.size() > 1 && d_next < 2.0 * d_best + opts.separation;
      bool jumpy = d_best > 0.1;
      if ((ambiguous || jumpy) && p.depth < 40) {
        Cplx mid = 0.5 * (p.wa + p.wb);
        stack.push_back({mid, p.wb, p.depth + 1});
        stack.push_back({p.wa, mid, p.depth + 1});
        continue;
      }
      if (ambiguous || jumpy) {
        if (error) {
          *error = "branch ambiguity near target sample " +
                   std::to_string(std::real(p.wb)) + "+" +
                   std::to_string(std::imag(p.wb)) + "i";
        }
        return std::nullopt;
      }
      z = roots[0];
      double res = std::abs(g.eval(z) - p.wb);
      out.max_residual = std::max(out.max_residual, res);
      out.path.push_back(z);
    }
  }
  if (out.max_residual > opts.residual_tol) {
    if (error) *error = "lift residual above tolerance";
    return std::nullopt;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Loop decoding
// ---------------------------------------------------------------------------

namespace {

constexpr double kAxisTol = 1e-11;
constexpr double kPunctureTol = 1e-4;

int axis_sign(Cplx z) {
  double im = std::imag(z);
  if (std::abs(z) > kInfThreshold) im = -std::imag(1.0 / z);  // chart sign flip
  if (im > kAxisTol) return 1;
  if (im < -kAxisTol) return -1;
  return 0;
}

// -1: I_-, 0: I_0, 1: I_+, -2: too close to a puncture
int interval_of(double x) {
  if (std::abs(x) < kPunctureTol || std::abs(x - 1.0) < kPunctureTol) return -2;
  if (x < 0) return -1;
  if (x < 1) return 0;
  return 1;
}

}  // namespace

std::optional<Word> loop_to_word(const ComplexPath& loop, std::string* error) {
  if (loop.size() < 2) return Word{};
  // Work on the circular sample list starting from a nonneutral sample.
  std::size_t n = loop.size() - 1;  // last sample repeats the first
  std::size_t first = 0;
  while (first < n && axis_sign(loop[first]) == 0) ++first;
  if (first == n) return Word{};  // entirely on the axis: contractible

  std::vector<Gen> letters;
  int prev_sign = axis_sign(loop[first]);
  // interval of the pending on-axis run; -3 means no run pending
  int run_interval = -3;

  auto emit = [&](int interval, bool downward) -> bool {
    if (interval == -2) {
      if (error) *error = "crossing too close to a puncture";
      return false;
    }
    if (interval == -1) letters.push_back(downward ? Gen::a : Gen::A);
    if (interval == 1) letters.push_back(downward ? Gen::B : Gen::b);
    return true;  // interval 0 contributes nothing
  };

  for (std::size_t k = 1; k <= n; ++k) {
    Cplx u = loop[(first + k - 1) % n];
    Cplx v = loop[(first + k) % n];
    int su = axis_sign(u), sv = axis_sign(v);
    if (sv == 0) {
      // entering or continuing an on-axis run
      double x = std::real(v);
      if (std::abs(v) > kInfThreshold) {
        if (error) *error = "on-axis sample at infinity";
        return std::nullopt;
      }
      int iv = interval_of(x);
      if (iv == -2) {
        if (error) *error = "on-axis sample too close to a puncture";
        return std::nullopt;
      }
      if (run_interval == -3) run_interval = iv;
      else if (run_interval != iv) {
        if (error) *error = "on-axis run spans a puncture";
        return std::nullopt;
      }
      continue;
    }
    if (run_interval != -3) {
      // leaving an on-axis run
      if (sv != prev_sign) {
        if (!emit(run_interval, sv < 0)) return std::nullopt;
      }
      run_interval = -3;
      prev_sign = sv;
      continue;
    }
    if (su != 0 && sv != su) {
      // transversal crossing between u and v
      double x;
      if (std::abs(u) > 10.0 || std::abs(v) > 10.0) {
        Cplx wu = 1.0 / u, wv = 1.0 / v;
        double t = std::imag(wu) / (std::imag(wu) - std::imag(wv));
        double wx = std::real(wu) + t * (std::real(wv) - std::real(wu));
        if (std::abs(wx) < 1e-9) {
          if (error) *error = "crossing at infinity";
          return std::nullopt;
        }
        x = 1.0 / wx;
      } else {
        double t = std::imag(u) / (std::imag(u) - std::imag(v));
        x = std::real(u) + t * (std::real(v) - std::real(u));
      }
      if (!emit(interval_of(x), sv < 0)) return std::nullopt;
      prev_sign = sv;
    }
  }
  return Word::from_letters(letters);
}

// ---------------------------------------------------------------------------
// Recursion derivation
// ---------------------------------------------------------------------------

std::optional<DeriveResult> derive_recursion(const std::string& gmap_label,
                                             std::optional<Cplx> fixed_point,
                                             const DeriveOptions& opts,
                                             std::string* error) {
  const GMap* gm = find_gmap(gmap_label);
  if (!gm) {
    if (error) *error = "unknown map label: " + gmap_label;
    return std::nullopt;
  }
  const RationalMap& g = gm->map;
  const RationalMap& outer = gm->outer;

  Cplx basepoint;
  Cplx p1, p2;
  ComplexPath ell1, ell2;  // fiber connectors
  ComplexPath conn;        // basepoint to outer(1/4)

  Cplx anchor = outer.eval(Cplx(0.25, 0));

  DeriveResult result;

  if (gm->formal_basepoint) {
    // z^2: basepoint 1/4, fiber {1/2, -1/2}, prescribed connectors.
    basepoint = Cplx(0.25, 0);
    p1 = Cplx(0.5, 0);
    p2 = Cplx(-0.5, 0);
    ell1 = segment_path(basepoint, p1, 512);
    ell2 = circle_path(Cplx(-0.125, 0), 0.375, 0.0, kPi, 1024);
    conn = ComplexPath{basepoint, basepoint};
  } else {
    if (!fixed_point) {
      if (error) *error = "this map needs a fixed-point basepoint";
      return std::nullopt;
    }
    // snap to the nearest true fixed point
    FixedPoints fps = fixed_points(g);
    std::optional<Cplx> snapped;
    for (Cplx z : fps.finite) {
      if (std::abs(z - *fixed_point) < opts.fixed_point_tol &&
          std::abs(z) > 1e-6 && std::abs(z - Cplx(1)) > 1e-6) {
        snapped = z;
      }
    }
    if (!snapped) {
      if (error) *error = "no fixed point near the requested value";
      return std::nullopt;
    }
    basepoint = *snapped;
    auto fiber = g.preimages(basepoint);
    if (fiber.size() != 2) {
      if (error) *error = "fiber is not two points";
      return std::nullopt;
    }
    if (std::abs(fiber[0] - basepoint) < std::abs(fiber[1] - basepoint)) {
      p1 = fiber[0];
      p2 = fiber[1];
    } else {
      p1 = fiber[1];
      p2 = fiber[0];
    }
    if (std::abs(p1 - basepoint) > 1e-8) {
      if (error) *error = "basepoint is not in its own fiber";
      return std::nullopt;
    }
    auto c = connector_path(basepoint, anchor, opts.detour_radius, error);
    if (!c) return std::nullopt;
    conn = *c;
  }
  result.basepoint = basepoint;
  result.other_fiber_point = p2;

  // Generators at the basepoint.
  ComplexPath alpha_loop = join_paths(
      {conn, map_path(outer, reference_alpha_loop()), reversed_path(conn)});
  ComplexPath beta_loop = join_paths(
      {conn, map_path(outer, reference_beta_loop()), reversed_path(conn)});

  // Fiber connectors: constant at the basepoint, and the alpha lift.
  if (!gm->formal_basepoint) {
    ell1 = ComplexPath{basepoint, basepoint};
    auto lift = lift_path(g, alpha_loop, basepoint, opts.lift, error);
    if (!lift) return std::nullopt;
    result.max_residual = std::max(result.max_residual, lift->max_residual);
    if (chordal(lift->path.back(), p2) > 1e-6) {
      if (error) *error = "alpha lift does not reach the other fiber point";
      return std::nullopt;
    }
    ell2 = lift->path;
    ell2.back() = p2;
  }

  const ComplexPath* ells[2] = {&ell1, &ell2};
  const Cplx pts[2] = {p1, p2};

  RationalMap outer_inv = outer.inverse_mobius();
  auto decode_at_base = [&](const ComplexPath& loop) -> std::optional<Word> {
    // express the loop in the transported generators: pull back through the
    // connector and the outer Moebius map, then decode over the cuts.
    ComplexPath shifted =
        join_paths({reversed_path(conn), loop, conn});
    ComplexPath back = map_path(outer_inv, shifted);
    return loop_to_word(back, error);
  };

  WreathRecursion rec;
  for (int which = 0; which < 2; ++which) {
    const ComplexPath& gen = which == 0 ? alpha_loop : beta_loop;
    Word w1, w2;
    bool swaps = false;
    for (int i = 0; i < 2; ++i) {
      auto lift = lift_path(g, gen, pts[i], opts.lift, error);
      if (!lift) return std::nullopt;
      result.max_residual = std::max(result.max_residual, lift->max_residual);
      Cplx end = lift->path.back();
      int j = chordal(end, p1) < chordal(end, p2) ? 0 : 1;
      if (chordal(end, pts[j]) > 1e-6) {
        if (error) *error = "lift endpoint is not a fiber point";
        return std::nullopt;
      }
      if (i == 0) swaps = (j == 1);
      ComplexPath loop =
          join_paths({*ells[i], lift->path, reversed_path(*ells[j])});
      auto word = decode_at_base(loop);
      if (!word) return std::nullopt;
      (i == 0 ? w1 : w2) = *word;
    }
    if (which == 0) {
      rec.a1 = w1;
      rec.a2 = w2;
      rec.a_swaps = swaps;
    } else {
      rec.b1 = w1;
      rec.b2 = w2;
      rec.b_swaps = swaps;
    }
  }
  result.recursion = rec;
  return result;
}

bool moduli_normalization_check(std::string* detail) {
  // f = M_{bullet,0} composed with 1/z^2 at bullet = (-1+sqrt3 i)/2 maps
  // the marked points as the 4-cycle 0 => 1 -> inf => bullet -> 0, with
  // the critical points at 0 and inf.
  Cplx bullet(-0.5, std::sqrt(3.0) / 2.0);
  auto m = mobius_from_spec(bullet, 0);
  if (!m) {
    if (detail) *detail = "Moebius construction failed";
    return false;
  }
  RationalMap f = m->compose(find_gmap("1/z^2")->map);
  auto fail = [&](const char* what) {
    if (detail) *detail = what;
    return false;
  };
  // f(0) = 1 with local degree 2: f(eps) - 1 scales like eps^2.
  Cplx d1 = f.eval(Cplx(1e-4, 0)) - Cplx(1);
  Cplx d2 = f.eval(Cplx(1e-2, 0)) - Cplx(1);
  if (std::abs(d1) > 1e-6 || std::abs(d1) / std::abs(d2) > 3e-4)
    return fail("0 is not a degree-2 point over 1");
  // f(1) = inf.
  if (std::abs(f.eval(Cplx(1, 0))) < 1e9) return fail("1 does not map to inf");
  // f(inf) = bullet with local degree 2 in the 1/z chart.
  Cplx e1 = f.eval(Cplx(1e4, 0)) - bullet;
  Cplx e2 = f.eval(Cplx(1e2, 0)) - bullet;
  if (std::abs(e1) > 1e-6 || std::abs(e1) / std::abs(e2) > 3e-4)
    return fail("inf is not a degree-2 point over bullet");
  // f(bullet) = 0.
  if (std::abs(f.eval(bullet)) > 1e-9) return fail("bullet does not map to 0");
  return true;
}

}  // namespace q4
