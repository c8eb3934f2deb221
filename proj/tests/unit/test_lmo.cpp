#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "cgal/lmo.hpp"

using namespace cgal;

TEST_CASE("assignment on 2x2 matrices") {
  const Vec anti{0, 1, 1, 0};
  CHECK(birkhoff_lmo(anti, 2) == Vec{1, 0, 0, 1});
  const Vec diag{1, 0, 0, 1};
  CHECK(birkhoff_lmo(diag, 2) == Vec{0, 1, 1, 0});
}

TEST_CASE("assignment ties resolve to the lowest column") {
  const Vec flat(9, 1.0);
  const auto s = solve_assignment(flat, 3);
  CHECK(s.permutation == std::vector<int>{0, 1, 2});
}

TEST_CASE("assignment matches enumeration on random 6x6 and 7x7 costs") {
  Xoshiro256ss rng(21);
  for (int n : {6, 7}) {
    for (int t = 0; t < (n == 6 ? 100 : 20); ++t) {
      Vec c(n * n);
      for (double& v : c) v = rng.uniform(-5, 5);
      const auto s = solve_assignment(c, n);
      const double best = oracle::brute_force_assignment(c, n);
      CHECK(s.cost == doctest::Approx(best).epsilon(1e-12));
      double recomputed = 0;
      for (int i = 0; i < n; ++i) recomputed += c[i * n + s.permutation[i]];
      CHECK(recomputed == doctest::Approx(s.cost).epsilon(1e-12));
    }
  }
}

TEST_CASE("assignment with integer costs and many ties") {
  Xoshiro256ss rng(4);
  for (int t = 0; t < 50; ++t) {
    Vec c(25);
    for (double& v : c) v = static_cast<double>(rng.below(3));
    CHECK(solve_assignment(c, 5).cost == oracle::brute_force_assignment(c, 5));
  }
}

TEST_CASE("l2 ball oracle") {
  CHECK(l2ball_lmo(Vec{1, 0, 0}, 1.0) == Vec{-1, 0, 0});
  CHECK(l2ball_lmo(Vec{0, 0}, 2.0) == Vec{0, 0});
  Xoshiro256ss rng(2);
  for (int t = 0; t < 100; ++t) {
    Vec c{rng.normal(), rng.normal(), rng.normal()};
    const double r = rng.uniform(0.1, 3);
    const Vec v = l2ball_lmo(c, r);
    CHECK(std::abs(dot(c, v) + r * norm2(c)) <= 1e-12 * (1 + r * norm2(c)));
  }
}

TEST_CASE("lp ball oracle identities") {
  Xoshiro256ss rng(6);
  for (int t = 0; t < 200; ++t) {
    Vec c{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
    const double r = rng.uniform(0.5, 2);
    const Vec v4 = lpball_lmo(c, r, 4.0);
    CHECK(norm_p(v4, 4.0) == doctest::Approx(r).epsilon(1e-10));
    CHECK(dot(c, v4) == doctest::Approx(-r * norm_p(c, 4.0 / 3.0)).epsilon(1e-10));
    const Vec v2 = lpball_lmo(c, r, 2.0);
    const Vec ref = l2ball_lmo(c, r);
    CHECK(oracle::l2_diff(v2, ref) < 1e-12);
  }
  CHECK_THROWS(lpball_lmo(Vec{0, 0}, 1.0, 3.0));
}

TEST_CASE("lp ball oracle is not beaten by a dense boundary scan") {
  Xoshiro256ss rng(10);
  const double p = 3.0;
  for (int t = 0; t < 5; ++t) {
    const Vec c{rng.normal(), rng.normal()};
    const double best = dot(c, lpball_lmo(c, 1.0, p));
    double scan = 1e300;
    for (int i = 0; i < 100000; ++i) {
      const double th = 2 * M_PI * i / 100000.0;
      Vec x{std::cos(th), std::sin(th)};
      const double s = norm_p(x, p);
      x[0] /= s;
      x[1] /= s;
      scan = std::min(scan, dot(c, x));
    }
    CHECK(scan >= best - 1e-4);
  }
}

TEST_CASE("simplex and box oracles") {
  CHECK(simplex_lmo(Vec{3, 1, 2}) == Vec{0, 1, 0});
  CHECK(simplex_lmo(Vec{1, 1}) == Vec{1, 0});
  CHECK(box_lmo(Vec{2, -3, 0}, Vec{-1, -1, -1}, Vec{1, 1, 1}) == Vec{-1, 1, 1});
}

TEST_CASE("birkhoff set geometry") {
  BirkhoffPolytope b(4);
  CHECK(b.diameter() == doctest::Approx(std::sqrt(8.0)));
  const Vec c = *b.barycenter();
  CHECK(b.contains(c));
  Xoshiro256ss rng(1);
  for (int t = 0; t < 20; ++t) CHECK(b.contains(b.sample(rng), 1e-9));
  // Two disjoint permutations are at distance sqrt(2n).
  const Vec id = birkhoff_lmo(Vec{-1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1}, 4);
  const Vec sh = birkhoff_lmo(Vec{0, -1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1, -1, 0, 0, 0}, 4);
  CHECK(oracle::l2_diff(id, sh) == doctest::Approx(b.diameter()));
}

TEST_CASE("uniform convexity witness") {
  for (double r : {0.5, 1.0, 3.0}) {
    L2Ball ball(3, r);
    const auto w = uniform_convexity_witness(ball, 10000, 7);
    CHECK(w.trials == 10000);
    CHECK(w.passed == w.trials);
  }
  BirkhoffPolytope b(3);
  const auto w = uniform_convexity_witness(b, 2000, 7, UniformConvexity{0.01, 2.0});
  CHECK(w.passed < w.trials);
}

TEST_CASE("witness inequality is tight when the two points coincide") {
  L2Ball ball(2, 1.0);
  const Vec u{0.3, -0.4};
  const Vec v = ball.lmo(u);
  double lhs = 0;
  for (int i = 0; i < 2; ++i) lhs += -u[i] * (v[i] - v[i]);
  CHECK(lhs == 0.0);
}
