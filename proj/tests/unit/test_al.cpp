#include <doctest.h>

#include <cmath>
#include <memory>

#include "../support/oracles.hpp"
#include "cgal/al.hpp"
#include "cgal/lmo.hpp"
#include "cgal/problems.hpp"

using namespace cgal;

namespace {

// f = 0 on the box [-2, 2]^n with one affine constraint <a, x> - b.
ProblemInstance affine_problem(Vec a, double b) {
  const std::size_t n = a.size();
  ProblemInstance p;
  p.f = std::make_shared<LambdaFn>(
      n, [](std::span<const double>) { return 0.0; },
      [](std::span<const double>, std::span<double> g) { std::fill(g.begin(), g.end(), 0.0); }, 0.0);
  p.lf = 0.0;
  const double bound = norm2(a);
  p.constraints.g.push_back(std::make_shared<AffineFn>(std::move(a), b));
  p.constraints.grad_bounds.push_back(bound);
  p.constraints.lip_consts.push_back(0.0);
  p.set = std::make_shared<Box>(Vec(n, -2.0), Vec(n, 2.0));
  return p;
}

}  // namespace

TEST_CASE("psi_scalar branch values") {
  CHECK(psi_scalar(1, 0, 0) == 0.0);
  CHECK(psi_scalar(2, 1, 1) == 2.0);
  CHECK(psi_scalar(2, -1, 1) == -0.25);
  CHECK_THROWS(psi_scalar(0, 1, 1));
  CHECK_THROWS(psi_scalar(1, std::nan(""), 1));
}

TEST_CASE("psi_scalar is continuous across the branch switch") {
  for (double t : {0.5, 1.0, 7.0}) {
    for (double v : {0.0, 0.3, 4.0}) {
      const double u0 = -v / t;
      CHECK(psi_scalar(t, u0 + 1e-12, v) == doctest::Approx(psi_scalar(t, u0 - 1e-12, v)).epsilon(1e-9));
      CHECK(psi_scalar(t, 0.37, v) == doctest::Approx(oracle::psi(t, 0.37, v)));
    }
  }
}

TEST_CASE("aggregate penalty on hand examples") {
  const ProblemInstance p = affine_problem(Vec{1.0, 0.0}, 0.5);  // g(x) = x0 - 0.5
  const Vec x{1.0, 0.0};                                         // g = 0.5
  CHECK(psi_aggregate(p, x, Vec{1.0}, 2.0) == doctest::Approx(0.75));

  ProblemInstance none = p;
  none.constraints = {};
  CHECK(psi_aggregate(none, x, Vec{}, 2.0) == 0.0);
}

TEST_CASE("grad_psi hand examples") {
  const ProblemInstance p = affine_problem(Vec{2.0, -1.0}, 0.5);
  const Vec x{1.0, 0.5};  // <a, x> = 1.5 > 0.5
  const Vec g = grad_psi(p, x, Vec{0.0}, 1.0);
  CHECK(g[0] == doctest::Approx(2.0 * 1.0));
  CHECK(g[1] == doctest::Approx(-1.0 * 1.0));

  const Vec inactive{-1.0, 0.0};  // <a, x> - b = -2.5, lambda g + z = -2.5 + 1 < 0
  const Vec g0 = grad_psi(p, inactive, Vec{1.0}, 1.0);
  CHECK(g0 == Vec{0.0, 0.0});
}

TEST_CASE("grad_psi matches central differences on a generated instance") {
  const ProblemInstance p = gen_qcqp(6, 2, 3);
  Xoshiro256ss rng(17);
  for (int t = 0; t < 20; ++t) {
    const Vec x = p.set->sample(rng);
    const Vec z{rng.uniform(0, 5), rng.uniform(0, 5)};
    const double lambda = rng.uniform(0.5, 30);
    const Vec fd = oracle::central_difference([&](std::span<const double> y) { return psi_aggregate(p, y, z, lambda); }, x);
    const Vec g = grad_psi(p, x, z, lambda);
    CHECK(oracle::l2_diff(fd, g) <= 1e-6 * std::max(oracle::l2(g), 1.0));
  }
}

TEST_CASE("lipschitz_psi with every hinge inactive is lambda times the sum of B_i squared") {
  const ProblemInstance p = affine_problem(Vec{3.0, 4.0}, 100.0);
  CHECK(lipschitz_psi(p, Vec{0.0, 0.0}, Vec{0.0}, 2.0) == doctest::Approx(2.0 * 25.0));
}

TEST_CASE("lipschitz_psi grows at most linearly in lambda") {
  const ProblemInstance p = gen_qcqp(5, 2, 4);
  Xoshiro256ss rng(5);
  const Vec z{3.0, 1.0};
  double worst = 0;
  for (double lambda : {1e1, 1e2, 1e3, 1e4, 1e5}) {
    for (int t = 0; t < 20; ++t) {
      const Vec x = p.set->sample(rng);
      worst = std::max(worst, lipschitz_psi(p, x, z, lambda) / lambda);
    }
  }
  double cap = 0;
  for (std::size_t i = 0; i < p.num_constraints(); ++i) cap += p.constraints.grad_bounds[i] * p.constraints.grad_bounds[i] + 100.0;
  CHECK(worst < cap);
}

TEST_CASE("al_eval agrees with separate evaluations") {
  const ProblemInstance p = gen_qcqp(5, 2, 2);
  Xoshiro256ss rng(8);
  for (int t = 0; t < 50; ++t) {
    const Vec x = p.set->sample(rng);
    const Vec z{rng.uniform(0, 10), rng.uniform(0, 10)};
    const double lambda = rng.uniform(0.1, 100);
    const AlEvaluation ev = al_eval(p, x, z, lambda);
    const double expect = p.f->value(x) + psi_aggregate(p, x, z, lambda);
    CHECK(std::abs(ev.al_value - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
    CHECK(ev.lip_estimate == doctest::Approx(lipschitz_psi(p, x, z, lambda)).epsilon(1e-13));
  }
}

TEST_CASE("al_eval without constraints reduces to the objective") {
  ProblemInstance p = gen_qcqp(4, 1, 1);
  p.constraints = {};
  const Vec x = *p.set->barycenter();
  const AlEvaluation ev = al_eval(p, x, Vec{}, 3.0);
  Vec g(x.size());
  p.f->gradient(x, g);
  CHECK(ev.al_value == p.f->value(x));
  CHECK(ev.grad_F == g);
  CHECK(ev.lip_estimate == 0.0);
}

TEST_CASE("al_eval names the constraint that went non-finite") {
  ProblemInstance p = affine_problem(Vec{1.0}, 0.0);
  p.constraints.g[0] = std::make_shared<LambdaFn>(
      1, [](std::span<const double>) { return std::numeric_limits<double>::infinity(); },
      [](std::span<const double>, std::span<double> g) { g[0] = 1.0; }, 0.0);
  CHECK_THROWS_AS(al_eval(p, Vec{0.0}, Vec{0.0}, 1.0), NumericalAbort);
}
