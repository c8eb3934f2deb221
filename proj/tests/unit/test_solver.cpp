#include <doctest.h>

#include <cmath>
#include <memory>

#include "../support/oracles.hpp"
#include "cgal/al.hpp"
#include "cgal/lmo.hpp"
#include "cgal/problems.hpp"
#include "cgal/solver.hpp"

using namespace cgal;

namespace {

// min ||x - (2,2)||^2 over [-5,5]^2 s.t. x0 + x1 <= 2, x0 <= 10.
// KKT point x* = (1,1), z* = (2, 0), L* = 2.
ProblemInstance kkt_problem() {
  ProblemInstance p;
  p.f = std::make_shared<QuadraticFn>(Matrix::identity(2), 1, Vec{2, 2}, Vec{}, 0.0, 2.0);
  p.lf = 2.0;
  p.constraints.g = {std::make_shared<AffineFn>(Vec{1, 1}, 2.0), std::make_shared<AffineFn>(Vec{1, 0}, 10.0)};
  p.constraints.grad_bounds = {std::sqrt(2.0), 1.0};
  p.constraints.lip_consts = {0.0, 0.0};
  p.set = std::make_shared<Box>(Vec{-5, -5}, Vec{5, 5});
  p.reference_value = 2.0;
  return p;
}

ProblemInstance unconstrained_ball(int n, std::uint64_t seed) { return gen_ball_qp(n, seed, false); }

}  // namespace

TEST_CASE("schedules follow their power laws") {
  PenaltySchedule pen{2.0, 0.5};
  CHECK(pen.at(3) == doctest::Approx(4.0));
  DualStepSchedule dual{1.0, 0.01};
  CHECK(dual.at(0, 100.0) == doctest::Approx(std::pow(2.0, -1.01)));
  CHECK(dual.at(0, 0.1) == 0.1);
  OpenLoopStep ol{1.0, 0.95};
  CHECK(ol.at(0) == 1.0);
  CHECK(ol.at(9) == doctest::Approx(std::pow(10.0, -0.95)));
  CHECK_THROWS(PenaltySchedule{1.0, 1.0}.validate());
  CHECK_THROWS(DualStepSchedule{0.0, 0.01}.validate());
}

TEST_CASE("warm-start prefactor ramps from 1020 to 1") {
  CHECK(warmstart_prefactor(0) == 1020.0);
  CHECK(warmstart_prefactor(900) == 1020.0);
  CHECK(warmstart_prefactor(950) == doctest::Approx(510.0));
  CHECK(warmstart_prefactor(1000) == doctest::Approx(1.0));
  CHECK(warmstart_prefactor(5000) == 1.0);
}

TEST_CASE("short step hand values") {
  CHECK(short_alpha(0, 0, 1) == 0.0);
  CHECK(short_alpha(4, 1, 2) == 1.0);
  CHECK(short_alpha(1, 4, 1) == 0.25);
  CHECK(short_alpha(1, 4, 1, 2.0) == 0.5);
  CHECK_THROWS(short_alpha(1, 1, 0));
}

TEST_CASE("dual update hand values") {
  CHECK(dual_update(Vec{0.0}, Vec{-3.0}, 0.5, 1.0) == Vec{0.0});
  CHECK(dual_update(Vec{2.0}, Vec{-10.0}, 1.0, 4.0)[0] == doctest::Approx(1.5));
  CHECK(dual_update(Vec{1.0}, Vec{0.2}, 0.5, 2.0)[0] == doctest::Approx(1.1));
  CHECK_THROWS(dual_update(Vec{1.0}, Vec{0.0}, 3.0, 2.0));
}

TEST_CASE("dual update never goes negative") {
  Xoshiro256ss r(3);
  for (int t = 0; t < 10000; ++t) {
    const double lambda = r.uniform(0.1, 10);
    const double sigma = r.uniform(0.0, 1.0) * lambda + 1e-12;
    const Vec z{r.uniform(0, 5)};
    const Vec g{r.uniform(-100, 100)};
    CHECK(dual_update(z, g, std::min(sigma, lambda), lambda)[0] >= 0.0);
  }
}

TEST_CASE("gap is zero at a linear minimizer") {
  ProblemInstance p;
  p.f = std::make_shared<AffineFn>(Vec{3, 1, 2}, 0.0);
  p.set = std::make_shared<ProbabilitySimplex>(3);
  const auto g = gap(p, Vec{0, 1, 0}, Vec{}, 1.0);
  CHECK(g.gap == 0.0);
}

TEST_CASE("gap without constraints is the Frank-Wolfe gap") {
  const ProblemInstance p = unconstrained_ball(3, 4);
  Xoshiro256ss r(1);
  for (int t = 0; t < 100; ++t) {
    const Vec x = p.set->sample(r);
    Vec g(3);
    p.f->gradient(x, g);
    // Independent: the minimizer of <g, v> over the unit ball is -g/||g||.
    const double expect = dot(g, x) + oracle::l2(g);
    CHECK(gap(p, x, Vec{}, 1.0).gap == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("gap dominates the optimality residual of the augmented Lagrangian") {
  const ProblemInstance p = kkt_problem();
  Xoshiro256ss r(12);
  for (int t = 0; t < 1000; ++t) {
    const Vec x = p.set->sample(r);
    const Vec z{r.uniform(0, 6), r.uniform(0, 6)};
    const double lambda = r.uniform(0.1, 50);
    const double l = p.f->value(x) + psi_aggregate(p, x, z, lambda);
    CHECK(gap(p, x, z, lambda).gap >= std::max(l - 2.0, 0.0) - 1e-8);
  }
}

TEST_CASE("zero budget gives a single record of the start") {
  const ProblemInstance p = kkt_problem();
  SolverConfig c;
  c.budget = 0;
  const RunResult r = run(p, c);
  REQUIRE(r.trace.size() == 1);
  CHECK(r.trace[0].k == 0);
  CHECK(r.final_state.x == *p.set->barycenter());
  c.budget = -1;
  CHECK_THROWS(run(p, c));
}

TEST_CASE("trace contains every stride multiple and the last iterate") {
  const ProblemInstance p = kkt_problem();
  SolverConfig c;
  c.budget = 25;
  c.stride = 10;
  const RunResult r = run(p, c);
  REQUIRE(r.trace.size() == 4);
  CHECK(r.trace[0].k == 0);
  CHECK(r.trace[1].k == 10);
  CHECK(r.trace[2].k == 20);
  CHECK(r.trace[3].k == 25);
}

TEST_CASE("open-loop run without constraints matches plain Frank-Wolfe") {
  const ProblemInstance p = unconstrained_ball(4, 2);
  SolverConfig c;
  c.budget = 200;
  c.schedules.step = OpenLoopStep{1.0, 0.9};
  std::vector<Vec> xs;
  run(p, c, [&](const IterationEval&, const SolverState&, const SolverState& after) { xs.push_back(after.x); });

  Vec x(4, 0.0);
  Vec g(4);
  for (int k = 0; k < 200; ++k) {
    p.f->gradient(x, g);
    const Vec v = l2ball_lmo(g, 1.0);
    const double a = std::min(1.0, std::pow(k + 1.0, -0.9));
    for (int i = 0; i < 4; ++i) x[i] = x[i] + a * (v[i] - x[i]);
    REQUIRE(x == xs[k]);
  }
}

TEST_CASE("short-step iterations decrease the augmented Lagrangian") {
  for (const ProblemInstance& p : {gen_ball_qp(2, 1), gen_qcqp(6, 2, 1), kkt_problem()}) {
    SolverConfig c;
    c.budget = 2000;
    c.schedules.step = unit_short_step();
    int checked = 0;
    run(p, c, [&](const IterationEval& e, const SolverState& before, const SolverState& after) {
      const double lhs = p.f->value(after.x) + psi_aggregate(p, after.x, before.z, e.lambda);
      const double l = e.al.al_value;
      REQUIRE(lhs <= l - 0.5 * e.alpha * e.gap + 1e-9 * (1 + std::abs(l)));
      ++checked;
    });
    CHECK(checked == 2000);
  }
}

TEST_CASE("open-loop iterations satisfy the quadratic upper bound") {
  for (const ProblemInstance& p : {gen_ball_qp(2, 3), gen_qcqp(6, 2, 2)}) {
    SolverConfig c;
    c.budget = 2000;
    c.z0.assign(p.num_constraints(), 5.0);
    run(p, c, [&](const IterationEval& e, const SolverState& before, const SolverState& after) {
      const double lhs = p.f->value(after.x) + psi_aggregate(p, after.x, before.z, e.lambda);
      const double l = e.al.al_value;
      const double rhs = l - e.alpha * e.gap + 0.5 * e.lip_F * e.alpha * e.alpha * e.dist2;
      REQUIRE(lhs <= rhs + 1e-9 * (1 + std::abs(l)));
    });
  }
}

TEST_CASE("sigma never exceeds lambda and multipliers stay nonnegative") {
  const ProblemInstance p = gen_qcqp(5, 2, 7);
  SolverConfig c;
  c.budget = 3000;
  c.schedules.dual.sigma0 = 50.0;
  c.schedules.penalty.lambda0 = 0.1;
  run(p, c, [&](const IterationEval& e, const SolverState&, const SolverState& after) {
    REQUIRE(e.sigma <= e.lambda);
    for (double z : after.z) REQUIRE(z >= 0.0);
  });
}

TEST_CASE("running minimum of the AL value is consistent across budgets") {
  const ProblemInstance p = gen_ball_qp(2, 2);
  SolverConfig c;
  c.budget = 500;
  const auto a = run(p, c).trace;
  c.budget = 1000;
  const auto b = run(p, c).trace;
  double ma = 1e300, mb = 1e300;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ma = std::min(ma, a[k].al_value);
    mb = std::min(mb, b[k].al_value);
    CHECK(ma == mb);
  }
  for (std::size_t k = a.size(); k < b.size(); ++k) {
    const double prev = mb;
    mb = std::min(mb, b[k].al_value);
    CHECK(mb <= prev);
  }
}

TEST_CASE("early stop is off by default and triggers when enabled") {
  const ProblemInstance p = kkt_problem();
  SolverConfig c;
  c.budget = 20000;
  c.schedules.step = unit_short_step();
  CHECK_FALSE(run(p, c).stopped_early);
  c.early_stop_tol = 2e-2;  // feas_inf is about 2.2e-2 at k = 4000
  const auto r = run(p, c);
  CHECK(r.stopped_early);
  CHECK(r.trace.back().k < 20000);
}
