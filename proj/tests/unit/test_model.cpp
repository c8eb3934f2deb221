#include <doctest.h>

#include <memory>

#include "cgal/lmo.hpp"
#include "cgal/model.hpp"
#include "cgal/problems.hpp"

using namespace cgal;

namespace {

ProblemInstance sphere_problem(double grad_scale) {
  ProblemInstance p;
  const std::size_t n = 3;
  p.f = std::make_shared<LambdaFn>(
      n, [](std::span<const double> x) { return dot(x, x); },
      [grad_scale](std::span<const double> x, std::span<double> g) {
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = grad_scale * 2.0 * x[i];
      },
      2.0);
  p.lf = 2.0;
  p.set = std::make_shared<L2Ball>(n, 1.0);
  p.label = "sphere";
  return p;
}

const ValidationCheck* find(const ValidationReport& r, const std::string& prefix) {
  for (const auto& c : r.checks)
    if (c.name.rfind(prefix, 0) == 0) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("validator accepts a consistent analytic instance") {
  const auto r = validate_instance(sphere_problem(1.0), 50, 1);
  INFO(r.summary());
  CHECK(r.all_passed());
}

TEST_CASE("validator flags a gradient scaled by two") {
  const auto r = validate_instance(sphere_problem(2.0), 50, 1);
  CHECK_FALSE(r.all_passed());
  const ValidationCheck* g = find(r, "f.gradient");
  REQUIRE(g != nullptr);
  CHECK_FALSE(g->passed);
}

TEST_CASE("validator accepts a small generated QCQP") {
  const auto r = validate_instance(gen_qcqp(5, 2, 1), 30, 2);
  INFO(r.summary());
  CHECK(r.all_passed());
}

TEST_CASE("instance check rejects inconsistent constants") {
  ProblemInstance p = gen_qcqp(3, 1, 1);
  CHECK_NOTHROW(p.check());
  p.constraints.grad_bounds.push_back(1.0);
  CHECK_THROWS_AS(p.check(), std::invalid_argument);
}

TEST_CASE("quadratic function value and gradient agree with the formula") {
  // <x - c, M (x - c)> + <x, r> + d in two dimensions.
  Matrix m(2, 2);
  m(0, 0) = 2;
  m(0, 1) = 1;
  m(1, 0) = 1;
  m(1, 1) = 3;
  QuadraticFn q(m, 1, Vec{1, -1}, Vec{0.5, 2}, 4.0);
  const Vec x{2, 1};
  // x - c = (1, 2); M(x-c) = (4, 7); <(1,2),(4,7)> = 18; <x, r> = 3; + 4.
  CHECK(q.value(x) == doctest::Approx(25.0));
  Vec g(2);
  q.gradient(x, g);
  CHECK(g[0] == doctest::Approx(8.5));
  CHECK(g[1] == doctest::Approx(16.0));
}
