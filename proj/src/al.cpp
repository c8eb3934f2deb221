#include "cgal/al.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cgal {

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("penalty parameter must be positive and finite");
}

void check_shapes(const ProblemInstance& p, std::span<const double> x, std::span<const double> z) {
  if (x.size() != p.dim()) throw std::invalid_argument("x has wrong dimension");
  if (z.size() != p.num_constraints()) throw std::invalid_argument("z has wrong dimension");
}

void require_finite(double v, const char* what, std::size_t index) {
  if (!std::isfinite(v))
    throw NumericalAbort(std::string("non-finite ") + what + " at constraint " + std::to_string(index));
}

}  // namespace

double psi_scalar(double t, double u, double v) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("psi_scalar: t must be positive");
  if (!std::isfinite(u) || !std::isfinite(v)) throw std::invalid_argument("psi_scalar: non-finite input");
  if (t * u + v >= 0.0) return u * v + 0.5 * t * u * u;
  return -v * v / (2.0 * t);
}

double psi_aggregate(const ProblemInstance& p, std::span<const double> x, std::span<const double> z,
                     double lambda) {
  check_lambda(lambda);
  check_shapes(p, x, z);
  double s = 0.0;
  for (std::size_t i = 0; i < p.num_constraints(); ++i) s += psi_scalar(lambda, p.constraints.g[i]->value(x), z[i]);
  return s;
}

Vec grad_psi(const ProblemInstance& p, std::span<const double> x, std::span<const double> z, double lambda) {
  check_lambda(lambda);
  check_shapes(p, x, z);
  const std::size_t n = p.dim();
  Vec out(n, 0.0), gi(n);
  for (std::size_t i = 0; i < p.num_constraints(); ++i) {
    const double val = p.constraints.g[i]->value_and_gradient(x, gi);
    require_finite(val, "constraint value", i);
    const double w = std::max(lambda * val + z[i], 0.0);
    if (w > 0.0) axpy(w, gi, out);
  }
  return out;
}

double lipschitz_psi(const ProblemInstance& p, std::span<const double> x, std::span<const double> z,
                     double lambda) {
  check_lambda(lambda);
  check_shapes(p, x, z);
  double s = 0.0;
  for (std::size_t i = 0; i < p.num_constraints(); ++i) {
    const double val = p.constraints.g[i]->value(x);
    require_finite(val, "constraint value", i);
    const double b = p.constraints.grad_bounds[i];
    s += lambda * b * b + p.constraints.lip_consts[i] * std::max(lambda * val + z[i], 0.0);
  }
  return s;
}

AlEvaluation al_eval(const ProblemInstance& p, std::span<const double> x, std::span<const double> z,
                     double lambda) {
  check_lambda(lambda);
  check_shapes(p, x, z);
  const std::size_t n = p.dim();
  const std::size_t m = p.num_constraints();
  AlEvaluation ev;
  ev.grad_F.assign(n, 0.0);
  ev.objective = p.f->value_and_gradient(x, ev.grad_F);
  if (!std::isfinite(ev.objective)) throw NumericalAbort("non-finite objective value");
  ev.active_multipliers.assign(m, 0.0);
  ev.constraint_values.assign(m, 0.0);
  Vec gi(n);
  for (std::size_t i = 0; i < m; ++i) {
    const double val = p.constraints.g[i]->value_and_gradient(x, gi);
    require_finite(val, "constraint value", i);
    ev.constraint_values[i] = val;
    ev.psi_value += psi_scalar(lambda, val, z[i]);
    const double w = std::max(lambda * val + z[i], 0.0);
    ev.active_multipliers[i] = w;
    const double b = p.constraints.grad_bounds[i];
    ev.lip_estimate += lambda * b * b + p.constraints.lip_consts[i] * w;
    if (w > 0.0) axpy(w, gi, ev.grad_F);
  }
  for (std::size_t j = 0; j < n; ++j)
    if (!std::isfinite(ev.grad_F[j])) throw NumericalAbort("non-finite gradient component " + std::to_string(j));
  ev.al_value = ev.objective + ev.psi_value;
  return ev;
}

}  // namespace cgal
