#pragma once

#include <span>

#include "cgal/linalg.hpp"
#include "cgal/model.hpp"

namespace cgal {

/// psi_t(u, v) = uv + (t/2)u^2 if tu + v >= 0, else -v^2/(2t).
double psi_scalar(double t, double u, double v);

/// Psi_lambda(x, z) = sum_i psi_lambda(g_i(x), z_i).
double psi_aggregate(const ProblemInstance& p, std::span<const double> x, std::span<const double> z,
                     double lambda);

/// grad_x Psi_lambda(x, z) = sum_i [lambda g_i(x) + z_i]_+ grad g_i(x).
Vec grad_psi(const ProblemInstance& p, std::span<const double> x, std::span<const double> z, double lambda);

/// L_Psi(x, z) = sum_i (lambda B_i^2 + L_{g_i} [lambda g_i(x) + z_i]_+).
double lipschitz_psi(const ProblemInstance& p, std::span<const double> x, std::span<const double> z,
                     double lambda);

struct AlEvaluation {
  double objective = 0.0;    // f(x)
  double psi_value = 0.0;    // Psi_lambda(x, z)
  double al_value = 0.0;     // f(x) + Psi_lambda(x, z)
  double lip_estimate = 0.0; // L_Psi(x, z)
  Vec grad_F;                // grad f(x) + grad_x Psi_lambda(x, z)
  Vec active_multipliers;    // [lambda g(x) + z]_+
  Vec constraint_values;     // g(x)
};

/// All AL quantities at (x, z) with one evaluation of each g_i and grad g_i.
/// x is assumed to lie in C, so h(x) contributes nothing.
AlEvaluation al_eval(const ProblemInstance& p, std::span<const double> x, std::span<const double> z,
                     double lambda);

}  // namespace cgal
