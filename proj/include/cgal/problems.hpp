#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cgal/linalg.hpp"
#include "cgal/model.hpp"

namespace cgal {

/// Data of a generated QCQP over the n x n Birkhoff polytope:
///   f(X) = <X - B, A (X - B)>_F,  g_i(X) = <X, Q_i X>_F + <X, R_i>_F + d_i,
/// where A and Q_i are n x n SPD matrices acting by left multiplication.
struct QcqpSpec {
  int n = 0;
  int m = 0;
  std::uint64_t seed = 0;

  Vec a_eigs;
  Matrix a;
  Vec b;  // vertex of the objective, flattened
  std::vector<Vec> q_eigs;
  std::vector<Matrix> q;
  std::vector<Vec> r;
  Vec d;
  std::vector<std::vector<int>> excluded;  // p_i as permutations
  std::vector<int> vertex_attempts;
  Vec at_barycenter;  // g~_i(c)
  Vec at_vertex;      // g~_i(p_i)

  double lf = 0.0;
  Vec grad_bounds;
  Vec lip_consts;
  double diameter = 0.0;
};

/// Seeded generator; throws std::runtime_error if a non-redundant excluded
/// vertex cannot be found in 1000 draws for some constraint.
QcqpSpec gen_qcqp_data(int n, int m, std::uint64_t seed);
ProblemInstance make_instance(const QcqpSpec& spec);
ProblemInstance gen_qcqp(int n, int m, std::uint64_t seed);

/// Lexicographic rank of a permutation (n <= 20).
std::uint64_t permutation_rank(const std::vector<int>& perm);

/// key=value metadata written by `generate`.
std::string describe(const QcqpSpec& spec);

/// f(x) = ||x - b||^2 over the unit l2 ball with one cut <a, x> <= beta
/// removing b/||b||. ||b|| = 2, ||a|| = 1, angle(a, b) = 60 degrees, beta = 1/4.
struct BallQpSpec {
  int n = 0;
  std::uint64_t seed = 0;
  bool constrained = true;
  Vec b;
  Vec a;
  double beta = 0.25;
};

BallQpSpec gen_ball_qp_data(int n, std::uint64_t seed, bool constrained = true);
ProblemInstance make_instance(const BallQpSpec& spec);
ProblemInstance gen_ball_qp(int n, std::uint64_t seed, bool constrained = true);

struct Oracle2d {
  Vec x;
  double value = 0.0;
};

/// Brute-force minimizer for two-dimensional instances: a grid over the
/// bounding box of C restricted to {g <= 0} (membership via contains), then
/// a ray search from the best grid point: boundary radius by bisection,
/// golden section along each ray, and 2 refine_iters golden-section steps in
/// the ray angle after a 720-direction scan. refine_iters = 0 returns the
/// grid point.
Oracle2d oracle_optimum_2d(const ProblemInstance& p, int grid, int refine_iters);

}  // namespace cgal
