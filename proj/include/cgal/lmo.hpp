#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cgal/linalg.hpp"
#include "cgal/model.hpp"

namespace cgal {

struct AssignmentSolution {
  std::vector<int> permutation;  // column assigned to each row
  double cost = 0.0;
};

/// Minimum-cost perfect matching on a dense n x n row-major cost matrix.
/// Shortest augmenting paths with dual potentials (Jonker-Volgenant style),
/// O(n^3). Ties resolve to the lowest column index.
AssignmentSolution solve_assignment(std::span<const double> cost, std::size_t n);

/// Permutation matrix (flattened row-major) minimizing <C, P>_F.
Vec birkhoff_lmo(std::span<const double> cost, std::size_t n);
Vec birkhoff_lmo(const Matrix& cost);

/// -r c / ||c||; the zero vector when c = 0.
Vec l2ball_lmo(std::span<const double> c, double r);
/// Minimizer over {||v||_p <= r}, p >= 2. Rejects c = 0.
Vec lpball_lmo(std::span<const double> c, double r, double p);
/// e_{argmin c}, lowest index on ties.
Vec simplex_lmo(std::span<const double> c);
/// lo_i where c_i > 0, otherwise hi_i.
Vec box_lmo(std::span<const double> c, std::span<const double> lo, std::span<const double> hi);

/// Doubly stochastic n x n matrices, flattened row-major.
class BirkhoffPolytope final : public FeasibleSet {
 public:
  explicit BirkhoffPolytope(std::size_t n);
  std::size_t side() const { return n_; }
  std::size_t dim() const override { return n_ * n_; }
  void lmo(std::span<const double> c, std::span<double> out) const override;
  double diameter() const override;
  std::optional<Vec> barycenter() const override;
  std::string name() const override { return "birkhoff"; }
  bool contains(std::span<const double> x, double tol = 1e-10) const override;
  /// Random convex combination of random permutation matrices.
  Vec sample(Xoshiro256ss& rng) const override;
  using FeasibleSet::lmo;

 private:
  std::size_t n_;
};

class ProbabilitySimplex final : public FeasibleSet {
 public:
  explicit ProbabilitySimplex(std::size_t n);
  std::size_t dim() const override { return n_; }
  void lmo(std::span<const double> c, std::span<double> out) const override;
  double diameter() const override;
  std::optional<Vec> barycenter() const override;
  std::string name() const override { return "simplex"; }
  bool contains(std::span<const double> x, double tol = 1e-10) const override;
  Vec sample(Xoshiro256ss& rng) const override;
  using FeasibleSet::lmo;

 private:
  std::size_t n_;
};

class Box final : public FeasibleSet {
 public:
  Box(Vec lo, Vec hi);
  std::size_t dim() const override { return lo_.size(); }
  void lmo(std::span<const double> c, std::span<double> out) const override;
  double diameter() const override;
  std::optional<Vec> barycenter() const override;
  std::string name() const override { return "box"; }
  bool contains(std::span<const double> x, double tol = 1e-10) const override;
  Vec sample(Xoshiro256ss& rng) const override;
  using FeasibleSet::lmo;

 private:
  Vec lo_, hi_;
};

/// Euclidean ball of radius r centred at the origin; declared
/// (1/(2r), 2)-uniformly convex.
class L2Ball final : public FeasibleSet {
 public:
  L2Ball(std::size_t n, double r);
  double radius() const { return r_; }
  std::size_t dim() const override { return n_; }
  void lmo(std::span<const double> c, std::span<double> out) const override;
  double diameter() const override { return 2.0 * r_; }
  std::optional<UniformConvexity> uniform_convexity() const override {
    return UniformConvexity{1.0 / (2.0 * r_), 2.0};
  }
  std::optional<Vec> barycenter() const override { return Vec(n_, 0.0); }
  std::string name() const override { return "l2ball"; }
  bool contains(std::span<const double> x, double tol = 1e-10) const override;
  /// Half of the draws land on the sphere, the rest uniformly inside.
  Vec sample(Xoshiro256ss& rng) const override;
  using FeasibleSet::lmo;

 private:
  std::size_t n_;
  double r_;
};

/// l_p ball, p >= 2. lmo(0) returns the origin (same tie rule as L2Ball).
class LpBall final : public FeasibleSet {
 public:
  LpBall(std::size_t n, double r, double p, std::optional<UniformConvexity> declared = std::nullopt);
  std::size_t dim() const override { return n_; }
  void lmo(std::span<const double> c, std::span<double> out) const override;
  double diameter() const override;
  std::optional<UniformConvexity> uniform_convexity() const override { return declared_; }
  std::optional<Vec> barycenter() const override { return Vec(n_, 0.0); }
  std::string name() const override { return "lpball"; }
  bool contains(std::span<const double> x, double tol = 1e-10) const override;
  Vec sample(Xoshiro256ss& rng) const override;
  using FeasibleSet::lmo;

 private:
  std::size_t n_;
  double r_, p_;
  std::optional<UniformConvexity> declared_;
};

struct WitnessReport {
  int trials = 0;
  int passed = 0;
  double worst_margin = 0.0;  // min over trials of lhs - rhs; negative means a violation
  double pass_rate() const { return trials == 0 ? 1.0 : static_cast<double>(passed) / trials; }
};

/// Samples directions u and points v in the set and checks
///   <-u, lmo(u) - v> >= (nu/2) ||lmo(u) - v||^q ||u|| - 1e-9.
/// Uses the set's declared modulus unless `declared` overrides it.
WitnessReport uniform_convexity_witness(const FeasibleSet& set, int trials, std::uint64_t seed,
                                        std::optional<UniformConvexity> declared = std::nullopt);

}  // namespace cgal
