#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgal/linalg.hpp"
#include "cgal/rng.hpp"

namespace cgal {

/// Raised when an invariant of the iteration is violated numerically
/// (non-finite values, negative gap, negative multiplier). Maps to exit code 2.
class NumericalAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A smooth convex function on R^n.
class SmoothConvexFn {
 public:
  virtual ~SmoothConvexFn() = default;

  virtual std::size_t dim() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  virtual void gradient(std::span<const double> x, std::span<double> out) const = 0;
  /// Writes the gradient into `out` and returns the value.
  virtual double value_and_gradient(std::span<const double> x, std::span<double> out) const {
    gradient(x, out);
    return value(x);
  }
  /// Lipschitz modulus of the gradient over the feasible set, if known.
  virtual std::optional<double> lipschitz_grad() const { return std::nullopt; }
};

using FnPtr = std::shared_ptr<const SmoothConvexFn>;

/// <X - B, M (X - B)>_F + <X, R>_F + d for X of shape rows x cols (row-major)
/// and symmetric M of shape rows x rows. Vectors use cols = 1.
class QuadraticFn final : public SmoothConvexFn {
 public:
  QuadraticFn(Matrix m, std::size_t cols, Vec center, Vec linear, double constant,
              std::optional<double> lipschitz = std::nullopt);

  std::size_t dim() const override { return m_.rows() * cols_; }
  double value(std::span<const double> x) const override;
  void gradient(std::span<const double> x, std::span<double> out) const override;
  double value_and_gradient(std::span<const double> x, std::span<double> out) const override;
  std::optional<double> lipschitz_grad() const override { return lipschitz_; }

  const Matrix& curvature() const { return m_; }
  const Vec& center() const { return center_; }
  const Vec& linear() const { return linear_; }
  double constant() const { return constant_; }

 private:
  Matrix m_;
  std::size_t cols_;
  Vec center_;  // empty means zero
  Vec linear_;  // empty means zero
  double constant_;
  std::optional<double> lipschitz_;
};

/// <a, x> - beta.
class AffineFn final : public SmoothConvexFn {
 public:
  AffineFn(Vec a, double beta) : a_(std::move(a)), beta_(beta) {}
  std::size_t dim() const override { return a_.size(); }
  double value(std::span<const double> x) const override { return dot(a_, x) - beta_; }
  void gradient(std::span<const double>, std::span<double> out) const override {
    std::copy(a_.begin(), a_.end(), out.begin());
  }
  std::optional<double> lipschitz_grad() const override { return 0.0; }
  const Vec& normal() const { return a_; }
  double offset() const { return beta_; }

 private:
  Vec a_;
  double beta_;
};

/// Adapter over callables; mostly for tests and small handcrafted instances.
class LambdaFn final : public SmoothConvexFn {
 public:
  using Eval = std::function<double(std::span<const double>)>;
  using Grad = std::function<void(std::span<const double>, std::span<double>)>;
  LambdaFn(std::size_t dim, Eval eval, Grad grad, std::optional<double> lipschitz = std::nullopt)
      : dim_(dim), eval_(std::move(eval)), grad_(std::move(grad)), lipschitz_(lipschitz) {}
  std::size_t dim() const override { return dim_; }
  double value(std::span<const double> x) const override { return eval_(x); }
  void gradient(std::span<const double> x, std::span<double> out) const override { grad_(x, out); }
  std::optional<double> lipschitz_grad() const override { return lipschitz_; }

 private:
  std::size_t dim_;
  Eval eval_;
  Grad grad_;
  std::optional<double> lipschitz_;
};

struct ConstraintBlock {
  std::vector<FnPtr> g;
  Vec grad_bounds;  // B_i: sup of ||grad g_i|| over the set
  Vec lip_consts;   // L_{g_i}

  std::size_t size() const { return g.size(); }
};

struct UniformConvexity {
  double nu;
  double q;
};

/// The feasible set C = dom h, accessed by the solver only through lmo().
class FeasibleSet {
 public:
  virtual ~FeasibleSet() = default;

  virtual std::size_t dim() const = 0;
  /// Writes a minimizer of <c, v> over the set into `out`. Deterministic.
  virtual void lmo(std::span<const double> c, std::span<double> out) const = 0;
  /// Euclidean diameter bound D.
  virtual double diameter() const = 0;
  virtual std::optional<UniformConvexity> uniform_convexity() const { return std::nullopt; }
  virtual std::optional<Vec> barycenter() const { return std::nullopt; }
  virtual std::string name() const = 0;

  // Test-only facilities; the solver never calls these.
  virtual bool contains(std::span<const double> x, double tol = 1e-10) const = 0;
  virtual Vec sample(Xoshiro256ss& rng) const = 0;

  Vec lmo(std::span<const double> c) const {
    Vec out(dim());
    lmo(c, out);
    return out;
  }
};

using SetPtr = std::shared_ptr<const FeasibleSet>;

/// min f(x) s.t. g(x) <= 0, x in C. Immutable after construction.
struct ProblemInstance {
  FnPtr f;
  double lf = 0.0;
  ConstraintBlock constraints;
  SetPtr set;
  std::optional<double> reference_value;
  std::string label;

  std::size_t dim() const { return set->dim(); }
  std::size_t num_constraints() const { return constraints.size(); }

  /// Throws std::invalid_argument if the declared constants or shapes are
  /// inconsistent.
  void check() const;

  /// g(x) as a vector of length m.
  Vec constraint_values(std::span<const double> x) const;
};

struct ValidationCheck {
  std::string name;
  bool passed = true;
  double worst = 0.0;  // worst violation magnitude (<= 0 means satisfied)
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed() const;
  std::string summary() const;
};

/// Sampled checks of the standing assumptions: gradient consistency by
/// central differences, convexity, gradient bounds, Lipschitz quotients,
/// LMO optimality and membership, and the diameter bound.
ValidationReport validate_instance(const ProblemInstance& p, int n_samples, std::uint64_t seed);

}  // namespace cgal
