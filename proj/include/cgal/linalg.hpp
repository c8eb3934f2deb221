#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cgal/rng.hpp"

namespace cgal {

using Vec = std::vector<double>;

/// Dense row-major matrix. Matrix-shaped decision variables use the same
/// layout, so an n x n iterate is a Vec of length n*n.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }
  const Vec& data() const { return data_; }

  Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vec data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
double norm_p(std::span<const double> a, double p);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
Vec subtract(std::span<const double> a, std::span<const double> b);

/// out = M * X where M is k x k and X is a k x c row-major block stored flat.
void left_multiply(const Matrix& m, std::span<const double> x, std::size_t cols,
                   std::span<double> out);

Matrix multiply(const Matrix& a, const Matrix& b);

/// Q factor of the Householder QR of `a` (square), with columns flipped so
/// that R has a nonnegative diagonal.
Matrix orthogonal_factor(const Matrix& a);

/// Haar-distributed orthogonal matrix from a standard-normal draw.
Matrix random_orthogonal(std::size_t n, Xoshiro256ss& rng);

/// U^T diag(eigs) U, symmetrized.
Matrix from_spectrum(const Matrix& u, std::span<const double> eigs);

struct PowerIterationResult {
  double eigenvalue = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest eigenvalue of a symmetric positive semidefinite operator by power
/// iteration with Rayleigh quotients; stops when successive estimates agree
/// to `rel_tol`.
PowerIterationResult power_iteration(const std::function<void(std::span<const double>, std::span<double>)>& apply,
                                     std::size_t dim, double rel_tol, int max_iter,
                                     std::uint64_t seed);

/// Spectral norm of a symmetric PSD matrix via power_iteration.
double spectral_norm_psd(const Matrix& m, double rel_tol = 1e-10);

}  // namespace cgal
