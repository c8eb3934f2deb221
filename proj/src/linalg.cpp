#include "cgal/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cgal {

Matrix Matrix::identity(std::size_t n) {
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double norm_p(std::span<const double> a, double p) {
  double s = 0.0;
  for (double v : a) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vec subtract(std::span<const double> a, std::span<const double> b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

void left_multiply(const Matrix& m, std::span<const double> x, std::size_t cols,
                   std::span<double> out) {
  const std::size_t k = m.rows();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    double* row = out.data() + i * cols;
    for (std::size_t l = 0; l < k; ++l) {
      const double mil = m(i, l);
      if (mil == 0.0) continue;
      const double* xr = x.data() + l * cols;
      for (std::size_t j = 0; j < cols; ++j) row[j] += mil * xr[j];
    }
  }
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: shape mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double ail = a(i, l);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += ail * b(l, j);
    }
  return out;
}

Matrix orthogonal_factor(const Matrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("orthogonal_factor: matrix must be square");
  Matrix r = a;
  std::vector<Vec> reflectors;
  reflectors.reserve(n);
  Vec diag_sign(n, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    Vec v(n - k);
    for (std::size_t i = k; i < n; ++i) v[i - k] = r(i, k);
    const double alpha = norm2(v);
    // Reflect onto -sign(x0)*alpha*e1 to avoid cancellation.
    const double beta = v[0] >= 0.0 ? -alpha : alpha;
    v[0] -= beta;
    const double vn = norm2(v);
    if (vn > 0.0)
      for (double& e : v) e /= vn;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += v[i - k] * r(i, j);
      for (std::size_t i = k; i < n; ++i) r(i, j) -= 2.0 * v[i - k] * s;
    }
    diag_sign[k] = r(k, k) < 0.0 ? -1.0 : 1.0;
    reflectors.push_back(std::move(v));
  }
  // Q = H_0 H_1 ... H_{n-1}, applied to the identity from the right end.
  Matrix q = Matrix::identity(n);
  for (std::size_t kk = n; kk-- > 0;) {
    const Vec& v = reflectors[kk];
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = kk; i < n; ++i) s += v[i - kk] * q(i, j);
      for (std::size_t i = kk; i < n; ++i) q(i, j) -= 2.0 * v[i - kk] * s;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) *= diag_sign[j];
  return q;
}

Matrix random_orthogonal(std::size_t n, Xoshiro256ss& rng) {
  Matrix g(n, n);
  for (double& e : g.flat()) e = rng.normal();
  return orthogonal_factor(g);
}

Matrix from_spectrum(const Matrix& u, std::span<const double> eigs) {
  const std::size_t n = u.rows();
  Matrix scaled(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scaled(i, j) = eigs[i] * u(i, j);
  Matrix out = multiply(u.transposed(), scaled);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (out(i, j) + out(j, i));
      out(i, j) = avg;
      out(j, i) = avg;
    }
  return out;
}

PowerIterationResult power_iteration(
    const std::function<void(std::span<const double>, std::span<double>)>& apply, std::size_t dim,
    double rel_tol, int max_iter, std::uint64_t seed) {
  Xoshiro256ss rng(seed);
  Vec x(dim), y(dim);
  for (double& e : x) e = rng.normal();
  double nx = norm2(x);
  for (double& e : x) e /= nx;
  PowerIterationResult res;
  double prev = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    apply(x, y);
    const double rq = dot(x, y);
    const double ny = norm2(y);
    res.eigenvalue = rq;
    res.iterations = it;
    if (ny == 0.0) {
      res.converged = true;
      return res;
    }
    for (std::size_t i = 0; i < dim; ++i) x[i] = y[i] / ny;
    // Rayleigh quotients converge geometrically; the 0.01 factor keeps the
    // remaining error below rel_tol for spectral ratios up to ~0.99.
    if (it > 1 && std::abs(rq - prev) <= 0.01 * rel_tol * std::abs(rq)) {
      res.converged = true;
      return res;
    }
    prev = rq;
  }
  return res;
}

double spectral_norm_psd(const Matrix& m, double rel_tol) {
  const std::size_t n = m.rows();
  auto apply = [&](std::span<const double> x, std::span<double> y) { left_multiply(m, x, 1, y); };
  return power_iteration(apply, n, rel_tol, 100000, 0x5eedULL + n).eigenvalue;
}

}  // namespace cgal
