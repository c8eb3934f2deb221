#include "cgal/lmo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cgal {

namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double e : v)
    if (!std::isfinite(e)) throw std::invalid_argument(std::string(what) + ": non-finite input");
}

}  // namespace

AssignmentSolution solve_assignment(std::span<const double> cost, std::size_t n) {
  if (n == 0) throw std::invalid_argument("solve_assignment: empty matrix");
  if (cost.size() != n * n) throw std::invalid_argument("solve_assignment: cost matrix is not n x n");
  require_finite(cost, "solve_assignment");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based rows/columns; column 0 is the virtual source of each augmentation.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      const double* row = cost.data() + (i0 - 1) * n;
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  AssignmentSolution sol;
  sol.permutation.assign(n, -1);
  for (std::size_t j = 1; j <= n; ++j) sol.permutation[match[j] - 1] = static_cast<int>(j - 1);
  for (std::size_t i = 0; i < n; ++i) sol.cost += cost[i * n + static_cast<std::size_t>(sol.permutation[i])];
  return sol;
}

Vec birkhoff_lmo(std::span<const double> cost, std::size_t n) {
  const AssignmentSolution sol = solve_assignment(cost, n);
  Vec p(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) p[i * n + static_cast<std::size_t>(sol.permutation[i])] = 1.0;
  return p;
}

Vec birkhoff_lmo(const Matrix& cost) {
  if (cost.rows() != cost.cols()) throw std::invalid_argument("birkhoff_lmo: cost matrix is not square");
  return birkhoff_lmo(cost.flat(), cost.rows());
}

Vec l2ball_lmo(std::span<const double> c, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("l2ball_lmo: radius must be positive");
  require_finite(c, "l2ball_lmo");
  Vec v(c.size(), 0.0);
  const double nc = norm2(c);
  if (nc == 0.0) return v;
  for (std::size_t i = 0; i < c.size(); ++i) v[i] = -r * c[i] / nc;
  return v;
}

Vec lpball_lmo(std::span<const double> c, double r, double p) {
  if (!(r > 0.0)) throw std::invalid_argument("lpball_lmo: radius must be positive");
  if (!(p >= 2.0) || !std::isfinite(p)) throw std::invalid_argument("lpball_lmo: p must be >= 2");
  require_finite(c, "lpball_lmo");
  const double q = p / (p - 1.0);  // conjugate exponent
  double sq = 0.0;
  for (double e : c) sq += std::pow(std::abs(e), q);
  if (sq == 0.0) throw std::invalid_argument("lpball_lmo: c must be nonzero");
  const double cq = std::pow(sq, 1.0 / q);              // ||c||_q
  const double scale = r / std::pow(cq, q - 1.0);
  Vec v(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double mag = std::pow(std::abs(c[i]), q - 1.0);
    v[i] = c[i] > 0.0 ? -scale * mag : (c[i] < 0.0 ? scale * mag : 0.0);
  }
  return v;
}

Vec simplex_lmo(std::span<const double> c) {
  if (c.empty()) throw std::invalid_argument("simplex_lmo: empty input");
  require_finite(c, "simplex_lmo");
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i] < c[best]) best = i;
  Vec v(c.size(), 0.0);
  v[best] = 1.0;
  return v;
}

Vec box_lmo(std::span<const double> c, std::span<const double> lo, std::span<const double> hi) {
  if (c.size() != lo.size() || c.size() != hi.size()) throw std::invalid_argument("box_lmo: size mismatch");
  require_finite(c, "box_lmo");
  Vec v(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (lo[i] > hi[i]) throw std::invalid_argument("box_lmo: lo > hi");
    v[i] = c[i] > 0.0 ? lo[i] : hi[i];
  }
  return v;
}

// ---------------------------------------------------------------------------
// Birkhoff polytope

BirkhoffPolytope::BirkhoffPolytope(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("BirkhoffPolytope: n must be >= 1");
}

void BirkhoffPolytope::lmo(std::span<const double> c, std::span<double> out) const {
  const Vec p = birkhoff_lmo(c, n_);
  std::copy(p.begin(), p.end(), out.begin());
}

double BirkhoffPolytope::diameter() const { return std::sqrt(2.0 * static_cast<double>(n_)); }

std::optional<Vec> BirkhoffPolytope::barycenter() const {
  return Vec(n_ * n_, 1.0 / static_cast<double>(n_));
}

bool BirkhoffPolytope::contains(std::span<const double> x, double tol) const {
  if (x.size() != n_ * n_) return false;
  const double sum_tol = tol * static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    double rs = 0.0, cs = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (x[i * n_ + j] < -tol) return false;
      rs += x[i * n_ + j];
      cs += x[j * n_ + i];
    }
    if (std::abs(rs - 1.0) > sum_tol || std::abs(cs - 1.0) > sum_tol) return false;
  }
  return true;
}

Vec BirkhoffPolytope::sample(Xoshiro256ss& rng) const {
  const int terms = 1 + static_cast<int>(rng.below(std::min<std::size_t>(n_ + 1, 8)));
  Vec w(static_cast<std::size_t>(terms));
  double total = 0.0;
  for (double& e : w) {
    e = -std::log(1.0 - rng.uniform());
    total += e;
  }
  Vec x(n_ * n_, 0.0);
  for (int t = 0; t < terms; ++t) {
    const std::vector<int> perm = rng.permutation(static_cast<int>(n_));
    for (std::size_t i = 0; i < n_; ++i) x[i * n_ + static_cast<std::size_t>(perm[i])] += w[t] / total;
  }
  return x;
}

// ---------------------------------------------------------------------------
// Simplex

ProbabilitySimplex::ProbabilitySimplex(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("ProbabilitySimplex: n must be >= 1");
}

void ProbabilitySimplex::lmo(std::span<const double> c, std::span<double> out) const {
  const Vec v = simplex_lmo(c);
  std::copy(v.begin(), v.end(), out.begin());
}

double ProbabilitySimplex::diameter() const { return n_ > 1 ? std::sqrt(2.0) : 1.0; }

std::optional<Vec> ProbabilitySimplex::barycenter() const { return Vec(n_, 1.0 / static_cast<double>(n_)); }

bool ProbabilitySimplex::contains(std::span<const double> x, double tol) const {
  if (x.size() != n_) return false;
  double s = 0.0;
  for (double e : x) {
    if (e < -tol) return false;
    s += e;
  }
  return std::abs(s - 1.0) <= tol * static_cast<double>(n_);
}

Vec ProbabilitySimplex::sample(Xoshiro256ss& rng) const {
  Vec x(n_);
  double total = 0.0;
  for (double& e : x) {
    e = -std::log(1.0 - rng.uniform());
    total += e;
  }
  for (double& e : x) e /= total;
  return x;
}

// ---------------------------------------------------------------------------
// Box

Box::Box(Vec lo, Vec hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size() || lo_.empty()) throw std::invalid_argument("Box: bad bounds");
  for (std::size_t i = 0; i < lo_.size(); ++i)
    if (!(lo_[i] <= hi_[i])) throw std::invalid_argument("Box: lo > hi");
}

void Box::lmo(std::span<const double> c, std::span<double> out) const {
  const Vec v = box_lmo(c, lo_, hi_);
  std::copy(v.begin(), v.end(), out.begin());
}

double Box::diameter() const { return norm2(subtract(hi_, lo_)); }

std::optional<Vec> Box::barycenter() const {
  Vec c(lo_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (lo_[i] + hi_[i]);
  return c;
}

bool Box::contains(std::span<const double> x, double tol) const {
  if (x.size() != lo_.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lo_[i] - tol || x[i] > hi_[i] + tol) return false;
  return true;
}

Vec Box::sample(Xoshiro256ss& rng) const {
  Vec x(lo_.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(lo_[i], hi_[i]);
  return x;
}

// ---------------------------------------------------------------------------
// Balls

L2Ball::L2Ball(std::size_t n, double r) : n_(n), r_(r) {
  if (n == 0 || !(r > 0.0)) throw std::invalid_argument("L2Ball: need n >= 1 and r > 0");
}

void L2Ball::lmo(std::span<const double> c, std::span<double> out) const {
  const Vec v = l2ball_lmo(c, r_);
  std::copy(v.begin(), v.end(), out.begin());
}

bool L2Ball::contains(std::span<const double> x, double tol) const {
  return x.size() == n_ && norm2(x) <= r_ + tol;
}

Vec L2Ball::sample(Xoshiro256ss& rng) const {
  Vec x(n_);
  for (double& e : x) e = rng.normal();
  const double nx = norm2(x);
  const bool on_sphere = rng.below(2) == 0;
  const double radius = on_sphere ? r_ : r_ * std::pow(rng.uniform(), 1.0 / static_cast<double>(n_));
  for (double& e : x) e *= radius / nx;
  return x;
}

LpBall::LpBall(std::size_t n, double r, double p, std::optional<UniformConvexity> declared)
    : n_(n), r_(r), p_(p), declared_(declared) {
  if (n == 0 || !(r > 0.0) || !(p >= 2.0)) throw std::invalid_argument("LpBall: need n >= 1, r > 0, p >= 2");
}

void LpBall::lmo(std::span<const double> c, std::span<double> out) const {
  bool zero = std::all_of(c.begin(), c.end(), [](double e) { return e == 0.0; });
  if (zero) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const Vec v = lpball_lmo(c, r_, p_);
  std::copy(v.begin(), v.end(), out.begin());
}

double LpBall::diameter() const {
  // ||x||_2 <= n^{1/2 - 1/p} ||x||_p for p >= 2.
  return 2.0 * r_ * std::pow(static_cast<double>(n_), 0.5 - 1.0 / p_);
}

bool LpBall::contains(std::span<const double> x, double tol) const {
  return x.size() == n_ && norm_p(x, p_) <= r_ + tol;
}

Vec LpBall::sample(Xoshiro256ss& rng) const {
  Vec x(n_);
  for (double& e : x) e = rng.normal();
  const double nx = norm_p(x, p_);
  const bool on_sphere = rng.below(2) == 0;
  const double radius = on_sphere ? r_ : r_ * std::pow(rng.uniform(), 1.0 / static_cast<double>(n_));
  for (double& e : x) e *= radius / nx;
  return x;
}

// ---------------------------------------------------------------------------

WitnessReport uniform_convexity_witness(const FeasibleSet& set, int trials, std::uint64_t seed,
                                        std::optional<UniformConvexity> declared) {
  if (trials < 1) throw std::invalid_argument("uniform_convexity_witness: trials must be >= 1");
  const std::optional<UniformConvexity> uc = declared ? declared : set.uniform_convexity();
  if (!uc) throw std::invalid_argument("uniform_convexity_witness: set declares no (nu, q)");
  Xoshiro256ss rng(seed);
  const std::size_t n = set.dim();
  WitnessReport rep;
  rep.trials = trials;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  Vec u(n), w(n);
  for (int t = 0; t < trials; ++t) {
    for (double& e : u) e = rng.normal();
    const double un = norm2(u);
    const Vec vhat = set.lmo(u);
    Vec v;
    switch (t % 3) {
      case 0:
        v = set.sample(rng);
        break;
      case 1: {
        for (double& e : w) e = rng.normal();
        v = set.lmo(w);
        break;
      }
      default: {
        // A nearly optimal extreme point: lmo of a slightly perturbed u.
        const double eps = un * std::pow(10.0, -rng.uniform(1.0, 6.0));
        for (std::size_t i = 0; i < n; ++i) w[i] = u[i] + eps * rng.normal();
        v = set.lmo(w);
        break;
      }
    }
    const Vec diff = subtract(vhat, v);
    const double lhs = -dot(u, diff);
    const double rhs = 0.5 * uc->nu * std::pow(norm2(diff), uc->q) * un;
    const double margin = lhs - rhs;
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin >= -1e-9) ++rep.passed;
  }
  return rep;
}

}  // namespace cgal
