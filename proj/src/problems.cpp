#include "cgal/problems.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "cgal/lmo.hpp"

namespace cgal {

namespace {

constexpr int kMaxVertexAttempts = 1000;

// <X, Q X>_F + <X, R>_F for X n x n flattened.
double quadratic_part(const Matrix& q, const Vec& r, std::span<const double> x, std::size_t n) {
  Vec qx(n * n);
  left_multiply(q, x, n, qx);
  return dot(x, qx) + dot(x, r);
}

Vec permutation_matrix(const std::vector<int>& perm) {
  const std::size_t n = perm.size();
  Vec p(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) p[i * n + static_cast<std::size_t>(perm[i])] = 1.0;
  return p;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

QcqpSpec gen_qcqp_data(int n, int m, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_qcqp: n must be >= 2");
  if (m < 1 || m > n * (n - 1)) throw std::invalid_argument("gen_qcqp: m must lie in [1, n(n-1)]");
  const auto nn = static_cast<std::size_t>(n);

  QcqpSpec s;
  s.n = n;
  s.m = m;
  s.seed = seed;

  Xoshiro256ss eig_rng = make_stream(seed, Stream::kEigenvalues);
  Xoshiro256ss orth_rng = make_stream(seed, Stream::kOrthogonal);
  Xoshiro256ss lin_rng = make_stream(seed, Stream::kLinearTerms);
  Xoshiro256ss vert_rng = make_stream(seed, Stream::kVertices);

  s.a_eigs.resize(nn);
  for (double& e : s.a_eigs) e = static_cast<double>(1 + eig_rng.below(10));
  s.a = from_spectrum(random_orthogonal(nn, orth_rng), s.a_eigs);

  for (int i = 0; i < m; ++i) {
    Vec eigs(nn);
    for (double& e : eigs) e = static_cast<double>(1 + eig_rng.below(10)) / 10.0;
    s.q.push_back(from_spectrum(random_orthogonal(nn, orth_rng), eigs));
    s.q_eigs.push_back(std::move(eigs));
    Vec r(nn * nn);
    for (double& e : r) e = lin_rng.uniform();
    s.r.push_back(std::move(r));
  }

  const Vec c(nn * nn, 1.0 / n);
  for (int i = 0; i < m; ++i) {
    const double at_c = quadratic_part(s.q[i], s.r[i], c, nn);
    bool found = false;
    for (int attempt = 1; attempt <= kMaxVertexAttempts; ++attempt) {
      std::vector<int> perm = vert_rng.permutation(n);
      if (std::find(s.excluded.begin(), s.excluded.end(), perm) != s.excluded.end()) continue;
      const double at_p = quadratic_part(s.q[i], s.r[i], permutation_matrix(perm), nn);
      if (at_p > at_c) {
        s.excluded.push_back(std::move(perm));
        s.vertex_attempts.push_back(attempt);
        s.at_barycenter.push_back(at_c);
        s.at_vertex.push_back(at_p);
        s.d.push_back(-(at_c + at_p) / 2.0);
        found = true;
        break;
      }
    }
    if (!found)
      throw std::runtime_error("gen_qcqp: no excluded vertex found for constraint " + std::to_string(i) +
                               " (n=" + std::to_string(n) + ", m=" + std::to_string(m) +
                               ", seed=" + std::to_string(seed) + ")");
  }

  const Vec p1 = permutation_matrix(s.excluded[0]);
  s.b.resize(nn * nn);
  for (std::size_t j = 0; j < nn * nn; ++j) s.b[j] = c[j] + 10.0 * (p1[j] - c[j]);

  s.lf = 2.0 * spectral_norm_psd(s.a, 1e-10);
  const double rc = std::sqrt(static_cast<double>(n));  // max Frobenius norm over C
  for (int i = 0; i < m; ++i) {
    const double qn = spectral_norm_psd(s.q[i], 1e-10);
    s.grad_bounds.push_back(2.0 * qn * rc + norm2(s.r[i]));
    s.lip_consts.push_back(2.0 * qn);
  }
  s.diameter = std::sqrt(2.0 * n);
  return s;
}

ProblemInstance make_instance(const QcqpSpec& s) {
  const auto nn = static_cast<std::size_t>(s.n);
  ProblemInstance p;
  p.f = std::make_shared<QuadraticFn>(s.a, nn, s.b, Vec{}, 0.0, s.lf);
  p.lf = s.lf;
  for (int i = 0; i < s.m; ++i) {
    p.constraints.g.push_back(std::make_shared<QuadraticFn>(s.q[i], nn, Vec{}, s.r[i], s.d[i], s.lip_consts[i]));
    p.constraints.grad_bounds.push_back(s.grad_bounds[i]);
    p.constraints.lip_consts.push_back(s.lip_consts[i]);
  }
  p.set = std::make_shared<BirkhoffPolytope>(nn);
  p.label = "qcqp n=" + std::to_string(s.n) + " m=" + std::to_string(s.m) + " seed=" + std::to_string(s.seed);
  p.check();
  return p;
}

ProblemInstance gen_qcqp(int n, int m, std::uint64_t seed) { return make_instance(gen_qcqp_data(n, m, seed)); }

std::uint64_t permutation_rank(const std::vector<int>& perm) {
  const std::size_t n = perm.size();
  if (n > 20) throw std::invalid_argument("permutation_rank: n must be <= 20");
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t smaller = 0;
    for (std::size_t j = i + 1; j < n; ++j)
      if (perm[j] < perm[i]) ++smaller;
    std::uint64_t fact = 1;
    for (std::size_t f = 2; f < n - i; ++f) fact *= f;
    rank += smaller * fact;
  }
  return rank;
}

std::string describe(const QcqpSpec& s) {
  std::ostringstream os;
  os << "# cgal-instance v1\n";
  os << "format_version=1\n";
  os << "kind=qcqp\n";
  os << "n=" << s.n << "\n";
  os << "m=" << s.m << "\n";
  os << "seed=" << s.seed << "\n";
  os << "prng=xoshiro256** (splitmix64 seeded, jump streams)\n";
  os << "L_f=" << fmt(s.lf) << "\n";
  os << "D=" << fmt(s.diameter) << "\n";
  for (int i = 0; i < s.m; ++i) {
    os << "B_" << i << "=" << fmt(s.grad_bounds[i]) << "\n";
    os << "L_g_" << i << "=" << fmt(s.lip_consts[i]) << "\n";
    os << "d_" << i << "=" << fmt(s.d[i]) << "\n";
    os << "g_at_barycenter_" << i << "=" << fmt(s.at_barycenter[i] + s.d[i]) << "\n";
    os << "g_at_vertex_" << i << "=" << fmt(s.at_vertex[i] + s.d[i]) << "\n";
    if (s.n <= 20) os << "excluded_vertex_" << i << "=" << permutation_rank(s.excluded[i]) << "\n";
    os << "excluded_perm_" << i << "=";
    for (int j = 0; j < s.n; ++j) os << (j ? "," : "") << s.excluded[i][j];
    os << "\n";
    os << "vertex_attempts_" << i << "=" << s.vertex_attempts[i] << "\n";
  }
  return os.str();
}

BallQpSpec gen_ball_qp_data(int n, std::uint64_t seed, bool constrained) {
  if (n < 2) throw std::invalid_argument("gen_ball_qp: n must be >= 2");
  const auto nn = static_cast<std::size_t>(n);
  Xoshiro256ss rng = make_stream(seed, Stream::kGeometry);
  auto unit = [&] {
    Vec v(nn);
    for (double& e : v) e = rng.normal();
    const double nv = norm2(v);
    for (double& e : v) e /= nv;
    return v;
  };
  const Vec dir = unit();
  Vec w = unit();
  axpy(-dot(w, dir), dir, w);
  const double nw = norm2(w);
  for (double& e : w) e /= nw;

  BallQpSpec s;
  s.n = n;
  s.seed = seed;
  s.constrained = constrained;
  s.b.resize(nn);
  s.a.resize(nn);
  const double cos60 = 0.5, sin60 = std::sqrt(3.0) / 2.0;
  for (std::size_t i = 0; i < nn; ++i) {
    s.b[i] = 2.0 * dir[i];
    s.a[i] = cos60 * dir[i] + sin60 * w[i];
  }
  return s;
}

ProblemInstance make_instance(const BallQpSpec& s) {
  const auto nn = static_cast<std::size_t>(s.n);
  ProblemInstance p;
  p.f = std::make_shared<QuadraticFn>(Matrix::identity(nn), 1, s.b, Vec{}, 0.0, 2.0);
  p.lf = 2.0;
  if (s.constrained) {
    p.constraints.g.push_back(std::make_shared<AffineFn>(s.a, s.beta));
    p.constraints.grad_bounds.push_back(norm2(s.a));
    p.constraints.lip_consts.push_back(0.0);
  }
  p.set = std::make_shared<L2Ball>(nn, 1.0);
  p.label = "ball_qp n=" + std::to_string(s.n) + " seed=" + std::to_string(s.seed) +
            (s.constrained ? "" : " unconstrained");
  p.check();
  return p;
}

ProblemInstance gen_ball_qp(int n, std::uint64_t seed, bool constrained) {
  return make_instance(gen_ball_qp_data(n, seed, constrained));
}

Oracle2d oracle_optimum_2d(const ProblemInstance& p, int grid, int refine_iters) {
  if (p.dim() != 2) throw std::invalid_argument("oracle_optimum_2d: decision dimension must be 2");
  if (grid < 2 || refine_iters < 0) throw std::invalid_argument("oracle_optimum_2d: bad grid parameters");
  const FeasibleSet& set = *p.set;

  double lo[2], hi[2];
  for (int axis = 0; axis < 2; ++axis) {
    Vec e(2, 0.0);
    e[axis] = 1.0;
    lo[axis] = set.lmo(e)[axis];
    e[axis] = -1.0;
    hi[axis] = set.lmo(e)[axis];
  }

  Vec x(2);
  auto feasible_value = [&](double x0, double x1, double& out) {
    x[0] = x0;
    x[1] = x1;
    if (!set.contains(x, 0.0)) return false;
    for (const auto& g : p.constraints.g)
      if (g->value(x) > 0.0) return false;
    out = p.f->value(x);
    return true;
  };

  Oracle2d best;
  best.value = std::numeric_limits<double>::infinity();
  const double h0 = (hi[0] - lo[0]) / (grid - 1);
  const double h1 = (hi[1] - lo[1]) / (grid - 1);
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const double x0 = lo[0] + i * h0, x1 = lo[1] + j * h1;
      double val;
      if (feasible_value(x0, x1, val) && val < best.value) {
        best.value = val;
        best.x = {x0, x1};
      }
    }
  if (best.x.empty()) throw std::runtime_error("oracle_optimum_2d: no feasible grid point");

  if (refine_iters == 0) return best;

  // The feasible region is convex, so it is star-shaped about the incumbent
  // a. Along each ray a + r u(theta) find the boundary radius by bisection and
  // minimize the convex restriction of f by golden section. The ray minimum
  // m(theta) has nested sublevel arcs, so a scan followed by golden section
  // in theta converges even when the optimum sits on a curved boundary,
  // where a coordinate grid stalls.
  const Vec a = best.x;
  const double rmax = std::hypot(hi[0] - lo[0], hi[1] - lo[1]);
  constexpr double kInvPhi = 0.6180339887498949;
  Vec ray_x(2);
  auto ray_min = [&](double theta) {
    const double u0 = std::cos(theta), u1 = std::sin(theta);
    double rin = 0.0, rout = rmax, val;
    for (int it = 0; it < 64; ++it) {
      const double mid = 0.5 * (rin + rout);
      (feasible_value(a[0] + mid * u0, a[1] + mid * u1, val) ? rin : rout) = mid;
    }
    double l = 0.0, r = rin;
    auto at = [&](double t) { return p.f->value(Vec{a[0] + t * u0, a[1] + t * u1}); };
    double c = r - kInvPhi * (r - l), d = l + kInvPhi * (r - l);
    double fc = at(c), fd = at(d);
    for (int it = 0; it < 80; ++it) {
      if (fc <= fd) {
        r = d, d = c, fd = fc;
        c = r - kInvPhi * (r - l), fc = at(c);
      } else {
        l = c, c = d, fc = fd;
        d = l + kInvPhi * (r - l), fd = at(d);
      }
    }
    const double t = fc <= fd ? c : d;
    ray_x = {a[0] + t * u0, a[1] + t * u1};
    return std::min(fc, fd);
  };
  auto consider = [&](double theta) {
    const double m = ray_min(theta);
    const Vec y = ray_x;
    double val;
    if (feasible_value(y[0], y[1], val) && val < best.value) {
      best.value = val;
      best.x = y;
    }
    return m;
  };

  constexpr int kDirections = 720;
  const double two_pi = 2.0 * std::acos(-1.0);
  const double dtheta = two_pi / kDirections;
  int best_dir = 0;
  double best_m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kDirections; ++i) {
    const double m = consider(i * dtheta);
    if (m < best_m) best_m = m, best_dir = i;
  }
  double l = (best_dir - 1) * dtheta, r = (best_dir + 1) * dtheta;
  double c = r - kInvPhi * (r - l), d = l + kInvPhi * (r - l);
  double mc = consider(c), md = consider(d);
  for (int it = 0; it < 2 * refine_iters; ++it) {
    if (mc <= md) {
      r = d, d = c, md = mc;
      c = r - kInvPhi * (r - l), mc = consider(c);
    } else {
      l = c, c = d, mc = md;
      d = l + kInvPhi * (r - l), md = consider(d);
    }
  }
  return best;
}

}  // namespace cgal
