#include "cgal/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cgal {

QuadraticFn::QuadraticFn(Matrix m, std::size_t cols, Vec center, Vec linear, double constant,
                         std::optional<double> lipschitz)
    : m_(std::move(m)),
      cols_(cols),
      center_(std::move(center)),
      linear_(std::move(linear)),
      constant_(constant),
      lipschitz_(lipschitz) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("QuadraticFn: curvature must be square");
  const std::size_t n = m_.rows() * cols_;
  if (!center_.empty() && center_.size() != n)
    throw std::invalid_argument("QuadraticFn: center has wrong size");
  if (!linear_.empty() && linear_.size() != n)
    throw std::invalid_argument("QuadraticFn: linear term has wrong size");
}

double QuadraticFn::value(std::span<const double> x) const {
  Vec scratch(dim());
  return value_and_gradient(x, scratch);
}

void QuadraticFn::gradient(std::span<const double> x, std::span<double> out) const {
  value_and_gradient(x, out);
}

double QuadraticFn::value_and_gradient(std::span<const double> x, std::span<double> out) const {
  const std::size_t n = dim();
  Vec y(x.begin(), x.end());
  if (!center_.empty())
    for (std::size_t i = 0; i < n; ++i) y[i] -= center_[i];
  left_multiply(m_, y, cols_, out);  // out = M y
  double val = dot(y, out) + constant_;
  for (std::size_t i = 0; i < n; ++i) out[i] *= 2.0;
  if (!linear_.empty()) {
    val += dot(x, linear_);
    for (std::size_t i = 0; i < n; ++i) out[i] += linear_[i];
  }
  return val;
}

void ProblemInstance::check() const {
  if (!f) throw std::invalid_argument("ProblemInstance: missing objective");
  if (!set) throw std::invalid_argument("ProblemInstance: missing feasible set");
  if (f->dim() != set->dim()) throw std::invalid_argument("ProblemInstance: objective/set dimension mismatch");
  if (!(lf > 0.0) || !std::isfinite(lf)) throw std::invalid_argument("ProblemInstance: L_f must be positive");
  if (!(set->diameter() > 0.0)) throw std::invalid_argument("ProblemInstance: diameter must be positive");
  const std::size_t m = constraints.g.size();
  if (constraints.grad_bounds.size() != m || constraints.lip_consts.size() != m)
    throw std::invalid_argument("ProblemInstance: constraint constants have wrong length");
  for (std::size_t i = 0; i < m; ++i) {
    if (!constraints.g[i]) throw std::invalid_argument("ProblemInstance: null constraint");
    if (constraints.g[i]->dim() != set->dim())
      throw std::invalid_argument("ProblemInstance: constraint " + std::to_string(i) + " has wrong dimension");
    if (!(constraints.grad_bounds[i] > 0.0) || !(constraints.lip_consts[i] >= 0.0))
      throw std::invalid_argument("ProblemInstance: constants of constraint " + std::to_string(i) +
                                  ": B must be positive and L_g nonnegative");
  }
  if (reference_value && !std::isfinite(*reference_value))
    throw std::invalid_argument("ProblemInstance: reference value must be finite");
}

Vec ProblemInstance::constraint_values(std::span<const double> x) const {
  Vec out(constraints.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = constraints.g[i]->value(x);
  return out;
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks)
    os << (c.passed ? "pass " : "FAIL ") << c.name << " worst=" << c.worst << '\n';
  return os.str();
}

namespace {

constexpr std::size_t kFullDifferenceDim = 100;
constexpr int kDirections = 20;

// Relative mismatch between grad and central differences of value at x.
double gradient_mismatch(const SmoothConvexFn& fn, std::span<const double> x, Xoshiro256ss& rng) {
  const std::size_t n = x.size();
  Vec g(n);
  fn.gradient(x, g);
  const double h = 1e-6 * (1.0 + norm2(x));
  Vec xp(x.begin(), x.end());
  const double gnorm = norm2(g);
  if (n <= kFullDifferenceDim) {
    Vec fd(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = xp[i];
      xp[i] = xi + h;
      const double fp = fn.value(xp);
      xp[i] = xi - h;
      const double fm = fn.value(xp);
      xp[i] = xi;
      fd[i] = (fp - fm) / (2.0 * h);
    }
    const double denom = std::max({gnorm, norm2(fd), 1e-12});
    return norm2(subtract(fd, g)) / denom;
  }
  double worst = 0.0;
  Vec d(n), xm(n);
  for (int j = 0; j < kDirections; ++j) {
    for (double& e : d) e = rng.normal();
    const double dn = norm2(d);
    for (double& e : d) e /= dn;
    for (std::size_t i = 0; i < n; ++i) {
      xp[i] = x[i] + h * d[i];
      xm[i] = x[i] - h * d[i];
    }
    const double fd = (fn.value(xp) - fn.value(xm)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - dot(g, d)) / std::max(gnorm, 1e-12));
  }
  return worst;
}

// Draws a point of C: alternately an interior sample and an LMO vertex.
Vec draw_point(const FeasibleSet& set, Xoshiro256ss& rng, int i) {
  if (i % 2 == 0) return set.sample(rng);
  Vec c(set.dim());
  for (double& e : c) e = rng.normal();
  return set.lmo(c);
}

struct FnChecks {
  ValidationCheck fd, convex, lip, bound;
};

void check_function(const SmoothConvexFn& fn, const FeasibleSet& set, std::optional<double> lip,
                    std::optional<double> bound, int n_samples, Xoshiro256ss& rng, FnChecks& out) {
  const std::size_t n = set.dim();
  Vec gx(n), gy(n);
  for (int s = 0; s < n_samples; ++s) {
    const Vec x = draw_point(set, rng, s);
    const Vec y = draw_point(set, rng, s + 1);
    const double err = gradient_mismatch(fn, x, rng);
    out.fd.worst = std::max(out.fd.worst, err);
    if (err > 1e-6) out.fd.passed = false;

    const double fx = fn.value_and_gradient(x, gx);
    const double fy = fn.value_and_gradient(y, gy);
    const Vec dxy = subtract(y, x);
    const double viol = fx + dot(gx, dxy) - fy;  // > 0 means violation
    out.convex.worst = std::max(out.convex.worst, viol);
    if (viol > 1e-9 * std::max({1.0, std::abs(fx), std::abs(fy)})) out.convex.passed = false;

    const double dist = norm2(dxy);
    if (lip && dist > 0.0) {
      const double q = norm2(subtract(gx, gy)) / dist;
      out.lip.worst = std::max(out.lip.worst, q - *lip);
      if (q > *lip * (1.0 + 1e-6) + 1e-12) out.lip.passed = false;
    }
    if (bound) {
      const double gn = norm2(gx);
      out.bound.worst = std::max(out.bound.worst, gn - *bound);
      if (gn > *bound * (1.0 + 1e-6)) out.bound.passed = false;
    }
  }
}

}  // namespace

ValidationReport validate_instance(const ProblemInstance& p, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("validate_instance: n_samples must be >= 1");
  p.check();
  Xoshiro256ss rng(seed);
  ValidationReport report;
  const FeasibleSet& set = *p.set;

  auto push = [&](const std::string& prefix, const FnChecks& c, bool lip, bool bound) {
    report.checks.push_back({prefix + ".gradient_fd", c.fd.passed, c.fd.worst});
    report.checks.push_back({prefix + ".convexity", c.convex.passed, c.convex.worst});
    if (lip) report.checks.push_back({prefix + ".lipschitz", c.lip.passed, c.lip.worst});
    if (bound) report.checks.push_back({prefix + ".grad_bound", c.bound.passed, c.bound.worst});
  };

  FnChecks fc;
  check_function(*p.f, set, p.lf, std::nullopt, n_samples, rng, fc);
  push("f", fc, true, false);

  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    FnChecks gc;
    check_function(*p.constraints.g[i], set, p.constraints.lip_consts[i], p.constraints.grad_bounds[i],
                   n_samples, rng, gc);
    push("g" + std::to_string(i), gc, true, true);
  }

  ValidationCheck lmo_opt{"set.lmo_optimality"}, lmo_in{"set.lmo_membership"}, diam{"set.diameter"};
  const std::size_t n = set.dim();
  Vec c(n);
  for (int s = 0; s < n_samples; ++s) {
    for (double& e : c) e = rng.normal();
    const Vec v = set.lmo(c);
    const Vec y = draw_point(set, rng, s);
    const double viol = dot(c, v) - dot(c, y);
    lmo_opt.worst = std::max(lmo_opt.worst, viol);
    if (viol > 1e-10 * (1.0 + norm2(c))) lmo_opt.passed = false;
    if (!set.contains(v)) {
      lmo_in.passed = false;
      lmo_in.worst += 1.0;
    }
    const Vec x = draw_point(set, rng, s + 1);
    const double excess = norm2(subtract(x, y)) - set.diameter();
    diam.worst = std::max(diam.worst, excess);
    if (excess > 1e-12 * (1.0 + set.diameter())) diam.passed = false;
  }
  report.checks.push_back(lmo_opt);
  report.checks.push_back(lmo_in);
  report.checks.push_back(diam);
  return report;
}

}  // namespace cgal
