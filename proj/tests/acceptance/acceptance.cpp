// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// nonzero if any selected criterion fails.
//
//   acceptance                 all criteria
//   acceptance --criteria 1,9  a subset
//
// Criteria 4-8 share the desk runs, so selecting any of them runs the whole
// desk suite once; criterion 4 is checked on every iteration of those runs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "cgal/al.hpp"
#include "cgal/analysis.hpp"
#include "cgal/config.hpp"
#include "cgal/experiment.hpp"
#include "cgal/lmo.hpp"
#include "cgal/problems.hpp"
#include "cgal/solver.hpp"
#include "cgal/trace.hpp"

using namespace cgal;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// Sample x in C with g(x) <= 0 by pulling a random point toward the
// barycenter, which is strictly feasible for the generated instances.
Vec feasible_sample(const ProblemInstance& p, Xoshiro256ss& rng) {
  const Vec c = *p.set->barycenter();
  Vec x = p.set->sample(rng);
  for (int it = 0; it < 60; ++it) {
    bool ok = true;
    for (double g : p.constraint_values(x)) ok = ok && g <= 0.0;
    if (ok) return x;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = c[i] + 0.5 * (x[i] - c[i]);
  }
  return c;
}

// 1. grad_psi against central differences of psi_aggregate.
Outcome criterion1() {
  double worst = 0.0;
  int count = 0;
  for (const ProblemInstance& p : {gen_qcqp(10, 2, 1), gen_ball_qp(2, 1)}) {
    Xoshiro256ss rng(101);
    for (int t = 0; t < 100; ++t) {
      const Vec x = p.set->sample(rng);
      Vec z(p.num_constraints());
      for (double& zi : z) zi = rng.uniform(0.0, 5.0);
      const double lambda = rng.uniform(0.5, 20.0);
      const Vec g = grad_psi(p, x, z, lambda);
      const Vec fd = oracle::central_difference(
          [&](std::span<const double> y) { return psi_aggregate(p, y, z, lambda); }, x);
      const double ng = oracle::l2(g);
      const double err = oracle::l2_diff(g, fd);
      const double rel = ng > 0.0 ? err / ng : (err <= 1e-10 ? 0.0 : 1.0);
      worst = std::max(worst, rel);
      ++count;
    }
  }
  return {worst <= 1e-6, std::to_string(count) + " samples, worst relative error " + num(worst) + " (<= 1e-6)"};
}

// 2. Penalty sign on feasible points, zero at a KKT pair, Lipschitz gradient.
Outcome criterion2() {
  // (a)
  double worst_a = -1e300;
  int na = 0;
  for (const ProblemInstance& p : {gen_qcqp(10, 2, 1), gen_ball_qp(2, 1)}) {
    Xoshiro256ss rng(202);
    for (int t = 0; t < 500; ++t) {
      const Vec x = feasible_sample(p, rng);
      Vec z(p.num_constraints());
      for (double& zi : z) zi = rng.uniform(0.0, 50.0);
      const double lambda = std::exp(rng.uniform(std::log(1e-2), std::log(1e2)));
      worst_a = std::max(worst_a, psi_aggregate(p, x, z, lambda));
      ++na;
    }
  }
  const bool a = worst_a <= 1e-12;

  // (b) min ||x - (2,2)||^2 on [-5,5]^2 s.t. x0 + x1 <= 2 (active), x0 <= 10
  // (inactive). x* = (1,1), z* = (2, 0).
  ProblemInstance k;
  k.f = std::make_shared<QuadraticFn>(Matrix::identity(2), 1, Vec{2, 2}, Vec{}, 0.0, 2.0);
  k.lf = 2.0;
  k.constraints.g = {std::make_shared<AffineFn>(Vec{1, 1}, 2.0), std::make_shared<AffineFn>(Vec{1, 0}, 10.0)};
  k.constraints.grad_bounds = {std::sqrt(2.0), 1.0};
  k.constraints.lip_consts = {0.0, 0.0};
  k.set = std::make_shared<Box>(Vec{-5, -5}, Vec{5, 5});
  const Vec xs{1, 1}, zs{2, 0};
  Vec gf(2);
  k.f->gradient(xs, gf);
  const double stat = std::abs(gf[0] + zs[0]) + std::abs(gf[1] + zs[0]);  // grad f + z1 a1 + z2 a2 = 0
  double worst_b = 0.0;
  for (double lambda : {1e-3, 0.1, 1.0, 7.5, 1e3, 1e6}) worst_b = std::max(worst_b, std::abs(psi_aggregate(k, xs, zs, lambda)));
  const bool b = stat == 0.0 && worst_b <= 1e-10;

  // (c)
  double worst_c = -1e300;
  int nc = 0;
  for (const ProblemInstance& p : {gen_qcqp(10, 2, 1), gen_ball_qp(2, 1)}) {
    Xoshiro256ss rng(203);
    for (int t = 0; t < 500; ++t) {
      const Vec x = p.set->sample(rng), y = p.set->sample(rng);
      Vec z(p.num_constraints());
      for (double& zi : z) zi = rng.uniform(0.0, 20.0);
      const double lambda = rng.uniform(0.1, 100.0);
      const double lip = std::max(lipschitz_psi(p, x, z, lambda), lipschitz_psi(p, y, z, lambda));
      const double lhs = oracle::l2_diff(grad_psi(p, x, z, lambda), grad_psi(p, y, z, lambda));
      worst_c = std::max(worst_c, lhs - lip * oracle::l2_diff(x, y) - 1e-9);
      ++nc;
    }
  }
  const bool c = worst_c <= 0.0;
  return {a && b && c, "(a) max Psi on " + std::to_string(na) + " feasible samples " + num(worst_a) + " (<= 1e-12); (b) |Psi(x*,z*)| " +
                           num(worst_b) + " (<= 1e-10); (c) worst Lipschitz excess on " + std::to_string(nc) + " pairs " +
                           num(worst_c) + " (<= 0)"};
}

// 3. Descent of the augmented Lagrangian per iteration.
Outcome criterion3() {
  double worst_ss = -1e300, worst_ol = -1e300;
  long steps = 0;
  for (const ProblemInstance& p : {gen_ball_qp(2, 1), gen_qcqp(10, 2, 1)}) {
    for (int policy = 0; policy < 2; ++policy) {
      SolverConfig c;
      c.budget = 10000;
      c.stride = 10000;
      c.schedules.penalty.tau = 0.5;
      if (policy == 0)
        c.schedules.step = unit_short_step();
      else
        c.schedules.step = OpenLoopStep{1.0, 0.95};
      run(p, c, [&](const IterationEval& e, const SolverState& before, const SolverState& after) {
        const double lnext = p.f->value(after.x) + psi_aggregate(p, after.x, before.z, e.lambda);
        const double l = e.al.al_value;
        const double slack = 1e-9 * (1.0 + std::abs(l));
        if (policy == 0) {
          worst_ss = std::max(worst_ss, lnext - (l - 0.5 * e.alpha * e.gap) - slack);
        } else {
          const double rhs = l - e.alpha * e.gap + 0.5 * e.lip_F * e.alpha * e.alpha * e.dist2;
          worst_ol = std::max(worst_ol, lnext - rhs - slack);
        }
        ++steps;
      });
    }
  }
  return {worst_ss <= 0.0 && worst_ol <= 0.0, std::to_string(steps) + " steps; worst short-step excess " + num(worst_ss) +
                                                  ", worst open-loop excess " + num(worst_ol) + " (both <= 0)"};
}

// Largest ||[g(x)]_+||_2 over sampled points of C, half of them vertices.
double sampled_mg(const ProblemInstance& p, std::uint64_t seed) {
  Xoshiro256ss rng(seed);
  double best = 0.0;
  for (int t = 0; t < 10000; ++t) {
    Vec x;
    if (t % 2 == 0) {
      x = p.set->sample(rng);
    } else {
      Vec c(p.dim());
      for (double& v : c) v = rng.normal();
      x = p.set->lmo(c);
    }
    double s = 0.0;
    for (double g : p.constraint_values(x)) s += std::max(g, 0.0) * std::max(g, 0.0);
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

struct DualTracker {
  double mg = 0.0;
  double z0 = 0.0;
  double sigma_sum = 0.0;
  double worst_excess = -1e300;
  double min_z = 1e300;
  long steps = 0;
};

void print(int id, const std::string& name, const Outcome& o, double seconds) {
  std::printf("%s criterion %d (%s): %s [%.1fs]\n", o.passed ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
              seconds);
  std::fflush(stdout);
}

// 4-8 on the desk suite.
std::map<int, Outcome> desk_criteria() {
  std::map<std::string, DualTracker> track;
  std::map<std::string, ProblemInstance> problems;
  for (const std::string& name : {"desk-ol", "desk-ss", "ball-ss", "ball-ol"}) {
    const ExperimentConfig cfg = preset(name);
    problems.emplace(name, build_problem(cfg));
    DualTracker t;
    t.mg = sampled_mg(problems.at(name), 404);
    for (double z : cfg.z0) t.z0 += z;
    track[name] = t;
  }

  SuiteOptions opts;
  opts.observer = [&](const std::string& name, const IterationEval& e, const SolverState& before,
                      const SolverState& after) {
    DualTracker& t = track.at(name);
    (void)before;
    t.sigma_sum += e.sigma;  // sum over j <= k, and after.z is z^{k+1}
    double z1 = 0.0;
    for (double z : after.z) {
      t.min_z = std::min(t.min_z, z);
      z1 += std::abs(z);
    }
    t.worst_excess = std::max(t.worst_excess, z1 - (t.z0 + 1.5 * t.mg * t.sigma_sum));
    ++t.steps;
  };
  const DeskSuite s = run_desk_suite(opts);

  std::map<int, Outcome> out;
  {
    bool ok = true;
    std::string d;
    for (const auto& [name, t] : track) {
      ok = ok && t.steps > 0 && t.min_z >= 0.0 && t.worst_excess <= 0.0;
      d += name + ": min z " + num(t.min_z) + ", worst bound excess " + num(t.worst_excess) + " (M_g " + num(t.mg) +
           "); ";
    }
    out[4] = {ok, d};
  }
  const std::string ref = "f_ref " + num(s.qcqp_reference) + " from " + s.qcqp_reference_source;
  {
    const DeskMeasurement& m = s.ol_qcqp;
    out[5] = {m.rate.slope <= -0.30 && m.terminal_combined <= 1e-3,
              "slope " + num(m.rate.slope) + " (<= -0.30), terminal max{val,feas} " + num(m.terminal_combined) +
                  " (<= 1e-3), terminal val " + num(m.terminal_val) + ", " + ref};
  }
  {
    const DeskMeasurement& m = s.ss_qcqp;
    out[6] = {m.rate.slope <= -0.40, "slope " + num(m.rate.slope) + " (<= -0.40), terminal max{val,feas} " +
                                         num(m.terminal_combined) + ", " + ref};
  }
  out[7] = {s.ss_ball.rate.slope <= -0.55 && s.ol_ball.rate.slope <= -0.70,
            "short-step slope " + num(s.ss_ball.rate.slope) + " (<= -0.55), open-loop slope " +
                num(s.ol_ball.rate.slope) + " (<= -0.70)"};
  {
    const DeskMeasurement& m = s.ss_ball;
    const double lstar = s.ball_reference;
    const double fk = m.run.result.trace.back().objective;
    const double err = std::abs(fk - lstar);
    const double tol = 1e-3 * std::max(lstar, 1.0);
    out[8] = {err <= tol && m.terminal_feas_inf <= 1e-6 && m.worst_gap_minus_t >= -1e-8,
              "L* " + num(lstar) + ", |f(x^K) - L*| " + num(err) + " (<= " + num(tol) + "), feas_inf " +
                  num(m.terminal_feas_inf) + " (<= 1e-6), min_k (G_k - T_k) " + num(m.worst_gap_minus_t) +
                  " (>= -1e-8)"};
  }
  return out;
}

// 9. Oracle correctness.
Outcome criterion9() {
  Xoshiro256ss rng(909);
  int hung_bad = 0;
  for (int n : {6, 7}) {
    for (int t = 0; t < (n == 6 ? 100 : 20); ++t) {
      Vec c(n * n);
      for (double& v : c) v = rng.uniform(-10.0, 10.0);
      const double best = oracle::brute_force_assignment(c, n);
      const double got = solve_assignment(c, n).cost;
      if (std::abs(got - best) > 1e-12 * (1.0 + std::abs(best))) ++hung_bad;
    }
  }
  double worst_lp = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t dim = 2 + rng.below(9);
    const double p = rng.uniform(2.0, 8.0);
    const double r = rng.uniform(0.1, 5.0);
    Vec c(dim);
    for (double& v : c) v = rng.normal();
    const Vec v = lpball_lmo(c, r, p);
    const double q = p / (p - 1.0);
    const double e1 = std::abs(dot(c, v) + r * norm_p(c, q)) / std::max(1.0, r * norm_p(c, q));
    const double e2 = std::abs(norm_p(v, p) - r) / std::max(1.0, r);
    worst_lp = std::max({worst_lp, e1, e2});
  }
  int witness_fail = 0;
  int trials = 0;
  for (double r : {1.0, 2.5}) {
    L2Ball ball(3, r);
    const WitnessReport w = uniform_convexity_witness(ball, 10000, 99, UniformConvexity{1.0 / (2.0 * r), 2.0});
    witness_fail += w.trials - w.passed;
    trials += w.trials;
  }
  return {hung_bad == 0 && worst_lp <= 1e-10 && witness_fail == 0,
          "assignment mismatches " + std::to_string(hung_bad) + "/120, worst lp identity error " + num(worst_lp) +
              " (<= 1e-10), witness failures " + std::to_string(witness_fail) + "/" + std::to_string(trials)};
}

// 10. Recursion certificates on the default grids.
Outcome criterion10() {
  std::vector<SequenceSpec> grid = default_prop21_grid(1000000);
  for (const auto& q : default_prop22_grid(1000000)) grid.push_back(q);
  int ok = 0;
  std::string failed;
  for (const SequenceSpec& q : grid) {
    const SequenceRun r = simulate(q);
    if (r.certificate.residual <= 0.0)
      ++ok;
    else
      failed += " [" + q.describe() + ": residual " + num(r.certificate.residual) + "]";
  }
  const bool all = ok == static_cast<int>(grid.size());
  return {all, std::to_string(ok) + "/" + std::to_string(grid.size()) + " grid points certified" + (all ? "" : "; failing:" + failed)};
}

// 11. Without constraints the solver is plain Frank-Wolfe.
Outcome criterion11() {
  ProblemInstance p = gen_qcqp(10, 2, 1);
  p.constraints = {};
  SolverConfig c;
  c.budget = 1000;
  c.stride = 1000;
  c.schedules.step = unit_short_step();
  std::vector<Vec> ours{*p.set->barycenter()};
  run(p, c, [&](const IterationEval&, const SolverState&, const SolverState& after) { ours.push_back(after.x); });

  oracle::FwProblem fw;
  fw.grad = [&](std::span<const double> x, std::span<double> g) { p.f->gradient(x, g); };
  fw.lmo = [&](std::span<const double> g) { return p.set->lmo(g); };
  fw.lipschitz = p.lf;
  const std::vector<Vec> ref = oracle::frank_wolfe_short(fw, *p.set->barycenter(), 1000);
  int first_diff = -1;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    if (k >= ours.size() || std::memcmp(ref[k].data(), ours[k].data(), ref[k].size() * sizeof(double)) != 0) {
      first_diff = static_cast<int>(k);
      break;
    }
  }
  return {first_diff < 0 && ours.size() == ref.size(),
          first_diff < 0 ? "1000 iterates bit-identical" : "first differing iterate " + std::to_string(first_diff)};
}

// 12. Byte-identical traces apart from wall time.
Outcome criterion12() {
  std::string d;
  bool ok = true;
  for (const std::string& name : preset_names()) {
    ExperimentConfig cfg = preset(name);
    // The n = 500 presets are shortened; the rest run at their full budget.
    if (cfg.n >= 100) cfg.budget = 5;
    std::string text[2];
    for (int i = 0; i < 2; ++i) {
      const ExperimentRun r = run_experiment(cfg);
      std::ostringstream os;
      write_trace(os, cfg.echo(), r.result.trace);
      text[i] = strip_wall_time(os.str());
    }
    const bool same = text[0] == text[1];
    ok = ok && same;
    d += name + (same ? " identical" : " DIFFERENT") + " (K=" + std::to_string(cfg.budget) + "); ";
  }
  return {ok, d};
}

const std::map<int, std::string> kNames = {
    {1, "penalty gradient consistency"},  {2, "penalty sign, KKT zero, Lipschitz gradient"},
    {3, "per-iteration descent"},         {4, "dual invariants"},
    {5, "open-loop desk rate"},           {6, "short-step desk rate"},
    {7, "strongly convex set rates"},     {8, "oracle equivalence"},
    {9, "oracle correctness"},            {10, "recursion certificates"},
    {11, "Frank-Wolfe reduction"},        {12, "determinism"},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> want;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criteria") == 0 && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string item;
      while (std::getline(ss, item, ',')) want.insert(std::stoi(item));
    } else {
      std::fprintf(stderr, "usage: %s [--criteria 1,2,...]\n", argv[0]);
      return 1;
    }
  }
  if (want.empty())
    for (int i = 1; i <= 12; ++i) want.insert(i);

  using clock = std::chrono::steady_clock;
  auto secs = [](clock::time_point a) { return std::chrono::duration<double>(clock::now() - a).count(); };
  bool all = true;
  auto report = [&](int id, const Outcome& o, double s) {
    print(id, kNames.at(id), o, s);
    all = all && o.passed;
  };

  for (int id : {1, 2, 3}) {
    if (!want.count(id)) continue;
    const auto t = clock::now();
    const Outcome o = id == 1 ? criterion1() : id == 2 ? criterion2() : criterion3();
    report(id, o, secs(t));
  }
  if (want.count(4) || want.count(5) || want.count(6) || want.count(7) || want.count(8)) {
    const auto t = clock::now();
    const auto desk = desk_criteria();
    const double s = secs(t);
    for (const auto& [id, o] : desk)
      if (want.count(id)) report(id, o, s);
  }
  for (int id : {9, 10, 11, 12}) {
    if (!want.count(id)) continue;
    const auto t = clock::now();
    const Outcome o = id == 9 ? criterion9() : id == 10 ? criterion10() : id == 11 ? criterion11() : criterion12();
    report(id, o, secs(t));
  }
  return all ? 0 : 1;
}
