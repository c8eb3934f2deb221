#include "cgal/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace cgal {

double PenaltySchedule::at(std::int64_t k) const {
  return lambda0 * std::pow(static_cast<double>(k) + 1.0, tau);
}

void PenaltySchedule::validate() const {
  if (!(lambda0 > 0.0)) throw std::invalid_argument("lambda0 must be positive");
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0, 1)");
}

double DualStepSchedule::at(std::int64_t k, double lambda_k) const {
  return std::min(sigma0 / std::pow(static_cast<double>(k) + 2.0, 1.0 + gamma), lambda_k);
}

void DualStepSchedule::validate() const {
  if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
}

double OpenLoopStep::at(std::int64_t k) const {
  return std::min(1.0, alpha0 * std::pow(static_cast<double>(k) + 1.0, -p));
}

void OpenLoopStep::validate() const {
  if (!(alpha0 > 0.0 && alpha0 <= 1.0)) throw std::invalid_argument("alpha0 must lie in (0, 1]");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
}

double warmstart_prefactor(std::int64_t k) {
  if (k <= 900) return 1020.0;
  return std::max(1020.0 - static_cast<double>(k - 900) * 10.2, 1.0);
}

ShortStep unit_short_step() { return ShortStep{}; }

ShortStep warmstart_short_step() { return ShortStep{&warmstart_prefactor, "warmstart"}; }

void ScheduleSet::validate() const {
  penalty.validate();
  dual.validate();
  if (const auto* ol = std::get_if<OpenLoopStep>(&step)) ol->validate();
  if (const auto* ss = std::get_if<ShortStep>(&step))
    if (!ss->prefactor) throw std::invalid_argument("short stepsize needs a prefactor");
}

GapResult gap_from_gradient(const FeasibleSet& set, std::span<const double> grad, std::span<const double> x) {
  GapResult r;
  r.v = set.lmo(grad);
  double g = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) g += grad[i] * (x[i] - r.v[i]);
  if (g < 0.0) {
    const double tol = 1e-8 * (1.0 + std::abs(dot(grad, x)) + std::abs(dot(grad, r.v)));
    if (g < -tol) throw NumericalAbort("negative gap " + std::to_string(g) + ": LMO or gradient is inconsistent");
    g = 0.0;
  }
  r.gap = g;
  return r;
}

GapResult gap(const ProblemInstance& p, std::span<const double> x, std::span<const double> z, double lambda) {
  const AlEvaluation ev = al_eval(p, x, z, lambda);
  return gap_from_gradient(*p.set, ev.grad_F, x);
}

double short_alpha(double gap, double dist2, double lipF, double prefactor) {
  if (!(gap >= 0.0) || !(dist2 >= 0.0)) throw std::invalid_argument("short_alpha: gap and dist2 must be >= 0");
  if (!(lipF > 0.0)) throw std::invalid_argument("short_alpha: lipF must be positive");
  if (!(prefactor >= 1.0)) throw std::invalid_argument("short_alpha: prefactor must be >= 1");
  if (gap == 0.0) return 0.0;
  if (dist2 == 0.0) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true)) std::cerr << "warning: positive gap with zero step direction; using alpha = 1\n";
    return 1.0;
  }
  return std::clamp(prefactor * gap / (lipF * dist2), 0.0, 1.0);
}

Vec dual_update(std::span<const double> z, std::span<const double> g_next, double sigma, double lambda) {
  if (z.size() != g_next.size()) throw std::invalid_argument("dual_update: size mismatch");
  if (!(sigma > 0.0) || !(lambda > 0.0)) throw std::invalid_argument("dual_update: sigma and lambda must be positive");
  if (sigma > lambda) throw std::invalid_argument("dual_update: sigma must not exceed lambda");
  Vec out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    double zi = z[i] + sigma * std::max(-z[i] / lambda, g_next[i]);
    if (zi < 0.0) {
      if (zi < -1e-12) throw NumericalAbort("dual update produced a negative multiplier");
      zi = 0.0;
    }
    out[i] = zi;
  }
  return out;
}

IterationEval evaluate_iteration(const ProblemInstance& p, const SolverState& state, const ScheduleSet& schedules) {
  IterationEval ev;
  ev.k = state.k;
  ev.lambda = state.lambda;
  ev.sigma = schedules.dual.at(state.k, state.lambda);
  ev.al = al_eval(p, state.x, state.z, state.lambda);
  GapResult g = gap_from_gradient(*p.set, ev.al.grad_F, state.x);
  ev.gap = g.gap;
  ev.v = std::move(g.v);
  double d2 = 0.0;
  for (std::size_t i = 0; i < state.x.size(); ++i) {
    const double d = ev.v[i] - state.x[i];
    d2 += d * d;
  }
  ev.dist2 = d2;
  ev.lip_F = ev.al.lip_estimate + p.lf;
  if (const auto* ol = std::get_if<OpenLoopStep>(&schedules.step)) {
    ev.alpha = ol->at(state.k);
  } else {
    const auto& ss = std::get<ShortStep>(schedules.step);
    ev.prefactor = ss.prefactor(state.k);
    ev.alpha = short_alpha(ev.gap, ev.dist2, ev.lip_F, ev.prefactor);
  }
  return ev;
}

SolverState advance(const ProblemInstance& p, const SolverState& state, const IterationEval& eval,
                    const ScheduleSet& schedules) {
  SolverState next;
  next.k = state.k + 1;
  next.x = state.x;
  for (std::size_t i = 0; i < next.x.size(); ++i) next.x[i] += eval.alpha * (eval.v[i] - state.x[i]);
  const Vec g_next = p.constraint_values(next.x);
  next.z = p.num_constraints() == 0 ? Vec{} : dual_update(state.z, g_next, eval.sigma, eval.lambda);
  next.lambda = schedules.penalty.at(next.k);
  next.last_gap = eval.gap;
  next.last_v = eval.v;
  next.last_alpha = eval.alpha;
  return next;
}

SolverState step(const ProblemInstance& p, const SolverState& state, const ScheduleSet& schedules) {
  return advance(p, state, evaluate_iteration(p, state, schedules), schedules);
}

SolverState initial_state(const ProblemInstance& p, std::optional<Vec> x0, Vec z0, const ScheduleSet& schedules) {
  SolverState s;
  if (x0) {
    s.x = std::move(*x0);
  } else if (auto bc = p.set->barycenter()) {
    s.x = std::move(*bc);
  } else {
    s.x = p.set->lmo(Vec(p.dim(), 0.0));
  }
  if (s.x.size() != p.dim()) throw std::invalid_argument("x0 has wrong dimension");
  if (z0.empty()) z0.assign(p.num_constraints(), 0.0);
  if (z0.size() != p.num_constraints()) throw std::invalid_argument("z0 has wrong dimension");
  for (double zi : z0)
    if (!(zi >= 0.0)) throw std::invalid_argument("z0 must be nonnegative");
  s.z = std::move(z0);
  s.lambda = schedules.penalty.at(0);
  return s;
}

TraceRecord make_record(const IterationEval& eval, const SolverState& state, std::int64_t wall_micros) {
  TraceRecord r;
  r.k = eval.k;
  r.objective = eval.al.objective;
  double finf = 0.0, f2 = 0.0;
  for (double g : eval.al.constraint_values) {
    const double pos = std::max(g, 0.0);
    finf = std::max(finf, pos);
    f2 += pos * pos;
  }
  r.feas_inf = finf;
  r.feas_2 = std::sqrt(f2);
  r.gap = eval.gap;
  r.al_value = eval.al.al_value;
  r.alpha = eval.alpha;
  r.lambda = eval.lambda;
  r.sigma = eval.sigma;
  double z1 = 0.0;
  for (double zi : state.z) z1 += std::abs(zi);
  r.z_norm1 = z1;
  r.wall_micros = wall_micros;
  return r;
}

RunResult run(const ProblemInstance& p, const SolverConfig& config, const IterationObserver& observer) {
  if (config.budget < 0) throw std::invalid_argument("budget must be >= 0");
  if (config.stride < 1) throw std::invalid_argument("stride must be >= 1");
  config.schedules.validate();
  p.check();

  const auto start = std::chrono::steady_clock::now();
  auto micros = [&] {
    return std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
  };

  RunResult out;
  SolverState state = initial_state(p, config.x0, config.z0, config.schedules);
  for (;;) {
    IterationEval ev = evaluate_iteration(p, state, config.schedules);
    const bool last = state.k == config.budget;
    bool stop = false;
    if (config.early_stop_tol) {
      const TraceRecord r = make_record(ev, state, 0);
      stop = std::max(r.feas_inf, r.gap / std::max(1.0, std::abs(r.al_value))) <= *config.early_stop_tol;
    }
    if (last || stop || state.k % config.stride == 0) out.trace.push_back(make_record(ev, state, micros()));
    if (last || stop) {
      out.stopped_early = stop && !last;
      break;
    }
    SolverState next = advance(p, state, ev, config.schedules);
    if (observer) observer(ev, state, next);
    state = std::move(next);
  }
  out.final_state = std::move(state);
  return out;
}

}  // namespace cgal
