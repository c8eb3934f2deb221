#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cgal/al.hpp"
#include "cgal/linalg.hpp"
#include "cgal/model.hpp"

namespace cgal {

/// lambda_k = lambda0 (k+1)^tau, tau in (0, 1).
struct PenaltySchedule {
  double lambda0 = 1.0;
  double tau = 0.4;
  double at(std::int64_t k) const;
  void validate() const;
};

/// sigma_k = min(sigma0 / (k+2)^{1+gamma}, lambda_k).
struct DualStepSchedule {
  double sigma0 = 1.0;
  double gamma = 0.01;
  double at(std::int64_t k, double lambda_k) const;
  void validate() const;
};

/// alpha_k = min(1, alpha0 (k+1)^{-p}).
struct OpenLoopStep {
  double alpha0 = 1.0;
  double p = 0.95;
  double at(std::int64_t k) const;
  void validate() const;
};

/// Short stepsize scaled by prefactor(k) >= 1, clamped to [0, 1].
struct ShortStep {
  std::function<double(std::int64_t)> prefactor = [](std::int64_t) { return 1.0; };
  std::string label = "unit";
};

using StepsizePolicy = std::variant<OpenLoopStep, ShortStep>;

/// 1020 up to k = 900, then linearly down to 1 at k = 1000, then 1.
double warmstart_prefactor(std::int64_t k);
ShortStep unit_short_step();
ShortStep warmstart_short_step();

struct ScheduleSet {
  PenaltySchedule penalty;
  DualStepSchedule dual;
  StepsizePolicy step = OpenLoopStep{};
  void validate() const;
};

struct GapResult {
  double gap = 0.0;
  Vec v;
};

/// G = <grad, x - v> with v = lmo(grad). Values in [-tol, 0) are clamped to
/// zero, where tol = 1e-8 (1 + |<grad, x>| + |<grad, v>|); anything more
/// negative raises NumericalAbort.
GapResult gap_from_gradient(const FeasibleSet& set, std::span<const double> grad, std::span<const double> x);
/// Gap of the AL subproblem at (x, z, lambda).
GapResult gap(const ProblemInstance& p, std::span<const double> x, std::span<const double> z, double lambda);

/// min{1, prefactor G / (lipF dist2)}; 0 when G = dist2 = 0.
double short_alpha(double gap, double dist2, double lipF, double prefactor = 1.0);

/// z + sigma max{-z/lambda, g_next}, requires sigma <= lambda.
Vec dual_update(std::span<const double> z, std::span<const double> g_next, double sigma, double lambda);

struct SolverState {
  std::int64_t k = 0;
  Vec x;
  Vec z;
  double lambda = 0.0;  // lambda_k
  double last_gap = 0.0;
  Vec last_v;
  double last_alpha = 0.0;
};

/// Everything computed at iterate k before the update.
struct IterationEval {
  std::int64_t k = 0;
  double lambda = 0.0;
  double sigma = 0.0;
  double alpha = 0.0;
  double gap = 0.0;
  double lip_F = 0.0;  // L_Psi(x^k, z^k) + L_f
  double dist2 = 0.0;  // ||v^k - x^k||^2
  double prefactor = 1.0;
  AlEvaluation al;
  Vec v;
};

IterationEval evaluate_iteration(const ProblemInstance& p, const SolverState& state, const ScheduleSet& schedules);
/// x+ = x + alpha (v - x), z+ = dual_update(z, g(x+), sigma, lambda), k+1.
SolverState advance(const ProblemInstance& p, const SolverState& state, const IterationEval& eval,
                    const ScheduleSet& schedules);
/// One iteration: one LMO call, one gradient evaluation.
SolverState step(const ProblemInstance& p, const SolverState& state, const ScheduleSet& schedules);

SolverState initial_state(const ProblemInstance& p, std::optional<Vec> x0, Vec z0, const ScheduleSet& schedules);

struct TraceRecord {
  std::int64_t k = 0;
  double objective = 0.0;
  double feas_inf = 0.0;
  double feas_2 = 0.0;
  double gap = 0.0;
  double al_value = 0.0;
  double alpha = 0.0;
  double lambda = 0.0;
  double sigma = 0.0;
  double z_norm1 = 0.0;
  std::int64_t wall_micros = 0;

  bool operator==(const TraceRecord&) const = default;
};

TraceRecord make_record(const IterationEval& eval, const SolverState& state, std::int64_t wall_micros);

struct SolverConfig {
  std::optional<Vec> x0;  // default: set barycenter, else lmo(0)
  Vec z0;                 // default: zeros
  std::int64_t budget = 1000;
  std::int64_t stride = 1;
  ScheduleSet schedules;
  /// Stop once max{feas_inf, gap / max(1, |L|)} <= tol. Off by default.
  std::optional<double> early_stop_tol;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  SolverState final_state;
  bool stopped_early = false;
};

/// Called once per performed step with the evaluation at k and the states
/// before and after the update.
using IterationObserver =
    std::function<void(const IterationEval& eval, const SolverState& before, const SolverState& after)>;

RunResult run(const ProblemInstance& p, const SolverConfig& config, const IterationObserver& observer = {});

}  // namespace cgal
