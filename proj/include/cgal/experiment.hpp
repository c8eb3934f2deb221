#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cgal/analysis.hpp"
#include "cgal/config.hpp"
#include "cgal/model.hpp"
#include "cgal/solver.hpp"

namespace cgal {

ProblemInstance build_problem(const ExperimentConfig& cfg);
SolverConfig build_solver_config(const ExperimentConfig& cfg, const ProblemInstance& p);

/// ||g(0)||_inf, the feasibility normalizer.
double g_at_zero_inf(const ProblemInstance& p);

struct ExperimentRun {
  ExperimentConfig config;
  RunResult result;
  double g0_inf = 0.0;
};

ExperimentRun run_experiment(const ExperimentConfig& cfg, const IterationObserver& observer = {});

/// Oracle value for two-dimensional instances, computed with the given grid.
double oracle_reference(const ExperimentConfig& cfg, int grid = 2001, int refine = 40);

/// Best terminal objective over the given configurations run at `factor`
/// times their budget and filtered to relative feasibility <= feas_tol. If no
/// run passes the filter, the terminal objective of the most feasible run.
struct BestOfRuns {
  double value = 0.0;
  std::string chosen;  // label of the run that supplied the value
  std::vector<ExperimentRun> runs;
};
BestOfRuns best_of_runs(const std::vector<ExperimentConfig>& cfgs, int factor = 4, double feas_tol = 1e-3);

/// (k, max{val_k, feas_k}) for k >= 1.
std::vector<std::pair<std::int64_t, double>> combined_series(const std::vector<Metric>& m);

struct DeskMeasurement {
  std::string name;
  ExperimentRun run;
  double f_ref = 0.0;
  RateCertificate rate;
  double terminal_combined = 0.0;
  double terminal_val = 0.0;
  double terminal_feas_inf = 0.0;
  double worst_gap_minus_t = 0.0;  // min over traced k of G_k - T_k
};

struct DeskSuite {
  DeskMeasurement ol_qcqp;   // desk-ol
  DeskMeasurement ss_qcqp;   // desk-ss
  DeskMeasurement ss_ball;   // ball-ss
  DeskMeasurement ol_ball;   // ball-ol
  double qcqp_reference = 0.0;
  std::string qcqp_reference_source;
  double ball_reference = 0.0;
};

struct SuiteOptions {
  std::int64_t budget = 100000;
  int reference_factor = 4;
  int oracle_grid = 2001;
  int oracle_refine = 40;
  /// Called for every iteration of every measured run, with the run name.
  std::function<void(const std::string&, const IterationEval&, const SolverState&, const SolverState&)> observer;
};

DeskSuite run_desk_suite(const SuiteOptions& opts = {});

struct CriterionLine {
  int id = 0;
  bool passed = false;
  std::string text;
};

/// Thresholds for the desk criteria: slopes of max{val, feas} over
/// [1e3, K] at most -0.30 (OL QCQP, also terminal <= 1e-3), -0.40 (SS QCQP),
/// -0.55 (SS ball) and -0.70 (OL ball); ball oracle agreement 1e-3 relative
/// with feas_inf <= 1e-6 and G_k >= T_k - 1e-8.
std::vector<CriterionLine> judge_desk_suite(const DeskSuite& s);

}  // namespace cgal
