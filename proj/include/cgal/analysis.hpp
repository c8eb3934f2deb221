#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cgal/linalg.hpp"
#include "cgal/model.hpp"
#include "cgal/solver.hpp"

namespace cgal {

struct Metric {
  std::int64_t k = 0;
  double val = 0.0;
  double feas = 0.0;
  double combined() const { return val > feas ? val : feas; }
};

/// val_k = |f - f_ref| / max{f_ref, 1},
/// feas_k = max{feas_inf / max{||g(0)||_inf, 1}, 1e-8}.
std::vector<Metric> metrics(std::span<const TraceRecord> trace, double f_ref, double g_at_zero_inf);

/// T_k = [L_{lambda_k}(x^k, z^k) - L*]_+ from the AL values stored in a trace.
std::vector<double> t_sequence(std::span<const TraceRecord> trace, double l_star);

/// Same quantity recomputed from iterates.
double t_value(const ProblemInstance& p, std::span<const double> x, std::span<const double> z, double lambda,
               double l_star);

/// Indices k with running weighted average of G^iota non-increasing at k:
/// sum_{i<=k} (xi_i / Gamma_k) G_i^iota <= sum_{i<=k-1} (xi_i / Gamma_{k-1}) G_i^iota.
/// k = 0 is always included. Comparison carries a 1e-15 relative slack.
std::vector<std::size_t> kkt_subsequence(std::span<const double> weights, std::span<const double> gaps,
                                         double iota);

struct RateCertificate {
  std::string quantity;
  double slope = 0.0;  // least-squares slope of log(value) against log(k)
  std::int64_t k_lo = 0;
  std::int64_t k_hi = 0;
  std::size_t points = 0;
  double target = 0.0;      // rate exponent the bound is tested against (negative)
  double constant = 0.0;    // C fitted on the early part
  double tail_sup = 0.0;    // sup of value * k^{-target} on the late part
  double residual = 0.0;    // tail_sup - constant; <= 0 means the bound holds

  bool bounded() const { return residual <= 0.0; }
};

/// Log-log slope over k in [lo, hi]. For the bound, C is the supremum of
/// value * k^{-target} over the first decade [lo, 10 lo] (or the first third
/// of the window in log scale if it spans less than two decades) and the
/// residual is taken over the rest. Requires >= 10 points in the window and
/// positive values.
RateCertificate fit_rate(std::span<const std::pair<std::int64_t, double>> series, std::int64_t lo,
                         std::int64_t hi, double target, std::string quantity = "series");

enum class SequenceKind { kProp21, kProp22 };

/// Prop21: phi_{k+1} = (1 - tau_k) phi_k + beta_k, tau_k = min(c_tau k^{-t1}, 0.99),
/// beta_k = c_beta k^{-t2}, k >= 1.
/// Prop22: phi_{k+1} = phi_k max{eta, 1 - phi_k^mu} + gamma_k,
/// gamma_k = c (k+1)^{-s}, k >= 0.
struct SequenceSpec {
  SequenceKind kind = SequenceKind::kProp21;
  double t1 = 0.5;
  double t2 = 1.0;
  double c_tau = 1.0;
  double c_beta = 1.0;
  double eta = 0.75;
  double mu = 1.0;
  double s = 2.0;
  double c = 1.0;
  std::int64_t horizon = 1000000;
  double phi0 = 1.0;

  /// Throws std::invalid_argument naming the offending parameter.
  void validate() const;
  std::string describe() const;
};

struct SequenceRun {
  RateCertificate certificate;
  double phi_final = 0.0;
  std::vector<double> phi;  // only filled when requested
};

/// Runs the recursion with equality to the horizon K and tests
/// sup_{k in [K/10, K]} phi_k k^{t2-t1} against C = sup over [K/100, K/10].
SequenceRun simulate_prop21(const SequenceSpec& spec, bool keep_path = false);
/// Same protocol for phi_k gamma_k^{-1/(1+mu)}.
SequenceRun simulate_prop22(const SequenceSpec& spec, bool keep_path = false);
SequenceRun simulate(const SequenceSpec& spec, bool keep_path = false);

/// Default grids: t1 in {0.3, 0.5, 0.7} x t2 in {t1+0.2, t1+0.5, 1.5}, and
/// eta in {0.5, 0.75, 0.9} x mu in {0.5, 1} x s in {1, 1+1/mu}.
std::vector<SequenceSpec> default_prop21_grid(std::int64_t horizon = 1000000);
std::vector<SequenceSpec> default_prop22_grid(std::int64_t horizon = 1000000);

}  // namespace cgal
