#include "cgal/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cgal/al.hpp"

namespace cgal {

std::vector<Metric> metrics(std::span<const TraceRecord> trace, double f_ref, double g_at_zero_inf) {
  if (!std::isfinite(f_ref)) throw std::invalid_argument("metrics: f_ref must be finite");
  const double fden = std::max(f_ref, 1.0);
  const double gden = std::max(g_at_zero_inf, 1.0);
  std::vector<Metric> out;
  out.reserve(trace.size());
  for (const TraceRecord& r : trace) {
    Metric m;
    m.k = r.k;
    m.val = std::abs(r.objective - f_ref) / fden;
    m.feas = std::max(r.feas_inf / gden, 1e-8);
    out.push_back(m);
  }
  return out;
}

std::vector<double> t_sequence(std::span<const TraceRecord> trace, double l_star) {
  std::vector<double> out;
  out.reserve(trace.size());
  for (const TraceRecord& r : trace) out.push_back(std::max(r.al_value - l_star, 0.0));
  return out;
}

double t_value(const ProblemInstance& p, std::span<const double> x, std::span<const double> z, double lambda,
               double l_star) {
  const double l = p.f->value(x) + psi_aggregate(p, x, z, lambda);
  return std::max(l - l_star, 0.0);
}

std::vector<std::size_t> kkt_subsequence(std::span<const double> weights, std::span<const double> gaps,
                                         double iota) {
  if (weights.empty()) throw std::invalid_argument("kkt_subsequence: empty input");
  if (weights.size() != gaps.size()) throw std::invalid_argument("kkt_subsequence: length mismatch");
  if (!(iota > 0.0)) throw std::invalid_argument("kkt_subsequence: exponent must be positive");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0)) throw std::invalid_argument("kkt_subsequence: weights must be positive");
    if (!(gaps[i] >= 0.0)) throw std::invalid_argument("kkt_subsequence: gaps must be nonnegative");
  }
  // Incremental weighted mean: a constant sequence leaves the mean exactly
  // unchanged, so ties are not decided by rounding noise.
  std::vector<std::size_t> out{0};
  double gamma = weights[0];
  double avg = std::pow(gaps[0], iota);
  for (std::size_t k = 1; k < weights.size(); ++k) {
    gamma += weights[k];
    const double gk = std::pow(gaps[k], iota);
    const double next = avg + (weights[k] / gamma) * (gk - avg);
    if (next <= avg - 1e-15 * std::abs(avg)) out.push_back(k);
    avg = next;
  }
  return out;
}

RateCertificate fit_rate(std::span<const std::pair<std::int64_t, double>> series, std::int64_t lo,
                         std::int64_t hi, double target, std::string quantity) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("fit_rate: window must satisfy 1 <= lo <= hi");
  std::vector<std::pair<double, double>> pts;
  for (const auto& [k, v] : series) {
    if (k < lo || k > hi) continue;
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("fit_rate: nonpositive value at k = " + std::to_string(k));
    }
    pts.emplace_back(static_cast<double>(k), v);
  }
  if (pts.size() < 10) throw std::invalid_argument("fit_rate: fewer than 10 points in window");

  double sx = 0, sy = 0;
  for (const auto& [k, v] : pts) {
    sx += std::log(k);
    sy += std::log(v);
  }
  const double n = static_cast<double>(pts.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [k, v] : pts) {
    const double dx = std::log(k) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(v) - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_rate: window has a single distinct k");

  RateCertificate c;
  c.quantity = std::move(quantity);
  c.slope = sxy / sxx;
  c.k_lo = lo;
  c.k_hi = hi;
  c.points = pts.size();
  c.target = target;

  const double split = (static_cast<double>(hi) >= 100.0 * lo)
                           ? 10.0 * lo
                           : std::exp(std::log(double(lo)) + (std::log(double(hi)) - std::log(double(lo))) / 3.0);
  double early = 0.0, late = 0.0;
  for (const auto& [k, v] : pts) {
    const double scaled = v * std::pow(k, -target);
    if (k <= split)
      early = std::max(early, scaled);
    else
      late = std::max(late, scaled);
  }
  c.constant = early;
  c.tail_sup = late;
  c.residual = late - early;
  return c;
}

void SequenceSpec::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("sequence spec: " + what); };
  if (horizon < 100) fail("horizon must be >= 100");
  if (!(phi0 >= 0.0) || !std::isfinite(phi0)) fail("phi0 must be >= 0");
  if (kind == SequenceKind::kProp21) {
    if (!(t1 > 0.0 && t1 < 1.0)) fail("t1 must lie in (0, 1)");
    if (!(t2 > t1)) fail("t2 must exceed t1");
    if (!(c_tau > 0.0)) fail("c_tau must be positive");
    if (!(c_beta >= 0.0)) fail("c_beta must be >= 0");
  } else {
    if (!(eta >= 0.5 && eta < 1.0)) fail("eta must lie in [0.5, 1)");
    if (!(mu > 0.0 && mu <= 1.0)) fail("mu must lie in (0, 1]");
    if (!(s > 0.0)) fail("s must be positive");
    if (s > 1.0 + 1.0 / mu + 1e-12) fail("s must satisfy s <= 1 + 1/mu");
    if (!(c > 0.0)) fail("c must be positive");
  }
}

std::string SequenceSpec::describe() const {
  std::ostringstream os;
  if (kind == SequenceKind::kProp21) {
    os << "prop21 t1=" << t1 << " t2=" << t2 << " c_tau=" << c_tau << " c_beta=" << c_beta;
  } else {
    os << "prop22 eta=" << eta << " mu=" << mu << " s=" << s << " c=" << c;
  }
  os << " K=" << horizon << " phi0=" << phi0;
  return os.str();
}

namespace {

// Shared fit-on-[K/100, K/10], test-on-[K/10, K] protocol. psi(k, phi) is the
// rescaled quantity; the slope is fitted to phi itself over [K/100, K].
template <class Step, class Scale>
SequenceRun run_sequence(const SequenceSpec& spec, std::int64_t k0, Step step, Scale scale, double target,
                         std::string name, bool keep_path) {
  const std::int64_t K = spec.horizon;
  const std::int64_t fit_lo = std::max<std::int64_t>(K / 100, 1);
  const std::int64_t fit_hi = K / 10;

  SequenceRun out;
  if (keep_path) out.phi.reserve(static_cast<std::size_t>(K - k0 + 1));
  double phi = spec.phi0;
  double early = 0.0, late = 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::int64_t k = k0;; ++k) {
    if (!std::isfinite(phi)) throw NumericalAbort("sequence diverged at k = " + std::to_string(k));
    if (keep_path) out.phi.push_back(phi);
    const double psi = scale(k, phi);
    if (k >= fit_lo && k <= fit_hi) early = std::max(early, psi);
    if (k >= fit_hi) late = std::max(late, psi);
    if (k >= fit_lo && phi > 0.0) {
      const double lx = std::log(double(k)), ly = std::log(phi);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++n;
    }
    if (k == K) break;
    phi = step(k, phi);
  }

  RateCertificate& c = out.certificate;
  c.quantity = std::move(name);
  c.k_lo = fit_lo;
  c.k_hi = K;
  c.points = n;
  c.target = target;
  if (n >= 2) {
    const double dn = double(n);
    c.slope = (sxy - sx * sy / dn) / (sxx - sx * sx / dn);
  }
  c.constant = early;
  c.tail_sup = late;
  c.residual = late - early;
  out.phi_final = phi;
  return out;
}

}  // namespace

SequenceRun simulate_prop21(const SequenceSpec& spec, bool keep_path) {
  if (spec.kind != SequenceKind::kProp21) throw std::invalid_argument("simulate_prop21: wrong kind");
  spec.validate();
  const double rate = spec.t2 - spec.t1;
  auto step = [&](std::int64_t k, double phi) {
    const double kk = double(k);
    const double tau = std::min(spec.c_tau * std::pow(kk, -spec.t1), 0.99);
    const double beta = spec.c_beta * std::pow(kk, -spec.t2);
    return (1.0 - tau) * phi + beta;
  };
  auto scale = [&](std::int64_t k, double phi) { return phi * std::pow(double(k), rate); };
  return run_sequence(spec, 1, step, scale, -rate, "phi_k k^(t2-t1)", keep_path);
}

SequenceRun simulate_prop22(const SequenceSpec& spec, bool keep_path) {
  if (spec.kind != SequenceKind::kProp22) throw std::invalid_argument("simulate_prop22: wrong kind");
  spec.validate();
  const double e = 1.0 / (1.0 + spec.mu);
  auto gamma = [&](std::int64_t k) { return spec.c * std::pow(double(k + 1), -spec.s); };
  auto step = [&](std::int64_t k, double phi) {
    return phi * std::max(spec.eta, 1.0 - std::pow(phi, spec.mu)) + gamma(k);
  };
  auto scale = [&](std::int64_t k, double phi) { return phi * std::pow(gamma(k), -e); };
  return run_sequence(spec, 0, step, scale, -spec.s * e, "phi_k gamma_k^(-1/(1+mu))", keep_path);
}

SequenceRun simulate(const SequenceSpec& spec, bool keep_path) {
  return spec.kind == SequenceKind::kProp21 ? simulate_prop21(spec, keep_path) : simulate_prop22(spec, keep_path);
}

std::vector<SequenceSpec> default_prop21_grid(std::int64_t horizon) {
  std::vector<SequenceSpec> out;
  for (double t1 : {0.3, 0.5, 0.7}) {
    for (double t2 : {t1 + 0.2, t1 + 0.5, 1.5}) {
      SequenceSpec s;
      s.kind = SequenceKind::kProp21;
      s.t1 = t1;
      s.t2 = t2;
      s.horizon = horizon;
      out.push_back(s);
    }
  }
  return out;
}

std::vector<SequenceSpec> default_prop22_grid(std::int64_t horizon) {
  std::vector<SequenceSpec> out;
  for (double eta : {0.5, 0.75, 0.9}) {
    for (double mu : {0.5, 1.0}) {
      for (double s : {1.0, 1.0 + 1.0 / mu}) {
        SequenceSpec q;
        q.kind = SequenceKind::kProp22;
        q.eta = eta;
        q.mu = mu;
        q.s = s;
        q.horizon = horizon;
        out.push_back(q);
      }
    }
  }
  return out;
}

}  // namespace cgal
