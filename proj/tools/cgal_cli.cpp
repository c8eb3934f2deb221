// Command-line front end: generate, run, certify, proposition, suite.
//
// Exit codes: 0 success, 1 usage or config error, 2 numerical abort,
// 3 certification failure.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "cgal/analysis.hpp"
#include "cgal/config.hpp"
#include "cgal/experiment.hpp"
#include "cgal/problems.hpp"
#include "cgal/trace.hpp"

namespace fs = std::filesystem;
using namespace cgal;

namespace {

constexpr int kUsage = 1;
constexpr int kAbort = 2;
constexpr int kCertFail = 3;

struct Shared {
  std::string config;
  std::string out;
  std::vector<std::uint64_t> seeds;
  std::int64_t budget = -1;
  std::int64_t stride = -1;
  std::string preset;
  int jobs = 1;
  std::vector<std::string> set;
};

void add_shared(CLI::App* app, Shared& s, bool with_jobs) {
  app->add_option("--config", s.config, "key=value config file");
  app->add_option("--out", s.out, "output path");
  app->add_option("--seed", s.seeds, "instance seed (comma-separated list runs several)")->delimiter(',');
  app->add_option("--budget", s.budget, "iteration budget K");
  app->add_option("--stride", s.stride, "trace stride");
  app->add_option("--preset", s.preset, "named preset");
  app->add_option("--set", s.set, "extra key=value override (repeatable)");
  if (with_jobs) app->add_option("--jobs", s.jobs, "worker threads")->check(CLI::PositiveNumber);
}

fs::path trace_dir() {
  if (const char* d = std::getenv("CGAL_TRACE_DIR"); d && *d) return d;
  return ".";
}

// Preset, then config file, then flags.
ExperimentConfig resolve(const Shared& s) {
  ExperimentConfig cfg;
  if (!s.preset.empty()) cfg = preset(s.preset);
  if (!s.config.empty()) {
    std::ifstream in(s.config);
    if (!in) throw ConfigError("config", "cannot open " + s.config);
    apply_text(cfg, in);
  }
  for (const std::string& kv : s.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("set", "expected key=value, got '" + kv + "'");
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (s.budget >= 0) cfg.budget = s.budget;
  if (s.stride >= 0) cfg.stride = s.stride;
  if (!s.out.empty()) cfg.out = s.out;
  return cfg;
}

std::string output_path(const ExperimentConfig& cfg, bool several) {
  fs::path p = cfg.out.empty() ? trace_dir() / (cfg.label() + ".csv") : fs::path(cfg.out);
  if (several && !cfg.out.empty()) {
    p.replace_filename(p.stem().string() + ".seed" + std::to_string(cfg.seed) + p.extension().string());
  }
  return p.string();
}

// Runs the configurations on up to `jobs` threads; each writes its own trace.
int run_all(const std::vector<ExperimentConfig>& cfgs, int jobs, bool several) {
  std::atomic<std::size_t> next{0};
  std::atomic<int> status{0};
  std::mutex io;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < cfgs.size();) {
      ExperimentConfig cfg = cfgs[i];
      try {
        if (cfg.reference_source == "oracle" && !cfg.reference) cfg.reference = oracle_reference(cfg);
        if (!cfg.reference) cfg.reference_source.clear();
        const ExperimentRun r = run_experiment(cfg);
        const std::string path = output_path(cfg, several);
        write_trace_file(path, cfg.echo(), r.result.trace);
        std::lock_guard lock(io);
        const TraceRecord& last = r.result.trace.back();
        std::cout << path << ": K=" << last.k << " f=" << format_double(last.objective)
                  << " feas_inf=" << format_double(last.feas_inf) << " gap=" << format_double(last.gap) << '\n';
      } catch (const NumericalAbort& e) {
        std::lock_guard lock(io);
        std::cerr << cfg.label() << ": numerical abort: " << e.what() << '\n';
        status = std::max(status.load(), kAbort);
      } catch (const std::exception& e) {
        std::lock_guard lock(io);
        std::cerr << cfg.label() << ": " << e.what() << '\n';
        if (status.load() == 0) status = kUsage;
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(cfgs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return status;
}

int cmd_generate(const std::string& kind, int n, int m, std::uint64_t seed, const std::string& out) {
  std::string text;
  if (kind == "qcqp") {
    text = describe(gen_qcqp_data(n, m, seed));
  } else if (kind == "ball_qp") {
    const BallQpSpec b = gen_ball_qp_data(n, seed, m != 0);
    std::ostringstream os;
    os << "# cgal-instance v1\nformat_version=1\nkind=ball_qp\nn=" << n << "\nm=" << (b.constrained ? 1 : 0)
       << "\nseed=" << seed << "\nprng=xoshiro256**/splitmix64\nradius=1\nb=" << format_list(b.b)
       << "\na=" << format_list(b.a) << "\nbeta=" << format_double(b.beta) << '\n';
    text = os.str();
  } else {
    throw ConfigError("kind", "expected qcqp or ball_qp");
  }
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << text;
  }
  return 0;
}

struct CertifyArgs {
  std::vector<std::string> traces;
  std::string quantity = "combined";
  double target = -0.5;
  std::vector<std::int64_t> window;
  double reference = std::numeric_limits<double>::quiet_NaN();
  double g0 = std::numeric_limits<double>::quiet_NaN();
  std::string suite;
};

int cmd_certify(const CertifyArgs& a, const Shared& s) {
  if (!a.suite.empty()) {
    if (a.suite != "desk") throw ConfigError("suite", "only the desk suite is defined");
    SuiteOptions opts;
    if (s.budget > 0) opts.budget = s.budget;
    const DeskSuite suite = run_desk_suite(opts);
    std::cout << "reference f_ref (QCQP) = " << format_double(suite.qcqp_reference) << " from "
              << suite.qcqp_reference_source << "\nreference L* (ball) = " << format_double(suite.ball_reference)
              << '\n';
    bool ok = true;
    for (const CriterionLine& line : judge_desk_suite(suite)) {
      std::cout << (line.passed ? "PASS" : "FAIL") << " criterion " << line.id << ": " << line.text << '\n';
      ok = ok && line.passed;
    }
    return ok ? 0 : kCertFail;
  }
  if (a.traces.empty()) throw ConfigError("trace", "no trace files given");
  bool ok = true;
  for (const std::string& path : a.traces) {
    const Trace t = read_trace_file(path);
    double ref = a.reference;
    double g0 = a.g0;
    std::optional<ExperimentConfig> cfg;
    try {
      cfg = parse_echo(t.echo);
    } catch (const ConfigError&) {
    }
    if (std::isnan(ref) && cfg && cfg->reference) ref = *cfg->reference;
    const bool needs_ref = a.quantity == "val" || a.quantity == "combined" || a.quantity == "t";
    const bool needs_g0 = a.quantity == "feas" || a.quantity == "combined";
    if (needs_ref && std::isnan(ref)) throw ConfigError("reference", path + ": no reference value");
    if (needs_g0 && std::isnan(g0)) {
      if (!cfg) throw ConfigError("g0", path + ": header is not a config echo; pass --g0");
      g0 = g_at_zero_inf(build_problem(*cfg));
    }
    std::vector<std::pair<std::int64_t, double>> series;
    std::vector<Metric> m;
    if (needs_ref || needs_g0) m = metrics(t.records, needs_ref ? ref : 0.0, needs_g0 ? g0 : 1.0);
    std::vector<double> tk;
    if (a.quantity == "t") tk = t_sequence(t.records, ref);
    for (std::size_t i = 0; i < t.records.size(); ++i) {
      const std::int64_t k = t.records[i].k;
      if (k < 1) continue;
      double v = 0;
      if (a.quantity == "val")
        v = m[i].val;
      else if (a.quantity == "feas")
        v = m[i].feas;
      else if (a.quantity == "combined")
        v = m[i].combined();
      else if (a.quantity == "gap")
        v = t.records[i].gap;
      else if (a.quantity == "t")
        v = tk[i];
      else
        throw ConfigError("quantity", "expected val, feas, combined, gap or t");
      series.emplace_back(k, std::max(v, 1e-16));
    }
    if (series.empty()) throw ConfigError("trace", path + ": no records with k >= 1");
    std::int64_t lo = a.window.size() == 2 ? a.window[0] : std::max<std::int64_t>(1, series.back().first / 100);
    std::int64_t hi = a.window.size() == 2 ? a.window[1] : series.back().first;
    const RateCertificate c = fit_rate(series, lo, hi, a.target, a.quantity);
    const bool pass = c.slope <= a.target;
    ok = ok && pass;
    std::cout << (pass ? "PASS " : "FAIL ") << path << ": " << a.quantity << " slope " << format_double(c.slope)
              << " over [" << lo << ", " << hi << "] (" << c.points << " points), target " << a.target
              << ", C " << format_double(c.constant) << ", residual " << format_double(c.residual) << '\n';
  }
  return ok ? 0 : kCertFail;
}

struct PropArgs {
  std::string kind = "both";
  std::int64_t horizon = 1000000;
  std::vector<double> t1, t2, eta, mu, s;
  double c_tau = 1.0, c_beta = 1.0, c = 1.0, phi0 = 1.0;
};

int cmd_proposition(const PropArgs& a) {
  std::vector<SequenceSpec> grid;
  if (a.kind == "prop21" || a.kind == "both") {
    if (a.t1.empty() && a.t2.empty()) {
      grid = default_prop21_grid(a.horizon);
    } else {
      for (double t1 : a.t1.empty() ? std::vector<double>{0.5} : a.t1)
        for (double t2 : a.t2.empty() ? std::vector<double>{1.0} : a.t2) {
          SequenceSpec q;
          q.t1 = t1;
          q.t2 = t2;
          q.horizon = a.horizon;
          grid.push_back(q);
        }
    }
  }
  if (a.kind == "prop22" || a.kind == "both") {
    if (a.eta.empty() && a.mu.empty() && a.s.empty()) {
      for (const auto& q : default_prop22_grid(a.horizon)) grid.push_back(q);
    } else {
      for (double eta : a.eta.empty() ? std::vector<double>{0.75} : a.eta)
        for (double mu : a.mu.empty() ? std::vector<double>{1.0} : a.mu)
          for (double s : a.s.empty() ? std::vector<double>{1.0 + 1.0 / mu} : a.s) {
            SequenceSpec q;
            q.kind = SequenceKind::kProp22;
            q.eta = eta;
            q.mu = mu;
            q.s = s;
            q.horizon = a.horizon;
            grid.push_back(q);
          }
    }
  }
  if (grid.empty()) throw ConfigError("kind", "expected prop21, prop22 or both");
  bool ok = true, domain_error = false;
  for (SequenceSpec q : grid) {
    q.c_tau = a.c_tau;
    q.c_beta = a.c_beta;
    q.c = a.c;
    q.phi0 = a.phi0;
    try {
      const SequenceRun r = simulate(q);
      const auto& c = r.certificate;
      std::cout << (c.bounded() ? "PASS " : "FAIL ") << q.describe() << ": C " << format_double(c.constant)
                << " tail sup " << format_double(c.tail_sup) << " residual " << format_double(c.residual)
                << " phi_K " << format_double(r.phi_final) << " slope " << format_double(c.slope) << '\n';
      ok = ok && c.bounded();
    } catch (const std::invalid_argument& e) {
      std::cout << "SKIP " << q.describe() << ": " << e.what() << '\n';
      domain_error = true;
    }
  }
  if (!ok) return kCertFail;
  return domain_error ? kUsage : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional-gradient augmented Lagrangian solver"};
  app.require_subcommand(1);

  std::string gkind = "qcqp", gout;
  int gn = 20, gm = 2;
  std::vector<std::uint64_t> gseed{1};
  auto* gen = app.add_subcommand("generate", "write instance metadata as key=value lines");
  gen->add_option("--kind", gkind, "qcqp or ball_qp");
  gen->add_option("--n", gn, "size");
  gen->add_option("--m", gm, "number of constraints");
  gen->add_option("--seed", gseed, "seed")->delimiter(',');
  gen->add_option("--out", gout, "output file (default stdout)");

  Shared rs;
  auto* runc = app.add_subcommand("run", "run one experiment and write a CSV trace");
  add_shared(runc, rs, true);

  Shared cs;
  CertifyArgs ca;
  auto* cert = app.add_subcommand("certify", "fit rates on traces or run the desk suite");
  add_shared(cert, cs, true);
  cert->add_option("traces", ca.traces, "trace files");
  cert->add_option("--quantity", ca.quantity, "val, feas, combined, gap or t");
  cert->add_option("--target", ca.target, "pass if the fitted slope is <= target");
  cert->add_option("--window", ca.window, "lo,hi")->delimiter(',')->expected(2);
  cert->add_option("--reference", ca.reference, "reference value f_ref or L*");
  cert->add_option("--g0", ca.g0, "||g(0)||_inf when the header carries no config");
  cert->add_option("--suite", ca.suite, "named suite (desk)");

  PropArgs pa;
  auto* prop = app.add_subcommand("proposition", "simulate the sequence recursions on a parameter grid");
  prop->add_option("--kind", pa.kind, "prop21, prop22 or both");
  prop->add_option("--horizon", pa.horizon, "K");
  prop->add_option("--t1", pa.t1)->delimiter(',');
  prop->add_option("--t2", pa.t2)->delimiter(',');
  prop->add_option("--eta", pa.eta)->delimiter(',');
  prop->add_option("--mu", pa.mu)->delimiter(',');
  prop->add_option("--s", pa.s)->delimiter(',');
  prop->add_option("--c-tau", pa.c_tau);
  prop->add_option("--c-beta", pa.c_beta);
  prop->add_option("--c", pa.c, "gamma_k scale");
  prop->add_option("--phi0", pa.phi0);

  Shared ss;
  std::vector<std::string> suite_presets{"desk-ol", "desk-ss", "ball-ss", "ball-ol"};
  auto* suite = app.add_subcommand("suite", "run several presets, one trace each");
  add_shared(suite, ss, true);
  suite->add_option("--presets", suite_presets, "presets to run")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*gen) {
      for (auto s : gseed) cmd_generate(gkind, gn, gm, s, gout);
      return 0;
    }
    if (*runc) {
      ExperimentConfig base = resolve(rs);
      std::vector<ExperimentConfig> cfgs;
      if (rs.seeds.empty()) rs.seeds.push_back(base.seed);
      for (auto s : rs.seeds) {
        ExperimentConfig c = base;
        c.seed = s;
        c.validate();
        cfgs.push_back(c);
      }
      return run_all(cfgs, rs.jobs, cfgs.size() > 1);
    }
    if (*cert) return cmd_certify(ca, cs);
    if (*prop) return cmd_proposition(pa);
    if (*suite) {
      std::vector<ExperimentConfig> cfgs;
      for (const std::string& name : suite_presets) {
        Shared one = ss;
        one.preset = name;
        one.out.clear();
        ExperimentConfig c = resolve(one);
        if (!ss.seeds.empty()) c.seed = ss.seeds.front();
        c.validate();
        cfgs.push_back(c);
      }
      return run_all(cfgs, ss.jobs, false);
    }
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return kAbort;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
