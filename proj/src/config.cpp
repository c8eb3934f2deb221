#include "cgal/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cgal {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::int64_t parse_int(const std::string& s, const std::string& key) {
  std::int64_t v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected an integer, got '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& key) {
  std::uint64_t v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected an unsigned integer, got '" + s + "'");
  return v;
}

const char* kind_name(ProblemKind k) { return k == ProblemKind::kQcqp ? "qcqp" : "ball_qp"; }

const char* policy_name(Policy p) {
  switch (p) {
    case Policy::kOpenLoop: return "open_loop";
    case Policy::kShort: return "short";
    case Policy::kShortWarmstart: return "short_warmstart";
  }
  return "?";
}

struct Pair {
  std::string key, value;
};

std::vector<Pair> pairs(const ExperimentConfig& c) {
  std::vector<Pair> out = {
      {"kind", kind_name(c.kind)},
      {"n", std::to_string(c.n)},
      {"m", std::to_string(c.m)},
      {"seed", std::to_string(c.seed)},
      {"policy", policy_name(c.policy)},
      {"p", format_double(c.p)},
      {"alpha0", format_double(c.alpha0)},
      {"tau", format_double(c.tau)},
      {"lambda0", format_double(c.lambda0)},
      {"gamma", format_double(c.gamma)},
      {"sigma0", format_double(c.sigma0)},
      {"z0", c.z0.empty() ? "zeros" : format_list(c.z0)},
  };
  switch (c.x0) {
    case StartPoint::kBarycenter: out.push_back({"x0", "barycenter"}); break;
    case StartPoint::kLmoZero: out.push_back({"x0", "lmo_zero"}); break;
    case StartPoint::kExplicit: out.push_back({"x0", format_list(c.x0_values)}); break;
  }
  out.push_back({"budget", std::to_string(c.budget)});
  out.push_back({"stride", std::to_string(c.stride)});
  if (c.reference) out.push_back({"reference", format_double(*c.reference)});
  if (!c.reference_source.empty())
    out.push_back({"reference_source", c.reference_source});
  else if (c.reference)
    out.push_back({"reference_source", "value"});
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  double v = 0.0;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc() || ptr != end || t.empty()) throw ConfigError(key, "expected a number, got '" + s + "'");
  return v;
}

Vec parse_list(const std::string& s, const std::string& key) {
  Vec out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, key));
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

std::string format_list(const Vec& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

void apply_setting(ExperimentConfig& c, const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string v = trim(value_in);
  if (key == "kind") {
    if (v == "qcqp")
      c.kind = ProblemKind::kQcqp;
    else if (v == "ball_qp")
      c.kind = ProblemKind::kBallQp;
    else
      throw ConfigError(key, "expected qcqp or ball_qp, got '" + v + "'");
  } else if (key == "n") {
    c.n = static_cast<int>(parse_int(v, key));
  } else if (key == "m") {
    c.m = static_cast<int>(parse_int(v, key));
  } else if (key == "seed") {
    c.seed = parse_u64(v, key);
  } else if (key == "policy") {
    if (v == "open_loop")
      c.policy = Policy::kOpenLoop;
    else if (v == "short")
      c.policy = Policy::kShort;
    else if (v == "short_warmstart")
      c.policy = Policy::kShortWarmstart;
    else
      throw ConfigError(key, "expected open_loop, short or short_warmstart, got '" + v + "'");
  } else if (key == "p") {
    c.p = parse_double(v, key);
  } else if (key == "alpha0") {
    c.alpha0 = parse_double(v, key);
  } else if (key == "tau") {
    c.tau = parse_double(v, key);
  } else if (key == "lambda0") {
    c.lambda0 = parse_double(v, key);
  } else if (key == "gamma") {
    c.gamma = parse_double(v, key);
  } else if (key == "sigma0") {
    c.sigma0 = parse_double(v, key);
  } else if (key == "z0") {
    if (v == "zeros")
      c.z0.clear();
    else
      c.z0 = parse_list(v, key);
  } else if (key == "x0") {
    if (v == "barycenter") {
      c.x0 = StartPoint::kBarycenter;
      c.x0_values.clear();
    } else if (v == "lmo_zero") {
      c.x0 = StartPoint::kLmoZero;
      c.x0_values.clear();
    } else {
      c.x0 = StartPoint::kExplicit;
      c.x0_values = parse_list(v, key);
    }
  } else if (key == "budget") {
    c.budget = parse_int(v, key);
  } else if (key == "stride") {
    c.stride = parse_int(v, key);
  } else if (key == "out") {
    c.out = v;
  } else if (key == "reference") {
    if (v == "none") {
      c.reference.reset();
      c.reference_source.clear();
    } else if (v == "oracle") {
      c.reference.reset();
      c.reference_source = "oracle";
    } else {
      c.reference = parse_double(v, key);
      if (c.reference_source.empty()) c.reference_source = "value";
    }
  } else if (key == "reference_source") {
    c.reference_source = v;
  } else {
    throw ConfigError(key, "unknown key");
  }
}

void apply_text(ExperimentConfig& cfg, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("", "line " + std::to_string(lineno) + ": expected key=value");
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  apply_text(cfg, in);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  return parse_config(in);
}

ExperimentConfig parse_echo(const std::string& echo) {
  ExperimentConfig cfg;
  std::size_t pos = 0;
  while (pos <= echo.size()) {
    auto next = echo.find("; ", pos);
    const std::string item = echo.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (!trim(item).empty()) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError("", "malformed echo entry '" + item + "'");
      apply_setting(cfg, item.substr(0, eq), item.substr(eq + 1));
    }
    if (next == std::string::npos) break;
    pos = next + 2;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  if (n < 1) throw ConfigError("n", "must be >= 1");
  if (kind == ProblemKind::kQcqp) {
    if (n < 2) throw ConfigError("n", "qcqp needs n >= 2");
    if (m < 1 || static_cast<double>(m) > static_cast<double>(n) * (n - 1))
      throw ConfigError("m", "qcqp needs 1 <= m <= n(n-1)");
  } else if (m != 0 && m != 1) {
    throw ConfigError("m", "ball_qp has m = 0 or m = 1");
  }
  if (!z0.empty()) {
    if (z0.size() != static_cast<std::size_t>(m)) throw ConfigError("z0", "length must equal m");
    for (double z : z0)
      if (!(z >= 0.0) || !std::isfinite(z)) throw ConfigError("z0", "entries must be finite and >= 0");
  }
  if (x0 == StartPoint::kExplicit) {
    const std::size_t dim = kind == ProblemKind::kQcqp ? std::size_t(n) * std::size_t(n) : std::size_t(n);
    if (x0_values.size() != dim) throw ConfigError("x0", "explicit start has the wrong length");
  }
  if (budget < 0) throw ConfigError("budget", "must be >= 0");
  if (stride < 1) throw ConfigError("stride", "must be >= 1");
  if (reference && !std::isfinite(*reference)) throw ConfigError("reference", "must be finite");
  try {
    schedules().validate();
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    throw ConfigError(what.substr(0, what.find(' ')), what);
  }
}

ScheduleSet ExperimentConfig::schedules() const {
  ScheduleSet s;
  s.penalty = {lambda0, tau};
  s.dual = {sigma0, gamma};
  switch (policy) {
    case Policy::kOpenLoop: s.step = OpenLoopStep{alpha0, p}; break;
    case Policy::kShort: s.step = unit_short_step(); break;
    case Policy::kShortWarmstart: s.step = warmstart_short_step(); break;
  }
  return s;
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : pairs(*this)) out += k + "=" + v + "\n";
  return out;
}

std::string ExperimentConfig::echo() const {
  std::string out;
  for (const auto& [k, v] : pairs(*this)) {
    if (!out.empty()) out += "; ";
    out += k + "=" + v;
  }
  return out;
}

std::string ExperimentConfig::label() const {
  std::string s = kind_name(kind);
  s += "_n" + std::to_string(n);
  if (kind == ProblemKind::kQcqp) s += "_m" + std::to_string(m);
  s += "_s" + std::to_string(seed) + "_" + policy_name(policy);
  return s;
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  if (name == "paper-ol" || name == "paper-ss") {
    c.kind = ProblemKind::kQcqp;
    c.n = 500;
    c.m = 2;
    c.tau = 0.4;
    c.p = 0.95;
    c.z0 = {27.0, 27.0};
    c.budget = 5000;
    c.stride = 10;
    c.policy = name == "paper-ol" ? Policy::kOpenLoop : Policy::kShortWarmstart;
  } else if (name == "desk-ol" || name == "desk-ss") {
    c.kind = ProblemKind::kQcqp;
    c.n = 20;
    c.m = 2;
    c.tau = 0.5;
    c.p = 0.95;
    c.z0 = {27.0, 27.0};
    c.budget = 100000;
    c.stride = 100;
    c.policy = name == "desk-ol" ? Policy::kOpenLoop : Policy::kShort;
    c.reference_source = "best-of-runs";
  } else if (name == "ball-ss" || name == "ball-ol") {
    c.kind = ProblemKind::kBallQp;
    c.n = 2;
    c.m = 1;
    c.budget = 100000;
    c.stride = 100;
    if (name == "ball-ss") {
      c.policy = Policy::kShort;
      c.tau = 2.0 / 3.0;
    } else {
      c.policy = Policy::kOpenLoop;
      c.tau = 0.8;
      c.p = 0.95;
    }
    c.reference_source = "oracle";
  } else {
    throw ConfigError("preset", "unknown preset '" + name + "'");
  }
  return c;
}

std::vector<std::string> preset_names() {
  return {"paper-ol", "paper-ss", "desk-ol", "desk-ss", "ball-ss", "ball-ol"};
}

}  // namespace cgal
