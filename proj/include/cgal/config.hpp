#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgal/linalg.hpp"
#include "cgal/solver.hpp"

namespace cgal {

/// Config validation failure; `key` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class ProblemKind { kQcqp, kBallQp };
enum class Policy { kOpenLoop, kShort, kShortWarmstart };
enum class StartPoint { kBarycenter, kLmoZero, kExplicit };

struct ExperimentConfig {
  ProblemKind kind = ProblemKind::kQcqp;
  int n = 20;
  int m = 2;
  std::uint64_t seed = 1;

  Policy policy = Policy::kOpenLoop;
  double p = 0.95;
  double alpha0 = 1.0;
  double tau = 0.4;
  double lambda0 = 1.0;
  double gamma = 0.01;
  double sigma0 = 1.0;
  Vec z0;  // empty: zeros
  StartPoint x0 = StartPoint::kBarycenter;
  Vec x0_values;
  std::int64_t budget = 1000;
  std::int64_t stride = 1;

  std::string out;
  std::optional<double> reference;
  std::string reference_source;  // "", "value", "oracle", "best-of-runs"

  /// Domain checks for every field; throws ConfigError.
  void validate() const;
  ScheduleSet schedules() const;
  /// One key=value per line in a fixed order (the canonical form).
  std::string to_text() const;
  /// Same pairs on a single line separated by "; ", used in trace headers.
  std::string echo() const;
  /// Short name used for default output files.
  std::string label() const;
};

/// Applies `key = value` to cfg; throws ConfigError on unknown keys or bad values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);
/// Reads key=value lines; blank lines and text after '#' are ignored.
void apply_text(ExperimentConfig& cfg, std::istream& in);
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);
/// Inverse of ExperimentConfig::echo.
ExperimentConfig parse_echo(const std::string& echo);

/// paper-ol, paper-ss, desk-ol, desk-ss, ball-ss, ball-ol.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

std::string format_double(double v);
double parse_double(const std::string& s, const std::string& key);
Vec parse_list(const std::string& s, const std::string& key);
std::string format_list(const Vec& v);

}  // namespace cgal
