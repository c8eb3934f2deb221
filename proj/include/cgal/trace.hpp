#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cgal/solver.hpp"

namespace cgal {

inline constexpr const char* kTraceMagic = "# cgal-trace v1";
inline constexpr const char* kTraceColumns =
    "iter,objective,feas_inf,feas_2,gap,al_value,alpha,lambda,sigma,z_norm1,wall_micros";

struct Trace {
  std::string echo;  // config echo from the header line
  std::vector<TraceRecord> records;
};

/// Header `# cgal-trace v1, <echo>`, the column line, then one row per record
/// with 17 significant digits.
void write_trace(std::ostream& out, const std::string& echo, std::span<const TraceRecord> records);
void write_trace_file(const std::string& path, const std::string& echo, std::span<const TraceRecord> records);

/// Throws std::runtime_error naming the line on malformed input.
Trace read_trace(std::istream& in);
Trace read_trace_file(const std::string& path);

/// Text of the trace with the wall_micros column dropped, for determinism checks.
std::string strip_wall_time(const std::string& trace_text);

}  // namespace cgal
