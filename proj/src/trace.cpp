#include "cgal/trace.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cgal/config.hpp"

namespace cgal {

void write_trace(std::ostream& out, const std::string& echo, std::span<const TraceRecord> records) {
  out << kTraceMagic << ", " << echo << '\n' << kTraceColumns << '\n';
  for (const TraceRecord& r : records) {
    out << r.k << ',' << format_double(r.objective) << ',' << format_double(r.feas_inf) << ','
        << format_double(r.feas_2) << ',' << format_double(r.gap) << ',' << format_double(r.al_value) << ','
        << format_double(r.alpha) << ',' << format_double(r.lambda) << ',' << format_double(r.sigma) << ','
        << format_double(r.z_norm1) << ',' << r.wall_micros << '\n';
  }
}

void write_trace_file(const std::string& path, const std::string& echo, std::span<const TraceRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_trace(out, echo, records);
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

template <class T>
T field(const std::string& s, int lineno) {
  T v{};
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty())
    throw std::runtime_error("trace line " + std::to_string(lineno) + ": bad field '" + s + "'");
  return v;
}

}  // namespace

Trace read_trace(std::istream& in) {
  Trace t;
  std::string line;
  const std::string magic = std::string(kTraceMagic) + ", ";
  if (!std::getline(in, line) || line.rfind(magic, 0) != 0) throw std::runtime_error("trace line 1: missing header");
  t.echo = line.substr(magic.size());
  if (!std::getline(in, line) || line != kTraceColumns) throw std::runtime_error("trace line 2: unexpected columns");
  int lineno = 2;
  std::vector<std::string> f;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    f.clear();
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 11) throw std::runtime_error("trace line " + std::to_string(lineno) + ": expected 11 fields");
    TraceRecord r;
    r.k = field<std::int64_t>(f[0], lineno);
    r.objective = field<double>(f[1], lineno);
    r.feas_inf = field<double>(f[2], lineno);
    r.feas_2 = field<double>(f[3], lineno);
    r.gap = field<double>(f[4], lineno);
    r.al_value = field<double>(f[5], lineno);
    r.alpha = field<double>(f[6], lineno);
    r.lambda = field<double>(f[7], lineno);
    r.sigma = field<double>(f[8], lineno);
    r.z_norm1 = field<double>(f[9], lineno);
    r.wall_micros = field<std::int64_t>(f[10], lineno);
    t.records.push_back(r);
  }
  return t;
}

Trace read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_trace(in);
}

std::string strip_wall_time(const std::string& text) {
  std::stringstream in(text);
  std::string line, out;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno > 2) {
      if (const auto c = line.rfind(','); c != std::string::npos) line.erase(c);
    }
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace cgal
