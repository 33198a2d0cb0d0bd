#include "selsample/csv.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace selsample {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

void expect_header(std::istream& in, const std::string& want,
                   const char* what) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(std::string(what) + ": missing header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != want) {
    throw std::runtime_error(std::string(what) + ": unexpected header '" +
                             line + "'");
  }
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string(what) + ": bad number '" + s + "'");
  }
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string(what) + ": bad integer '" + s + "'");
  }
}

}  // namespace

std::vector<TraceRow> trace_rows(const RunTrace& trace) {
  std::vector<TraceRow> rows;
  rows.reserve(trace.steps.size());
  for (const StepRecord& step : trace.steps) {
    const LabeledSample& s = trace.samples[step.n - 1];
    rows.push_back(TraceRow{step.n, step.kappa, step.phi, step.ties, s.point,
                            s.label});
  }
  return rows;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows) {
  out << "n,kappa,phi,ties,x,y,label\n";
  for (const TraceRow& r : rows) {
    out << r.n << ',' << r.kappa << ',' << format_double(r.phi) << ','
        << r.ties << ',' << format_double(r.z.x) << ',';
    if (r.z.dim == 2) out << format_double(r.z.y);
    out << ',' << r.label << '\n';
  }
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  expect_header(in, "n,kappa,phi,ties,x,y,label", "trace csv");
  std::vector<TraceRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 7) throw std::runtime_error("trace csv: bad row '" + line + "'");
    TraceRow r;
    r.n = static_cast<std::uint32_t>(parse_u64(f[0], "trace csv"));
    r.kappa = static_cast<std::uint32_t>(parse_u64(f[1], "trace csv"));
    r.phi = parse_double(f[2], "trace csv");
    r.ties = static_cast<std::uint32_t>(parse_u64(f[3], "trace csv"));
    if (f[5].empty()) {
      r.z = Point::d1(parse_double(f[4], "trace csv"));
    } else {
      r.z = Point::d2(parse_double(f[4], "trace csv"),
                      parse_double(f[5], "trace csv"));
    }
    r.label = static_cast<Label>(parse_u64(f[6], "trace csv"));
    rows.push_back(r);
  }
  return rows;
}

void write_curve_csv(std::ostream& out, const ErrorCurve& curve) {
  out << "n,error,q_measure\n";
  for (const CurveRow& r : curve.rows) {
    out << r.n << ',' << format_double(r.error) << ',';
    if (r.q_measure.has_value()) out << format_double(*r.q_measure);
    out << '\n';
  }
}

ErrorCurve read_curve_csv(std::istream& in) {
  expect_header(in, "n,error,q_measure", "curve csv");
  ErrorCurve curve;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 3) throw std::runtime_error("curve csv: bad row '" + line + "'");
    CurveRow r;
    r.n = static_cast<std::uint32_t>(parse_u64(f[0], "curve csv"));
    r.error = parse_double(f[1], "curve csv");
    if (!f[2].empty()) r.q_measure = parse_double(f[2], "curve csv");
    curve.rows.push_back(r);
  }
  return curve;
}

void write_failure_csv(std::ostream& out, const FailureDemoResult& result) {
  out << "n,analytic_error,mc_error\n";
  for (const FailureDemoRow& r : result.rows) {
    out << r.n << ',' << format_double(r.analytic_error) << ','
        << format_double(r.mc_error) << '\n';
  }
}

}  // namespace selsample
