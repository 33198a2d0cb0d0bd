#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "selsample/evaluation.hpp"
#include "selsample/sampler.hpp"

namespace selsample {

/// Doubles are written with enough digits to round-trip exactly.
std::string format_double(double v);

/// One line of a trace file: `n,kappa,phi,ties,x,y,label` (y empty in 1D).
struct TraceRow {
  std::uint32_t n = 0;
  std::uint32_t kappa = 0;
  double phi = 0.0;
  std::uint32_t ties = 0;
  Point z;
  Label label = 0;

  bool operator==(const TraceRow&) const = default;
};

std::vector<TraceRow> trace_rows(const RunTrace& trace);
void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows);
std::vector<TraceRow> read_trace_csv(std::istream& in);

/// Curve file: `n,error,q_measure` (q_measure empty when not applicable).
void write_curve_csv(std::ostream& out, const ErrorCurve& curve);
ErrorCurve read_curve_csv(std::istream& in);

/// Failure-demo file: `n,analytic_error,mc_error`.
void write_failure_csv(std::ostream& out, const FailureDemoResult& result);

}  // namespace selsample
