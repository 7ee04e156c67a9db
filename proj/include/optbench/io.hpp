#pragma once

// Telemetry persistence: CSV (canonical golden-file format) and JSON (full
// report including config and verdicts), plus shared float formatting.

#include "optbench/optimizers.hpp"

#include <iosfwd>

namespace optbench {

/// Serializes a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

/// Writes one report as CSV with the fixed header
/// step,f_value,f_gap,grad_norm,stepsize,effective_stepsize,rbar,v,distance_to_opt,avg_f_gap
/// Absent optional fields are left empty.
void write_csv(const RunReport& report, const std::string& path);
void write_csv(const RunReport& report, std::ostream& out);

/// Reads records back from write_csv output (bit-exact round trip).
std::vector<StepRecord> read_csv_records(const std::string& path);

/// Full JSON report: config, status, records, summary points, verdicts.
void write_json(const RunReport& report, const std::string& path);
std::string report_to_json(const RunReport& report);

/// Parses a JSON report written by write_json. The in-memory trajectory is
/// not serialized; everything needed for verification round-trips.
RunReport read_json_report(const std::string& path);

std::string verdict_to_json(const BoundVerdict& v);

}  // namespace optbench
