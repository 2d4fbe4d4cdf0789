#pragma once

#include <string>

#include <json.hpp>

#include "g2cm/estimator.hpp"
#include "g2cm/homodyne.hpp"

namespace g2cm {

// Sidecar metadata lives next to the samples as <csv_path>.meta.json.
std::string meta_path_for(const std::string& csv_path);

/**
 * Write a trace as CSV with header `theta,value`, one record per row, 17 significant
 * digits (round trips exactly through read_trace_csv), plus the JSON metadata sidecar.
 */
void write_trace(const std::string& csv_path, const HomodyneTrace& trace);

/**
 * Read a trace CSV written by write_trace (or any file with the same header).  Parse
 * errors carry "<path>:<line>: <reason>".  A missing metadata sidecar is tolerated; the
 * returned trace then has default metadata with the schedule inferred from the records.
 */
HomodyneTrace read_trace(const std::string& csv_path);

nlohmann::json meta_to_json(const TraceMeta& meta);
TraceMeta meta_from_json(const nlohmann::json& j);

// Estimate output: cm (row-major), x, fitted params, g2 {value, ci_low, ci_high,
// std_error, method}, per-phase diagnostics, warnings and the convention tag.
nlohmann::json result_to_json(const ReconstructionResult& res);

// 17-significant-digit decimal rendering used for all numeric text output.
std::string format_double(double v);

std::string method_name(G2Method m);

}  // namespace g2cm
