#pragma once

#include <string>

#include "esd/harness.hpp"

namespace esd {

// The comparison table: the eleven metric rows, one column per classifier,
// all values scaled by 100 and rounded to one decimal. A separate trailing
// line carries the fold-mean cross-validation accuracy. The JSON form also
// includes the raw (unscaled) values and per-fold accuracies.
std::string format_report(const BenchmarkResult& benchmark, ReportFormat format);

// Grouped-bar plot data: "metric,algorithm,value" rows at the same x100 scale.
std::string format_plot_csv(const BenchmarkResult& benchmark);

// One-line timing summary per algorithm (not part of the deterministic
// report).
std::string format_timings(const BenchmarkResult& benchmark);

}  // namespace esd
