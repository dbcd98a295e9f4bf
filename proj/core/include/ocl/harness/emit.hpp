#pragma once

#include <filesystem>
#include <string>

#include "ocl/harness/experiment.hpp"

namespace ocl::harness {

// Writes regret.csv (cycle,policy,replication,instantaneous,cumulative),
// estimation_error.csv (cycle,policy,replication,error; only when truth was
// available) and summary.json into out_dir. Numeric cells use round-trip
// formatting, so identical results produce byte-identical files.
void emit_results(const ExperimentResult& result, const std::filesystem::path& out_dir);

// Per-value subdirectories (<axis>=<value>/...) plus combined
// sweep_summary.csv and sweep_summary.json.
void emit_sweep(const SweepResult& sweep, const std::filesystem::path& out_dir);

// Round-trip double formatting used in all emitted files.
std::string format_double(double v);

} // namespace ocl::harness
