#pragma once

#include <cstddef>
#include <string>

#include "sublab/config.hpp"

namespace sublab::harness {

/// Outcome of one experiment run. The CSV itself carries no wall-clock or
/// other volatile data, so a given (config, seed) rerun is byte-identical.
struct ResultRecord {
    std::string experiment;
    std::string config_hash;  // 16 hex digits of the canonical-config FNV-1a
    std::string csv_path;
    std::size_t rows = 0;  // data rows written (excluding preamble and header)
    bool all_pass = false;
    double wall_seconds = 0.0;
    std::string version;
    bool errored = false;      // a verifier error was converted to an error row
    std::string error_type;    // e.g. "HypothesisError"
    std::string error_message;
    bool creep_flagged = false;  // artificial creep exceeded 0.1% in some batch
};

/// Runs the configured experiment and writes its CSV to cfg.out.
/// Verifier errors derived from sublab::Error do not propagate: the CSV ends
/// with a machine-readable `error,<Type>,"message"` row and the record carries
/// the error (the CLI maps that to exit status 2). I/O failures still throw.
ResultRecord run_experiment(const ExperimentConfig& cfg);

}  // namespace sublab::harness
