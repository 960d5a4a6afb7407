#pragma once

#include "qrc/experiments.hpp"
#include "qrc/results.hpp"

namespace qrc::harness {

struct RunStats {
  int executed = 0;
  int cached = 0;
  int failed = 0;
};

struct ExperimentOutcome {
  results::ResultTable table;
  RunStats stats;
  bool partial = false;  // some runs failed; completed results persisted
};

/// Runs every (cell, benchmark, protocol, seed) of the experiment, caching
/// one JSON file per run under <out>/cache so interrupted sweeps resume.
/// Within each (cell, benchmark, seed), all protocols must have consumed
/// the identical shot record (checked via record hashes). Emits raw.csv,
/// aggregate.csv, and meta.json into the experiment directory.
ExperimentOutcome run_experiment(const ExperimentSpec& spec);

}  // namespace qrc::harness
