#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qrc/protocol.hpp"

namespace qrc::harness {

enum class ExperimentId {
  SharedPoint,
  RhoSweep,
  SizeSweep,
  Controls,
  DupSweep,
  ArchAblation,
  LambdaAblation,
};

std::string to_string(ExperimentId id);
ExperimentId experiment_from_string(const std::string& s);

/// One sweep point. Everything not varied stays at the common protocol
/// defaults (Q=4, depth 1, ring entangler, N_shots=18, lambda=10).
struct Cell {
  int qubits = 4;
  int depth = 1;
  quantum::Entangler entangler = quantum::Entangler::RingCnot;
  int n_shots = 18;
  double lambda = 10.0;
};

/// Canonical JSON for a cell (sorted keys, shortest float form); used as
/// the cell_params CSV column and inside cache keys.
std::string cell_params_json(const Cell& cell);

struct ExperimentSpec {
  ExperimentId id = ExperimentId::SharedPoint;
  std::vector<timeseries::Task> benchmarks;
  std::vector<protocol::ProtocolId> protocols;
  std::vector<Cell> cells;
  int seeds = 20;
  std::filesystem::path out_dir;
  int workers = 0;  // 0 = hardware concurrency
};

/// Experiment registry: benchmark/protocol/cell definitions per experiment.
ExperimentSpec make_experiment(ExperimentId id, const std::filesystem::path& out_dir);

protocol::RunConfig make_run_config(const Cell& cell, timeseries::Task task,
                                    protocol::ProtocolId proto, std::uint64_t seed);

/// The common N_shots sweep.
const std::vector<int>& nshots_sweep();

/// The 13-point log-spaced lambda grid, 1e-3 .. 1e3.
const std::vector<double>& lambda_grid();

}  // namespace qrc::harness
