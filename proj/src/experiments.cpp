#include "qrc/experiments.hpp"

#include <cmath>
#include <stdexcept>

#include "qrc/results.hpp"

namespace qrc::harness {

std::string to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::SharedPoint: return "shared_point";
    case ExperimentId::RhoSweep: return "rho_sweep";
    case ExperimentId::SizeSweep: return "size_sweep";
    case ExperimentId::Controls: return "controls";
    case ExperimentId::DupSweep: return "dup_sweep";
    case ExperimentId::ArchAblation: return "arch_ablation";
    case ExperimentId::LambdaAblation: return "lambda_ablation";
  }
  return "unknown";
}

ExperimentId experiment_from_string(const std::string& s) {
  if (s == "shared_point") return ExperimentId::SharedPoint;
  if (s == "rho_sweep") return ExperimentId::RhoSweep;
  if (s == "size_sweep") return ExperimentId::SizeSweep;
  if (s == "controls") return ExperimentId::Controls;
  if (s == "dup_sweep") return ExperimentId::DupSweep;
  if (s == "arch_ablation") return ExperimentId::ArchAblation;
  if (s == "lambda_ablation") return ExperimentId::LambdaAblation;
  throw std::invalid_argument("unknown experiment: " + s);
}

std::string cell_params_json(const Cell& cell) {
  std::string out = "{";
  out += "\"D\":" + std::to_string(cell.depth);
  out += ",\"N_shots\":" + std::to_string(cell.n_shots);
  out += ",\"Q\":" + std::to_string(cell.qubits);
  out += ",\"entangler\":\"" + quantum::to_string(cell.entangler) + "\"";
  out += ",\"lambda\":" + results::format_double(cell.lambda);
  out += "}";
  return out;
}

const std::vector<int>& nshots_sweep() {
  static const std::vector<int> sweep = {10, 12, 15, 18, 20, 25, 30, 40, 50};
  return sweep;
}

const std::vector<double>& lambda_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g;
    for (int j = 0; j < 13; ++j) g.push_back(std::pow(10.0, -3.0 + 0.5 * j));
    return g;
  }();
  return grid;
}

ExperimentSpec make_experiment(ExperimentId id, const std::filesystem::path& out_dir) {
  using protocol::ProtocolId;
  using timeseries::Task;

  ExperimentSpec spec;
  spec.id = id;
  spec.out_dir = out_dir;
  spec.benchmarks = {Task::MackeyGlass, Task::Lorenz, Task::Narma10};
  spec.seeds = 20;

  switch (id) {
    case ExperimentId::SharedPoint:
      spec.protocols = {ProtocolId::Ev, ProtocolId::Raw, ProtocolId::Split};
      spec.cells = {Cell{}};
      break;
    case ExperimentId::RhoSweep:
      spec.protocols = {ProtocolId::Ev, ProtocolId::Split};
      for (const int n : nshots_sweep()) {
        Cell c;
        c.n_shots = n;
        spec.cells.push_back(c);
      }
      break;
    case ExperimentId::SizeSweep:
      spec.protocols = {ProtocolId::Ev, ProtocolId::Split};
      for (const int q : {4, 6, 8, 10, 12}) {
        Cell c;
        c.qubits = q;
        spec.cells.push_back(c);
      }
      break;
    case ExperimentId::Controls:
      spec.protocols = {ProtocolId::Ev,   ProtocolId::Raw,   ProtocolId::EvDup,
                        ProtocolId::EvNA, ProtocolId::Split, ProtocolId::SplitNA};
      spec.cells = {Cell{}};
      break;
    case ExperimentId::DupSweep:
      spec.protocols = {ProtocolId::Ev, ProtocolId::EvDup, ProtocolId::Split};
      for (const int n : nshots_sweep()) {
        Cell c;
        c.n_shots = n;
        spec.cells.push_back(c);
      }
      break;
    case ExperimentId::ArchAblation:
      spec.protocols = {ProtocolId::Ev, ProtocolId::Split};
      for (const int depth : {1, 2, 4}) {
        Cell c;
        c.entangler = quantum::Entangler::RingCnot;
        c.depth = depth;
        spec.cells.push_back(c);
      }
      {
        Cell line;
        line.entangler = quantum::Entangler::LineCnot;
        spec.cells.push_back(line);
        Cell all;
        all.entangler = quantum::Entangler::AllToAllCz;
        spec.cells.push_back(all);
      }
      break;
    case ExperimentId::LambdaAblation:
      spec.protocols = {ProtocolId::Ev, ProtocolId::Raw, ProtocolId::Split};
      for (const double lambda : lambda_grid()) {
        Cell c;
        c.lambda = lambda;
        spec.cells.push_back(c);
      }
      break;
  }
  return spec;
}

protocol::RunConfig make_run_config(const Cell& cell, timeseries::Task task,
                                    protocol::ProtocolId proto, std::uint64_t seed) {
  protocol::RunConfig cfg;
  cfg.task = task;
  cfg.qubits = cell.qubits;
  cfg.depth = cell.depth;
  cfg.entangler = cell.entangler;
  cfg.lambda = cell.lambda;
  cfg.budget.n_shots = cell.n_shots;
  cfg.protocol = proto;
  cfg.seed = seed;
  return cfg;
}

}  // namespace qrc::harness
