// qrc: batch CLI for the finite-shot reservoir forecasting experiments.
//
//   qrc run --experiment shared_point --out results/exp1
//   qrc analyze --record shots.csv --protocol split --k auto --out results/hw
//   qrc single --config run.json --out results/one
//   qrc dump-series --task lorenz --length 500 --seed 7 --out lorenz.csv
//
// Exit codes: 0 success, 1 config error, 2 runtime error, 3 partial
// completion (some runs failed; rerun to resume from cache).

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qrc/protocol.hpp"
#include "qrc/record_io.hpp"
#include "qrc/results.hpp"
#include "qrc/runner.hpp"

namespace {

using namespace qrc;

nlohmann::json run_result_json(const protocol::RunResult& r) {
  nlohmann::json j;
  j["protocol"] = protocol::to_string(r.config.protocol);
  j["task"] = timeseries::to_string(r.config.task);
  j["selected_k"] = r.selected_k;
  j["selected_gamma"] = r.selected_gamma;
  j["nrmse_val"] = r.val_nrmse;
  j["nrmse_test"] = r.test_nrmse;
  j["rho_ev"] = r.rho_ev;
  j["rho_ev_blocks"] = r.rho_ev_blocks;
  j["rho_k"] = r.rho_k;
  j["trainval_steps"] = r.trainval_steps;
  j["warm_start_k"] = r.warm_start_k;
  j["ev_fallback"] = r.ev_fallback;
  j["noise_degenerate"] = r.noise_degenerate;
  j["record_hash"] = r.record_hash;
  j["seed"] = r.config.seed;
  j["lambda"] = r.config.lambda;
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& c : r.candidates) {
    cands.push_back({{"k", c.k}, {"gamma", c.gamma}, {"nrmse_val", c.val_nrmse}});
  }
  j["candidates"] = cands;
  return j;
}

protocol::RunConfig config_from_json(const nlohmann::json& j) {
  protocol::RunConfig cfg;
  cfg.task = timeseries::task_from_string(j.value("task", std::string("mackey_glass")));
  cfg.qubits = j.value("qubits", cfg.qubits);
  cfg.depth = j.value("depth", cfg.depth);
  cfg.entangler = quantum::entangler_from_string(j.value("entangler", std::string("ring_cnot")));
  cfg.leak = j.value("leak", cfg.leak);
  cfg.window = j.value("window", cfg.window);
  cfg.lambda = j.value("lambda", cfg.lambda);
  if (j.contains("budget")) {
    const auto& b = j.at("budget");
    cfg.budget.s_total = b.value("s_total", cfg.budget.s_total);
    cfg.budget.settings = b.value("settings", cfg.budget.settings);
    cfg.budget.n_shots = b.value("n_shots", cfg.budget.n_shots);
    cfg.budget.washout = b.value("washout", cfg.budget.washout);
    cfg.budget.train_frac = b.value("train_frac", cfg.budget.train_frac);
    cfg.budget.val_frac_of_train = b.value("val_frac_of_train", cfg.budget.val_frac_of_train);
  }
  cfg.protocol = protocol::protocol_from_string(j.value("protocol", std::string("split")));
  cfg.forced_k = j.value("forced_k", 0);
  cfg.seed = j.value("seed", std::uint64_t{1});
  return cfg;
}

int parse_k_option(const std::string& s) {
  if (s == "auto") return 0;
  try {
    std::size_t pos = 0;
    const int k = std::stoi(s, &pos);
    if (pos != s.size() || k < 1) throw std::invalid_argument(s);
    return k;
  } catch (const std::exception&) {
    throw CLI::ValidationError("--k must be 'auto' or a positive integer");
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << j.dump(2) << "\n";
}

int cmd_run(const std::string& experiment, const std::string& out_dir, int seeds,
            const std::vector<std::string>& benchmarks, int workers) {
  auto spec = harness::make_experiment(harness::experiment_from_string(experiment), out_dir);
  spec.seeds = seeds;
  spec.workers = workers;
  if (!benchmarks.empty()) {
    spec.benchmarks.clear();
    for (const auto& b : benchmarks) spec.benchmarks.push_back(timeseries::task_from_string(b));
  }
  const auto outcome = harness::run_experiment(spec);
  std::cout << "experiment " << experiment << ": " << outcome.table.raw.size() << " rows ("
            << outcome.stats.executed << " executed, " << outcome.stats.cached << " cached, "
            << outcome.stats.failed << " failed)\n"
            << "results in " << out_dir << "\n";
  return outcome.partial ? 3 : 0;
}

int cmd_analyze(const std::string& record_path, const std::string& protocol_name,
                const std::string& k_option, const std::string& out_dir, double lambda,
                double leak, int window, std::uint64_t series_seed_override) {
  auto record = harness::import_shot_record(record_path);
  if (series_seed_override != 0) record.meta.series_seed = series_seed_override;
  if (record.meta.series_seed == 0) {
    throw CLI::ValidationError(
        "record sidecar lacks series_seed; pass --series-seed to rebuild targets");
  }
  if (record.meta.task.empty()) {
    throw CLI::ValidationError("record sidecar lacks a task name");
  }

  protocol::RunConfig cfg;
  cfg.task = timeseries::task_from_string(record.meta.task);
  cfg.qubits = record.meta.qubits;
  cfg.leak = leak;
  cfg.window = window;
  cfg.lambda = lambda;
  cfg.budget.n_shots = record.meta.n_shots;
  cfg.budget.s_total = 2L * record.meta.n_shots * record.meta.timesteps;
  cfg.protocol = protocol::protocol_from_string(protocol_name);
  cfg.forced_k = parse_k_option(k_option);

  const auto result = protocol::run_on_record(record, cfg);

  std::filesystem::create_directories(out_dir);
  write_json(std::filesystem::path(out_dir) / "analysis.json", run_result_json(result));
  std::cout << protocol_name << " on " << record.meta.task << ": k=" << result.selected_k
            << " gamma=" << result.selected_gamma << " val=" << results::format_double(
                   result.val_nrmse)
            << " test=" << results::format_double(result.test_nrmse) << "\n";
  return 0;
}

int cmd_single(const std::string& config_path, const std::string& out_dir) {
  std::ifstream in(config_path);
  if (!in) throw CLI::ValidationError("cannot open config " + config_path);
  const auto cfg = config_from_json(nlohmann::json::parse(in));
  const auto result = protocol::run_pipeline(cfg);
  std::filesystem::create_directories(out_dir);
  write_json(std::filesystem::path(out_dir) / "run_result.json", run_result_json(result));
  std::cout << protocol::to_string(cfg.protocol) << " on " << timeseries::to_string(cfg.task)
            << ": k=" << result.selected_k << " val=" << results::format_double(result.val_nrmse)
            << " test=" << results::format_double(result.test_nrmse) << "\n";
  return 0;
}

int cmd_make_record(const std::string& config_path, const std::string& out_path) {
  std::ifstream in(config_path);
  if (!in) throw CLI::ValidationError("cannot open config " + config_path);
  const auto cfg = config_from_json(nlohmann::json::parse(in));
  const auto record = protocol::simulate_record(cfg);
  harness::export_shot_record(record, out_path);
  std::cout << "wrote " << record.meta.timesteps << " x " << record.meta.n_shots << " x "
            << 2 * record.meta.qubits << " record to " << out_path << "\n";
  return 0;
}

int cmd_dump_series(const std::string& task, int length, std::uint64_t seed,
                    const std::string& out_path, int normalize_prefix) {
  timeseries::SeriesSpec spec;
  spec.task = timeseries::task_from_string(task);
  spec.length = length;
  spec.seed = seed;
  auto series = timeseries::generate(spec);
  if (normalize_prefix > 0) series = timeseries::normalize_input(series, normalize_prefix);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open " + out_path);
  out << "t,value\n";
  for (std::size_t t = 0; t < series.values.size(); ++t) {
    out << t << ',' << results::format_double(series.values[t]) << "\n";
  }
  std::cout << "wrote " << series.values.size() << " samples to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-shot quantum reservoir forecasting toolkit"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a registered experiment");
  std::string experiment, run_out;
  int seeds = 20, workers = 0;
  std::vector<std::string> benchmarks;
  run->add_option("--experiment", experiment,
                  "shared_point|rho_sweep|size_sweep|controls|dup_sweep|arch_ablation|"
                  "lambda_ablation")
      ->required();
  run->add_option("--out", run_out, "Output directory")->required();
  run->add_option("--seeds", seeds, "Seeds per point (default 20)");
  run->add_option("--benchmarks", benchmarks,
                  "Subset of mackey_glass,lorenz,narma10 (comma separated)")
      ->delimiter(',');
  run->add_option("--workers", workers, "Worker threads (default: hardware)");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Analyze an imported shot record");
  std::string record_path, protocol_name, k_option = "auto", analyze_out;
  double lambda = 10.0, leak = 0.2;
  int window = 10;
  std::uint64_t series_seed = 0;
  analyze->add_option("--record", record_path, "Shot-record CSV (with .meta.json sidecar)")
      ->required();
  analyze->add_option("--protocol", protocol_name, "ev|raw|split|ev_dup|ev_na|split_na")
      ->required();
  analyze->add_option("--k", k_option, "Group size: auto or a divisor of N_shots");
  analyze->add_option("--out", analyze_out, "Output directory")->required();
  analyze->add_option("--lambda", lambda, "Ridge penalty (default 10)");
  analyze->add_option("--eta", leak, "Leak rate (default 0.2)");
  analyze->add_option("--window", window, "Tapped-delay window (default 10)");
  analyze->add_option("--series-seed", series_seed, "Override the sidecar series seed");

  // single
  auto* single = app.add_subcommand("single", "Run one configuration from a JSON file");
  std::string config_path, single_out;
  single->add_option("--config", config_path, "RunConfig JSON")->required();
  single->add_option("--out", single_out, "Output directory")->required();

  // make-record
  auto* makerec = app.add_subcommand("make-record",
                                     "Simulate a shot record for a config and export it");
  std::string makerec_config, makerec_out;
  makerec->add_option("--config", makerec_config, "RunConfig JSON")->required();
  makerec->add_option("--out", makerec_out, "Record CSV path (sidecar written next to it)")
      ->required();

  // dump-series
  auto* dump = app.add_subcommand("dump-series", "Write a benchmark series as CSV");
  std::string task, dump_out;
  int length = 500, normalize_prefix = 0;
  std::uint64_t dump_seed = 1;
  dump->add_option("--task", task, "mackey_glass|lorenz|narma10")->required();
  dump->add_option("--length", length, "Samples to emit (default 500)");
  dump->add_option("--seed", dump_seed, "Series seed (default 1)");
  dump->add_option("--out", dump_out, "Output CSV path")->required();
  dump->add_option("--normalize-prefix", normalize_prefix,
                   "Fit a [0,1] min-max map on this prefix before writing");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(experiment, run_out, seeds, benchmarks, workers);
    if (analyze->parsed()) {
      return cmd_analyze(record_path, protocol_name, k_option, analyze_out, lambda, leak, window,
                         series_seed);
    }
    if (single->parsed()) return cmd_single(config_path, single_out);
    if (makerec->parsed()) return cmd_make_record(makerec_config, makerec_out);
    if (dump->parsed()) return cmd_dump_series(task, length, dump_seed, dump_out, normalize_prefix);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
