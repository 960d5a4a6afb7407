#include "qrc/runner.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "qrc/stats.hpp"

namespace qrc::harness {

namespace {

struct TaskItem {
  std::size_t cell = 0;
  std::size_t bench = 0;
  std::size_t proto = 0;
  std::uint64_t seed = 0;
};

struct RunOutcome {
  bool ok = false;
  std::string error;
  int k_selected = 0;
  double gamma_selected = 0.0;
  double rho_ev = 0.0;
  double rho_k = 0.0;
  double nrmse_val = 0.0;
  double nrmse_test = 0.0;
  std::uint64_t record_hash = 0;
  int warm_start_k = 0;
  bool ev_fallback = false;
  double total_seconds = 0.0;
};

std::uint64_t fnv_string(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string cache_key(const ExperimentSpec& spec, const Cell& cell, timeseries::Task task,
                      protocol::ProtocolId proto, std::uint64_t seed) {
  std::ostringstream s;
  s << to_string(spec.id) << '|' << cell_params_json(cell) << '|' << timeseries::to_string(task)
    << '|' << protocol::to_string(proto) << '|' << seed << "|v1";
  std::ostringstream hex;
  hex << std::hex << fnv_string(s.str());
  return hex.str();
}

nlohmann::json outcome_to_json(const RunOutcome& o) {
  nlohmann::json j;
  j["k_selected"] = o.k_selected;
  j["gamma_selected"] = o.gamma_selected;
  j["rho_ev"] = o.rho_ev;
  j["rho_k"] = o.rho_k;
  j["nrmse_val"] = o.nrmse_val;
  j["nrmse_test"] = o.nrmse_test;
  j["record_hash"] = o.record_hash;
  j["warm_start_k"] = o.warm_start_k;
  j["ev_fallback"] = o.ev_fallback;
  j["total_seconds"] = o.total_seconds;
  return j;
}

RunOutcome outcome_from_json(const nlohmann::json& j) {
  RunOutcome o;
  o.ok = true;
  o.k_selected = j.at("k_selected").get<int>();
  o.gamma_selected = j.at("gamma_selected").get<double>();
  o.rho_ev = j.at("rho_ev").get<double>();
  o.rho_k = j.at("rho_k").get<double>();
  o.nrmse_val = j.at("nrmse_val").get<double>();
  o.nrmse_test = j.at("nrmse_test").get<double>();
  o.record_hash = j.at("record_hash").get<std::uint64_t>();
  o.warm_start_k = j.at("warm_start_k").get<int>();
  o.ev_fallback = j.at("ev_fallback").get<bool>();
  o.total_seconds = j.at("total_seconds").get<double>();
  return o;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot open " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

double population_sd(const std::vector<double>& v, double mean) {
  double ssq = 0.0;
  for (const double x : v) ssq += (x - mean) * (x - mean);
  return std::sqrt(ssq / static_cast<double>(v.size()));
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentSpec& spec) {
  if (spec.seeds < 1) throw std::invalid_argument("need at least 1 seed");
  if (spec.cells.empty() || spec.benchmarks.empty() || spec.protocols.empty()) {
    throw std::invalid_argument("experiment spec has an empty axis");
  }

  std::filesystem::create_directories(spec.out_dir);
  const auto cache_dir = spec.out_dir / "cache";
  std::filesystem::create_directories(cache_dir);

  // Deterministic task order: cell, benchmark, protocol, seed.
  std::vector<TaskItem> tasks;
  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    for (std::size_t b = 0; b < spec.benchmarks.size(); ++b) {
      for (std::size_t p = 0; p < spec.protocols.size(); ++p) {
        for (int s = 1; s <= spec.seeds; ++s) {
          tasks.push_back({c, b, p, static_cast<std::uint64_t>(s)});
        }
      }
    }
  }

  std::vector<RunOutcome> outcomes(tasks.size());
  std::vector<std::size_t> to_compute;
  RunStats stats;

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& t = tasks[i];
    const auto key = cache_key(spec, spec.cells[t.cell], spec.benchmarks[t.bench],
                               spec.protocols[t.proto], t.seed);
    const auto path = cache_dir / (key + ".json");
    if (std::filesystem::exists(path)) {
      std::ifstream in(path);
      outcomes[i] = outcome_from_json(nlohmann::json::parse(in));
      ++stats.cached;
    } else {
      to_compute.push_back(i);
    }
  }

  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int workers =
      std::max(1, std::min<int>(spec.workers > 0 ? spec.workers : std::max(1, hw),
                                static_cast<int>(to_compute.size())));
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= to_compute.size()) return;
      const std::size_t i = to_compute[slot];
      const auto& t = tasks[i];
      RunOutcome& o = outcomes[i];
      try {
        const auto cfg = make_run_config(spec.cells[t.cell], spec.benchmarks[t.bench],
                                         spec.protocols[t.proto], t.seed);
        const auto res = protocol::run_pipeline(cfg);
        o.ok = true;
        o.k_selected = res.selected_k;
        o.gamma_selected = res.selected_gamma;
        o.rho_ev = res.rho_ev;
        o.rho_k = res.rho_k;
        o.nrmse_val = res.val_nrmse;
        o.nrmse_test = res.test_nrmse;
        o.record_hash = res.record_hash;
        o.warm_start_k = res.warm_start_k;
        o.ev_fallback = res.ev_fallback;
        o.total_seconds = res.total_seconds;
        const auto key = cache_key(spec, spec.cells[t.cell], spec.benchmarks[t.bench],
                                   spec.protocols[t.proto], t.seed);
        write_atomic(cache_dir / (key + ".json"), outcome_to_json(o).dump(2) + "\n");
      } catch (const std::exception& e) {
        o.ok = false;
        o.error = e.what();
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<std::string> failures;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!outcomes[i].ok) {
      const auto& t = tasks[i];
      std::ostringstream msg;
      msg << cell_params_json(spec.cells[t.cell]) << '/'
          << timeseries::to_string(spec.benchmarks[t.bench]) << '/'
          << protocol::to_string(spec.protocols[t.proto]) << "/seed" << t.seed << ": "
          << outcomes[i].error;
      failures.push_back(msg.str());
      ++stats.failed;
    }
  }
  stats.executed = static_cast<int>(to_compute.size()) - stats.failed;

  // Budget-fairness check: within each (cell, benchmark, seed), all
  // protocols must have analyzed the identical shot record.
  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    for (std::size_t b = 0; b < spec.benchmarks.size(); ++b) {
      for (int s = 1; s <= spec.seeds; ++s) {
        std::uint64_t expected = 0;
        bool have = false;
        for (std::size_t i = 0; i < tasks.size(); ++i) {
          const auto& t = tasks[i];
          if (t.cell != c || t.bench != b || t.seed != static_cast<std::uint64_t>(s)) continue;
          if (!outcomes[i].ok) continue;
          if (!have) {
            expected = outcomes[i].record_hash;
            have = true;
          } else if (outcomes[i].record_hash != expected) {
            throw std::runtime_error("budget fairness violated: protocols saw different records");
          }
        }
      }
    }
  }

  // Raw rows in task order (already deterministic).
  ExperimentOutcome out;
  out.stats = stats;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!outcomes[i].ok) continue;
    const auto& t = tasks[i];
    results::RawRow r;
    r.experiment = to_string(spec.id);
    r.benchmark = timeseries::to_string(spec.benchmarks[t.bench]);
    r.cell_params = cell_params_json(spec.cells[t.cell]);
    r.protocol = protocol::to_string(spec.protocols[t.proto]);
    r.seed = t.seed;
    r.k_selected = outcomes[i].k_selected;
    r.gamma_selected = outcomes[i].gamma_selected;
    r.rho_ev = outcomes[i].rho_ev;
    r.rho_k = outcomes[i].rho_k;
    r.nrmse_val = outcomes[i].nrmse_val;
    r.nrmse_test = outcomes[i].nrmse_test;
    out.table.raw.push_back(std::move(r));
  }

  // Aggregates per (cell, benchmark, protocol); paired stats against the
  // EV rows of the same cell and benchmark when complete.
  const auto find_proto = [&](std::size_t c, std::size_t b, protocol::ProtocolId proto) {
    std::vector<double> tests;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const auto& t = tasks[i];
      if (t.cell == c && t.bench == b && spec.protocols[t.proto] == proto && outcomes[i].ok) {
        tests.push_back(outcomes[i].nrmse_test);
      }
    }
    return tests;
  };

  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    for (std::size_t b = 0; b < spec.benchmarks.size(); ++b) {
      for (std::size_t p = 0; p < spec.protocols.size(); ++p) {
        std::vector<double> tests, vals;
        for (std::size_t i = 0; i < tasks.size(); ++i) {
          const auto& t = tasks[i];
          if (t.cell == c && t.bench == b && t.proto == p && outcomes[i].ok) {
            tests.push_back(outcomes[i].nrmse_test);
            vals.push_back(outcomes[i].nrmse_val);
          }
        }
        if (tests.empty()) continue;
        results::AggregateRow a;
        a.experiment = to_string(spec.id);
        a.benchmark = timeseries::to_string(spec.benchmarks[b]);
        a.cell_params = cell_params_json(spec.cells[c]);
        a.protocol = protocol::to_string(spec.protocols[p]);
        a.seeds = static_cast<int>(tests.size());
        double mean = 0.0;
        for (const double v : tests) mean += v;
        mean /= static_cast<double>(tests.size());
        a.nrmse_test_mean = mean;
        a.nrmse_test_sd = population_sd(tests, mean);
        double vmean = 0.0;
        for (const double v : vals) vmean += v;
        a.nrmse_val_mean = vmean / static_cast<double>(vals.size());

        if (spec.protocols[p] != protocol::ProtocolId::Ev) {
          const auto ev_tests = find_proto(c, b, protocol::ProtocolId::Ev);
          if (ev_tests.size() == tests.size() && tests.size() >= 2) {
            const auto s = stats::paired_gap_stats({ev_tests, tests});
            a.has_baseline = true;
            a.gap_vs_ev_mean = s.mean_gap;
            a.gap_vs_ev_sd = s.sd_gap;
            a.win_rate_vs_ev = s.win_rate;
            a.wilcoxon_p_vs_ev = s.wilcoxon_p;
            a.ci95_vs_ev = s.ci95_half_width;
          }
        }
        out.table.aggregate.push_back(std::move(a));
      }
    }
  }

  if (!out.table.raw.empty()) {
    results::write_raw_csv(spec.out_dir / "raw.csv", out.table.raw);
    results::write_aggregate_csv(spec.out_dir / "aggregate.csv", out.table.aggregate);
  }

  nlohmann::json meta;
  meta["experiment"] = to_string(spec.id);
  meta["seeds"] = spec.seeds;
  meta["runs_total"] = tasks.size();
  meta["runs_executed"] = stats.executed;
  meta["runs_cached"] = stats.cached;
  meta["runs_failed"] = stats.failed;
  meta["resume_possible"] = stats.failed > 0;
  meta["failures"] = failures;
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  meta["finished_unix_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  write_atomic(spec.out_dir / "meta.json", meta.dump(2) + "\n");

  out.partial = stats.failed > 0;
  return out;
}

}  // namespace qrc::harness
