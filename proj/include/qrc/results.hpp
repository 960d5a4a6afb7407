#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qrc::results {

/// One (cell, protocol, seed) run. cell_params is a canonical JSON string
/// (sorted keys, shortest float form) so rows are byte-stable.
struct RawRow {
  std::string experiment;
  std::string benchmark;
  std::string cell_params;
  std::string protocol;
  std::uint64_t seed = 0;
  int k_selected = 0;
  double gamma_selected = 0.0;
  double rho_ev = 0.0;
  double rho_k = 0.0;
  double nrmse_val = 0.0;
  double nrmse_test = 0.0;
};

/// Per-(cell, protocol) aggregate. Paired-vs-EV columns are empty for the
/// EV rows themselves (has_baseline = false).
struct AggregateRow {
  std::string experiment;
  std::string benchmark;
  std::string cell_params;
  std::string protocol;
  int seeds = 0;
  double nrmse_test_mean = 0.0;
  double nrmse_test_sd = 0.0;
  double nrmse_val_mean = 0.0;
  bool has_baseline = false;
  double gap_vs_ev_mean = 0.0;
  double gap_vs_ev_sd = 0.0;
  double win_rate_vs_ev = 0.0;
  double wilcoxon_p_vs_ev = 0.0;
  double ci95_vs_ev = 0.0;
};

struct ResultTable {
  std::vector<RawRow> raw;
  std::vector<AggregateRow> aggregate;
};

/// Shortest round-trip decimal form (std::to_chars).
std::string format_double(double v);

void write_raw_csv(const std::filesystem::path& path, const std::vector<RawRow>& rows);
std::vector<RawRow> read_raw_csv(const std::filesystem::path& path);

void write_aggregate_csv(const std::filesystem::path& path, const std::vector<AggregateRow>& rows);

}  // namespace qrc::results
