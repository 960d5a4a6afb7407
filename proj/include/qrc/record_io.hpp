#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "qrc/quantum.hpp"

namespace qrc::harness {

/// Import failure with the offending CSV location (1-based line, 1-based
/// column field index; 0 when not applicable).
class RecordParseError : public std::runtime_error {
 public:
  RecordParseError(const std::string& msg, int line, int column)
      : std::runtime_error(msg), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Shot-record CSV: header `t,shot,z1..zQ,x1..xQ`, rows sorted by (t, shot),
/// values in {-1, 1}. A sidecar `<stem>.meta.json` carries
/// {Q, N_shots, T, reservoir_seed, sampling_seed, task} plus the optional
/// series_seed needed to rebuild forecasting targets. Round-trips bit-exact.
void export_shot_record(const quantum::ShotRecord& record, const std::filesystem::path& csv_path);

quantum::ShotRecord import_shot_record(const std::filesystem::path& csv_path);

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

}  // namespace qrc::harness
