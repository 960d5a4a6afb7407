#include "qrc/record_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qrc::harness {

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension();
  p += ".meta.json";
  return p;
}

void export_shot_record(const quantum::ShotRecord& record,
                        const std::filesystem::path& csv_path) {
  const int q = record.meta.qubits;
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path.string());

  csv << "t,shot";
  for (int i = 1; i <= q; ++i) csv << ",z" << i;
  for (int i = 1; i <= q; ++i) csv << ",x" << i;
  csv << "\n";
  for (int t = 0; t < record.meta.timesteps; ++t) {
    for (int n = 0; n < record.meta.n_shots; ++n) {
      csv << t << ',' << n;
      const std::int8_t* row = record.row(t, n);
      for (int c = 0; c < 2 * q; ++c) csv << ',' << static_cast<int>(row[c]);
      csv << "\n";
    }
  }
  csv.close();
  if (!csv) throw std::runtime_error("write failed for " + csv_path.string());

  nlohmann::json meta;
  meta["Q"] = record.meta.qubits;
  meta["N_shots"] = record.meta.n_shots;
  meta["T"] = record.meta.timesteps;
  meta["reservoir_seed"] = record.meta.reservoir_seed;
  meta["sampling_seed"] = record.meta.sampling_seed;
  meta["task"] = record.meta.task;
  if (record.meta.series_seed != 0) meta["series_seed"] = record.meta.series_seed;
  std::ofstream side(sidecar_path(csv_path));
  if (!side) throw std::runtime_error("cannot open " + sidecar_path(csv_path).string());
  side << meta.dump(2) << "\n";
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

int parse_int_field(const std::string& s, int line, int column, const char* what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    std::ostringstream msg;
    msg << "line " << line << ", column " << column << ": expected " << what << ", got '" << s
        << "'";
    throw RecordParseError(msg.str(), line, column);
  }
}

}  // namespace

quantum::ShotRecord import_shot_record(const std::filesystem::path& csv_path) {
  const auto side_path = sidecar_path(csv_path);
  std::ifstream side(side_path);
  if (!side) throw std::runtime_error("missing sidecar " + side_path.string());
  nlohmann::json meta = nlohmann::json::parse(side);

  quantum::ShotRecord rec;
  rec.meta.qubits = meta.at("Q").get<int>();
  rec.meta.n_shots = meta.at("N_shots").get<int>();
  rec.meta.timesteps = meta.at("T").get<int>();
  rec.meta.reservoir_seed = meta.at("reservoir_seed").get<std::uint64_t>();
  rec.meta.sampling_seed = meta.at("sampling_seed").get<std::uint64_t>();
  rec.meta.task = meta.at("task").get<std::string>();
  rec.meta.series_seed = meta.value("series_seed", std::uint64_t{0});
  const int q = rec.meta.qubits;
  const int n_shots = rec.meta.n_shots;
  const int timesteps = rec.meta.timesteps;
  if (q < 1 || q > quantum::kMaxQubits || n_shots < 1 || timesteps < 1) {
    throw RecordParseError("sidecar dimensions out of range", 0, 0);
  }
  rec.meta.executions = 2ull * n_shots * timesteps;
  rec.outcomes.resize(static_cast<std::size_t>(timesteps) * n_shots * 2 * q);

  std::ifstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path.string());

  std::string line;
  if (!std::getline(csv, line)) throw RecordParseError("empty record file", 1, 0);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    std::string expected = "t,shot";
    for (int i = 1; i <= q; ++i) expected += ",z" + std::to_string(i);
    for (int i = 1; i <= q; ++i) expected += ",x" + std::to_string(i);
    if (line != expected) {
      throw RecordParseError("malformed header: expected '" + expected + "'", 1, 0);
    }
  }

  int line_no = 1;
  long expected_row = 0;
  const long total_rows = static_cast<long>(timesteps) * n_shots;
  while (std::getline(csv, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (static_cast<int>(fields.size()) != 2 + 2 * q) {
      std::ostringstream msg;
      msg << "line " << line_no << ": expected " << 2 + 2 * q << " fields, got " << fields.size();
      throw RecordParseError(msg.str(), line_no, 0);
    }
    const int t = parse_int_field(fields[0], line_no, 1, "time step");
    const int shot = parse_int_field(fields[1], line_no, 2, "shot index");
    if (expected_row >= total_rows) {
      throw RecordParseError("more rows than T * N_shots", line_no, 0);
    }
    const int want_t = static_cast<int>(expected_row / n_shots);
    const int want_shot = static_cast<int>(expected_row % n_shots);
    if (t != want_t || shot != want_shot) {
      std::ostringstream msg;
      msg << "line " << line_no << ": rows must be sorted by (t, shot); expected (" << want_t
          << ", " << want_shot << "), got (" << t << ", " << shot << ")";
      throw RecordParseError(msg.str(), line_no, 1);
    }
    std::int8_t* row = rec.row(t, shot);
    for (int c = 0; c < 2 * q; ++c) {
      const int column = 3 + c;
      const int v = parse_int_field(fields[2 + c], line_no, column, "outcome");
      if (v != 1 && v != -1) {
        std::ostringstream msg;
        msg << "line " << line_no << ", column " << column << ": outcome must be -1 or 1, got "
            << v;
        throw RecordParseError(msg.str(), line_no, column);
      }
      row[c] = static_cast<std::int8_t>(v);
    }
    ++expected_row;
  }
  if (expected_row != total_rows) {
    std::ostringstream msg;
    msg << "expected " << total_rows << " data rows, got " << expected_row;
    throw RecordParseError(msg.str(), line_no, 0);
  }
  return rec;
}

}  // namespace qrc::harness
