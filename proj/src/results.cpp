#include "qrc/results.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qrc::results {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("bad numeric field: '" + s + "'");
  }
  return v;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

// RFC-4180 style field splitting with quote handling.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

constexpr const char* kRawHeader =
    "experiment,benchmark,cell_params,protocol,seed,k_selected,gamma_selected,rho_ev,rho_k,"
    "nrmse_val,nrmse_test";

}  // namespace

void write_raw_csv(const std::filesystem::path& path, const std::vector<RawRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("refusing to write empty result table");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << kRawHeader << "\n";
  for (const auto& r : rows) {
    out << quote_csv(r.experiment) << ',' << quote_csv(r.benchmark) << ','
        << quote_csv(r.cell_params) << ',' << quote_csv(r.protocol) << ',' << r.seed << ','
        << r.k_selected << ',' << format_double(r.gamma_selected) << ','
        << format_double(r.rho_ev) << ',' << format_double(r.rho_k) << ','
        << format_double(r.nrmse_val) << ',' << format_double(r.nrmse_test) << "\n";
  }
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<RawRow> read_raw_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty results file");
  if (line != kRawHeader) throw std::runtime_error("unexpected raw results header");

  std::vector<RawRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 11) throw std::runtime_error("bad raw results row: " + line);
    RawRow r;
    r.experiment = f[0];
    r.benchmark = f[1];
    r.cell_params = f[2];
    r.protocol = f[3];
    r.seed = std::stoull(f[4]);
    r.k_selected = std::stoi(f[5]);
    r.gamma_selected = parse_double(f[6]);
    r.rho_ev = parse_double(f[7]);
    r.rho_k = parse_double(f[8]);
    r.nrmse_val = parse_double(f[9]);
    r.nrmse_test = parse_double(f[10]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_aggregate_csv(const std::filesystem::path& path,
                         const std::vector<AggregateRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "experiment,benchmark,cell_params,protocol,seeds,nrmse_test_mean,nrmse_test_sd,"
         "nrmse_val_mean,gap_vs_ev_mean,gap_vs_ev_sd,win_rate_vs_ev,wilcoxon_p_vs_ev,ci95_vs_ev"
      << "\n";
  for (const auto& r : rows) {
    out << quote_csv(r.experiment) << ',' << quote_csv(r.benchmark) << ','
        << quote_csv(r.cell_params) << ',' << quote_csv(r.protocol) << ',' << r.seeds << ','
        << format_double(r.nrmse_test_mean) << ',' << format_double(r.nrmse_test_sd) << ','
        << format_double(r.nrmse_val_mean) << ',';
    if (r.has_baseline) {
      out << format_double(r.gap_vs_ev_mean) << ',' << format_double(r.gap_vs_ev_sd) << ','
          << format_double(r.win_rate_vs_ev) << ',' << format_double(r.wilcoxon_p_vs_ev) << ','
          << format_double(r.ci95_vs_ev);
    } else {
      out << ",,,,";
    }
    out << "\n";
  }
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace qrc::results
