#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "netrepro/error.hpp"
#include "netrepro/estimation.hpp"
#include "netrepro/integrate.hpp"
#include "netrepro/io/format.hpp"
#include "netrepro/repro.hpp"
#include "netrepro/stochastic.hpp"

namespace netrepro::io {

/// `# key: value` lines written at the top of every output file.
using Metadata = std::vector<std::pair<std::string, std::string>>;

inline void write_metadata(std::ostream& out, const Metadata& meta) {
  for (const auto& [key, value] : meta) out << "# " << key << ": " << value << '\n';
}

/// Data rows of a CSV stream with comment metadata split off.
struct CsvTable {
  std::map<std::string, std::string> metadata;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::ptrdiff_t column(std::string_view name) const {
    for (std::size_t k = 0; k < header.size(); ++k)
      if (header[k] == name) return static_cast<std::ptrdiff_t>(k);
    return -1;
  }
};

inline CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        auto key = line.substr(1, colon - 1);
        auto value = line.substr(colon + 1);
        while (!key.empty() && key.front() == ' ') key.erase(key.begin());
        while (!value.empty() && value.front() == ' ') value.erase(value.begin());
        table.metadata[key] = value;
      }
      continue;
    }
    std::vector<std::string> fields;
    for (auto f : split_csv_line(line)) fields.emplace_back(f);
    if (table.header.empty()) {
      table.header = std::move(fields);
    } else {
      if (fields.size() != table.header.size())
        throw Error(ErrorKind::ConfigError, "row has " + std::to_string(fields.size()) +
                                                " fields, header has " +
                                                std::to_string(table.header.size()));
      table.rows.push_back(std::move(fields));
    }
  }
  if (table.header.empty()) throw Error(ErrorKind::ConfigError, "CSV has no header line");
  return table;
}

inline CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open '" + path + "'");
  return read_csv(in);
}

// trajectory.csv: t, s_1..s_n, x_1..x_n, r_1..r_n, dxdt_1..dxdt_n

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const Metadata& meta) {
  write_metadata(out, meta);
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  out << 't';
  for (const char* prefix : {"s_", "x_", "r_", "dxdt_"})
    for (std::size_t i = 1; i <= n; ++i) out << ',' << prefix << i;
  out << '\n';
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    const auto& st = traj.states[k];
    out << format_number(traj.times[k]);
    for (const Vector* v : {&st.s, &st.x, &st.r, &traj.derivatives[k]})
      for (double value : *v) out << ',' << format_number(value);
    out << '\n';
  }
}

/// Parses a trajectory table; `clamped` receives the number of entries that
/// validation had to pull back into [0, 1].
inline Trajectory trajectory_from_csv(const CsvTable& table, ModelKind kind,
                                      std::size_t* clamped = nullptr) {
  const std::size_t cols = table.header.size();
  if (cols < 5 || (cols - 1) % 4 != 0 || table.header[0] != "t")
    throw Error(ErrorKind::ConfigError, "trajectory header must be t,s_*,x_*,r_*,dxdt_*");
  const std::size_t n = (cols - 1) / 4;
  const char* prefixes[] = {"s_", "x_", "r_", "dxdt_"};
  for (std::size_t block = 0; block < 4; ++block)
    for (std::size_t i = 0; i < n; ++i)
      if (table.header[1 + block * n + i] != prefixes[block] + std::to_string(i + 1))
        throw Error(ErrorKind::ConfigError, "unexpected trajectory column '" +
                                                table.header[1 + block * n + i] + "'");
  Trajectory traj;
  traj.kind = kind;
  std::size_t total_clamped = 0;
  for (const auto& row : table.rows) {
    Vector blocks[4];
    for (std::size_t block = 0; block < 4; ++block) {
      blocks[block].resize(n);
      for (std::size_t i = 0; i < n; ++i) blocks[block][i] = parse_number(row[1 + block * n + i]);
    }
    ClampReport report;
    traj.times.push_back(parse_number(row[0]));
    traj.states.push_back(validate_state(std::move(blocks[0]), std::move(blocks[1]),
                                         std::move(blocks[2]), kind, kDefaultSimplexTol, &report));
    traj.derivatives.push_back(std::move(blocks[3]));
    total_clamped += report.clamped;
  }
  if (clamped) *clamped = total_clamped;
  return traj;
}

// repro.csv: t, i, R0_i, Rbar_i, network_R0, network_Rt, trend

inline void write_repro_csv(std::ostream& out, const std::vector<double>& times,
                            const std::vector<ReproReport>& reports, const Metadata& meta) {
  write_metadata(out, meta);
  out << "t,i,R0_i,Rbar_i,network_R0,network_Rt,trend\n";
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& rep = reports[k];
    for (std::size_t i = 0; i < rep.community_r0.size(); ++i) {
      out << format_number(times[k]) << ',' << i + 1 << ',' << format_number(rep.community_r0[i])
          << ',' << (rep.community_rbar[i] ? format_number(*rep.community_rbar[i]) : "NA") << ','
          << format_number(rep.network_r0) << ',' << format_number(rep.network_rt) << ','
          << to_string(rep.trends[i]) << '\n';
    }
  }
}

// incidence.csv: day, dest, source, new_cases (source 0 = unattributed)
// recoveries.csv: day, community, recoveries

inline void write_incidence_csv(std::ostream& out, const IncidenceSeries& series,
                                const Metadata& meta) {
  write_metadata(out, meta);
  out << "day,dest,source,new_cases\n";
  const std::size_t n = series.communities();
  for (int d = 0; d < series.days(); ++d)
    for (std::size_t i = 0; i < n; ++i) {
      if (!series.attributed()) {
        out << d << ',' << i + 1 << ",0," << series.total_cases(d, i) << '\n';
        continue;
      }
      for (std::size_t j = 0; j < n; ++j)
        out << d << ',' << i + 1 << ',' << j + 1 << ',' << series.cases(d, i, j) << '\n';
    }
}

inline void write_recoveries_csv(std::ostream& out, const IncidenceSeries& series,
                                 const Metadata& meta) {
  write_metadata(out, meta);
  out << "day,community,recoveries\n";
  for (int d = 0; d < series.days(); ++d)
    for (std::size_t i = 0; i < series.communities(); ++i)
      out << d << ',' << i + 1 << ',' << series.recoveries(d, i) << '\n';
}

/// Attributed when a `source` column exists and no row uses source 0.
inline IncidenceSeries incidence_from_csv(const CsvTable& table) {
  const auto day_col = table.column("day");
  const auto dest_col = table.column("dest");
  const auto source_col = table.column("source");
  const auto cases_col = table.column("new_cases");
  if (day_col < 0 || dest_col < 0 || cases_col < 0)
    throw Error(ErrorKind::ConfigError, "incidence CSV needs day, dest and new_cases columns");

  struct Row {
    std::int64_t day, dest, source, cases;
  };
  std::vector<Row> rows;
  std::int64_t max_day = -1, n = 0;
  bool attributed = source_col >= 0;
  for (const auto& r : table.rows) {
    Row row{parse_integer(r[day_col]), parse_integer(r[dest_col]),
            source_col >= 0 ? parse_integer(r[source_col]) : 0, parse_integer(r[cases_col])};
    if (row.day < 0 || row.dest < 1 || row.source < 0 || row.cases < 0)
      throw Error(ErrorKind::ConfigError, "negative day/count or community index < 1");
    if (row.source == 0) attributed = false;
    max_day = std::max(max_day, row.day);
    n = std::max({n, row.dest, row.source});
    rows.push_back(row);
  }
  if (max_day < 0) throw Error(ErrorKind::ConfigError, "incidence CSV has no rows");
  const int days = static_cast<int>(max_day + 1);

  IncidenceSeries series = attributed
                               ? IncidenceSeries(days, std::vector<std::int64_t>(n, 0))
                               : IncidenceSeries::unattributed(days, static_cast<std::size_t>(n));
  for (const auto& row : rows) {
    const auto d = static_cast<int>(row.day);
    const auto i = static_cast<std::size_t>(row.dest - 1);
    if (attributed)
      series.add_cases(d, i, static_cast<std::size_t>(row.source - 1), row.cases);
    else
      series.add_total_cases(d, i, row.cases);
  }
  if (auto it = table.metadata.find("start_date"); it != table.metadata.end())
    series.start_date = it->second;
  return series;
}

// estimates.csv: day, level, i, j, mean, ci_low, ci_high, window, prior_only

inline void write_estimate_rows(std::ostream& out, std::string_view level, std::size_t i,
                                std::size_t j, const std::vector<RtEstimate>& estimates) {
  for (const auto& e : estimates)
    out << e.day << ',' << level << ',' << i << ',' << j << ',' << format_number(e.mean) << ','
        << format_number(e.ci_low) << ',' << format_number(e.ci_high) << ',' << e.window << ','
        << (e.prior_only ? "true" : "false") << '\n';
}

/// Network rows use i = j = 0, community rows j = 0; indices are 1-based.
inline void write_estimates_csv(std::ostream& out, const DistributedEstimates& est,
                                const Metadata& meta) {
  write_metadata(out, meta);
  out << "day,level,i,j,mean,ci_low,ci_high,window,prior_only\n";
  write_estimate_rows(out, "network", 0, 0, est.network);
  for (std::size_t i = 0; i < est.community.size(); ++i)
    write_estimate_rows(out, "community", i + 1, 0, est.community[i]);
  for (const auto& [key, values] : est.pair)
    write_estimate_rows(out, "pair", key.first + 1, key.second + 1, values);
}

}  // namespace netrepro::io
