#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "netrepro/error.hpp"
#include "netrepro/estimation.hpp"
#include "netrepro/io/format.hpp"
#include "netrepro/model.hpp"
#include "netrepro/stochastic.hpp"

namespace netrepro::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// One run's worth of inputs. A deterministic run carries `initial`; a
/// stochastic run carries `population` and `initial_infected`.
struct ScenarioConfig {
  std::string name;
  ModelKind kind = ModelKind::SIR;
  std::optional<NetworkModel> model;
  std::optional<EpidemicState> initial;
  std::vector<std::int64_t> population;
  std::vector<std::int64_t> initial_infected;
  double dt = 0.01;
  double horizon = 100.0;
  double sample_interval = 1.0;
  int days = 0;
  std::optional<std::uint64_t> seed;
  ParameterSchedule schedule;
  EstimationSettings estimation;
  std::optional<std::string> start_date;
  std::string output_dir = ".";
  json source;  // document the config was read from

  bool deterministic() const { return initial.has_value(); }
  bool stochastic() const { return !initial_infected.empty(); }
  std::string hash() const { return hex64(fnv1a64(source.dump())); }

  /// Schedule for the stochastic simulator; a lone model covers all days.
  ParameterSchedule effective_schedule() const {
    if (!schedule.empty()) return schedule;
    if (!model) throw Error(ErrorKind::ConfigError, "config has neither beta/gamma nor schedule");
    return constant_schedule(*model, days);
  }
};

namespace detail {

inline Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorKind::ConfigError, std::string(what) + " must be an array");
  std::vector<Vector> rows;
  for (const auto& row : j) rows.push_back(row.get<Vector>());
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (const auto& row : rows)
    if (row.size() != cols)
      throw Error(ErrorKind::NonSquareMatrix, std::string(what) + " has ragged rows");
  return Matrix::from_rows(rows);
}

inline NetworkModel model_from_json(const json& j) {
  if (!j.contains("beta") || !j.contains("gamma"))
    throw Error(ErrorKind::ConfigError, "model needs 'beta' and 'gamma'");
  return validate_model(matrix_from_json(j.at("beta"), "beta"), j.at("gamma").get<Vector>());
}

inline bool valid_date(const std::string& text) {
  int y = 0;
  unsigned m = 0, d = 0;
  if (std::sscanf(text.c_str(), "%d-%u-%u", &y, &m, &d) != 3) return false;
  return std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m},
                                     std::chrono::day{d}}
      .ok();
}

}  // namespace detail

/// ISO date `days` after `start` (YYYY-MM-DD).
inline std::string date_after(const std::string& start, int days) {
  int y = 0;
  unsigned m = 0, d = 0;
  std::sscanf(start.c_str(), "%d-%u-%u", &y, &m, &d);
  using namespace std::chrono;
  const year_month_day out{sys_days{year_month_day{year{y}, month{m}, day{d}}} +
                           std::chrono::days{days}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(out.year()),
                static_cast<unsigned>(out.month()), static_cast<unsigned>(out.day()));
  return buf;
}

inline ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig c;
  c.source = j;
  try {
    const int version = j.value("schema_version", kSchemaVersion);
    if (version != kSchemaVersion)
      throw Error(ErrorKind::ConfigError, "unsupported schema_version " + std::to_string(version));
    c.name = j.value("name", std::string{});
    c.kind = parse_model_kind(j.value("model_kind", std::string("SIR")));
    if (j.contains("beta") || j.contains("gamma")) c.model = detail::model_from_json(j);

    if (j.contains("schedule")) {
      for (const auto& seg : j.at("schedule"))
        c.schedule.push_back({seg.at("from").get<int>(), seg.at("to").get<int>(),
                              detail::model_from_json(seg)});
    }
    c.dt = j.value("dt", c.dt);
    c.horizon = j.value("horizon", c.horizon);
    c.sample_interval = j.value("sample_interval", c.sample_interval);
    c.days = j.value("days", 0);
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("start_date")) {
      c.start_date = j.at("start_date").get<std::string>();
      if (!detail::valid_date(*c.start_date))
        throw Error(ErrorKind::ConfigError, "start_date must be YYYY-MM-DD");
    }
    c.output_dir = j.value("output_dir", c.output_dir);

    const bool has_fractions = j.contains("initial");
    const bool has_counts = j.contains("initial_infected");
    if (has_fractions && has_counts)
      throw Error(ErrorKind::ConfigError,
                  "config holds both initial fractions and initial counts; keep one");
    if (has_fractions) {
      if (!c.model) throw Error(ErrorKind::ConfigError, "deterministic config needs beta/gamma");
      const auto& init = j.at("initial");
      const Vector x = init.at("x").get<Vector>();
      const std::size_t n = x.size();
      Vector r = init.contains("r") ? init.at("r").get<Vector>() : Vector(n, 0.0);
      Vector s;
      if (init.contains("s")) {
        s = init.at("s").get<Vector>();
      } else {
        s.resize(n);
        for (std::size_t i = 0; i < n && i < r.size(); ++i) s[i] = 1.0 - x[i] - r[i];
      }
      c.initial = validate_state(std::move(s), x, std::move(r), c.kind);
      if (c.initial->size() != c.model->size())
        throw Error(ErrorKind::DimensionMismatch, "initial state and model sizes differ");
    }
    if (has_counts) {
      c.initial_infected = j.at("initial_infected").get<std::vector<std::int64_t>>();
      c.population = j.at("population").get<std::vector<std::int64_t>>();
      if (c.days <= 0) throw Error(ErrorKind::ConfigError, "stochastic config needs days > 0");
    }

    if (j.contains("estimation")) {
      const auto& e = j.at("estimation");
      auto& s = c.estimation;
      s.window = e.value("window", s.window);
      s.si_mean = e.value("si_mean", s.si_mean);
      s.si_sd = e.value("si_sd", s.si_sd);
      s.si_max_lag = e.value("si_max_lag", s.si_max_lag);
      s.prior_shape = e.value("prior_shape", s.prior_shape);
      s.prior_scale = e.value("prior_scale", s.prior_scale);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
  return c;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("malformed config: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace netrepro::io
