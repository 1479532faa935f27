#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "netrepro/error.hpp"
#include "netrepro/io/config.hpp"

namespace netrepro::presets {

using nlohmann::json;

// Ten communities on a directed ring with reverse links and four chords.
// Network R0 is about 0.856, so network Rt stays below one for the whole SIR
// run, while communities 3, 5 and 9 start with few infections next to heavily
// infected neighbours and grow at first.
inline json ten_community() {
  const std::vector<double> gamma{0.25, 0.2, 0.3, 0.22, 0.28, 0.24, 0.2, 0.26, 0.3, 0.23};
  const std::vector<double> self{0.10, 0.08, 0.12, 0.09, 0.10, 0.10, 0.07, 0.10, 0.12, 0.08};
  const std::size_t n = gamma.size();
  std::vector<std::vector<double>> beta(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    beta[i][i] = self[i];
    beta[(i + 1) % n][i] = 0.06;
    beta[i][(i + 1) % n] = 0.04;
  }
  beta[2][0] = 0.08;
  beta[4][6] = 0.08;
  beta[7][2] = 0.03;
  beta[4][3] = 0.05;
  return {{"schema_version", io::kSchemaVersion},
          {"name", "paper-fig4"},
          {"model_kind", "SIR"},
          {"beta", beta},
          {"gamma", gamma},
          {"initial", {{"x", {0.06, 0.05, 0.002, 0.08, 0.003, 0.04, 0.09, 0.05, 0.03, 0.07}}}},
          {"dt", 0.01},
          {"horizon", 100.0},
          {"sample_interval", 1.0}};
}

namespace detail {

inline json three_node_segment(int from, int to, double self1, double self2, double self3,
                               double b13, double b21, double b32) {
  return {{"from", from},
          {"to", to},
          {"beta", {{self1, 0.0, b13}, {b21, self2, 0.0}, {0.0, b32, self3}}},
          {"gamma", {0.2, 0.2, 0.2}}};
}

}  // namespace detail

// Three communities on the ring 3 -> 1 -> 2 -> 3 with a piecewise schedule:
// travel from 3 into 1 is cut on days 14-20, broad mitigation starts on day
// 21 and transmission from 1 into 2 is halved from day 45.
inline json three_community() {
  json schedule = json::array({
      detail::three_node_segment(0, 14, 0.34, 0.30, 0.38, 0.10, 0.14, 0.10),
      detail::three_node_segment(14, 21, 0.34, 0.30, 0.38, 0.03, 0.14, 0.10),
      detail::three_node_segment(21, 45, 0.20, 0.18, 0.20, 0.08, 0.14, 0.10),
      detail::three_node_segment(45, 91, 0.20, 0.18, 0.20, 0.08, 0.07, 0.10),
  });
  return {{"schema_version", io::kSchemaVersion},
          {"name", "paper-3node"},
          {"model_kind", "SIR"},
          {"schedule", schedule},
          {"population", {20000, 20000, 20000}},
          {"initial_infected", {12, 3, 23}},
          {"days", 91},
          {"seed", 20200303},
          {"start_date", "2020-03-03"},
          {"estimation",
           {{"window", 7},
            {"si_mean", 4.7},
            {"si_sd", 2.9},
            {"si_max_lag", 20},
            {"prior_shape", 1.0},
            {"prior_scale", 5.0}}}};
}

// Two communities whose basic numbers are both 0.9, seeded so that community
// 1 holds far fewer infections than its neighbour.
inline json hidden_outbreak() {
  return {{"schema_version", io::kSchemaVersion},
          {"name", "hidden-outbreak"},
          {"model_kind", "SIR"},
          {"beta", {{0.05, 0.04}, {0.04, 0.05}}},
          {"gamma", {0.1, 0.1}},
          {"initial", {{"x", {0.001, 0.1}}}},
          {"dt", 0.01},
          {"horizon", 200.0},
          {"sample_interval", 1.0}};
}

// Supercritical SIS network (network R0 about 2.13) that settles on its
// endemic equilibrium.
inline json sis_endemic() {
  return {{"schema_version", io::kSchemaVersion},
          {"name", "sis-endemic"},
          {"model_kind", "SIS"},
          {"beta", {{0.20, 0.05, 0.0}, {0.0, 0.15, 0.08}, {0.06, 0.0, 0.25}}},
          {"gamma", {0.12, 0.10, 0.15}},
          {"initial", {{"x", {0.01, 0.0, 0.02}}}},
          {"dt", 0.01},
          {"horizon", 500.0},
          {"sample_interval", 1.0}};
}

inline std::vector<std::string_view> names() {
  return {"paper-fig4", "paper-3node", "hidden-outbreak", "sis-endemic"};
}

inline json preset_json(std::string_view name) {
  if (name == "paper-fig4") return ten_community();
  if (name == "paper-3node") return three_community();
  if (name == "hidden-outbreak") return hidden_outbreak();
  if (name == "sis-endemic") return sis_endemic();
  throw Error(ErrorKind::ConfigError, "unknown preset '" + std::string(name) + "'");
}

inline io::ScenarioConfig preset(std::string_view name) {
  return io::config_from_json(preset_json(name));
}

}  // namespace netrepro::presets
