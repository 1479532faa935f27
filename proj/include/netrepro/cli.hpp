#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "netrepro/error.hpp"
#include "netrepro/estimation.hpp"
#include "netrepro/integrate.hpp"
#include "netrepro/io/config.hpp"
#include "netrepro/io/csv.hpp"
#include "netrepro/io/format.hpp"
#include "netrepro/presets.hpp"
#include "netrepro/repro.hpp"
#include "netrepro/spectral.hpp"
#include "netrepro/stochastic.hpp"

namespace netrepro::cli {

using nlohmann::json;
namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

struct ConfigSource {
  std::string config_path;
  std::string preset;
};

struct SimulateOptions {
  ConfigSource source;
  std::string out_dir;
  std::optional<double> dt, horizon, sample_interval;
  bool emit_plot_data = false;
};

struct AnalyzeOptions {
  ConfigSource source;
  std::string trajectory_path;
  std::string out_dir;
  bool emit_plot_data = false;
};

struct StochasticOptions {
  ConfigSource source;
  std::string out_dir;
  std::optional<int> days;
  std::optional<std::uint64_t> seed;
  int replicates = 1;
  bool emit_plot_data = false;
};

struct EstimateOptions {
  std::string input_path;
  std::string config_path;
  std::string out_dir;
  std::optional<int> window, si_max_lag;
  std::optional<double> si_mean, si_sd, prior_shape, prior_scale;
  std::string level = "all";
  bool emit_plot_data = false;
};

namespace detail {

inline json load_source_json(const ConfigSource& src) {
  if (!src.config_path.empty() && !src.preset.empty())
    throw Error(ErrorKind::ConfigError, "give either --config or --preset, not both");
  if (!src.preset.empty()) return presets::preset_json(src.preset);
  if (src.config_path.empty()) throw Error(ErrorKind::ConfigError, "need --config or --preset");
  std::ifstream in(src.config_path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config '" + src.config_path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("malformed config: ") + e.what());
  }
}

inline fs::path output_dir(const std::string& flag, const io::ScenarioConfig& cfg) {
  fs::path dir = flag.empty() ? fs::path(cfg.output_dir) : fs::path(flag);
  fs::create_directories(dir);
  return dir;
}

inline std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write '" + path.string() + "'");
  return out;
}

inline std::string tolerances_line() {
  return "simplex=" + io::format_number(kDefaultSimplexTol) +
         " spectral=" + io::format_number(kSpectralTol) +
         " trend_band=" + io::format_number(kAnalyticTrendBand) +
         " estimated_trend_band=" + io::format_number(kEstimatedTrendBand) +
         " zero_infection=" + io::format_number(kZeroInfectionThreshold);
}

inline io::Metadata base_metadata(std::string_view command, const std::string& config_hash,
                                  std::optional<std::uint64_t> seed) {
  return {{"tool", std::string(io::kToolVersion)},
          {"command", std::string(command)},
          {"config_hash", config_hash},
          {"seed", seed ? std::to_string(*seed) : std::string("none")},
          {"tolerances", tolerances_line()}};
}

inline std::string list_of(const std::vector<std::size_t>& items) {
  std::string s = "[";
  for (std::size_t k = 0; k < items.size(); ++k) s += (k ? "," : "") + std::to_string(items[k]);
  return s + "]";
}

inline json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (double v : m.row(i)) row.push_back(std::isnan(v) ? json(nullptr) : json(v));
    rows.push_back(row);
  }
  return rows;
}

inline std::string date_label(const std::optional<std::string>& start, int day) {
  return start ? io::date_after(*start, day) : std::string();
}

}  // namespace detail

inline int cmd_simulate(const SimulateOptions& opt, std::ostream& out) {
  json source = detail::load_source_json(opt.source);
  if (opt.dt) source["dt"] = *opt.dt;
  if (opt.horizon) source["horizon"] = *opt.horizon;
  if (opt.sample_interval) source["sample_interval"] = *opt.sample_interval;
  const auto cfg = io::config_from_json(source);
  if (!cfg.deterministic() || !cfg.model)
    throw Error(ErrorKind::ConfigError, "simulate needs beta/gamma and initial fractions");

  const auto traj = integrate(*cfg.model, *cfg.initial, cfg.dt, cfg.horizon, cfg.sample_interval);
  const auto reports = analyze_trajectory(*cfg.model, traj);
  const fs::path dir = detail::output_dir(opt.out_dir, cfg);

  auto meta = detail::base_metadata("simulate", cfg.hash(), std::nullopt);
  meta.emplace_back("model_kind", std::string(to_string(cfg.kind)));
  meta.emplace_back("dt", io::format_number(cfg.dt));
  meta.emplace_back("horizon", io::format_number(cfg.horizon));
  {
    auto f = detail::open_output(dir / "trajectory.csv");
    io::write_trajectory_csv(f, traj, meta);
  }

  double max_rt = 0.0;
  for (const auto& rep : reports) max_rt = std::max(max_rt, rep.network_rt);
  std::vector<std::size_t> rising;
  for (std::size_t i = 0; i < cfg.model->size(); ++i)
    if (reports.front().community_rbar[i] && *reports.front().community_rbar[i] > 1.0)
      rising.push_back(i + 1);
  const json summary = {{"samples", traj.samples()},
                        {"network_R0", reports.front().network_r0},
                        {"max_network_Rt", max_rt},
                        {"communities_Rbar0_above_one", rising}};
  {
    auto f = detail::open_output(dir / "run.json");
    const json run = {{"tool", io::kToolVersion},
                      {"command", "simulate"},
                      {"config_hash", cfg.hash()},
                      {"config", source},
                      {"tolerances", detail::tolerances_line()},
                      {"summary", summary}};
    f << run.dump(2) << '\n';
  }
  if (opt.emit_plot_data) {
    auto f = detail::open_output(dir / "plot_states.csv");
    io::write_metadata(f, meta);
    f << "t,community,compartment,value\n";
    for (std::size_t k = 0; k < traj.samples(); ++k) {
      const auto& st = traj.states[k];
      const std::string t = io::format_number(traj.times[k]);
      for (std::size_t i = 0; i < st.size(); ++i) {
        f << t << ',' << i + 1 << ",s," << io::format_number(st.s[i]) << '\n';
        f << t << ',' << i + 1 << ",x," << io::format_number(st.x[i]) << '\n';
        f << t << ',' << i + 1 << ",r," << io::format_number(st.r[i]) << '\n';
      }
    }
  }

  out << "simulate: " << traj.samples() << " samples written to " << (dir / "trajectory.csv").string()
      << "\n  network R0 = " << io::format_number(reports.front().network_r0)
      << ", max network Rt = " << io::format_number(max_rt)
      << "\n  communities with Rbar_i(0) > 1: " << detail::list_of(rising) << '\n';
  return kExitOk;
}

inline int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out, std::ostream& err) {
  const json source = detail::load_source_json(opt.source);
  const auto cfg = io::config_from_json(source);
  if (!cfg.model) throw Error(ErrorKind::ConfigError, "analyze needs beta/gamma in the config");
  std::size_t clamped = 0;
  const auto table = io::read_csv_file(opt.trajectory_path);
  const auto traj = io::trajectory_from_csv(table, cfg.kind, &clamped);
  if (!traj.states.empty() && traj.states.front().size() != cfg.model->size())
    throw Error(ErrorKind::DimensionMismatch, "trajectory and model sizes differ");
  if (clamped > 0)
    err << "warning: " << clamped << " trajectory entries were clamped into [0, 1]\n";

  const auto reports = analyze_trajectory(*cfg.model, traj);
  const fs::path dir = detail::output_dir(opt.out_dir, cfg);
  auto meta = detail::base_metadata("analyze", cfg.hash(), std::nullopt);
  meta.emplace_back("model_kind", std::string(to_string(cfg.kind)));
  {
    auto f = detail::open_output(dir / "repro.csv");
    io::write_repro_csv(f, traj.times, reports, meta);
  }
  {
    json samples = json::array();
    for (std::size_t k = 0; k < reports.size(); ++k)
      samples.push_back({{"t", traj.times[k]},
                         {"rt_matrix", detail::matrix_json(reports[k].rt_matrix)},
                         {"rbar_matrix", detail::matrix_json(reports[k].rbar_matrix)}});
    const json doc = {{"tool", io::kToolVersion},
                      {"config_hash", cfg.hash()},
                      {"r0_matrix", detail::matrix_json(distributed_basic(*cfg.model))},
                      {"samples", samples}};
    auto f = detail::open_output(dir / "repro_matrices.json");
    f << doc.dump() << '\n';
  }
  if (opt.emit_plot_data) {
    const Vector w = left_perron_of_shifted(*cfg.model);
    auto f = detail::open_output(dir / "plot_repro.csv");
    io::write_metadata(f, meta);
    f << "t,series,community,value\n";
    for (std::size_t k = 0; k < reports.size(); ++k) {
      const auto& rep = reports[k];
      const std::string t = io::format_number(traj.times[k]);
      f << t << ",network_Rt,0," << io::format_number(rep.network_rt) << '\n';
      f << t << ",weighted_infection,0,"
        << io::format_number(weighted_average(w, traj.states[k].x)) << '\n';
      for (std::size_t i = 0; i < rep.community_rbar.size(); ++i) {
        f << t << ",Rbar_i," << i + 1 << ','
          << (rep.community_rbar[i] ? io::format_number(*rep.community_rbar[i]) : "NA") << '\n';
        f << t << ",x_i," << i + 1 << ',' << io::format_number(traj.states[k].x[i]) << '\n';
      }
    }
  }
  out << "analyze: " << reports.size() << " samples written to " << (dir / "repro.csv").string()
      << '\n';
  return kExitOk;
}

inline std::uint64_t resolve_seed(std::optional<std::uint64_t> flag,
                                  std::optional<std::uint64_t> config) {
  if (flag) return *flag;
  if (config) return *config;
  if (const char* env = std::getenv("NETREPRO_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ConfigError, "NETREPRO_SEED is not an unsigned integer");
    }
  }
  throw Error(ErrorKind::ConfigError, "no seed: use --seed, a config 'seed' or NETREPRO_SEED");
}

inline int cmd_simulate_stochastic(const StochasticOptions& opt, std::ostream& out) {
  json source = detail::load_source_json(opt.source);
  if (opt.days) source["days"] = *opt.days;
  if (opt.replicates < 1) throw Error(ErrorKind::InvalidParameters, "--replicates must be >= 1");
  const auto cfg = io::config_from_json(source);
  if (!cfg.stochastic())
    throw Error(ErrorKind::ConfigError, "simulate-stochastic needs population and initial_infected");
  const std::uint64_t seed = resolve_seed(opt.seed, cfg.seed);
  const auto schedule = cfg.effective_schedule();

  std::vector<std::future<IncidenceSeries>> jobs;
  for (int r = 0; r < opt.replicates; ++r)
    jobs.push_back(std::async(opt.replicates > 1 ? std::launch::async : std::launch::deferred,
                              [&, r] {
                                return simulate_stochastic_sir(
                                    schedule, cfg.population, cfg.initial_infected, cfg.days,
                                    seed + static_cast<std::uint64_t>(r));
                              }));
  std::vector<IncidenceSeries> runs;
  for (auto& job : jobs) runs.push_back(job.get());

  const fs::path dir = detail::output_dir(opt.out_dir, cfg);
  for (int r = 0; r < opt.replicates; ++r) {
    const auto& series = runs[static_cast<std::size_t>(r)];
    char suffix[32] = "";
    if (opt.replicates > 1) std::snprintf(suffix, sizeof suffix, "_rep%03d", r);
    auto meta = detail::base_metadata("simulate-stochastic", cfg.hash(), series.seed);
    meta.emplace_back("replicate", std::to_string(r));
    meta.emplace_back("days", std::to_string(cfg.days));
    if (cfg.start_date) meta.emplace_back("start_date", *cfg.start_date);
    {
      auto f = detail::open_output(dir / ("incidence" + std::string(suffix) + ".csv"));
      io::write_incidence_csv(f, series, meta);
    }
    {
      auto f = detail::open_output(dir / ("recoveries" + std::string(suffix) + ".csv"));
      io::write_recoveries_csv(f, series, meta);
    }
    if (opt.emit_plot_data) {
      auto f = detail::open_output(dir / ("plot_incidence" + std::string(suffix) + ".csv"));
      io::write_metadata(f, meta);
      f << "day,date,community,cases\n";
      for (int d = 0; d < series.days(); ++d)
        for (std::size_t i = 0; i < series.communities(); ++i)
          f << d << ',' << detail::date_label(cfg.start_date, d) << ',' << i + 1 << ','
            << series.total_cases(d, i) << '\n';
    }
    std::int64_t total = 0;
    for (int d = 0; d < series.days(); ++d)
      for (std::size_t i = 0; i < series.communities(); ++i) total += series.total_cases(d, i);
    out << "simulate-stochastic: replicate " << r << " (seed " << series.seed << "): " << total
        << " new infections over " << series.days() << " days\n";
  }
  return kExitOk;
}

inline EstimateLevel parse_level(const std::string& level) {
  if (level == "network") return EstimateLevel::Network;
  if (level == "community") return EstimateLevel::Community;
  if (level == "pair") return EstimateLevel::Pair;
  if (level == "all") return EstimateLevel::All;
  throw Error(ErrorKind::ConfigError, "unknown --level '" + level + "'");
}

inline int cmd_estimate(const EstimateOptions& opt, std::ostream& out) {
  EstimationSettings settings;
  std::string config_hash = "none";
  std::optional<std::string> start_date;
  if (!opt.config_path.empty()) {
    const auto cfg = io::load_config(opt.config_path);
    settings = cfg.estimation;
    config_hash = cfg.hash();
    start_date = cfg.start_date;
  }
  if (opt.window) settings.window = *opt.window;
  if (opt.si_mean) settings.si_mean = *opt.si_mean;
  if (opt.si_sd) settings.si_sd = *opt.si_sd;
  if (opt.si_max_lag) settings.si_max_lag = *opt.si_max_lag;
  if (opt.prior_shape) settings.prior_shape = *opt.prior_shape;
  if (opt.prior_scale) settings.prior_scale = *opt.prior_scale;
  const EstimateLevel level = parse_level(opt.level);

  const auto table = io::read_csv_file(opt.input_path);
  const auto series = io::incidence_from_csv(table);
  if (series.start_date) start_date = series.start_date;
  const auto estimates = estimate_distributed(series, settings, level);

  fs::path dir = opt.out_dir.empty() ? fs::path(".") : fs::path(opt.out_dir);
  fs::create_directories(dir);
  auto meta = detail::base_metadata("estimate", config_hash, std::nullopt);
  if (auto it = table.metadata.find("config_hash"); it != table.metadata.end())
    meta.emplace_back("input_config_hash", it->second);
  if (auto it = table.metadata.find("seed"); it != table.metadata.end())
    meta.emplace_back("input_seed", it->second);
  meta.emplace_back("window", std::to_string(settings.window));
  meta.emplace_back("si_mean", io::format_number(settings.si_mean));
  meta.emplace_back("si_sd", io::format_number(settings.si_sd));
  meta.emplace_back("si_max_lag", std::to_string(settings.si_max_lag));
  meta.emplace_back("prior_shape", io::format_number(settings.prior_shape));
  meta.emplace_back("prior_scale", io::format_number(settings.prior_scale));
  meta.emplace_back("level", opt.level);
  if (start_date) meta.emplace_back("start_date", *start_date);
  {
    auto f = detail::open_output(dir / "estimates.csv");
    io::write_estimates_csv(f, estimates, meta);
  }
  if (opt.emit_plot_data) {
    auto f = detail::open_output(dir / "plot_estimates.csv");
    io::write_metadata(f, meta);
    f << "day,date,series,mean,ci_low,ci_high\n";
    auto emit = [&](const std::string& name, const std::vector<RtEstimate>& values) {
      for (const auto& e : values)
        f << e.day << ',' << detail::date_label(start_date, e.day) << ',' << name << ','
          << io::format_number(e.mean) << ',' << io::format_number(e.ci_low) << ','
          << io::format_number(e.ci_high) << '\n';
    };
    emit("R_t", estimates.network);
    for (std::size_t i = 0; i < estimates.community.size(); ++i)
      emit("Rbar_" + std::to_string(i + 1), estimates.community[i]);
    for (const auto& [key, values] : estimates.pair)
      emit("R_" + std::to_string(key.first + 1) + "_" + std::to_string(key.second + 1), values);
  }
  std::size_t rows = estimates.network.size();
  for (const auto& c : estimates.community) rows += c.size();
  for (const auto& [key, values] : estimates.pair) rows += values.size();
  out << "estimate: " << rows << " rows written to " << (dir / "estimates.csv").string() << '\n';
  return kExitOk;
}

inline int cmd_presets(const std::string& show, std::ostream& out) {
  if (!show.empty()) {
    out << presets::preset_json(show).dump(2) << '\n';
    return kExitOk;
  }
  for (auto name : presets::names()) out << name << '\n';
  return kExitOk;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Distributed reproduction numbers for networked SIS/SIR epidemics", "netrepro"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(io::kToolVersion));

  auto add_source = [](CLI::App* cmd, ConfigSource& src) {
    cmd->add_option("-c,--config", src.config_path, "Scenario config (JSON)");
    cmd->add_option("-p,--preset", src.preset, "Built-in scenario preset");
  };

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Integrate the deterministic model");
  add_source(sim_cmd, sim.source);
  sim_cmd->add_option("-o,--out", sim.out_dir, "Output directory");
  sim_cmd->add_option("--dt", sim.dt, "RK4 step size");
  sim_cmd->add_option("--horizon", sim.horizon, "Integration horizon");
  sim_cmd->add_option("--sample-interval", sim.sample_interval, "Output sample spacing");
  sim_cmd->add_flag("--emit-plot-data", sim.emit_plot_data, "Write tidy plot data");

  AnalyzeOptions ana;
  auto* ana_cmd = app.add_subcommand("analyze", "Reproduction numbers along a trajectory");
  add_source(ana_cmd, ana.source);
  ana_cmd->add_option("-t,--trajectory", ana.trajectory_path, "trajectory.csv")->required();
  ana_cmd->add_option("-o,--out", ana.out_dir, "Output directory");
  ana_cmd->add_flag("--emit-plot-data", ana.emit_plot_data, "Write tidy plot data");

  StochasticOptions sto;
  auto* sto_cmd =
      app.add_subcommand("simulate-stochastic", "Chain-binomial SIR with attributed incidence");
  add_source(sto_cmd, sto.source);
  sto_cmd->add_option("-o,--out", sto.out_dir, "Output directory");
  sto_cmd->add_option("--days", sto.days, "Number of days");
  sto_cmd->add_option("--seed", sto.seed, "RNG seed (falls back to config, then NETREPRO_SEED)");
  sto_cmd->add_option("--replicates", sto.replicates, "Independent replicates (seed + index)");
  sto_cmd->add_flag("--emit-plot-data", sto.emit_plot_data, "Write tidy plot data");

  EstimateOptions est;
  auto* est_cmd = app.add_subcommand("estimate", "Renewal-equation estimates from incidence");
  est_cmd->add_option("-i,--input", est.input_path, "incidence.csv")->required();
  est_cmd->add_option("-c,--config", est.config_path, "Config providing estimation defaults");
  est_cmd->add_option("-o,--out", est.out_dir, "Output directory");
  est_cmd->add_option("--window", est.window, "Sliding window in days");
  est_cmd->add_option("--si-mean", est.si_mean, "Serial interval mean (days)");
  est_cmd->add_option("--si-sd", est.si_sd, "Serial interval sd (days)");
  est_cmd->add_option("--si-max-lag", est.si_max_lag, "Longest serial interval lag");
  est_cmd->add_option("--prior-shape", est.prior_shape, "Gamma prior shape");
  est_cmd->add_option("--prior-scale", est.prior_scale, "Gamma prior scale");
  est_cmd->add_option("--level", est.level, "community|pair|network|all")
      ->check(CLI::IsMember({"community", "pair", "network", "all"}));
  est_cmd->add_flag("--emit-plot-data", est.emit_plot_data, "Write tidy plot data");

  std::string show;
  auto* pre_cmd = app.add_subcommand("presets", "List presets or print one as JSON");
  pre_cmd->add_option("--show", show, "Preset to print");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*sim_cmd) return cmd_simulate(sim, out);
    if (*ana_cmd) return cmd_analyze(ana, out, err);
    if (*sto_cmd) return cmd_simulate_stochastic(sto, out);
    if (*est_cmd) return cmd_estimate(est, out);
    if (*pre_cmd) return cmd_presets(show, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numerical(e.kind()) ? kExitNumerical : kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace netrepro::cli
