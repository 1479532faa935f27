// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>

#include "support.hpp"

using namespace netrepro;
namespace ts = testing_support;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

// Conservation and monotonicity statistics gathered from every deterministic run.
struct RunAudit {
  double worst_sum_error = 0;
  long long monotonicity_violations = 0;
  long long runs = 0;

  void record(const Trajectory& traj) {
    ++runs;
    for (std::size_t k = 0; k < traj.samples(); ++k) {
      const auto& st = traj.states[k];
      for (std::size_t i = 0; i < st.size(); ++i) {
        worst_sum_error = std::max(worst_sum_error, std::abs(st.s[i] + st.x[i] + st.r[i] - 1.0));
        if (traj.kind == ModelKind::SIR && k > 0) {
          const auto& prev = traj.states[k - 1];
          monotonicity_violations += st.s[i] > prev.s[i];
          monotonicity_violations += st.r[i] < prev.r[i];
        }
      }
    }
  }
};

RunAudit audit;

int ternary(double v, double band) { return v > band ? 1 : (v < -band ? -1 : 0); }

Outcome community_threshold_equivalence() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> size(3, 10);
  const int models = 24, states = 2;
  long long checks = 0, violations = 0;
  for (int m = 0; m < models; ++m) {
    const std::size_t n = size(rng);
    const auto model = ts::random_model(rng, n, 0.5, 0.05, 0.5, 0.3);
    for (int k = 0; k < states; ++k) {
      const auto initial = ts::random_seed_state(rng, n, 1e-3, 0.3, ModelKind::SIR);
      const auto traj = integrate(model, initial, 0.01, 200.0, 0.1);
      audit.record(traj);
      for (std::size_t t = 0; t < traj.samples(); ++t) {
        const auto& st = traj.states[t];
        const auto c = community_numbers(model, st, 1e-8);
        for (std::size_t i = 0; i < n; ++i) {
          if (!(st.x[i] > 1e-8)) continue;
          ++checks;
          const double dx = traj.derivatives[t][i];
          const double band = 1e-9 / (model.gamma(i) * st.x[i]);
          violations += ternary(dx, 1e-9) != ternary(*c.rbar[i] - 1.0, band);
        }
      }
    }
  }
  return {violations == 0 && checks > 0,
          std::to_string(models) + " models x " + std::to_string(states) + " states, " +
              std::to_string(checks) + " checks, " + std::to_string(violations) + " violations"};
}

Outcome network_follows_community_numbers() {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<std::size_t> size(2, 10);
  std::uniform_real_distribution<double> su(0.3, 0.8);
  const int models = 25;
  int violations = 0;
  double worst_rbar = 0, worst_rho = 0;
  for (int m = 0; m < models; ++m) {
    const std::size_t n = size(rng);
    auto model = ts::random_model(rng, n, 0.5, 0.05, 0.5);
    Vector s(n);
    for (auto& v : s) v = su(rng);
    model = ts::scaled_model(model,
                             1.0 / spectral_radius(scale_rows(s, distributed_basic(model))).rho);
    Vector x = rbar_equals_one_state(model, s);
    const double peak = *std::max_element(x.begin(), x.end());
    for (auto& v : x) v *= 0.1 / peak;  // keeps s + x below one for every scaling used
    auto state_for = [&](const Vector& sv) {
      Vector r(n);
      for (std::size_t i = 0; i < n; ++i) r[i] = 1.0 - sv[i] - x[i];
      return validate_state(sv, x, r, ModelKind::SIR);
    };
    const auto at_one = state_for(s);
    const auto c = community_numbers(model, at_one);
    for (const auto& v : c.rbar) worst_rbar = std::max(worst_rbar, std::abs(*v - 1.0));
    const double rho = network_numbers(model, at_one).rt;
    worst_rho = std::max(worst_rho, std::abs(rho - 1.0));
    for (const auto& v : c.rbar) violations += !(std::abs(*v - 1.0) < 1e-9);
    violations += !(std::abs(rho - 1.0) < 1e-6);
    for (double factor : {0.9, 1.1}) {
      Vector scaled = s;
      for (auto& v : scaled) v *= factor;
      const auto st = state_for(scaled);
      const auto cs = community_numbers(model, st);
      const double rt = network_numbers(model, st).rt;
      const bool below = factor < 1;
      const bool all = std::all_of(cs.rbar.begin(), cs.rbar.end(),
                                   [&](auto v) { return below ? *v < 1.0 : *v > 1.0; });
      if (all) violations += below ? !(rt < 1.0) : !(rt > 1.0);
      else ++violations;  // the construction must place every community on one side
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d models, max |Rbar-1| %.2e, max |rho-1| %.2e, %d violations",
                models, worst_rbar, worst_rho, violations);
  return {violations == 0, buf};
}

Outcome sis_dichotomy() {
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<std::size_t> size(3, 10);
  std::uniform_real_distribution<double> sub(0.5, 0.95), super(1.05, 3.0);
  const int models = 12;
  int failures = 0;
  double worst_sub = 0, worst_spread = 0, worst_residual = 0;
  for (int m = 0; m < models; ++m) {
    const std::size_t n = size(rng);
    const auto base = ts::random_model(rng, n, 0.5, 0.1, 0.5);
    const double r0 = spectral_radius(distributed_basic(base)).rho;

    const auto low = ts::scaled_model(base, sub(rng) / r0);
    const auto traj = integrate(low, ts::random_seed_state(rng, n, 0.05, 0.9, ModelKind::SIS),
                                0.01, 5000.0, 100.0);
    audit.record(traj);
    const auto& xe = traj.back().x;
    const double peak = *std::max_element(xe.begin(), xe.end());
    worst_sub = std::max(worst_sub, peak);
    failures += !(peak < 1e-6);

    const auto high = ts::scaled_model(base, super(rng) / r0);
    std::vector<EpidemicState> ends;
    for (auto [lo, hi] : {std::pair{1e-4, 1e-3}, std::pair{0.05, 0.2}, std::pair{0.6, 0.95}}) {
      const auto t = integrate(high, ts::random_seed_state(rng, n, lo, hi, ModelKind::SIS), 0.01,
                               5000.0, 100.0);
      audit.record(t);
      ends.push_back(t.back());
    }
    for (const auto& e : ends) {
      const auto eq = classify_equilibrium(high, e, 1e-8);
      worst_residual = std::max(worst_residual, eq.residual);
      failures += eq.kind != EquilibriumClass::Kind::Endemic;
      for (std::size_t i = 0; i < n; ++i) {
        const double spread = std::abs(e.x[i] - ends.front().x[i]);
        worst_spread = std::max(worst_spread, spread);
        failures += !(spread < 1e-5);
      }
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%d models: subcritical max x %.2e; supercritical endpoint spread %.2e, "
                "residual %.2e",
                models, worst_sub, worst_spread, worst_residual);
  return {failures == 0, buf};
}

Outcome hidden_outbreak_witness() {
  const auto model = validate_model(Matrix{{0.05, 0.04}, {0.04, 0.05}}, {0.1, 0.1});
  // The limit state s = 1 used for the hand computation (not on the simplex).
  const EpidemicState limit{{1, 1}, {0.001, 0.1}, {0, 0}, ModelKind::SIR};
  const auto c = community_numbers(model, limit);
  const double dx = vector_field_sir(model, limit).dx[0];
  // The shipped preset uses s = 1 - x.
  const auto cfg = io::config_from_json(presets::preset_json("hidden-outbreak"));
  const auto traj = integrate(*cfg.model, *cfg.initial, cfg.dt, 1.0, 1.0);
  const auto cp = community_numbers(*cfg.model, *cfg.initial);
  const bool pass = std::abs(c.r0[0] - 0.9) < 1e-15 && std::abs(*c.rbar[0] - 40.5) < 1e-12 && dx > 0 &&
                    cp.r0[0] < 1 && *cp.rbar[0] > 1 && traj.derivatives.front()[0] > 0 &&
                    traj.states[1].x[0] > traj.states[0].x[0];
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "R0_1 = %.17g, Rbar_1 = %.17g, dx_1/dt = %.6g; preset Rbar_1 = %.6g, dx_1/dt = %.6g",
                c.r0[0], *c.rbar[0], dx, *cp.rbar[0], traj.derivatives.front()[0]);
  return {pass, buf};
}

Outcome ten_community_structure() {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = io::config_from_json(presets::preset_json("paper-fig4"));
  const auto traj = integrate(*cfg.model, *cfg.initial, cfg.dt, cfg.horizon, cfg.sample_interval);
  audit.record(traj);
  const auto reports = analyze_trajectory(*cfg.model, traj);
  const std::size_t n = cfg.model->size();

  double max_rt = 0, worst_rise = -1;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    max_rt = std::max(max_rt, reports[k].network_rt);
    if (k > 0) worst_rise = std::max(worst_rise, reports[k].network_rt - reports[k - 1].network_rt);
  }
  const bool a = max_rt < 1.0;
  int growing = 0;
  for (std::size_t i = 0; i < n; ++i)
    growing += *reports.front().community_rbar[i] > 1.0 && traj.derivatives.front()[i] > 0 &&
               traj.states[1].x[i] > traj.states[0].x[i];
  const bool b = growing >= 2;
  const bool c = worst_rise <= 1e-10;
  int non_monotone = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool up = false, down = false;
    for (std::size_t k = 1; k < reports.size(); ++k) {
      const double d = *reports[k].community_rbar[i] - *reports[k - 1].community_rbar[i];
      up |= d > 1e-6;
      down |= d < -1e-6;
    }
    non_monotone += up && down;
  }
  const bool d = non_monotone >= 1;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "(a) max Rt %.4f (b) %d growing with Rbar(0)>1 (c) max Rt rise %.1e "
                "(d) %d non-monotone Rbar_i; %.2f s",
                max_rt, growing, worst_rise, non_monotone, secs);
  return {a && b && c && d && secs < 10.0, buf};
}

Outcome conservation_and_monotonicity() {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%lld runs, worst |s+x+r-1| %.2e, %lld monotonicity violations",
                audit.runs, audit.worst_sum_error, audit.monotonicity_violations);
  return {audit.runs > 0 && audit.worst_sum_error < 1e-10 && audit.monotonicity_violations == 0,
          buf};
}

Outcome spectral_oracle() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> unit(0.0, 1.0), pd(0.1, 10.0);
  const int matrices = 200;
  double worst = 0, worst_similar = 0;
  for (int k = 0; k < matrices; ++k) {
    const std::size_t n = 1 + static_cast<std::size_t>(k % 4);
    Matrix m(n, n);
    do {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = unit(rng) < 0.6 ? 2.0 * unit(rng) : 0.0;
    } while (!(m.row_sums()[0] > 0 && ts::strongly_connected_oracle(m)));
    const double rho = spectral_radius(m).rho;
    worst = std::max(worst, std::abs(rho - ts::spectral_radius_oracle(m)));
    Vector p(n);
    for (auto& v : p) v = pd(rng);
    Matrix similar(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) similar(i, j) = m(i, j) * p[j] / p[i];
    worst_similar = std::max(worst_similar, std::abs(spectral_radius(similar).rho - rho));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d matrices, max oracle gap %.2e, max similarity gap %.2e",
                matrices, worst, worst_similar);
  return {worst < 1e-8 && worst_similar < 1e-8, buf};
}

Outcome estimator_calibration() {
  const auto start = std::chrono::steady_clock::now();
  const auto si = discretize_serial_interval(4.7, 2.9, 20);
  const int seed_days = 21, days = 70, window = 7;
  std::mt19937_64 rng(808);
  std::vector<double> inc(days, 0.0);
  for (int t = 0; t < days; ++t) {
    if (t < seed_days) {
      inc[t] = 500;
      continue;
    }
    inc[t] = static_cast<double>(
        std::poisson_distribution<long long>(1.5 * infection_pressure(inc, si, t))(rng));
  }
  int inside = 0, scored = 0;
  for (const auto& e : estimate_rt(inc, si, window, 1.0, 5.0)) {
    if (e.day < seed_days + window) continue;
    ++scored;
    inside += std::abs(e.mean - 1.5) <= 0.15;
  }
  double lo = 1e9, hi = -1e9;
  for (const auto& e : estimate_rt(std::vector<double>(80, 1000.0), si, window, 1.0, 5.0))
    if (e.day > si.max_lag) {
      lo = std::min(lo, e.mean);
      hi = std::max(hi, e.mean);
    }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double share = static_cast<double>(inside) / scored;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "R=1.5: %d/%d days within 10%% (%.1f%%); constant input means [%.4f, %.4f]; %.2f s",
                inside, scored, 100 * share, lo, hi, secs);
  return {share >= 0.95 && lo >= 0.95 && hi <= 1.05 && secs < 10.0, buf};
}

Outcome three_community_change_point() {
  const auto cfg = io::config_from_json(presets::preset_json("paper-3node"));
  const auto schedule = cfg.effective_schedule();
  const int seeds = 20;
  double pre = 0, post = 0;
  bool complete = true;
  for (int k = 0; k < seeds; ++k) {
    const auto series = simulate_stochastic_sir(schedule, cfg.population, cfg.initial_infected,
                                                cfg.days, *cfg.seed + static_cast<std::uint64_t>(k));
    const auto est = estimate_distributed(series, cfg.estimation, EstimateLevel::All);
    complete &= !est.network.empty() && est.community.size() == 3 && est.pair.size() == 9;
    // Pair (2 <- 1): whole windows before and after the day-45 halving.
    for (const auto& e : est.pair.at({1, 0})) {
      if (e.day >= 38 && e.day <= 44) pre += e.mean;
      if (e.day >= 51 && e.day <= 57) post += e.mean;
    }
  }
  const double drop = 1.0 - post / pre;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%d seeds, pair 2<-1 mean %.3f before, %.3f after: drop %.1f%%", seeds,
                pre / (7.0 * seeds), post / (7.0 * seeds), 100 * drop);
  return {complete && drop >= 0.30, buf};
}

Outcome byte_identical_runs() {
  const std::string cli = NETREPRO_CLI_PATH;
  const auto root = ts::fresh_dir("acceptance_det");
  for (const char* run : {"a", "b"}) {
    const auto dir = (root / run).string();
    const std::string cmds[] = {
        cli + " simulate -p paper-fig4 --emit-plot-data -o " + dir,
        cli + " analyze -p paper-fig4 -t " + dir + "/trajectory.csv --emit-plot-data -o " + dir,
        cli + " simulate-stochastic -p paper-3node --replicates 2 -o " + dir,
        cli + " estimate -i " + dir + "/incidence_rep000.csv --emit-plot-data -o " + dir,
    };
    for (const auto& c : cmds)
      if (std::system((c + " > /dev/null").c_str()) != 0) return {false, "command failed: " + c};
  }
  int files = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    ++files;
    const auto other = root / "b" / entry.path().filename();
    differing += !fs::exists(other) || ts::slurp(entry.path()) != ts::slurp(other);
  }
  fs::remove_all(root);
  return {files >= 10 && differing == 0,
          std::to_string(files) + " files compared, " + std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"community threshold sign equivalence", community_threshold_equivalence},
      {"network number follows community numbers", network_follows_community_numbers},
      {"SIS healthy/endemic dichotomy", sis_dichotomy},
      {"outbreak with subcritical basic number", hidden_outbreak_witness},
      {"ten-community structural reproduction", ten_community_structure},
      {"conservation and SIR monotonicity", conservation_and_monotonicity},
      {"spectral radius oracle and similarity", spectral_oracle},
      {"renewal estimator calibration", estimator_calibration},
      {"three-community change point", three_community_change_point},
      {"byte-identical repeated runs", byte_identical_runs},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("[%s] criterion %zu: %s -- %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", k + 1,
                criteria[k].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
