#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netrepro/error.hpp"
#include "netrepro/integrate.hpp"
#include "netrepro/matrix.hpp"
#include "netrepro/model.hpp"
#include "netrepro/spectral.hpp"

namespace netrepro {

/// Stationary band for reproduction numbers evaluated on exact model states.
inline constexpr double kAnalyticTrendBand = 1e-9;
/// Stationary band for reproduction numbers estimated from noisy incidence.
inline constexpr double kEstimatedTrendBand = 0.05;
/// Communities with infected proportion at or below this are Undefined.
inline constexpr double kZeroInfectionThreshold = 1e-12;

enum class Trend { Increasing, Decreasing, Stationary, Undefined };

inline std::string_view to_string(Trend t) {
  switch (t) {
    case Trend::Increasing: return "Increasing";
    case Trend::Decreasing: return "Decreasing";
    case Trend::Stationary: return "Stationary";
    case Trend::Undefined: return "Undefined";
  }
  return "?";
}

/// Matrix of basic reproduction numbers from community j into community i:
/// beta_ij / gamma_i. This is the next generation matrix D^-1 B.
inline Matrix distributed_basic(const NetworkModel& model) {
  const std::size_t n = model.size();
  Matrix r0(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r0(i, j) = model.beta(i, j) / model.gamma(i);
  return r0;
}

/// s_i beta_ij / gamma_i; carries no infection-ratio weights, so its row sums
/// are not the community effective numbers.
inline Matrix distributed_effective(const NetworkModel& model, const EpidemicState& state) {
  if (state.size() != model.size())
    throw Error(ErrorKind::DimensionMismatch, "state and model sizes differ");
  return scale_rows(state.s, distributed_basic(model));
}

/// I_ij = x_j / x_i. Requires every x_i > 0.
inline Matrix infection_ratios(const Vector& x) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!(x[i] > 0.0))
      throw Error(ErrorKind::ZeroInfection, "community " + std::to_string(i + 1));
  Matrix ratio(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ratio(i, j) = i == j ? 1.0 : x[j] / x[i];
  return ratio;
}

struct CommunityNumbers {
  Vector r0;                                // row sums of the basic matrix
  std::vector<std::optional<double>> rbar;  // empty where x_i is zero
};

/// R0_i = sum_j R0_ij and Rbar_i = sum_j Rt_ij x_j / x_i. Communities whose
/// infected proportion does not exceed `min_infected` get no Rbar.
inline CommunityNumbers community_numbers(const NetworkModel& model, const EpidemicState& state,
                                          double min_infected = 0.0) {
  const std::size_t n = model.size();
  const Matrix rt = distributed_effective(model, state);
  CommunityNumbers out{distributed_basic(model).row_sums(), {}};
  out.rbar.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(state.x[i] > min_infected)) continue;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += rt(i, j) * state.x[j];
    out.rbar[i] = acc / state.x[i];
  }
  return out;
}

struct NetworkNumbers {
  double r0 = 0.0;
  double rt = 0.0;
};

namespace detail {

inline double radius_or_zero(const Matrix& m) {
  for (double v : m.data())
    if (v != 0.0) return spectral_radius(m).rho;
  return 0.0;
}

}  // namespace detail

inline NetworkNumbers network_numbers(const NetworkModel& model, const EpidemicState& state) {
  return {detail::radius_or_zero(distributed_basic(model)),
          detail::radius_or_zero(distributed_effective(model, state))};
}

inline std::vector<Trend> classify_trends(const std::vector<std::optional<double>>& rbar,
                                          double epsilon = kAnalyticTrendBand) {
  std::vector<Trend> trends(rbar.size(), Trend::Undefined);
  for (std::size_t i = 0; i < rbar.size(); ++i) {
    if (!rbar[i]) continue;
    const double v = *rbar[i];
    trends[i] = v > 1.0 + epsilon   ? Trend::Increasing
                : v < 1.0 - epsilon ? Trend::Decreasing
                                    : Trend::Stationary;
  }
  return trends;
}

/// Right Perron vector (unit sum) of a distributed effective matrix. When its
/// spectral radius is one, diag(x)^-1 Rt diag(x) is row-stochastic and every
/// community has Rbar_i = 1 at infected proportions proportional to x.
inline Vector rbar_equals_one_state(const Matrix& rt) { return spectral_radius(rt).right_vec; }

inline Vector rbar_equals_one_state(const NetworkModel& model, const Vector& s) {
  return rbar_equals_one_state(scale_rows(s, distributed_basic(model)));
}

/// Every reproduction number available at one state.
struct ReproReport {
  Matrix r0_matrix;
  Matrix rt_matrix;
  std::optional<Matrix> infection_ratio;  // only when every x_i > 0
  Matrix rbar_matrix;                     // NaN rows where x_i is zero
  Vector community_r0;
  std::vector<std::optional<double>> community_rbar;
  double network_r0 = 0.0;
  double network_rt = 0.0;
  std::vector<Trend> trends;
};

inline ReproReport repro_report(const NetworkModel& model, const EpidemicState& state,
                                double min_infected = kZeroInfectionThreshold,
                                double epsilon = kAnalyticTrendBand) {
  const std::size_t n = model.size();
  ReproReport rep;
  rep.r0_matrix = distributed_basic(model);
  rep.rt_matrix = scale_rows(state.s, rep.r0_matrix);
  bool all_positive = true;
  for (double xi : state.x) all_positive = all_positive && xi > 0.0;
  if (all_positive) rep.infection_ratio = infection_ratios(state.x);

  rep.rbar_matrix = Matrix(n, n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) {
    if (!(state.x[i] > min_infected)) continue;
    for (std::size_t j = 0; j < n; ++j)
      rep.rbar_matrix(i, j) = rep.rt_matrix(i, j) * state.x[j] / state.x[i];
  }

  auto community = community_numbers(model, state, min_infected);
  rep.community_r0 = std::move(community.r0);
  rep.community_rbar = std::move(community.rbar);
  rep.network_r0 = detail::radius_or_zero(rep.r0_matrix);
  rep.network_rt = detail::radius_or_zero(rep.rt_matrix);
  rep.trends = classify_trends(rep.community_rbar, epsilon);
  return rep;
}

inline std::vector<ReproReport> analyze_trajectory(const NetworkModel& model,
                                                   const Trajectory& trajectory,
                                                   double min_infected = kZeroInfectionThreshold) {
  std::vector<ReproReport> reports;
  reports.reserve(trajectory.samples());
  for (const auto& state : trajectory.states)
    reports.push_back(repro_report(model, state, min_infected));
  return reports;
}

}  // namespace netrepro
