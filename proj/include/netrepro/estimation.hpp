#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "netrepro/error.hpp"
#include "netrepro/stochastic.hpp"

namespace netrepro {

/// Discretized serial-interval distribution over lags 1..max_lag.
/// weights[u - 1] is the probability of lag u.
struct SerialInterval {
  double mean = 0.0;
  double sd = 0.0;
  int max_lag = 0;
  std::vector<double> weights;

  double weight(int lag) const {
    return lag >= 1 && lag <= max_lag ? weights[static_cast<std::size_t>(lag - 1)] : 0.0;
  }
};

/// Posterior summary of the reproduction number on one day.
struct RtEstimate {
  int day = 0;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double posterior_shape = 0.0;
  double posterior_rate = 0.0;
  int window = 0;
  bool prior_only = false;
};

struct EstimationSettings {
  int window = 7;
  double si_mean = 4.7;
  double si_sd = 2.9;
  int si_max_lag = 20;
  double prior_shape = 1.0;
  double prior_scale = 5.0;
};

/// Regularized lower incomplete gamma: CDF of Gamma(shape, scale = 1 / rate).
inline double gamma_cdf(double x, double shape, double rate) {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(shape, x * rate);
}

/// Quantile of Gamma(shape, rate) by bisection on gamma_cdf.
inline double gamma_quantile(double p, double shape, double rate) {
  if (!(p > 0.0 && p < 1.0) || !(shape > 0.0) || !(rate > 0.0))
    throw Error(ErrorKind::InvalidParameters, "gamma_quantile arguments");
  const double mean = shape / rate;
  double lo = 0.0;
  double hi = mean + 10.0 * std::sqrt(shape) / rate + 1.0 / rate;
  while (gamma_cdf(hi, shape, rate) < p) hi *= 2.0;
  for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (gamma_cdf(mid, shape, rate) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Gamma(mean, sd) discretized by unit-width bins centred on each lag, with
/// lag-0 mass dropped, the tail beyond max_lag folded into the last lag and
/// the result renormalized.
inline SerialInterval discretize_serial_interval(double mean, double sd, int max_lag) {
  if (!(mean > 0.0) || !(sd > 0.0) || max_lag < 2)
    throw Error(ErrorKind::InvalidParameters, "serial interval needs mean > 0, sd > 0, L >= 2");
  const double shape = mean * mean / (sd * sd);
  const double rate = mean / (sd * sd);
  SerialInterval si{mean, sd, max_lag, std::vector<double>(static_cast<std::size_t>(max_lag))};
  for (int u = 1; u < max_lag; ++u)
    si.weights[static_cast<std::size_t>(u - 1)] =
        gamma_cdf(u + 0.5, shape, rate) - gamma_cdf(u - 0.5, shape, rate);
  si.weights.back() = 1.0 - gamma_cdf(max_lag - 0.5, shape, rate);
  double total = 0.0;
  for (double w : si.weights) total += w;
  if (!(total > 0.0))
    throw Error(ErrorKind::InvalidParameters, "serial interval has no mass beyond lag 0");
  for (double& w : si.weights) w /= total;
  return si;
}

/// Renewal pressure on day t: sum over u = 1..min(t, L) of I[t - u] w_u.
inline double infection_pressure(std::span<const double> incidence, const SerialInterval& si,
                                 int t) {
  if (t < 0 || t > static_cast<int>(incidence.size()))
    throw Error(ErrorKind::InvalidParameters, "day " + std::to_string(t) + " outside series");
  double total = 0.0;
  for (int u = 1; u <= std::min(t, si.max_lag); ++u)
    total += incidence[static_cast<std::size_t>(t - u)] * si.weight(u);
  return total;
}

/// Sliding-window gamma-posterior estimate where cases in `numerator` are
/// attributed to the infectious pressure generated by `infectors`. For the
/// ordinary single-series estimate both are the same series.
inline std::vector<RtEstimate> estimate_rt_between(std::span<const double> numerator,
                                                   std::span<const double> infectors,
                                                   const SerialInterval& si, int window,
                                                   double prior_shape, double prior_scale) {
  if (window < 1) throw Error(ErrorKind::InvalidParameters, "window must be >= 1");
  if (!(prior_shape > 0.0) || !(prior_scale > 0.0))
    throw Error(ErrorKind::InvalidParameters, "prior shape and scale must be positive");
  if (numerator.size() != infectors.size())
    throw Error(ErrorKind::DimensionMismatch, "numerator and infector series lengths differ");
  const int days = static_cast<int>(numerator.size());
  if (days <= window)
    throw Error(ErrorKind::InsufficientHistory, "series of " + std::to_string(days) +
                                                    " days is too short for window " +
                                                    std::to_string(window));

  std::vector<double> pressure(static_cast<std::size_t>(days));
  for (int t = 0; t < days; ++t) pressure[t] = infection_pressure(infectors, si, t);

  std::vector<RtEstimate> out;
  out.reserve(static_cast<std::size_t>(days - window));
  for (int t = window; t < days; ++t) {
    double cases = 0.0;
    double lambda = 0.0;
    for (int s = t - window + 1; s <= t; ++s) {
      cases += numerator[static_cast<std::size_t>(s)];
      lambda += pressure[static_cast<std::size_t>(s)];
    }
    RtEstimate e;
    e.day = t;
    e.window = window;
    e.posterior_shape = prior_shape + cases;
    e.posterior_rate = 1.0 / prior_scale + lambda;
    e.mean = e.posterior_shape / e.posterior_rate;
    e.ci_low = gamma_quantile(0.025, e.posterior_shape, e.posterior_rate);
    e.ci_high = gamma_quantile(0.975, e.posterior_shape, e.posterior_rate);
    e.prior_only = cases == 0.0 && lambda == 0.0;
    out.push_back(e);
  }
  return out;
}

inline std::vector<RtEstimate> estimate_rt(std::span<const double> incidence,
                                           const SerialInterval& si, int window,
                                           double prior_shape, double prior_scale) {
  return estimate_rt_between(incidence, incidence, si, window, prior_shape, prior_scale);
}

/// Estimates at every level of the network. pair[{i, j}] is the number from
/// community j into community i (0-based).
struct DistributedEstimates {
  std::vector<RtEstimate> network;
  std::vector<std::vector<RtEstimate>> community;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<RtEstimate>> pair;
};

enum class EstimateLevel { Network, Community, Pair, All };

/// Pair (i <- j) counts cases in i caused by j over the pressure built from
/// community j's own total incidence. Community numbers use community i's
/// totals for both numerator and pressure.
inline DistributedEstimates estimate_distributed(const IncidenceSeries& series,
                                                 const SerialInterval& si, int window,
                                                 double prior_shape, double prior_scale,
                                                 EstimateLevel level = EstimateLevel::All) {
  const bool want_pairs = level == EstimateLevel::Pair || level == EstimateLevel::All;
  if (want_pairs && !series.attributed())
    throw Error(ErrorKind::MissingAttribution, "pair estimates need source-attributed cases");

  DistributedEstimates out;
  const std::size_t n = series.communities();
  if (level == EstimateLevel::Network || level == EstimateLevel::All)
    out.network = estimate_rt(series.network_series(), si, window, prior_shape, prior_scale);

  std::vector<std::vector<double>> totals(n);
  for (std::size_t i = 0; i < n; ++i) totals[i] = series.community_series(i);
  if (level == EstimateLevel::Community || level == EstimateLevel::All)
    for (std::size_t i = 0; i < n; ++i)
      out.community.push_back(estimate_rt(totals[i], si, window, prior_shape, prior_scale));
  if (want_pairs)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out.pair[{i, j}] = estimate_rt_between(series.pair_series(i, j), totals[j], si, window,
                                               prior_shape, prior_scale);
  return out;
}

inline DistributedEstimates estimate_distributed(const IncidenceSeries& series,
                                                 const EstimationSettings& settings,
                                                 EstimateLevel level = EstimateLevel::All) {
  const auto si =
      discretize_serial_interval(settings.si_mean, settings.si_sd, settings.si_max_lag);
  return estimate_distributed(series, si, settings.window, settings.prior_shape,
                              settings.prior_scale, level);
}

}  // namespace netrepro
