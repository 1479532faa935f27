#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

namespace netrepro {

/// Seedable generator with a platform-independent output stream.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the standard.
/// Library distributions (std::binomial_distribution and friends) are
/// implementation-defined, so every variate used by the simulator is derived
/// here from raw 64-bit words.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1).
  double uniform_open() {
    double u;
    do u = uniform();
    while (u == 0.0);
    return u;
  }

  std::int64_t binomial(std::int64_t trials, double p);

  /// Splits `total` into counts proportional to `weights` via sequential
  /// conditional binomial draws.
  std::vector<std::int64_t> multinomial(std::int64_t total, std::span<const double> weights);

 private:
  std::int64_t binomial_inversion(std::int64_t trials, double p);
  std::int64_t binomial_btrd(std::int64_t trials, double p);

  std::mt19937_64 engine_;
};

namespace detail {

// log(k!) - [(k + 1/2) log(k + 1) - (k + 1) + log(2 pi)/2], the Stirling
// series remainder used by BTRD.
inline double stirling_tail(std::int64_t k) {
  static constexpr double table[10] = {
      0.08106146679532726, 0.04134069595540929, 0.02767792568499834, 0.02079067210376509,
      0.01664469118982119, 0.01387612882307075, 0.01189670994589177, 0.01041126526197209,
      0.009255462182712733, 0.008330563433362871};
  if (k < 10) return table[k];
  const double kp1 = static_cast<double>(k + 1);
  const double kp1sq = kp1 * kp1;
  return (1.0 / 12 - (1.0 / 360 - 1.0 / 1260 / kp1sq) / kp1sq) / kp1;
}

}  // namespace detail

inline std::int64_t Rng::binomial(std::int64_t trials, double p) {
  if (trials <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  if (p > 0.5) return trials - binomial(trials, 1.0 - p);
  if (static_cast<double>(trials) * p < 10.0) return binomial_inversion(trials, p);
  return binomial_btrd(trials, p);
}

inline std::int64_t Rng::binomial_inversion(std::int64_t trials, double p) {
  const double q = 1.0 - p;
  const double odds = p / q;
  const double a = static_cast<double>(trials + 1) * odds;
  const double r0 = std::pow(q, static_cast<double>(trials));
  for (;;) {
    double r = r0;
    double u = uniform();
    std::int64_t k = 0;
    while (u > r) {
      u -= r;
      ++k;
      if (k > trials) break;
      r *= a / static_cast<double>(k) - odds;
    }
    if (k <= trials) return k;
  }
}

// Transformed rejection with decomposition (Hormann 1993), valid for
// trials * p >= 10 and p <= 1/2.
inline std::int64_t Rng::binomial_btrd(std::int64_t trials, double p) {
  const double n = static_cast<double>(trials);
  const std::int64_t m = static_cast<std::int64_t>(std::floor((n + 1.0) * p));
  const double r = p / (1.0 - p);
  const double nr = (n + 1.0) * r;
  const double npq = n * p * (1.0 - p);
  const double sqrt_npq = std::sqrt(npq);
  const double b = 1.15 + 2.53 * sqrt_npq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = n * p + 0.5;
  const double alpha = (2.83 + 5.1 / b) * sqrt_npq;
  const double v_r = 0.92 - 4.2 / b;
  const double u_rv_r = 0.86 * v_r;

  for (;;) {
    double v = uniform();
    double u;
    if (v <= u_rv_r) {
      u = v / v_r - 0.43;
      return static_cast<std::int64_t>(std::floor((2.0 * a / (0.5 - std::abs(u)) + b) * u + c));
    }
    if (v >= v_r) {
      u = uniform() - 0.5;
    } else {
      u = v / v_r - 0.93;
      u = (u < 0.0 ? -0.5 : 0.5) - u;
      v = uniform() * v_r;
    }
    const double us = 0.5 - std::abs(u);
    const double kd = std::floor((2.0 * a / us + b) * u + c);
    if (kd < 0.0 || kd > n) continue;
    const std::int64_t k = static_cast<std::int64_t>(kd);
    v = v * alpha / (a / (us * us) + b);
    const std::int64_t km = k > m ? k - m : m - k;
    if (km <= 15) {
      double f = 1.0;
      if (m < k) {
        for (std::int64_t i = m + 1; i <= k; ++i) f *= nr / static_cast<double>(i) - r;
      } else if (m > k) {
        for (std::int64_t i = k + 1; i <= m; ++i) v *= nr / static_cast<double>(i) - r;
      }
      if (v <= f) return k;
      continue;
    }
    v = std::log(v);
    const double kmd = static_cast<double>(km);
    const double rho = (kmd / npq) * (((kmd / 3.0 + 0.625) * kmd + 1.0 / 6.0) / npq + 0.5);
    const double t = -kmd * kmd / (2.0 * npq);
    if (v < t - rho) return k;
    if (v > t + rho) continue;
    const double nm = n - static_cast<double>(m) + 1.0;
    const double h = (static_cast<double>(m) + 0.5) * std::log((static_cast<double>(m) + 1.0) / (r * nm)) +
                     detail::stirling_tail(m) + detail::stirling_tail(trials - m);
    const double nk = n - kd + 1.0;
    if (v <= h + (n + 1.0) * std::log(nm / nk) + (kd + 0.5) * std::log(nk * r / (kd + 1.0)) -
                 detail::stirling_tail(k) - detail::stirling_tail(trials - k))
      return k;
  }
}

inline std::vector<std::int64_t> Rng::multinomial(std::int64_t total,
                                                  std::span<const double> weights) {
  std::vector<std::int64_t> counts(weights.size(), 0);
  double remaining_weight = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::int64_t remaining = total;
  for (std::size_t j = 0; j < weights.size() && remaining > 0; ++j) {
    if (weights[j] <= 0.0) continue;
    const double p = weights[j] / remaining_weight;
    const std::int64_t k = p >= 1.0 ? remaining : binomial(remaining, p);
    counts[j] = k;
    remaining -= k;
    remaining_weight -= weights[j];
  }
  // Floating-point leftovers go to the last positive-weight category.
  if (remaining > 0)
    for (std::size_t j = weights.size(); j-- > 0;)
      if (weights[j] > 0.0) {
        counts[j] += remaining;
        break;
      }
  return counts;
}

}  // namespace netrepro
