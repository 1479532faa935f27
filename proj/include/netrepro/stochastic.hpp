#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netrepro/error.hpp"
#include "netrepro/model.hpp"
#include "netrepro/random.hpp"

namespace netrepro {

/// Model in force on days [begin, end).
struct ScheduleSegment {
  int begin = 0;
  int end = 0;
  NetworkModel model;
};

using ParameterSchedule = std::vector<ScheduleSegment>;

inline ParameterSchedule constant_schedule(const NetworkModel& model, int days) {
  return {ScheduleSegment{0, days, model}};
}

/// Segment covering `day`; throws ScheduleGap when none does.
inline const NetworkModel& model_on_day(const ParameterSchedule& schedule, int day) {
  for (const auto& seg : schedule)
    if (day >= seg.begin && day < seg.end) return seg.model;
  throw Error(ErrorKind::ScheduleGap, "no model for day " + std::to_string(day));
}

/// Daily incidence per community, optionally broken down by the community of
/// the infector. Day d counts infections that happened during day d.
class IncidenceSeries {
 public:
  IncidenceSeries() = default;

  /// Attributed series: cases(day, dest, source).
  IncidenceSeries(int days, std::vector<std::int64_t> population)
      : days_(days),
        n_(population.size()),
        population_(std::move(population)),
        cases_(static_cast<std::size_t>(days) * n_ * n_, 0),
        totals_(static_cast<std::size_t>(days) * n_, 0),
        recoveries_(static_cast<std::size_t>(days) * n_, 0),
        attributed_(true) {}

  /// Series carrying only per-community totals.
  static IncidenceSeries unattributed(int days, std::size_t communities) {
    IncidenceSeries s;
    s.days_ = days;
    s.n_ = communities;
    s.totals_.assign(static_cast<std::size_t>(days) * communities, 0);
    s.recoveries_.assign(static_cast<std::size_t>(days) * communities, 0);
    s.attributed_ = false;
    return s;
  }

  int days() const noexcept { return days_; }
  std::size_t communities() const noexcept { return n_; }
  bool attributed() const noexcept { return attributed_; }
  const std::vector<std::int64_t>& population() const noexcept { return population_; }

  std::int64_t cases(int day, std::size_t dest, std::size_t source) const {
    if (!attributed_) throw Error(ErrorKind::MissingAttribution, "series has no source columns");
    return cases_[cube_index(day, dest, source)];
  }
  std::int64_t total_cases(int day, std::size_t dest) const { return totals_[grid_index(day, dest)]; }
  std::int64_t recoveries(int day, std::size_t community) const {
    return recoveries_[grid_index(day, community)];
  }

  void add_cases(int day, std::size_t dest, std::size_t source, std::int64_t count) {
    if (!attributed_) throw Error(ErrorKind::MissingAttribution, "series has no source columns");
    cases_[cube_index(day, dest, source)] += count;
    totals_[grid_index(day, dest)] += count;
  }
  void add_total_cases(int day, std::size_t dest, std::int64_t count) {
    if (attributed_)
      throw Error(ErrorKind::InvalidParameters, "attributed series needs a source community");
    totals_[grid_index(day, dest)] += count;
  }
  void set_recoveries(int day, std::size_t community, std::int64_t count) {
    recoveries_[grid_index(day, community)] = count;
  }

  /// Daily counts into `dest` from `source`.
  std::vector<double> pair_series(std::size_t dest, std::size_t source) const {
    std::vector<double> out(static_cast<std::size_t>(days_));
    for (int d = 0; d < days_; ++d) out[d] = static_cast<double>(cases(d, dest, source));
    return out;
  }
  std::vector<double> community_series(std::size_t dest) const {
    std::vector<double> out(static_cast<std::size_t>(days_));
    for (int d = 0; d < days_; ++d) out[d] = static_cast<double>(total_cases(d, dest));
    return out;
  }
  std::vector<double> network_series() const {
    std::vector<double> out(static_cast<std::size_t>(days_), 0.0);
    for (int d = 0; d < days_; ++d)
      for (std::size_t i = 0; i < n_; ++i) out[d] += static_cast<double>(total_cases(d, i));
    return out;
  }

  std::uint64_t seed = 0;
  ParameterSchedule schedule;
  std::vector<std::int64_t> initial_infected;
  std::optional<std::string> start_date;

 private:
  std::size_t grid_index(int day, std::size_t i) const {
    return static_cast<std::size_t>(day) * n_ + i;
  }
  std::size_t cube_index(int day, std::size_t i, std::size_t j) const {
    return (static_cast<std::size_t>(day) * n_ + i) * n_ + j;
  }

  int days_ = 0;
  std::size_t n_ = 0;
  std::vector<std::int64_t> population_;
  std::vector<std::int64_t> cases_;
  std::vector<std::int64_t> totals_;
  std::vector<std::int64_t> recoveries_;
  bool attributed_ = false;
};

/// Discrete-day chain-binomial SIR with frequency-dependent mixing.
///
/// Each day a susceptible in community i escapes the infectious pool of
/// community j with probability exp(-beta_ij X_j / N_j); the resulting
/// infections are split across sources in proportion to those pressures.
/// Infectious individuals recover with probability 1 - exp(-gamma_i). All
/// draws use start-of-day counts.
inline IncidenceSeries simulate_stochastic_sir(const ParameterSchedule& schedule,
                                               const std::vector<std::int64_t>& population,
                                               const std::vector<std::int64_t>& initial_infected,
                                               int days, std::uint64_t seed) {
  const std::size_t n = population.size();
  if (initial_infected.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "initial infected and population lengths differ");
  if (days < 1) throw Error(ErrorKind::InvalidParameters, "days must be positive");
  for (std::size_t i = 0; i < n; ++i) {
    if (population[i] <= 0)
      throw Error(ErrorKind::InvalidParameters, "population of community " +
                                                    std::to_string(i + 1) + " must be positive");
    if (initial_infected[i] < 0 || initial_infected[i] > population[i])
      throw Error(ErrorKind::InvalidParameters,
                  "initial infected out of range in community " + std::to_string(i + 1));
  }
  for (std::size_t a = 0; a < schedule.size(); ++a) {
    if (schedule[a].model.size() != n)
      throw Error(ErrorKind::DimensionMismatch, "schedule model size differs from population");
    for (std::size_t b = a + 1; b < schedule.size(); ++b)
      if (schedule[a].begin < schedule[b].end && schedule[b].begin < schedule[a].end)
        throw Error(ErrorKind::InvalidParameters, "overlapping schedule segments");
  }
  for (int d = 0; d < days; ++d) (void)model_on_day(schedule, d);

  IncidenceSeries series(days, population);
  series.seed = seed;
  series.schedule = schedule;
  series.initial_infected = initial_infected;

  std::vector<std::int64_t> susceptible(n), infectious(initial_infected);
  for (std::size_t i = 0; i < n; ++i) susceptible[i] = population[i] - initial_infected[i];

  Rng rng(seed);
  std::vector<double> pressure(n);
  std::vector<std::int64_t> new_infections(n), new_recoveries(n);
  for (int d = 0; d < days; ++d) {
    const NetworkModel& model = model_on_day(schedule, d);
    for (std::size_t i = 0; i < n; ++i) {
      double hazard = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        pressure[j] = model.beta(i, j) * static_cast<double>(infectious[j]) /
                      static_cast<double>(population[j]);
        hazard += pressure[j];
      }
      const std::int64_t infected = rng.binomial(susceptible[i], -std::expm1(-hazard));
      new_infections[i] = infected;
      if (infected > 0) {
        const auto split = rng.multinomial(infected, pressure);
        for (std::size_t j = 0; j < n; ++j)
          if (split[j] > 0) series.add_cases(d, i, j, split[j]);
      }
      new_recoveries[i] = rng.binomial(infectious[i], -std::expm1(-model.gamma(i)));
    }
    for (std::size_t i = 0; i < n; ++i) {
      susceptible[i] -= new_infections[i];
      infectious[i] += new_infections[i] - new_recoveries[i];
      series.set_recoveries(d, i, new_recoveries[i]);
    }
  }
  return series;
}

}  // namespace netrepro
