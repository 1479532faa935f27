#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "netrepro/error.hpp"
#include "netrepro/model.hpp"
#include "netrepro/vector_field.hpp"

namespace netrepro {

inline constexpr double kDefaultStep = 0.01;

/// Sampled solution of the networked ODE. derivatives[k] is dx/dt evaluated
/// exactly at states[k].
struct Trajectory {
  std::vector<double> times;
  std::vector<EpidemicState> states;
  std::vector<Vector> derivatives;
  ModelKind kind = ModelKind::SIR;

  std::size_t samples() const noexcept { return times.size(); }
  const EpidemicState& back() const { return states.back(); }
};

namespace detail {

struct Compartments {
  Vector s, x, r;
};

inline void axpy(Compartments& out, const Compartments& base, double h, const Derivatives& d) {
  const std::size_t n = base.x.size();
  for (std::size_t i = 0; i < n; ++i) {
    out.s[i] = base.s[i] + h * d.ds[i];
    out.x[i] = base.x[i] + h * d.dx[i];
    out.r[i] = base.r[i] + h * d.dr[i];
  }
}

}  // namespace detail

/// Classical fixed-step RK4. Samples are recorded every `sample_interval`
/// time units (every step when sample_interval <= dt) and always at the
/// horizon.
inline Trajectory integrate(const NetworkModel& model, const EpidemicState& initial, double dt,
                            double horizon, double sample_interval = 0.0) {
  if (!(dt > 0.0) || !(horizon >= dt))
    throw Error(ErrorKind::InvalidParameters, "need dt > 0 and horizon >= dt");
  if (initial.size() != model.size())
    throw Error(ErrorKind::DimensionMismatch, "initial state and model sizes differ");

  const std::size_t n = model.size();
  const long long steps = std::llround(horizon / dt);
  const long long every =
      sample_interval > dt ? std::max(1LL, std::llround(sample_interval / dt)) : 1LL;

  Trajectory traj;
  traj.kind = initial.kind;
  const std::size_t expected = static_cast<std::size_t>(steps / every + 2);
  traj.times.reserve(expected);
  traj.states.reserve(expected);
  traj.derivatives.reserve(expected);

  EpidemicState state = initial;
  auto record = [&](long long step, const Derivatives& d) {
    traj.times.push_back(static_cast<double>(step) * dt);
    traj.states.push_back(state);
    traj.derivatives.push_back(d.dx);
  };

  detail::Compartments base{state.s, state.x, state.r};
  detail::Compartments stage = base;
  EpidemicState probe = state;
  auto field_at = [&](const detail::Compartments& c) {
    probe.s = c.s;
    probe.x = c.x;
    probe.r = c.r;
    return vector_field(model, probe);
  };

  Derivatives k1 = vector_field(model, state);
  record(0, k1);
  for (long long step = 1; step <= steps; ++step) {
    base = {state.s, state.x, state.r};
    detail::axpy(stage, base, 0.5 * dt, k1);
    const Derivatives k2 = field_at(stage);
    detail::axpy(stage, base, 0.5 * dt, k2);
    const Derivatives k3 = field_at(stage);
    detail::axpy(stage, base, dt, k3);
    const Derivatives k4 = field_at(stage);

    const double h6 = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
      state.s[i] = base.s[i] + h6 * (k1.ds[i] + 2.0 * k2.ds[i] + 2.0 * k3.ds[i] + k4.ds[i]);
      state.x[i] = base.x[i] + h6 * (k1.dx[i] + 2.0 * k2.dx[i] + 2.0 * k3.dx[i] + k4.dx[i]);
      state.r[i] = base.r[i] + h6 * (k1.dr[i] + 2.0 * k2.dr[i] + 2.0 * k3.dr[i] + k4.dr[i]);
    }
    for (const Vector* v : {&state.s, &state.x, &state.r})
      for (double c : *v)
        if (!(c >= -0.01 && c <= 1.01))
          throw Error(ErrorKind::StepSizeUnstable,
                      "compartment left [-0.01, 1.01] at t = " +
                          std::to_string(static_cast<double>(step) * dt) + " with dt = " +
                          std::to_string(dt));
    for (Vector* v : {&state.s, &state.x, &state.r})
      for (double& c : *v) c = std::clamp(c, 0.0, 1.0);

    k1 = vector_field(model, state);
    if (step % every == 0 || step == steps) record(step, k1);
  }
  return traj;
}

}  // namespace netrepro
