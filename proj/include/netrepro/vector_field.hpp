#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "netrepro/matrix.hpp"
#include "netrepro/model.hpp"

namespace netrepro {

/// Time derivatives of the three compartments. dr is all zeros under SIS.
struct Derivatives {
  Vector ds;
  Vector dx;
  Vector dr;

  double max_abs() const {
    double m = 0.0;
    for (const Vector* v : {&ds, &dx, &dr})
      for (double d : *v) m = std::max(m, std::abs(d));
    return m;
  }
};

namespace detail {

// s_i * sum_j beta_ij x_j, the per-community incidence rate.
inline Vector incidence(const NetworkModel& model, const Vector& s, const Vector& x) {
  Vector inc = model.beta() * x;
  for (std::size_t i = 0; i < inc.size(); ++i) inc[i] *= s[i];
  return inc;
}

}  // namespace detail

inline Derivatives vector_field_sis(const NetworkModel& model, const EpidemicState& state) {
  const std::size_t n = model.size();
  const Vector inc = detail::incidence(model, state.s, state.x);
  Derivatives d{Vector(n), Vector(n), Vector(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    const double recovery = model.gamma(i) * state.x[i];
    d.dx[i] = inc[i] - recovery;
    d.ds[i] = -d.dx[i];
  }
  return d;
}

inline Derivatives vector_field_sir(const NetworkModel& model, const EpidemicState& state) {
  const std::size_t n = model.size();
  const Vector inc = detail::incidence(model, state.s, state.x);
  Derivatives d{Vector(n), Vector(n), Vector(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double recovery = model.gamma(i) * state.x[i];
    d.ds[i] = -inc[i];
    d.dx[i] = inc[i] - recovery;
    d.dr[i] = recovery;
  }
  return d;
}

inline Derivatives vector_field(const NetworkModel& model, const EpidemicState& state) {
  if (state.size() != model.size())
    throw Error(ErrorKind::DimensionMismatch, "state and model sizes differ");
  return state.kind == ModelKind::SIS ? vector_field_sis(model, state)
                                      : vector_field_sir(model, state);
}

}  // namespace netrepro
