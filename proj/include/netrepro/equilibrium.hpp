#pragma once

#include <string_view>

#include "netrepro/model.hpp"
#include "netrepro/vector_field.hpp"

namespace netrepro {

struct EquilibriumClass {
  enum class Kind { Healthy, Endemic, NotEquilibrium };
  Kind kind = Kind::NotEquilibrium;
  double residual = 0.0;  // max-norm of the state derivative
};

inline std::string_view to_string(EquilibriumClass::Kind kind) {
  switch (kind) {
    case EquilibriumClass::Kind::Healthy: return "Healthy";
    case EquilibriumClass::Kind::Endemic: return "Endemic";
    case EquilibriumClass::Kind::NotEquilibrium: return "NotEquilibrium";
  }
  return "?";
}

inline EquilibriumClass classify_equilibrium(const NetworkModel& model, const EpidemicState& state,
                                             double tol = kDefaultSimplexTol) {
  using Kind = EquilibriumClass::Kind;
  const double residual = vector_field(model, state).max_abs();

  bool healthy = true;
  bool interior = true;
  for (double xi : state.x) {
    if (std::abs(xi) > tol) healthy = false;
    if (!(xi > tol && xi < 1.0 - tol)) interior = false;
  }
  if (healthy) return {Kind::Healthy, residual};
  if (interior && residual < tol) return {Kind::Endemic, residual};
  return {Kind::NotEquilibrium, residual};
}

}  // namespace netrepro
