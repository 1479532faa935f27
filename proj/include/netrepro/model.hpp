#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <string>
#include <string_view>
#include <vector>

#include "netrepro/error.hpp"
#include "netrepro/matrix.hpp"

namespace netrepro {

enum class ModelKind { SIS, SIR };

inline std::string_view to_string(ModelKind kind) { return kind == ModelKind::SIS ? "SIS" : "SIR"; }

inline ModelKind parse_model_kind(std::string_view text) {
  if (text == "SIS" || text == "sis") return ModelKind::SIS;
  if (text == "SIR" || text == "sir") return ModelKind::SIR;
  throw Error(ErrorKind::ConfigError, "unknown model kind '" + std::string(text) + "'");
}

inline constexpr double kDefaultSimplexTol = 1e-9;

class NetworkModel;
NetworkModel validate_model(const Matrix& beta, const Vector& gamma);

/// Static epidemic network: transmission rates beta(i, j) from community j
/// into community i and per-community recovery rates. Only obtainable
/// through validate_model, so every instance is nonnegative with positive
/// recovery and a strongly connected transmission graph.
class NetworkModel {
 public:
  std::size_t size() const noexcept { return gamma_.size(); }
  const Matrix& beta() const noexcept { return beta_; }
  const Vector& gamma() const noexcept { return gamma_; }
  double beta(std::size_t i, std::size_t j) const noexcept { return beta_(i, j); }
  double gamma(std::size_t i) const noexcept { return gamma_[i]; }

  bool operator==(const NetworkModel&) const = default;

 private:
  friend NetworkModel validate_model(const Matrix& beta, const Vector& gamma);
  NetworkModel(Matrix beta, Vector gamma) : beta_(std::move(beta)), gamma_(std::move(gamma)) {}

  Matrix beta_;
  Vector gamma_;
};

namespace detail {

// Communities reachable from `start` following edges j -> i where
// support(i, j) holds (or the reverse direction when `reverse`).
inline std::vector<bool> reachable(const Matrix& beta, std::size_t start, bool reverse) {
  const std::size_t n = beta.rows();
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> frontier{start};
  seen[start] = true;
  while (!frontier.empty()) {
    const std::size_t j = frontier.front();
    frontier.pop_front();
    for (std::size_t i = 0; i < n; ++i) {
      const double w = reverse ? beta(j, i) : beta(i, j);
      if (w > 0.0 && !seen[i]) {
        seen[i] = true;
        frontier.push_back(i);
      }
    }
  }
  return seen;
}

}  // namespace detail

inline NetworkModel validate_model(const Matrix& beta, const Vector& gamma) {
  if (!beta.square() || beta.rows() == 0)
    throw Error(ErrorKind::NonSquareMatrix, "beta is " + std::to_string(beta.rows()) + "x" +
                                                std::to_string(beta.cols()));
  const std::size_t n = beta.rows();
  if (gamma.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "gamma has length " + std::to_string(gamma.size()) +
                                                  ", expected " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!(beta(i, j) >= 0.0) || !std::isfinite(beta(i, j)))
        throw Error(ErrorKind::NegativeTransmission,
                    "beta(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
  for (std::size_t i = 0; i < n; ++i)
    if (!(gamma[i] > 0.0) || !std::isfinite(gamma[i]))
      throw Error(ErrorKind::NonpositiveRecovery, "gamma(" + std::to_string(i + 1) + ")");

  const auto forward = detail::reachable(beta, 0, false);
  for (std::size_t k = 0; k < n; ++k)
    if (!forward[k])
      throw Error(ErrorKind::NotStronglyConnected, "community " + std::to_string(k + 1) +
                                                       " unreachable from community 1");
  const auto backward = detail::reachable(beta, 0, true);
  for (std::size_t k = 0; k < n; ++k)
    if (!backward[k])
      throw Error(ErrorKind::NotStronglyConnected,
                  "community 1 unreachable from community " + std::to_string(k + 1));
  return NetworkModel(beta, gamma);
}

/// Compartment proportions at one instant. r is all zeros under SIS.
struct EpidemicState {
  Vector s;
  Vector x;
  Vector r;
  ModelKind kind = ModelKind::SIR;

  std::size_t size() const noexcept { return x.size(); }
  bool operator==(const EpidemicState&) const = default;
};

/// Number of entries validate_state had to pull back into [0, 1].
struct ClampReport {
  std::size_t clamped = 0;
};

inline EpidemicState validate_state(Vector s, Vector x, Vector r, ModelKind kind,
                                    double tol = kDefaultSimplexTol,
                                    ClampReport* report = nullptr) {
  const std::size_t n = x.size();
  if (kind == ModelKind::SIS && r.empty()) r.assign(n, 0.0);
  if (s.size() != n || r.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "state vectors differ in length");

  auto check_range = [&](const Vector& v, std::string_view name) {
    for (std::size_t i = 0; i < n; ++i)
      if (!(v[i] >= -tol && v[i] <= 1.0 + tol))
        throw Error(ErrorKind::RangeViolation, "community " + std::to_string(i + 1) + ", " +
                                                   std::string(name) + " = " +
                                                   std::to_string(v[i]));
  };
  check_range(s, "s");
  check_range(x, "x");
  check_range(r, "r");
  for (std::size_t i = 0; i < n; ++i) {
    if (kind == ModelKind::SIS && std::abs(r[i]) > tol)
      throw Error(ErrorKind::RangeViolation,
                  "community " + std::to_string(i + 1) + ", r must vanish under SIS");
    const double sum = s[i] + x[i] + r[i];
    if (std::abs(sum - 1.0) > tol)
      throw Error(ErrorKind::SimplexViolation,
                  "community " + std::to_string(i + 1) + ", sum = " + std::to_string(sum));
  }

  std::size_t clamped = 0;
  auto clamp = [&](Vector& v) {
    for (double& value : v) {
      const double c = std::clamp(value, 0.0, 1.0);
      if (c != value) ++clamped;
      value = c;
    }
  };
  clamp(s);
  clamp(x);
  clamp(r);
  if (report) report->clamped = clamped;
  return EpidemicState{std::move(s), std::move(x), std::move(r), kind};
}

/// Fully susceptible population except for the given infected proportions.
inline EpidemicState seeded_state(const Vector& x, ModelKind kind) {
  Vector s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = 1.0 - x[i];
  return validate_state(std::move(s), x, Vector(x.size(), 0.0), kind);
}

}  // namespace netrepro
