#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>

#include "netrepro/error.hpp"
#include "netrepro/matrix.hpp"
#include "netrepro/model.hpp"

namespace netrepro {

inline constexpr double kSpectralTol = 1e-12;
inline constexpr int kSpectralMaxIter = 100000;

/// Dominant eigenpair of a nonnegative matrix. Both eigenvectors are
/// normalized to unit sum.
struct PerronResult {
  double rho = 0.0;
  Vector right_vec;
  Vector left_vec;
  int iterations = 0;
  double residual = 0.0;
};

namespace detail {

struct PowerRun {
  double rho = 0.0;  // eigenvalue of the unshifted matrix
  Vector vec;
  int iterations = 0;
};

// Power iteration on (m + shift * I). Each step brackets the spectral radius
// between the min and max of (Av)_i / v_i (Collatz-Wielandt); iteration stops
// once the bracket is narrower than tol (relative for rho > 1). The shift
// removes the stall on periodic matrices such as permutations.
//
// Reducible input (e.g. rows zeroed by s_i = 0) can leave the bracket open
// forever, so there the stopping rule is the change in the sum-norm growth
// estimate between successive steps instead.
inline PowerRun power_iterate(const Matrix& m, double shift, double tol, int max_iter,
                              bool irreducible) {
  const std::size_t n = m.rows();
  double previous = -1.0;
  Vector v(n, 1.0 / static_cast<double>(n));
  Vector w(n);
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = m.row(i);
      double acc = shift * v[i];
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * v[j];
      w[i] = acc;
    }
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ratio = v[i] > 0.0 ? w[i] / v[i] : 0.0;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / total;
    if (irreducible) {
      if (hi - lo <= tol * std::max(1.0, hi - shift)) return {0.5 * (hi + lo) - shift, v, it};
    } else {
      if (std::abs(total - previous) <= tol * std::max(1.0, total - shift))
        return {total - shift, v, it};
      previous = total;
    }
  }
  throw Error(ErrorKind::NoConvergence, "power iteration stopped after " +
                                            std::to_string(max_iter) +
                                            " iterations, bracket width " +
                                            std::to_string(hi - lo));
}

inline double eigen_residual(const Matrix& m, std::span<const double> v, double rho) {
  const Vector mv = m * v;
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) r = std::max(r, std::abs(mv[i] - rho * v[i]));
  return r;
}

}  // namespace detail

/// True when the directed support graph of m is strongly connected.
inline bool is_irreducible(const Matrix& m) {
  const std::size_t n = m.rows();
  const auto forward = detail::reachable(m, 0, false);
  const auto backward = detail::reachable(m, 0, true);
  for (std::size_t k = 0; k < n; ++k)
    if (!forward[k] || !backward[k]) return false;
  return true;
}

/// Spectral radius and Perron eigenvectors of a nonnegative square matrix.
/// Convergence and strict positivity of the vectors are guaranteed for
/// irreducible input; reducible input may raise NoConvergence.
inline PerronResult spectral_radius(const Matrix& m, double tol = kSpectralTol,
                                    int max_iter = kSpectralMaxIter) {
  if (!m.square() || m.rows() == 0) throw Error(ErrorKind::NonSquareMatrix, "spectral_radius");
  const Vector sums = m.row_sums();
  for (double v : m.data())
    if (v < 0.0) throw Error(ErrorKind::NegativeTransmission, "spectral_radius needs M >= 0");
  const double max_sum = *std::max_element(sums.begin(), sums.end());
  const double min_sum = *std::min_element(sums.begin(), sums.end());
  if (max_sum == 0.0) throw Error(ErrorKind::ZeroMatrix, "spectral_radius of the zero matrix");

  const double shift = 0.5 * max_sum;
  const Matrix mt = m.transpose();
  const bool irreducible = is_irreducible(m);
  const auto right = detail::power_iterate(m, shift, tol, max_iter, irreducible);
  const auto left = detail::power_iterate(mt, shift, tol, max_iter, irreducible);

  const double rho = right.rho;
  const double slack = tol * std::max(1.0, max_sum) + 1e-15;
  if (rho < min_sum - slack || rho > max_sum + slack)
    throw Error(ErrorKind::NoConvergence, "Perron row-sum bound violated: rho = " +
                                              std::to_string(rho));

  PerronResult result;
  result.rho = rho;
  result.right_vec = right.vec;
  result.left_vec = left.vec;
  result.iterations = std::max(right.iterations, left.iterations);
  result.residual = std::max(detail::eigen_residual(m, result.right_vec, rho),
                             detail::eigen_residual(mt, result.left_vec, rho));
  return result;
}

/// Eigenvalue of B - D with the largest real part together with its left
/// eigenvector (unit sum). Computed as the Perron pair of B - D + cI with
/// c = max gamma, which is nonnegative and irreducible for a valid model.
struct ShiftedPerron {
  double growth_rate = 0.0;
  Vector weights;
};

inline ShiftedPerron shifted_perron(const NetworkModel& model) {
  const std::size_t n = model.size();
  const double c = *std::max_element(model.gamma().begin(), model.gamma().end());
  Matrix shifted = model.beta();
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) += c - model.gamma(i);
  if (n == 1) return {shifted(0, 0) - c, Vector{1.0}};
  const auto perron = spectral_radius(shifted);
  return {perron.rho - c, perron.left_vec};
}

/// Weight vector w for the weighted infection average w^T x.
inline Vector left_perron_of_shifted(const NetworkModel& model) {
  return shifted_perron(model).weights;
}

inline double weighted_average(std::span<const double> w, std::span<const double> x) {
  if (w.size() != x.size())
    throw Error(ErrorKind::DimensionMismatch, "weighted_average on vectors of unequal length");
  return std::inner_product(w.begin(), w.end(), x.begin(), 0.0);
}

}  // namespace netrepro
