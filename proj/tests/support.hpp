#pragma once

// Independent oracles and random generators shared by the unit and acceptance tests.
// Nothing here calls into the library's numerical kernels.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <unsupported/Eigen/Polynomials>

#include "netrepro/cli.hpp"
#include "netrepro/netrepro.hpp"

namespace testing_support {

using netrepro::Matrix;
using netrepro::Vector;

/// Characteristic polynomial coefficients by Faddeev-LeVerrier, lowest degree first.
inline std::vector<double> characteristic_polynomial(const Matrix& a) {
  const std::size_t n = a.rows();
  Eigen::MatrixXd m(n, n), aa(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) aa(i, j) = a(i, j);
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  Eigen::MatrixXd mk = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    mk = aa * mk + c[n - k + 1] * Eigen::MatrixXd::Identity(n, n);
    c[n - k] = -(aa * mk).trace() / static_cast<double>(k);
  }
  return c;
}

/// Largest root modulus of the characteristic polynomial (companion-matrix roots).
inline double spectral_radius_oracle(const Matrix& a) {
  const auto c = characteristic_polynomial(a);
  if (a.rows() == 1) return std::abs(a(0, 0));
  Eigen::VectorXd coeffs(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) coeffs[k] = c[k];
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
  double best = 0.0;
  for (const auto& root : solver.roots()) best = std::max(best, std::abs(root));
  return best;
}

/// Reachability by Floyd-Warshall transitive closure over edges j -> i when m(i, j) > 0.
inline bool strongly_connected_oracle(const Matrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    reach[i][i] = true;
    for (std::size_t j = 0; j < n; ++j)
      if (m(i, j) > 0) reach[j][i] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (reach[a][k] && reach[k][b]) reach[a][b] = true;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (!reach[a][b]) return false;
  return true;
}

inline double gamma_log_pdf(double x, double shape, double rate) {
  return shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x - std::lgamma(shape);
}

/// Gamma CDF by Gauss-Kronrod quadrature of the density over 50 panels.
inline double gamma_cdf_oracle(double x, double shape, double rate) {
  if (x <= 0) return 0.0;
  auto pdf = [&](double t) { return t <= 0 ? 0.0 : std::exp(gamma_log_pdf(t, shape, rate)); };
  const double mean = shape / rate, sd = std::sqrt(shape) / rate;
  double lo = std::max(0.0, mean - 40.0 * sd);
  if (x <= lo) return 0.0;
  const int panels = 50;
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = lo + (x - lo) * k / panels, b = lo + (x - lo) * (k + 1) / panels;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(pdf, a, b, 5, 1e-13);
  }
  return total;
}

/// Random strongly connected model. Entries are absent with probability `sparsity`.
inline netrepro::NetworkModel random_model(std::mt19937_64& rng, std::size_t n, double beta_max,
                                           double gamma_lo, double gamma_hi,
                                           double sparsity = 0.4) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    Matrix beta(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (unit(rng) >= sparsity) beta(i, j) = beta_max * unit(rng);
    if (!strongly_connected_oracle(beta)) continue;
    Vector gamma(n);
    for (auto& g : gamma) g = gamma_lo + (gamma_hi - gamma_lo) * unit(rng);
    return netrepro::validate_model(beta, gamma);
  }
}

/// Random infected fractions in (lo, hi), paired with s = 1 - x and r = 0.
inline netrepro::EpidemicState random_seed_state(std::mt19937_64& rng, std::size_t n, double lo,
                                                 double hi, netrepro::ModelKind kind) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector x(n);
  for (auto& v : x) v = dist(rng);
  return netrepro::seeded_state(x, kind);
}

inline netrepro::NetworkModel scaled_model(const netrepro::NetworkModel& m, double factor) {
  Matrix beta = m.beta();
  for (std::size_t i = 0; i < beta.rows(); ++i)
    for (std::size_t j = 0; j < beta.cols(); ++j) beta(i, j) *= factor;
  return netrepro::validate_model(beta, m.gamma());
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("netrepro_" + name + "_" + std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Runs the CLI entry point with an argument list, capturing both streams.
struct CliResult {
  int code;
  std::string out, err;
};

inline CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "netrepro");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = netrepro::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace testing_support
