#include "tmscat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tmscat/errors.hpp"

namespace tmscat {

namespace {

constexpr std::size_t kEndCorrections = 8;

// Endpoint corrections gamma_1..gamma_m for the midpoint rule in theta, so that
// h * sum (1 + gamma) G(theta_j) cancels the Euler-Maclaurin end terms through
// order h^(m+1) for integrands whose even reflection at theta = 0 is not smooth.
std::vector<double> end_corrections(std::size_t m) {
  if (m == 0) return {};
  // B_{2r}(1/2) / (2r) for r = 1..4.
  constexpr long double half_bernoulli[] = {-1.0L / 24.0L, 7.0L / 960.0L, -31.0L / 8064.0L, 127.0L / 30720.0L};
  using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const auto mm = static_cast<Eigen::Index>(m);
  MatL a(mm, mm);
  VecL rhs = VecL::Zero(mm);
  for (Eigen::Index n = 0; n < mm; ++n) {
    for (Eigen::Index j = 0; j < mm; ++j) a(n, j) = std::pow(static_cast<long double>(j) + 0.5L, static_cast<long double>(n));
    if (n % 2 == 1) rhs(n) = half_bernoulli[(n - 1) / 2];
  }
  const VecL g = a.partialPivLu().solve(rhs);
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = static_cast<double>(g(static_cast<Eigen::Index>(j)));
  return out;
}

}  // namespace

MomentumGrid::MomentumGrid(double k, std::size_t n) : k_(k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw InvalidArgument("momentum grid: k must be positive and finite, got " + std::to_string(k));
  }
  if (n < 2) {
    throw InvalidArgument("momentum grid: need at least 2 nodes, got " + std::to_string(n));
  }
  nodes_.resize(n);
  weights_.assign(n, pi / static_cast<double>(n));
  omegas_.resize(n);
  bary_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double theta = pi * static_cast<double>(2 * j + 1) / static_cast<double>(2 * n);
    nodes_[j] = k * std::cos(theta);
    omegas_[j] = k * std::sin(theta);
    bary_[j] = ((j % 2 == 0) ? 1.0 : -1.0) * std::sin(theta);
  }
  // Enforce exact mirror symmetry of nodes; cos(pi - t) is not bit-exact.
  for (std::size_t j = 0; j < n / 2; ++j) {
    nodes_[n - 1 - j] = -nodes_[j];
    omegas_[n - 1 - j] = omegas_[j];
  }
  if (n % 2 == 1) nodes_[n / 2] = 0.0;

  average_.resize(n);
  for (std::size_t j = 0; j < n; ++j) average_[j] = weights_[j] * omegas_[j] / (2.0 * pi);
  const std::vector<double> gamma = end_corrections(std::min(kEndCorrections, n / 2));
  for (std::size_t j = 0; j < gamma.size(); ++j) {
    average_[j] *= 1.0 + gamma[j];
    average_[n - 1 - j] *= 1.0 + gamma[j];
  }
}

double MomentumGrid::omega_at(double p) const {
  const double s = (k_ - p) * (k_ + p);
  return s > 0.0 ? std::sqrt(s) : 0.0;
}

cplx MomentumGrid::interpolate(std::span<const cplx> samples, double p) const {
  if (samples.size() != size()) {
    throw InvalidArgument("interpolate: expected " + std::to_string(size()) + " samples, got " +
                          std::to_string(samples.size()));
  }
  cplx num{0.0, 0.0};
  double den = 0.0;
  for (std::size_t j = 0; j < size(); ++j) {
    const double diff = p - nodes_[j];
    if (diff == 0.0) return samples[j];
    const double c = bary_[j] / diff;
    num += c * samples[j];
    den += c;
  }
  return num / den;
}

MomentumGrid build_grid(double k, std::size_t n) { return MomentumGrid(k, n); }

cplx quadrature(const MomentumGrid& grid, std::span<const cplx> samples, Measure measure) {
  if (samples.size() != grid.size()) {
    throw InvalidArgument("quadrature: expected " + std::to_string(grid.size()) +
                          " samples, got " + std::to_string(samples.size()));
  }
  cplx acc{0.0, 0.0};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double w = measure == Measure::plain ? grid.average_weight(j) : grid.weight(j) / (2.0 * pi);
    acc += w * samples[j];
  }
  return acc;
}

}  // namespace tmscat
