#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tmscat/types.hpp"

namespace tmscat {

/// Chebyshev-Gauss nodes on the open interval (-k, k).
///
/// The nodes p_j = k cos(pi (2j - 1) / 2N) and weights w_j = pi / N integrate
/// g(p) / sqrt(k^2 - p^2) exactly for polynomial g of degree < 2N. The
/// endpoints +-k, where omega vanishes, are never nodes. Node j and node
/// N - 1 - j are mirror images (p -> -p).
class MomentumGrid {
 public:
  using Momentum = double;

  /// Throws InvalidArgument for k <= 0 or n < 2.
  MomentumGrid(double k, std::size_t n);

  double k() const { return k_; }
  std::size_t size() const { return nodes_.size(); }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> omegas() const { return omegas_; }

  double node(std::size_t j) const { return nodes_[j]; }
  double weight(std::size_t j) const { return weights_[j]; }
  double omega(std::size_t j) const { return omegas_[j]; }

  /// Weight a_j of the plain-measure average: sum_j a_j f(p_j) ~ (1/2pi) int f dp.
  ///
  /// In theta (p = k cos theta) this is the midpoint rule w_j omega_j / 2pi with
  /// endpoint corrections on the eight outermost nodes at each end. Integrands
  /// with an odd part in omega, such as omega itself, then converge at high
  /// order instead of O(N^-2). The corrections sum to zero, so averages of
  /// f = g / omega with constant g stay exact.
  double average_weight(std::size_t j) const { return average_[j]; }

  /// Index of the node at -p_j.
  std::size_t mirror(std::size_t j) const { return size() - 1 - j; }

  Momentum node_momentum(std::size_t j) const { return nodes_[j]; }
  static Momentum zero_momentum() { return 0.0; }

  /// sqrt(k^2 - p^2) for |p| <= k.
  double omega_at(double p) const;

  /// Interpolates grid samples at an arbitrary p in [-k, k].
  ///
  /// Barycentric formula for first-kind Chebyshev points; exact when the
  /// samples come from a polynomial of degree < N.
  cplx interpolate(std::span<const cplx> samples, double p) const;

  friend bool operator==(const MomentumGrid& a, const MomentumGrid& b) {
    return a.k_ == b.k_ && a.nodes_.size() == b.nodes_.size();
  }

 private:
  double k_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> omegas_;
  std::vector<double> bary_;
  std::vector<double> average_;
};

MomentumGrid build_grid(double k, std::size_t n);

enum class Measure {
  plain,        ///< sum a_j f_j ~ (1/2pi) int f(p) dp, a_j = average_weight(j)
  over_omega,   ///< (1/2pi) sum w_j f_j ~ (1/2pi) int f(p) / omega(p) dp
};

/// Averaging functional on the grid. Throws InvalidArgument on a size mismatch.
cplx quadrature(const MomentumGrid& grid, std::span<const cplx> samples, Measure measure);

/// Half-line momentum-space wave: delta_coeff * (2pi)^d delta(p) plus smooth samples.
struct SpectralAmplitude {
  cplx delta_coeff{0.0, 0.0};
  VectorXc smooth;

  static SpectralAmplitude zero(std::size_t n) {
    return SpectralAmplitude{cplx{0.0, 0.0}, VectorXc::Zero(static_cast<Eigen::Index>(n))};
  }
};

}  // namespace tmscat
