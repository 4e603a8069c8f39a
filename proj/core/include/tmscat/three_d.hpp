#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "tmscat/closed_forms.hpp"
#include "tmscat/evolution.hpp"
#include "tmscat/potential.hpp"
#include "tmscat/spectral.hpp"
#include "tmscat/transfer_operator.hpp"
#include "tmscat/types.hpp"

namespace tmscat {

/// Polar product grid on the open disc |p| < k.
///
/// Rings sit at Gauss-Legendre nodes omega_i of (0, k) with radius
/// sqrt(k^2 - omega_i^2); each ring carries M uniformly spaced azimuths
/// phi_m = 2 pi m / M (M even, so p -> -p maps nodes onto nodes).
/// Channel j = i * M + m. Because d^2p / omega = dphi d(omega) on the disc, the
/// rule integrates 1/omega exactly.
class DiscGrid {
 public:
  using Momentum = std::array<double, 2>;

  /// Throws InvalidArgument for k <= 0, n_radial < 1 or odd/too small n_azimuth.
  DiscGrid(double k, std::size_t n_radial, std::size_t n_azimuth);

  double k() const { return k_; }
  std::size_t size() const { return n_radial_ * n_azimuth_; }
  std::size_t radial_count() const { return n_radial_; }
  std::size_t azimuth_count() const { return n_azimuth_; }

  double omega(std::size_t j) const { return ring_omega_[j / n_azimuth_]; }
  double radius(std::size_t j) const { return ring_radius_[j / n_azimuth_]; }
  double azimuth(std::size_t j) const { return azimuth_step() * static_cast<double>(j % n_azimuth_); }
  double azimuth_step() const { return 2.0 * pi / static_cast<double>(n_azimuth_); }

  /// Weight of the plain-measure average: sum_j a_j f(p_j) ~ (1/4pi^2) int_disc f d^2p.
  double average_weight(std::size_t j) const;

  Momentum node_momentum(std::size_t j) const;
  static Momentum zero_momentum() { return {0.0, 0.0}; }

  /// sqrt(k^2 - |p|^2); throws InvalidArgument outside the closed disc.
  double omega_at(const Momentum& p) const;

  /// Interpolates node samples at an arbitrary point of the disc: polynomial in
  /// omega across rings, trigonometric in the azimuth within each ring.
  cplx interpolate(std::span<const cplx> samples, const Momentum& p) const;

  friend bool operator==(const DiscGrid& a, const DiscGrid& b) {
    return a.k_ == b.k_ && a.n_radial_ == b.n_radial_ && a.n_azimuth_ == b.n_azimuth_;
  }

 private:
  double k_;
  std::size_t n_radial_;
  std::size_t n_azimuth_;
  std::vector<double> ring_omega_;
  std::vector<double> ring_radius_;
  std::vector<double> ring_weight_;
  std::vector<double> bary_;
};

/// (1/4pi^2) int_disc f(p) d^2p. Throws InvalidArgument on a size mismatch.
cplx disc_quadrature(const DiscGrid& grid, std::span<const cplx> samples);

using TransferOperator3D = BasicTransferOperator<DiscGrid>;

/// M = I - (i z / 2 omega) K delta(i d/dp_x) delta(i d/dp_y).
TransferOperator3D delta3d_operator(cplx strength, const DiscGrid& grid);

/// Outgoing solution for incidence 4pi^2 delta(p_x) delta(p_y) along +z.
OutgoingSolution solve_outgoing_3d(const TransferOperator3D& m, cplx incident = cplx{1.0, 0.0});

/// f(theta, phi) = -(i k |cos theta| / 2pi) T_{sgn cos}(k sin theta cos phi, k sin theta sin phi).
/// Throws InvalidArgument when cos(theta) vanishes.
cplx amplitude3d(const SpectralAmplitude& T_plus, const SpectralAmplitude& T_minus, const DiscGrid& grid,
                 double theta, double phi);

/// f = -z / (4pi + i k z). Throws SpectralSingularity when the denominator vanishes.
cplx delta3d_f(cplx strength, double k);

/// Scattering length xi = z / 4pi.
cplx scattering_length(cplx strength);

/// mu = 4pi / |z| for the cross-section law |f|^2 = 1 / (k^2 + mu^2) (real z).
double cross_section_scale(cplx strength);

/// Maximum channel count accepted by the 3D Hamiltonian and numeric evolution.
inline constexpr std::size_t kMaxChannels3D = 64;

/// Block form of H(z, p) on the disc grid for z-layered potentials (slabs and
/// sums of slabs). Throws ResourceLimit above kMaxChannels3D channels and
/// UnsupportedEvaluation for other potential kinds.
HamiltonianBlock effective_hamiltonian_3d(const PotentialSpec& pot, double z, const DiscGrid& grid);

/// Numeric evolution along z with the shared RK4 engine (x_min/x_max of cfg are z limits).
TransferOperator3D evolve_transfer_3d(const PotentialSpec& pot, const DiscGrid& grid, const EvolutionConfig& cfg);

/// Closed-form slab operator with omega = omega(p) on the disc.
TransferOperator3D slab_operator_3d(const SlabParams& sp, const DiscGrid& grid, double z_start = 0.0);

}  // namespace tmscat
