#pragma once

#include <cstddef>

#include "tmscat/spectral.hpp"
#include "tmscat/transfer_operator.hpp"
#include "tmscat/types.hpp"

namespace tmscat {

/// Homogeneous slab of relative permittivity epsilon and thickness L probed at wavenumber k.
struct SlabParams {
  cplx epsilon{1.0, 0.0};
  double L = 1.0;
  double k = 1.0;

  /// Throws InvalidArgument unless L > 0, k > 0 and all fields are finite.
  void validate() const;

  cplx z_tilde() const { return k * k * (1.0 - epsilon); }
  /// sqrt(1 - z~/w^2), principal branch.
  cplx n(cplx w) const;
  cplx n_plus(cplx w) const;
  cplx n_minus(cplx w) const;
  /// Refractive index sqrt(epsilon) (principal branch) and its parts.
  cplx refractive_index() const;
  double eta() const { return refractive_index().real(); }
  double kappa() const { return refractive_index().imag(); }
  /// Gain coefficient g = -2 k kappa.
  double gain() const { return -2.0 * k * kappa(); }
};

/// Coupling of a line (2D) or point (3D) defect.
struct DefectParams {
  cplx strength{0.0, 0.0};
  /// Optical wire with epsilon = 1 + i zeta delta(x) delta(y): strength = -i zeta k^2.
  static DefectParams from_wire(double zeta, double k);
};

/// Transfer matrix of the slab occupying [x_start, x_start + L] at transverse
/// frequency w (w = omega(p); complex w allowed for root finding):
///   M11 = [cos(nLw) + i n+ sin(nLw)] e^{-iwL},  M22(w) = M11(-w),
///   M12 = i n- sin(nLw) e^{-iwL},              M21(w) = M12(-w),
/// with M12 and M21 picking up e^{-2iw x_start} and e^{2iw x_start}.
Mat2 slab_matrix(const SlabParams& sp, cplx w, double x_start = 0.0);

/// Same with an explicit z~ (used when k itself is the unknown).
Mat2 slab_matrix(cplx z_tilde, double L, cplx w, double x_start = 0.0);

/// Purely multiplicative operator of the slab on any grid with omega_at(Momentum).
/// Throws InvalidArgument when sp.k differs from the grid wavenumber.
template <class Grid>
BasicTransferOperator<Grid> slab_operator_on(const SlabParams& sp, const Grid& grid, double x_start = 0.0) {
  sp.validate();
  if (std::abs(sp.k - grid.k()) > 1e-14 * sp.k) {
    throw InvalidArgument("slab operator: slab wavenumber differs from the grid wavenumber");
  }
  return BasicTransferOperator<Grid>::multiplicative(
      grid, [sp, grid, x_start](const typename Grid::Momentum& p) -> Mat2 {
        return slab_matrix(sp, cplx{grid.omega_at(p), 0.0}, x_start);
      });
}

TransferOperator slab_operator(const SlabParams& sp, const MomentumGrid& grid, double x_start = 0.0);

/// Z(w) = e^{-2inLw} - ((n-1)/(n+1))^2. Its roots are the zeros of M22.
cplx slab_Z(const SlabParams& sp, cplx w);

struct SlabXZ {
  cplx X;
  cplx Z;
  /// |X(definition) - X(closed form)| / max(1, |X|).
  double identity_residual;
};

/// X(w) = 1 - M21(w)/M22(w) and Z(w), cross-checked against
/// X = 2(e^{-2inLw} + (n-1)/(n+1)) / ((n+1) Z).
/// Throws SpectralSingularity when M22(w) or Z(w) vanishes to rounding.
SlabXZ slab_xyz(const SlabParams& sp, cplx w);

/// Y(k) = 2 + (i z / pi) int_0^{pi/2} X(k sin u) du by Gauss-Legendre.
/// Throws NearResonance (with the pole location) when M22 nearly vanishes on (0, k].
cplx slab_Y(const SlabParams& sp, cplx strength, std::size_t quad_points = 200);

/// Outgoing amplitudes of the slab with a line defect on its left face, at one momentum.
struct SlabDefectPoint {
  cplx delta_minus;
  cplx smooth_minus;
  cplx delta_plus;
  cplx smooth_plus;
};

struct SlabDefectSolution {
  SpectralAmplitude T_plus;
  SpectralAmplitude T_minus;
  cplx X_k;
  cplx Y_k;
  /// |B~_- + 1 - 2X(k)/Y(k)| with B~_- averaged from T_- by an independent quadrature.
  double identity_residual;
};

/// Smooth parts T_- = -i z X(k) X(w) / (Y w), T_+ = -i z X(k) / (Y M22(w) w);
/// delta coefficients X(k) - 1 and 1/M22(k) - 1. Requires |p| < k.
SlabDefectPoint slab_defect_T(const SlabParams& sp, cplx strength, double p, std::size_t quad_points = 200);

/// The same on every node of a grid, plus the averaging identity check.
SlabDefectSolution slab_defect_T(const SlabParams& sp, cplx strength, const MomentumGrid& grid,
                                 std::size_t quad_points = 200);

/// M = I - (i z / 2 omega) K delta(i d/dp): identity multiplication part and a
/// rank-one kernel built from the plain-measure averaging weights.
TransferOperator delta2d_operator(cplx strength, const MomentumGrid& grid);

/// f = -sqrt(2/pi) z / (4 + i z). Throws SpectralSingularity at z = 4i.
cplx delta2d_f(cplx strength);

/// T_+-(p) smooth part -2iz / ((4 + iz) omega).
cplx delta2d_T(cplx strength, double omega);

/// First Born amplitude -z / (2 sqrt(2pi)).
cplx born2d_f(cplx strength);

enum class WireMode { lasing, cpa };

/// Wavenumber at which a wire of parameter zeta lases (zeta < 0) or absorbs
/// perfectly (zeta > 0): k = 2 / sqrt(-+zeta). Throws InvalidArgument on a sign mismatch.
double wire_modes(double zeta, WireMode mode);

/// Threshold gain of a slab of real index eta at incidence angle theta (radians):
///   g = 4 sqrt(eta^2 - sin^2) / (eta L) * ln[(sqrt(eta^2 - sin^2) + |cos|) / sqrt(eta^2 - 1)].
/// Throws InvalidArgument for eta <= 1 or L <= 0.
double threshold_gain(double eta, double theta, double L);

/// threshold_gain with theta in degrees; sin and cos are exact at multiples of 90 degrees.
double threshold_gain_deg(double eta, double theta_deg, double L);

enum class SingularityUnknown { omega, k };

struct SingularityRoot {
  cplx root;
  double residual;  ///< |Z(root)|
  double m22_abs;   ///< |M22(root)|
  int iterations;
};

/// Complex secant iteration for Z = 0 from `guess`, solving either for the
/// transverse frequency at fixed k or for k itself (z~ = k^2 (1 - eps) follows k).
/// Throws NoRoot after 200 iterations or on a stall.
SingularityRoot spectral_singularity(const SlabParams& sp, SingularityUnknown unknown, cplx guess);

}  // namespace tmscat
