#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tmscat/potential.hpp"
#include "tmscat/types.hpp"

namespace tmscat {

/// One-dimensional transfer matrix at wavenumber k.
struct Transfer1D {
  Mat2 M;
  double k;
  /// |det M - 1|.
  double det_residual;
};

/// Integrates U' = -i H U with H = (v(x)/2k) [[1, e^{-2ikx}], [-e^{2ikx}, -1]]
/// over `support` (classical RK4, `steps` steps in total, split at `breakpoints`
/// so that jumps of v fall on step boundaries). v is sampled strictly inside
/// each piece. Throws InvalidArgument for bad inputs and DivergenceError on
/// non-finite results.
Transfer1D transfer_1d(const std::function<cplx(double)>& v, Interval support, double k, std::size_t steps,
                       const std::vector<double>& breakpoints = {});

/// First-order (Born) outgoing amplitudes at transverse momentum p, split as in
/// SpectralAmplitude: coefficient of 2pi delta(p) plus the smooth value at p.
struct Born1 {
  cplx delta_plus{0.0, 0.0};
  cplx smooth_plus{0.0, 0.0};
  cplx delta_minus{0.0, 0.0};
  cplx smooth_minus{0.0, 0.0};
};

/// Born amplitudes from the full two-dimensional transform V(Kx, Ky):
///   T_+(p) = -(i / 2 omega) V(omega - k, p),  T_-(p) = -(i / 2 omega) V(-(omega + k), p).
/// y-independent layers contribute only delta coefficients
///   -(i / 2k) int v0 dx  and  -(i / 2k) int v0 e^{2ikx} dx.
/// Supports point interactions, Gaussian bumps, slabs, slabs with a defect and
/// sums of these (Gaussian members are not truncated to their declared support).
/// Throws InvalidArgument for other kinds or |p| >= k.
Born1 born1_T(const PotentialSpec& pot, double k, double p);

struct ConvergenceRow {
  std::size_t size;
  cplx value;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  /// |value[i+1] - value[i]|.
  std::vector<double> deltas;
  /// log(delta[i] / delta[i+1]) / log(size[i+2] / size[i+1]) at the finest level;
  /// empty when a delta vanishes or fewer than three sizes are given.
  std::optional<double> order;

  std::string to_text() const;
  std::string to_json() const;
};

/// Evaluates fn at increasing sizes and estimates the convergence order.
/// Throws InvalidArgument when sizes are not strictly increasing.
ConvergenceReport convergence_report(const std::function<cplx(std::size_t)>& fn, const std::vector<std::size_t>& sizes);

}  // namespace tmscat
