#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "tmscat/potential.hpp"
#include "tmscat/spectral.hpp"
#include "tmscat/transfer_operator.hpp"
#include "tmscat/types.hpp"

namespace tmscat {

/// Discretized effective Hamiltonian at one x, acting on stacked (upper, lower)
/// channel samples.
struct HamiltonianBlock {
  double x = 0.0;
  MatrixXc h11, h12, h21, h22;

  /// The 2N x 2N matrix [[h11, h12], [h21, h22]].
  MatrixXc assembled() const;
};

/// Structured record emitted when doubling the step count moves the result.
struct AccuracyWarning {
  std::string op;
  std::size_t steps = 0;
  double delta = 0.0;
};

/// Writes `{"op": ..., "steps": ..., "delta": ...}` as one line on stderr.
void emit_to_stderr(const AccuracyWarning& w);

/// Fixed-step classical RK4 integration of U' = -i H(x) U over [x_min, x_max].
struct EvolutionConfig {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t steps = 2000;
  /// Re-run with 2 * steps and compare; warn when the max entry change exceeds the tolerance.
  bool halving_check = true;
  double halving_tolerance = 1e-8;
  std::function<void(const AccuracyWarning&)> on_warning = emit_to_stderr;
  /// Evolve node by node when the potential has no y-dependent part (H is then
  /// diagonal in p and the dense and node-wise integrations coincide).
  bool exploit_diagonal = true;

  /// Window = support_window(pot).
  static EvolutionConfig for_potential(const PotentialSpec& pot, std::size_t steps);
};

/// Nystrom matrix of v(x, i d/dp) on the grid:
///   entry (j, l) = (1/2pi) w_l omega_l  v~(x, p_j - p_l)
/// plus v0(x) * Identity for the y-independent part.
/// Throws UnsupportedEvaluation for x-singular potentials.
MatrixXc potential_kernel(const PotentialSpec& pot, double x, const MomentumGrid& grid);

/// H(x, p) = (1/2 omega) e^{-i omega x s3} v(x, i d/dp) K e^{i omega x s3} on the grid.
HamiltonianBlock effective_hamiltonian(const PotentialSpec& pot, double x, const MomentumGrid& grid);

/// Transfer operator of a potential from the time-ordered evolution in x.
///
/// The y-independent part of the potential goes into the multiplication part
/// (evaluable at any p, including the incident p = 0); the y-dependent part
/// produces the kernel and the smooth response to the delta-source, which is
/// integrated alongside U as two extra columns.
/// Throws DivergenceError on non-finite results and InvalidArgument for bad configs.
TransferOperator evolve_transfer(const PotentialSpec& pot, const MomentumGrid& grid, const EvolutionConfig& cfg);

}  // namespace tmscat
