#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "tmscat/errors.hpp"
#include "tmscat/spectral.hpp"
#include "tmscat/types.hpp"

namespace tmscat {

/// Transfer operator on the propagating channels of a momentum grid.
///
/// The operator acts on half-line amplitudes  (2pi)^d delta(p) alpha + phi(p)
/// (alpha a 2-vector, phi smooth) as
///
///   M[...] = (2pi)^d delta(p) mult(0) alpha
///          + diag(mult(p_j)) phi + kernel * phi + kernel_at_zero * alpha.
///
/// The smooth state is stacked channel-major: index a*N + j holds channel a at
/// node j. kernel is 2N x 2N with quadrature weights folded in; kernel_at_zero
/// is 2N x 2 and holds the smooth response to the delta source in each channel.
///
/// Grid must provide size(), omega(j), average_weight(j), node_momentum(j),
/// zero_momentum(), a Momentum type and operator==.
template <class Grid>
class BasicTransferOperator {
 public:
  using Momentum = typename Grid::Momentum;
  using MultFn = std::function<Mat2(const Momentum&)>;

  BasicTransferOperator(Grid grid, MultFn mult, std::vector<Mat2> mult_at_nodes, Mat2 mult_at_zero,
                        MatrixXc kernel, MatrixXc kernel_at_zero)
      : grid_(std::move(grid)),
        mult_(std::move(mult)),
        mult_at_nodes_(std::move(mult_at_nodes)),
        mult_at_zero_(std::move(mult_at_zero)),
        kernel_(std::move(kernel)),
        kernel_at_zero_(std::move(kernel_at_zero)) {
    const auto n = static_cast<Eigen::Index>(grid_.size());
    if (mult_at_nodes_.size() != grid_.size() || kernel_.rows() != 2 * n || kernel_.cols() != 2 * n ||
        kernel_at_zero_.rows() != 2 * n || kernel_at_zero_.cols() != 2) {
      throw InvalidArgument("transfer operator: component dimensions do not match the grid");
    }
  }

  /// Builds an operator with no kernel part from a multiplication function.
  static BasicTransferOperator multiplicative(Grid grid, MultFn mult) {
    std::vector<Mat2> nodes(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) nodes[j] = mult(grid.node_momentum(j));
    const Mat2 zero = mult(Grid::zero_momentum());
    const auto n2 = static_cast<Eigen::Index>(2 * grid.size());
    return BasicTransferOperator(std::move(grid), std::move(mult), std::move(nodes), zero,
                                 MatrixXc::Zero(n2, n2), MatrixXc::Zero(n2, 2));
  }

  static BasicTransferOperator identity(Grid grid) {
    return multiplicative(std::move(grid), [](const Momentum&) -> Mat2 { return Mat2::Identity(); });
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return grid_.size(); }

  Mat2 mult(const Momentum& p) const { return mult_(p); }
  const MultFn& mult_function() const { return mult_; }
  const Mat2& mult_at_node(std::size_t j) const { return mult_at_nodes_[j]; }
  const std::vector<Mat2>& mult_at_nodes() const { return mult_at_nodes_; }
  const Mat2& mult_at_zero() const { return mult_at_zero_; }

  const MatrixXc& kernel() const { return kernel_; }
  const MatrixXc& kernel_at_zero() const { return kernel_at_zero_; }

  /// Channel block (a, b) of the kernel, a, b in {0, 1}.
  MatrixXc kernel_block(int a, int b) const {
    const auto n = static_cast<Eigen::Index>(size());
    return kernel_.block(a * n, b * n, n, n);
  }

  /// Node-wise multiplication part as a 2N x 2N matrix.
  MatrixXc mult_matrix() const {
    const auto n = static_cast<Eigen::Index>(size());
    MatrixXc d = MatrixXc::Zero(2 * n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const Mat2& m = mult_at_nodes_[static_cast<std::size_t>(j)];
      d(j, j) = m(0, 0);
      d(j, n + j) = m(0, 1);
      d(n + j, j) = m(1, 0);
      d(n + j, n + j) = m(1, 1);
    }
    return d;
  }

  /// Full action on smooth grid samples: mult_matrix() + kernel().
  MatrixXc dense() const { return mult_matrix() + kernel_; }

 private:
  Grid grid_;
  MultFn mult_;
  std::vector<Mat2> mult_at_nodes_;
  Mat2 mult_at_zero_;
  MatrixXc kernel_;
  MatrixXc kernel_at_zero_;
};

using TransferOperator = BasicTransferOperator<MomentumGrid>;

/// Composition `second` after `first`, for x-supports with `first` to the left.
/// Throws InvalidArgument when the grids differ.
template <class Grid>
BasicTransferOperator<Grid> compose(const BasicTransferOperator<Grid>& second,
                                    const BasicTransferOperator<Grid>& first) {
  if (!(second.grid() == first.grid())) throw InvalidArgument("compose: operators live on different grids");
  const std::size_t n = first.size();

  auto f2 = second.mult_function();
  auto f1 = first.mult_function();
  typename BasicTransferOperator<Grid>::MultFn mult = [f2, f1](const typename Grid::Momentum& p) -> Mat2 {
    return f2(p) * f1(p);
  };
  std::vector<Mat2> nodes(n);
  for (std::size_t j = 0; j < n; ++j) nodes[j] = second.mult_at_node(j) * first.mult_at_node(j);
  const Mat2 zero = second.mult_at_zero() * first.mult_at_zero();

  const MatrixXc d2 = second.mult_matrix();
  const MatrixXc d1 = first.mult_matrix();
  MatrixXc kernel = d2 * first.kernel() + second.kernel() * d1 + second.kernel() * first.kernel();
  MatrixXc k0 = d2 * first.kernel_at_zero() + second.kernel() * first.kernel_at_zero() +
                second.kernel_at_zero() * first.mult_at_zero();
  return BasicTransferOperator<Grid>(first.grid(), std::move(mult), std::move(nodes), zero, std::move(kernel),
                                     std::move(k0));
}

/// Outcome of checking the outgoing-wave solve for spectral singularities.
struct SingularityDiagnostic {
  enum class Kind { none, near_singular, singular };
  Kind kind = Kind::none;
  /// Estimated condition number of the smooth-channel system (infinity when
  /// the delta channel itself is singular).
  double condition = 1.0;
};

const char* to_string(SingularityDiagnostic::Kind kind);

struct OutgoingSolution {
  SpectralAmplitude T_plus;
  SpectralAmplitude T_minus;
  SingularityDiagnostic diagnostic;
};

/// Thresholds on the reciprocal condition number of the smooth system.
inline constexpr double kSingularRcond = 1e-13;
inline constexpr double kNearSingularRcond = 1e-8;

/// Scattering solution for a left-incident plane wave of strength
/// `incident` * (2pi)^d delta(p) with no wave entering from the right.
///
/// Delta channel: b0 = -mult21(0) / mult22(0), a0 = mult11(0) + mult12(0) b0.
/// Smooth channel: (diag(mult22) + K22) phi = -incident (k21(., 0) + b0 k22(., 0)).
/// Returns T_minus = (b0, phi) and T_plus = (a0 - 1, transmitted smooth part).
/// Near-singular systems are flagged, not thrown; values may be non-finite.
template <class Grid>
OutgoingSolution solve_outgoing(const BasicTransferOperator<Grid>& m, cplx incident = cplx{1.0, 0.0}) {
  const std::size_t nn = m.size();
  const auto n = static_cast<Eigen::Index>(nn);
  OutgoingSolution out;

  const Mat2& m0 = m.mult_at_zero();
  const double scale0 = std::max({std::abs(m0(0, 0)), std::abs(m0(0, 1)), std::abs(m0(1, 0)), 1.0});
  const bool delta_singular = std::abs(m0(1, 1)) <= 1e-14 * scale0;
  const cplx b0 = -m0(1, 0) / m0(1, 1);
  const cplx a0 = m0(0, 0) + m0(0, 1) * b0;

  MatrixXc system = m.kernel_block(1, 1);
  for (std::size_t j = 0; j < nn; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    system(jj, jj) += m.mult_at_node(j)(1, 1);
  }
  const MatrixXc& k0 = m.kernel_at_zero();
  const VectorXc rhs = -(k0.col(0).tail(n) + b0 * k0.col(1).tail(n));

  Eigen::FullPivLU<MatrixXc> lu(system);
  double rcond = lu.rcond();
  // The estimator skips pivots already treated as zero; the smallest full-pivot
  // ratio bounds 1 / cond_2 from above and catches exact rank loss.
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double top = pivots.maxCoeff();
  rcond = std::min(rcond, top > 0.0 ? pivots.minCoeff() / top : 0.0);
  if (!std::isfinite(rcond)) rcond = 0.0;
  VectorXc phi = lu.solve(rhs);
  if (rcond <= kSingularRcond) {
    // FullPivLU returns a least-squares-like particular solution; surface the blow-up.
    const double nan = std::numeric_limits<double>::quiet_NaN();
    phi = VectorXc::Constant(n, cplx{nan, nan});
  }

  VectorXc trans = k0.col(0).head(n) + b0 * k0.col(1).head(n) + m.kernel_block(0, 1) * phi;
  for (std::size_t j = 0; j < nn; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    trans(jj) += m.mult_at_node(j)(0, 1) * phi(jj);
  }

  out.T_minus.delta_coeff = incident * b0;
  out.T_minus.smooth = incident * phi;
  out.T_plus.delta_coeff = incident * (a0 - 1.0);
  out.T_plus.smooth = incident * trans;

  out.diagnostic.condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (delta_singular || rcond <= kSingularRcond) {
    out.diagnostic.kind = SingularityDiagnostic::Kind::singular;
    if (delta_singular) out.diagnostic.condition = std::numeric_limits<double>::infinity();
  } else if (rcond <= kNearSingularRcond) {
    out.diagnostic.kind = SingularityDiagnostic::Kind::near_singular;
  }
  return out;
}

/// One sample of the far-field amplitude.
struct AmplitudeSample {
  double theta;  ///< radians in [0, 2pi)
  cplx f;
};

struct ScatteringResult {
  SpectralAmplitude T_plus;
  SpectralAmplitude T_minus;
  std::vector<AmplitudeSample> f_samples;
  SingularityDiagnostic diagnostic;
};

/// Smooth part of T at momentum p, interpolated through omega * T (which stays
/// bounded at the band edges) and divided by omega(p).
cplx interpolate_smooth(const MomentumGrid& grid, const VectorXc& smooth, double p);

/// Far-field amplitude f(theta) = -(i k |cos theta| / sqrt(2pi)) T_{sgn cos}(k sin theta).
/// Delta coefficients are not folded in. Throws InvalidArgument for cos(theta) = 0.
std::vector<AmplitudeSample> amplitude(const SpectralAmplitude& T_plus, const SpectralAmplitude& T_minus,
                                       const MomentumGrid& grid, std::span<const double> thetas);

/// solve_outgoing followed by amplitude at the given angles.
ScatteringResult scatter(const TransferOperator& m, std::span<const double> thetas);

/// Evenly spaced angles in [0, 2pi) skipping the cos(theta) = 0 directions.
std::vector<double> sample_angles(std::size_t count);

}  // namespace tmscat
