#pragma once

// Fixed-step RK4 engine shared by the 2D (x) and 3D (z) evolutions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "tmscat/errors.hpp"
#include "tmscat/evolution.hpp"
#include "tmscat/transfer_operator.hpp"
#include "tmscat/types.hpp"

namespace tmscat::detail {

struct Segment {
  double lo;
  double hi;
  std::size_t steps;
};

/// Potential data at one point of the scattering axis.
struct Slice {
  cplx uniform{0.0, 0.0};
  /// N x N Nystrom matrix of the y-dependent part (weights folded in); empty if none.
  MatrixXc smooth_kernel;
  /// v~(x, p_j - 0): the y-dependent part applied to the delta source.
  VectorXc smooth_source;
};

/// Slab faces and Sum member supports, where the potential may jump.
void collect_breakpoints(const PotentialSpec& pot, std::vector<double>& out);

std::vector<Segment> make_segments(Interval window, std::vector<double> breakpoints, std::size_t steps);

/// x moved one ulp into the segment when it sits on an endpoint, so that
/// piecewise potentials are sampled from the inside.
inline double inside(double x, const Segment& s) {
  if (x <= s.lo) return std::nextafter(s.lo, s.hi);
  if (x >= s.hi) return std::nextafter(s.hi, s.lo);
  return x;
}

/// Block assembly of H from the potential matrix V (N x N) at x.
///   H11 = (1/2) W^-1 D- V D+,  H12 = (1/2) W^-1 D- V D-,
///   H21 = -(1/2) W^-1 D+ V D+, H22 = -(1/2) W^-1 D+ V D-
inline MatrixXc assemble_hamiltonian(const MatrixXc& v, const std::vector<double>& omegas, double x) {
  const auto n = v.rows();
  VectorXc dm(n), dp(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double phase = omegas[static_cast<std::size_t>(j)] * x;
    dm(j) = std::exp(-I * phase);
    dp(j) = std::exp(I * phase);
  }
  MatrixXc h(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double half_inv = 0.5 / omegas[static_cast<std::size_t>(j)];
    for (Eigen::Index l = 0; l < n; ++l) {
      const cplx base = half_inv * v(j, l);
      h(j, l) = base * dm(j) * dp(l);
      h(j, n + l) = base * dm(j) * dm(l);
      h(n + j, l) = -base * dp(j) * dp(l);
      h(n + j, n + l) = -base * dp(j) * dm(l);
    }
  }
  return h;
}

/// Two-by-two multiplicative Hamiltonian (v0 / 2w) [[1, e^{-2iwx}], [-e^{2iwx}, -1]].
inline Mat2 uniform_hamiltonian(cplx v0, double w, double x) {
  const cplx c = v0 / (2.0 * w);
  const cplx e = std::exp(-2.0 * I * w * x);
  Mat2 h;
  h << c, c * e, -c / e, -c;
  return h;
}

using UniformFn = std::function<cplx(double)>;

/// Pointwise evolution of the multiplicative part at transverse frequency w.
Mat2 evolve_uniform(const std::vector<Segment>& segments, const UniformFn& uniform, double w);

struct EngineOutput {
  MatrixXc u;       // 2N x 2N
  MatrixXc source;  // 2N x 2
  Mat2 delta_channel;
};

using SliceFn = std::function<Slice(double)>;

/// Dense integration of the augmented system
///   Z' = -i [[H, S], [0, H0]] Z,  Z(x_min) = I,
/// where S(x) is the delta-source coupling and H0 the incident-channel block.
EngineOutput evolve_dense(const std::vector<Segment>& segments, const SliceFn& slice,
                          const std::vector<double>& omegas, double k);

template <class Grid>
BasicTransferOperator<Grid> evolve_operator(const Grid& grid, const std::vector<Segment>& segments,
                                            const SliceFn& slice, const UniformFn& uniform, bool dense) {
  using Momentum = typename Grid::Momentum;
  const double k = grid.k();
  typename BasicTransferOperator<Grid>::MultFn mult = [grid, segments, uniform](const Momentum& p) -> Mat2 {
    const double w = grid.omega_at(p);
    if (!(w > 0.0)) throw InvalidArgument("transfer operator: multiplication part undefined at omega = 0");
    return evolve_uniform(segments, uniform, w);
  };

  if (!dense) {
    auto op = BasicTransferOperator<Grid>::multiplicative(grid, std::move(mult));
    for (const Mat2& m : op.mult_at_nodes()) {
      if (!m.allFinite()) throw DivergenceError("evolution produced non-finite entries");
    }
    return op;
  }

  std::vector<double> omegas(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) omegas[j] = grid.omega(j);
  EngineOutput eo = evolve_dense(segments, slice, omegas, k);
  if (!eo.u.allFinite() || !eo.source.allFinite() || !eo.delta_channel.allFinite()) {
    throw DivergenceError("evolution produced non-finite entries");
  }
  std::vector<Mat2> nodes(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) nodes[j] = evolve_uniform(segments, uniform, omegas[j]);
  BasicTransferOperator<Grid> diag_only(grid, mult, nodes, eo.delta_channel,
                                        MatrixXc::Zero(eo.u.rows(), eo.u.cols()),
                                        MatrixXc::Zero(eo.u.rows(), 2));
  MatrixXc kernel = eo.u - diag_only.mult_matrix();
  return BasicTransferOperator<Grid>(grid, std::move(mult), std::move(nodes), eo.delta_channel, std::move(kernel),
                                     std::move(eo.source));
}

template <class Grid>
double operator_distance(const BasicTransferOperator<Grid>& a, const BasicTransferOperator<Grid>& b) {
  double d = (a.dense() - b.dense()).cwiseAbs().maxCoeff();
  d = std::max(d, (a.kernel_at_zero() - b.kernel_at_zero()).cwiseAbs().maxCoeff());
  d = std::max(d, (a.mult_at_zero() - b.mult_at_zero()).cwiseAbs().maxCoeff());
  return d;
}

std::vector<Segment> with_steps(std::vector<Segment> segments, std::size_t factor);

}  // namespace tmscat::detail
