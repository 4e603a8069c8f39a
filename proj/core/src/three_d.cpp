#include "tmscat/three_d.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "evolution_engine.hpp"
#include "tmscat/errors.hpp"
#include "tmscat/gauss_legendre.hpp"

namespace tmscat {

DiscGrid::DiscGrid(double k, std::size_t n_radial, std::size_t n_azimuth)
    : k_(k), n_radial_(n_radial), n_azimuth_(n_azimuth) {
  if (!(k > 0.0) || !std::isfinite(k)) throw InvalidArgument("disc grid: k must be positive");
  if (n_radial < 1) throw InvalidArgument("disc grid: need at least one ring");
  if (n_azimuth < 2 || n_azimuth % 2 != 0) throw InvalidArgument("disc grid: azimuth count must be even and >= 2");

  const QuadratureRule rule = gauss_legendre(n_radial, 0.0, k);
  // Rings ordered from the centre (omega near k) outwards.
  ring_omega_.assign(rule.nodes.rbegin(), rule.nodes.rend());
  ring_weight_.assign(rule.weights.rbegin(), rule.weights.rend());
  ring_radius_.resize(n_radial);
  for (std::size_t i = 0; i < n_radial; ++i) {
    const double w = ring_omega_[i];
    ring_radius_[i] = std::sqrt((k - w) * (k + w));
  }

  bary_.assign(n_radial, 1.0);
  for (std::size_t i = 0; i < n_radial; ++i) {
    for (std::size_t l = 0; l < n_radial; ++l) {
      if (l != i) bary_[i] /= (ring_omega_[i] - ring_omega_[l]) / k;
    }
  }
}

double DiscGrid::average_weight(std::size_t j) const {
  const std::size_t i = j / n_azimuth_;
  return ring_weight_[i] * ring_omega_[i] * azimuth_step() / (4.0 * pi * pi);
}

DiscGrid::Momentum DiscGrid::node_momentum(std::size_t j) const {
  const double r = radius(j);
  const double phi = azimuth(j);
  return {r * std::cos(phi), r * std::sin(phi)};
}

double DiscGrid::omega_at(const Momentum& p) const {
  const double r2 = p[0] * p[0] + p[1] * p[1];
  const double w2 = k_ * k_ - r2;
  if (w2 < -1e-12 * k_ * k_) throw InvalidArgument("disc grid: momentum outside the disc");
  return std::sqrt(std::max(w2, 0.0));
}

cplx DiscGrid::interpolate(std::span<const cplx> samples, const Momentum& p) const {
  if (samples.size() != size()) throw InvalidArgument("disc grid: sample count does not match the grid");
  const double w = omega_at(p);
  const double phi = std::atan2(p[1], p[0]);
  const auto m_count = static_cast<double>(n_azimuth_);

  // Periodic cardinal function of an even number of equispaced points.
  std::vector<double> card(n_azimuth_);
  for (std::size_t m = 0; m < n_azimuth_; ++m) {
    const double x = phi - azimuth_step() * static_cast<double>(m);
    const double s = std::sin(0.5 * x);
    card[m] = std::abs(s) < 1e-14 ? 1.0 : std::sin(0.5 * m_count * x) * std::cos(0.5 * x) / (s * m_count);
  }

  std::vector<cplx> ring(n_radial_);
  for (std::size_t i = 0; i < n_radial_; ++i) {
    cplx acc{0.0, 0.0};
    for (std::size_t m = 0; m < n_azimuth_; ++m) acc += card[m] * samples[i * n_azimuth_ + m];
    ring[i] = acc;
  }

  cplx num{0.0, 0.0};
  double den = 0.0;
  for (std::size_t i = 0; i < n_radial_; ++i) {
    const double d = w - ring_omega_[i];
    if (d == 0.0) return ring[i];
    const double t = bary_[i] / d;
    num += t * ring[i];
    den += t;
  }
  return num / den;
}

cplx disc_quadrature(const DiscGrid& grid, std::span<const cplx> samples) {
  if (samples.size() != grid.size()) throw InvalidArgument("disc quadrature: sample count does not match the grid");
  cplx acc{0.0, 0.0};
  for (std::size_t j = 0; j < grid.size(); ++j) acc += grid.average_weight(j) * samples[j];
  return acc;
}

TransferOperator3D delta3d_operator(cplx strength, const DiscGrid& grid) {
  const std::size_t nn = grid.size();
  const auto n = static_cast<Eigen::Index>(nn);
  const Mat2 mixer = channel_mixer();
  VectorXc avg(n);
  for (std::size_t l = 0; l < nn; ++l) avg(static_cast<Eigen::Index>(l)) = grid.average_weight(l);
  MatrixXc kernel(2 * n, 2 * n);
  MatrixXc k0(2 * n, 2);
  for (std::size_t j = 0; j < nn; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const cplx pref = -I * strength / (2.0 * grid.omega(j));
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        k0(a * n + jj, b) = pref * mixer(a, b);
        kernel.block(a * n + jj, b * n, 1, n) = (pref * mixer(a, b)) * avg.transpose();
      }
    }
  }
  std::vector<Mat2> nodes(nn, Mat2::Identity());
  return TransferOperator3D(grid, [](const DiscGrid::Momentum&) -> Mat2 { return Mat2::Identity(); },
                            std::move(nodes), Mat2::Identity(), std::move(kernel), std::move(k0));
}

OutgoingSolution solve_outgoing_3d(const TransferOperator3D& m, cplx incident) { return solve_outgoing(m, incident); }

cplx amplitude3d(const SpectralAmplitude& T_plus, const SpectralAmplitude& T_minus, const DiscGrid& grid,
                 double theta, double phi) {
  const double c = std::cos(theta);
  if (std::abs(c) < 1e-14) throw InvalidArgument("amplitude3d: cos(theta) = 0 is excluded");
  const SpectralAmplitude& t = c > 0.0 ? T_plus : T_minus;
  if (static_cast<std::size_t>(t.smooth.size()) != grid.size()) {
    throw InvalidArgument("amplitude3d: amplitude does not match the grid");
  }
  std::vector<cplx> weighted(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) weighted[j] = grid.omega(j) * t.smooth(static_cast<Eigen::Index>(j));
  const double s = grid.k() * std::sin(theta);
  const cplx wt = grid.interpolate(weighted, {s * std::cos(phi), s * std::sin(phi)});
  // omega(p) = k |cos theta| cancels the prefactor.
  return -I * wt / (2.0 * pi);
}

cplx delta3d_f(cplx strength, double k) {
  const cplx denom = 4.0 * pi + I * k * strength;
  if (std::abs(denom) <= 1e-12 * std::max(4.0 * pi, std::abs(k * strength))) {
    throw SpectralSingularity("3D delta potential: 4pi + i k z vanishes");
  }
  return -strength / denom;
}

cplx scattering_length(cplx strength) { return strength / (4.0 * pi); }

double cross_section_scale(cplx strength) {
  if (std::abs(strength) == 0.0) throw InvalidArgument("cross-section scale undefined for z = 0");
  return 4.0 * pi / std::abs(strength);
}

namespace {

bool is_layered(const PotentialSpec& pot) {
  if (std::holds_alternative<Slab>(pot)) return true;
  if (const auto* s = std::get_if<Sum>(&pot)) {
    return std::all_of(s->members.begin(), s->members.end(),
                       [](const SumMember& m) { return is_layered(m.potential); });
  }
  return false;
}

void require_layered(const PotentialSpec& pot) {
  if (!is_layered(pot)) {
    throw UnsupportedEvaluation("3D evolution supports z-layered potentials (slabs and sums of slabs)");
  }
}

void require_channels(const DiscGrid& grid) {
  if (grid.size() > kMaxChannels3D) {
    throw ResourceLimit("3D grid has " + std::to_string(grid.size()) + " channels; the limit is " +
                        std::to_string(kMaxChannels3D));
  }
}

}  // namespace

HamiltonianBlock effective_hamiltonian_3d(const PotentialSpec& pot, double z, const DiscGrid& grid) {
  require_channels(grid);
  require_layered(pot);
  const auto n = static_cast<Eigen::Index>(grid.size());
  MatrixXc v = MatrixXc::Zero(n, n);
  v.diagonal().setConstant(uniform_profile(pot, z, grid.k()));
  std::vector<double> omegas(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) omegas[j] = grid.omega(j);
  const MatrixXc h = detail::assemble_hamiltonian(v, omegas, z);
  HamiltonianBlock out;
  out.x = z;
  out.h11 = h.topLeftCorner(n, n);
  out.h12 = h.topRightCorner(n, n);
  out.h21 = h.bottomLeftCorner(n, n);
  out.h22 = h.bottomRightCorner(n, n);
  return out;
}

TransferOperator3D evolve_transfer_3d(const PotentialSpec& pot, const DiscGrid& grid, const EvolutionConfig& cfg) {
  require_channels(grid);
  require_layered(pot);
  validate(pot);
  std::vector<double> bps;
  detail::collect_breakpoints(pot, bps);
  const auto segments = detail::make_segments(Interval{cfg.x_min, cfg.x_max}, bps, cfg.steps);
  const double k = grid.k();
  detail::UniformFn uniform = [pot, k](double z) { return uniform_profile(pot, z, k); };
  detail::SliceFn slice = [&pot, k](double z) {
    detail::Slice s;
    s.uniform = uniform_profile(pot, z, k);
    return s;
  };
  const bool dense = !cfg.exploit_diagonal;
  TransferOperator3D op = detail::evolve_operator(grid, segments, slice, uniform, dense);
  if (cfg.halving_check) {
    TransferOperator3D fine = detail::evolve_operator(grid, detail::with_steps(segments, 2), slice, uniform, dense);
    const double delta = detail::operator_distance(op, fine);
    if (delta > cfg.halving_tolerance && cfg.on_warning) {
      cfg.on_warning(AccuracyWarning{"evolve_transfer_3d", cfg.steps, delta});
    }
  }
  return op;
}

TransferOperator3D slab_operator_3d(const SlabParams& sp, const DiscGrid& grid, double z_start) {
  return slab_operator_on(sp, grid, z_start);
}

}  // namespace tmscat
