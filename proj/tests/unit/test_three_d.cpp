#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "tmscat/errors.hpp"
#include "tmscat/three_d.hpp"

namespace tmscat {
namespace {

TEST(DiscGrid, LayoutAndArguments) {
  const DiscGrid g(1.5, 3, 6);
  EXPECT_EQ(g.size(), 18u);
  EXPECT_EQ(g.radial_count(), 3u);
  EXPECT_EQ(g.azimuth_count(), 6u);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const auto p = g.node_momentum(j);
    EXPECT_NEAR(p[0] * p[0] + p[1] * p[1] + g.omega(j) * g.omega(j), 2.25, 1e-14);
    EXPECT_GT(g.omega(j), 0.0);
    EXPECT_LT(g.omega(j), 1.5);
  }
  // Rings run from the centre outwards.
  EXPECT_GT(g.omega(0), g.omega(6));
  EXPECT_THROW(DiscGrid(0.0, 3, 6), InvalidArgument);
  EXPECT_THROW(DiscGrid(1.0, 0, 6), InvalidArgument);
  EXPECT_THROW(DiscGrid(1.0, 3, 5), InvalidArgument);
}

TEST(DiscQuadrature, ConstantGivesDiscArea) {
  for (double k : {0.5, 2.0}) {
    const DiscGrid g(k, 6, 8);
    const std::vector<cplx> ones(g.size(), cplx{1.0, 0.0});
    EXPECT_NEAR(disc_quadrature(g, ones).real(), k * k / (4.0 * pi), 1e-14);
  }
}

TEST(DiscQuadrature, InverseOmegaIsExact) {
  for (double k : {0.3, 1.0, 4.0}) {
    for (std::size_t nr : {1u, 2u, 5u}) {
      const DiscGrid g(k, nr, 4);
      std::vector<cplx> s(g.size());
      for (std::size_t j = 0; j < g.size(); ++j) s[j] = 1.0 / g.omega(j);
      EXPECT_NEAR(disc_quadrature(g, s).real(), k / (2.0 * pi), 1e-14 * k);
    }
  }
}

TEST(DiscQuadrature, OddFunctionVanishes) {
  const DiscGrid g(1.0, 4, 8);
  std::vector<cplx> s(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) s[j] = g.node_momentum(j)[0];
  EXPECT_NEAR(std::abs(disc_quadrature(g, s)), 0.0, 1e-16);
  EXPECT_THROW(disc_quadrature(g, std::vector<cplx>(3)), InvalidArgument);
}

TEST(DiscGrid, InterpolationIsExactOnResolvedFunctions) {
  const DiscGrid g(2.0, 5, 8);
  auto f = [&](const DiscGrid::Momentum& p) {
    const double w = g.omega_at(p);
    const double phi = std::atan2(p[1], p[0]);
    return cplx{w * w * w - 1.0, 0.5 * w} * (1.0 + 0.3 * std::cos(phi) - 0.2 * std::sin(2.0 * phi));
  };
  std::vector<cplx> s(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) s[j] = f(g.node_momentum(j));
  for (const DiscGrid::Momentum p : {DiscGrid::Momentum{0.3, -0.4}, DiscGrid::Momentum{-1.2, 0.9},
                                     DiscGrid::Momentum{0.0, 1.5}}) {
    EXPECT_NEAR(std::abs(g.interpolate(s, p) - f(p)), 0.0, 1e-12);
  }
  EXPECT_THROW(g.omega_at({2.0, 1.0}), InvalidArgument);
}

TEST(Delta3D, ZeroStrengthIsIdentity) {
  const TransferOperator3D m = delta3d_operator(cplx{0.0, 0.0}, DiscGrid(1.0, 2, 4));
  EXPECT_TRUE(m.kernel().isZero(0.0));
  EXPECT_TRUE(m.kernel_at_zero().isZero(0.0));
}

TEST(Delta3D, SelfConsistentAmplitudes) {
  const cplx z{2.0, -1.0};
  const double k = 1.5;
  const DiscGrid g(k, 4, 8);
  const OutgoingSolution s = solve_outgoing_3d(delta3d_operator(z, g));
  const cplx b_plus_one = 4.0 * pi / (4.0 * pi + I * z * k);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const cplx expected = -I * z * b_plus_one / (2.0 * g.omega(j));
    EXPECT_NEAR(std::abs(s.T_plus.smooth(static_cast<Eigen::Index>(j)) - expected), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(s.T_minus.smooth(static_cast<Eigen::Index>(j)) - expected), 0.0, 1e-10);
  }
}

TEST(Delta3D, AmplitudeIsIsotropicAndMatchesClosedForm) {
  const cplx z{0.5, 0.25};
  const double k = 0.8;
  const DiscGrid g(k, 3, 6);
  const OutgoingSolution s = solve_outgoing_3d(delta3d_operator(z, g));
  const cplx expected = -z / (4.0 * pi + I * k * z);
  for (double theta : {0.1, 0.7, 1.4, 2.0, 3.0}) {
    for (double phi : {0.0, 0.9, 2.5, 4.0}) {
      EXPECT_NEAR(std::abs(amplitude3d(s.T_plus, s.T_minus, g, theta, phi) - expected), 0.0, 1e-10);
    }
  }
  EXPECT_THROW(amplitude3d(s.T_plus, s.T_minus, g, pi / 2.0, 0.0), InvalidArgument);
}

TEST(Delta3D, ScatteringLengthAndCrossSectionLaw) {
  EXPECT_NEAR(std::abs(scattering_length(cplx{4.0 * pi, 0.0}) - 1.0), 0.0, 1e-15);
  const cplx z{3.0, 0.0};
  const double mu = cross_section_scale(z);
  EXPECT_DOUBLE_EQ(mu, 4.0 * pi / 3.0);
  const double c0 = std::norm(delta3d_f(z, 0.5)) * (0.25 + mu * mu);
  for (double k : {1.0, 2.0, 8.0}) EXPECT_NEAR(std::norm(delta3d_f(z, k)) * (k * k + mu * mu), c0, 1e-12);
  EXPECT_NEAR(std::abs(-delta3d_f(z, 1e-14) - scattering_length(z)), 0.0, 1e-12);
  EXPECT_THROW(cross_section_scale(cplx{0.0, 0.0}), InvalidArgument);
}

TEST(Delta3D, SingularStrengthIsReported) {
  const double k = 2.0;
  const cplx z = 4.0 * pi * I / k;  // 4pi + i k z = 0
  EXPECT_THROW(delta3d_f(z, k), SpectralSingularity);
  const OutgoingSolution s = solve_outgoing_3d(delta3d_operator(z, DiscGrid(k, 3, 4)));
  EXPECT_EQ(s.diagnostic.kind, SingularityDiagnostic::Kind::singular);
}

TEST(Slab3D, EvolutionMatchesClosedForm) {
  const SlabParams sp{cplx{2.0, 0.01}, 1.0, 2.0};
  const DiscGrid g(sp.k, 3, 4);
  const PotentialSpec pot = Slab{sp.epsilon, sp.L, 0.0};
  EvolutionConfig cfg = EvolutionConfig::for_potential(pot, 3000);
  cfg.halving_check = false;
  const TransferOperator3D num = evolve_transfer_3d(pot, g, cfg);
  const TransferOperator3D ref = slab_operator_3d(sp, g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    EXPECT_LT((num.mult_at_node(j) - ref.mult_at_node(j)).cwiseAbs().maxCoeff(), 1e-8);
  }
  EXPECT_LT(num.kernel().cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Slab3D, HamiltonianIsDiagonalAndZeroOutside) {
  const DiscGrid g(2.0, 2, 4);
  const PotentialSpec pot = Slab{cplx{2.0, 0.0}, 1.0, 0.0};
  const HamiltonianBlock inside = effective_hamiltonian_3d(pot, 0.5, g);
  EXPECT_TRUE(inside.h11.isDiagonal(0.0));
  EXPECT_FALSE(inside.h11.isZero(0.0));
  EXPECT_TRUE(effective_hamiltonian_3d(pot, 1.5, g).assembled().isZero(0.0));
}

TEST(Slab3D, LimitsAndUnsupportedKinds) {
  EXPECT_THROW(effective_hamiltonian_3d(Slab{cplx{2.0, 0.0}, 1.0, 0.0}, 0.5, DiscGrid(2.0, 9, 8)), ResourceLimit);
  EXPECT_THROW(effective_hamiltonian_3d(GaussianBump{cplx{1.0, 0.0}, 0.0, 0.0, 1.0, 1.0}, 0.0, DiscGrid(2.0, 2, 4)),
               UnsupportedEvaluation);
}

TEST(Slab3D, AmplitudesScaleLinearly) {
  const DiscGrid g(1.0, 2, 4);
  const OutgoingSolution a = solve_outgoing_3d(delta3d_operator(cplx{0.4, 0.1}, g));
  const OutgoingSolution b = solve_outgoing_3d(delta3d_operator(cplx{0.4, 0.1}, g), cplx{3.0, 0.0});
  EXPECT_LT((b.T_plus.smooth - 3.0 * a.T_plus.smooth).cwiseAbs().maxCoeff(), 1e-14);
  const cplx fa = amplitude3d(a.T_plus, a.T_minus, g, 0.3, 0.2);
  const cplx fb = amplitude3d(b.T_plus, b.T_minus, g, 0.3, 0.2);
  EXPECT_NEAR(std::abs(fb - 3.0 * fa), 0.0, 1e-14);
}

}  // namespace
}  // namespace tmscat
