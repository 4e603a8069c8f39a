#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "tmscat/closed_forms.hpp"
#include "tmscat/errors.hpp"
#include "tmscat/evolution.hpp"
#include "tmscat/gauss_legendre.hpp"
#include "tmscat/oracle.hpp"
#include "tmscat/potential.hpp"

namespace tmscat {
namespace {

EvolutionConfig quiet(const PotentialSpec& pot, std::size_t steps) {
  EvolutionConfig cfg = EvolutionConfig::for_potential(pot, steps);
  cfg.halving_check = false;
  return cfg;
}

double max_abs(const MatrixXc& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

TEST(PotentialKernel, ZeroPotentialGivesZeroMatrix) {
  const MomentumGrid g(2.0, 6);
  const PotentialSpec zero = GaussianBump{cplx{0.0, 0.0}, 0.0, 0.0, 1.0, 1.0};
  EXPECT_TRUE(potential_kernel(zero, 0.3, g).isZero(0.0));
}

TEST(PotentialKernel, SlabIsZTildeTimesIdentityInside) {
  const double k = 2.0;
  const cplx eps{2.0, 0.01};
  const MomentumGrid g(k, 5);
  const MatrixXc v = potential_kernel(Slab{eps, 1.0, 0.0}, 0.5, g);
  const MatrixXc expected = (k * k * (1.0 - eps)) * MatrixXc::Identity(5, 5);
  EXPECT_EQ(v, expected);
  EXPECT_TRUE(potential_kernel(Slab{eps, 1.0, 0.0}, 1.5, g).isZero(0.0));
}

TEST(PotentialKernel, GaussianDiagonalMatchesDirectIntegration) {
  const GaussianBump gb{cplx{0.8, 0.1}, 0.0, 0.3, 0.7, 0.9};
  const MomentumGrid g(2.0, 8);
  const double x = 0.25;
  const MatrixXc v = potential_kernel(gb, x, g);
  const QuadratureRule r = gauss_legendre(160, gb.y0 - 10.0, gb.y0 + 10.0);
  cplx integral{0.0, 0.0};
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const double dy = r.nodes[i] - gb.y0;
    integral += r.weights[i] * gb.amplitude * std::exp(-x * x / (2 * gb.sigma_x * gb.sigma_x)) *
                std::exp(-dy * dy / (2 * gb.sigma_y * gb.sigma_y));
  }
  for (std::size_t j = 0; j < g.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    EXPECT_NEAR(std::abs(v(jj, jj) - g.average_weight(j) * integral), 0.0, 1e-8);
  }
}

TEST(PotentialKernel, PointInteractionIsUnsupported) {
  const MomentumGrid g(1.0, 4);
  EXPECT_THROW(potential_kernel(Delta2D{cplx{1.0, 0.0}}, 0.0, g), UnsupportedEvaluation);
}

TEST(EffectiveHamiltonian, ZeroPotentialHasZeroBlocks) {
  const MomentumGrid g(1.0, 4);
  const HamiltonianBlock h = effective_hamiltonian(GaussianBump{cplx{0.0, 0.0}, 0.0, 0.0, 1.0, 1.0}, 0.1, g);
  EXPECT_TRUE(h.assembled().isZero(0.0));
}

TEST(EffectiveHamiltonian, ChannelStructureAtOrigin) {
  const MomentumGrid g(2.0, 6);
  const HamiltonianBlock h = effective_hamiltonian(GaussianBump{cplx{1.0, 0.2}, 0.0, 0.0, 1.0, 0.6}, 0.0, g);
  EXPECT_LT(max_abs(h.h11 - h.h12), 1e-15);
  EXPECT_LT(max_abs(h.h21 + h.h11), 1e-15);
  EXPECT_LT(max_abs(h.h22 + h.h11), 1e-15);
  EXPECT_LT(max_abs(h.h11 + h.h22), 1e-15);
}

TEST(EffectiveHamiltonian, PhasesAwayFromOrigin) {
  // H12 = H11 D-^2 and H21 = -D+^2 H11 with D+-(x) = e^{+-i omega x}.
  const MomentumGrid g(2.0, 4);
  const double x = 0.7;
  const HamiltonianBlock h = effective_hamiltonian(GaussianBump{cplx{1.0, 0.0}, 0.5, 0.0, 1.0, 1.0}, x, g);
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t l = 0; l < 4; ++l) {
      const auto jj = static_cast<Eigen::Index>(j);
      const auto ll = static_cast<Eigen::Index>(l);
      const cplx dl = std::exp(-I * g.omega(l) * x);
      const cplx dj = std::exp(I * g.omega(j) * x);
      EXPECT_NEAR(std::abs(h.h12(jj, ll) - h.h11(jj, ll) * dl * dl), 0.0, 1e-14);
      EXPECT_NEAR(std::abs(h.h21(jj, ll) + dj * dj * h.h11(jj, ll)), 0.0, 1e-14);
    }
  }
}

TEST(EvolveTransfer, ZeroPotentialIsIdentity) {
  const MomentumGrid g(2.0, 6);
  const PotentialSpec zero = GaussianBump{cplx{0.0, 0.0}, 0.0, 0.0, 1.0, 1.0};
  const TransferOperator op = evolve_transfer(zero, g, quiet(zero, 100));
  EXPECT_TRUE(op.kernel().isZero(0.0));
  EXPECT_TRUE(op.kernel_at_zero().isZero(0.0));
  EXPECT_EQ(op.mult_at_zero(), Mat2::Identity());
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(op.mult_at_node(j), Mat2::Identity());
}

TEST(EvolveTransfer, SlabMatchesClosedForm) {
  const SlabParams sp{cplx{2.0, 0.0}, 1.0, 2.0};
  const MomentumGrid g(sp.k, 8);
  const PotentialSpec pot = Slab{sp.epsilon, sp.L, 0.0};
  const TransferOperator num = evolve_transfer(pot, g, quiet(pot, 4000));
  const TransferOperator ref = slab_operator(sp, g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        const cplx b = ref.mult_at_node(j)(r, c);
        EXPECT_LT(std::abs(num.mult_at_node(j)(r, c) - b), 1e-6 * std::max(1.0, std::abs(b)));
      }
    }
  }
  EXPECT_LT((num.mult_at_zero() - ref.mult_at_zero()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(EvolveTransfer, DenseAndDiagonalPathsAgreeForSlab) {
  const MomentumGrid g(2.0, 6);
  const PotentialSpec pot = Slab{cplx{1.5, 0.2}, 0.8, 0.0};
  EvolutionConfig a = quiet(pot, 400);
  EvolutionConfig b = a;
  b.exploit_diagonal = false;
  const TransferOperator fa = evolve_transfer(pot, g, a);
  const TransferOperator fb = evolve_transfer(pot, g, b);
  EXPECT_LT(max_abs(fa.dense() - fb.dense()), 1e-13);
  EXPECT_LT(max_abs(fb.kernel()), 1e-13);
}

TEST(EvolveTransfer, GroupPropertyOnGaussian) {
  const MomentumGrid g(2.0, 8);
  const PotentialSpec pot = GaussianBump{cplx{0.6, 0.1}, 0.0, 0.0, 0.5, 0.8};
  EvolutionConfig whole = quiet(pot, 800);
  whole.x_min = -4.0;
  whole.x_max = 4.0;
  EvolutionConfig left = whole;
  left.x_max = 0.5;
  left.steps = 450;
  EvolutionConfig right = whole;
  right.x_min = 0.5;
  right.steps = 350;
  const TransferOperator full = evolve_transfer(pot, g, whole);
  const TransferOperator parts = compose(evolve_transfer(pot, g, right), evolve_transfer(pot, g, left));
  EXPECT_LT(max_abs(full.dense() - parts.dense()), 1e-9);
  EXPECT_LT(max_abs(full.kernel_at_zero() - parts.kernel_at_zero()), 1e-9);
}

TEST(EvolveTransfer, FourthOrderInStepSize) {
  const MomentumGrid g(2.0, 6);
  const PotentialSpec pot = GaussianBump{cplx{1.0, 0.0}, 0.0, 0.0, 0.5, 0.8};
  const ConvergenceReport rep = convergence_report(
      [&](std::size_t steps) {
        const TransferOperator op = evolve_transfer(pot, g, quiet(pot, steps));
        return op.kernel()(0, 1) + op.kernel_at_zero()(2, 0);
      },
      {40, 80, 160});
  ASSERT_TRUE(rep.order.has_value());
  EXPECT_GE(*rep.order, 3.5);
}

TEST(EvolveTransfer, YEvenPotentialGivesMirrorSymmetricKernel) {
  const MomentumGrid g(2.0, 7);
  const PotentialSpec pot = GaussianBump{cplx{0.5, 0.2}, 0.3, 0.0, 0.6, 0.9};
  const TransferOperator op = evolve_transfer(pot, g, quiet(pot, 300));
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const MatrixXc blk = op.kernel_block(a, b);
      for (std::size_t j = 0; j < g.size(); ++j) {
        for (std::size_t l = 0; l < g.size(); ++l) {
          const cplx lhs = blk(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
          const cplx rhs = blk(static_cast<Eigen::Index>(g.mirror(j)), static_cast<Eigen::Index>(g.mirror(l)));
          EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-13);
        }
      }
    }
  }
}

TEST(EvolveTransfer, FirstOrderPartScalesLinearly) {
  // The kernel is c K1 + c^2 K2 + ...; halving c halves it up to O(c^2).
  const MomentumGrid g(2.0, 6);
  auto kernel_for = [&](double c) {
    const PotentialSpec pot = GaussianBump{cplx{c, 0.0}, 0.0, 0.0, 0.5, 0.8};
    return evolve_transfer(pot, g, quiet(pot, 200)).kernel();
  };
  const MatrixXc k1 = kernel_for(0.02);
  const MatrixXc k2 = kernel_for(0.01);
  const MatrixXc k4 = kernel_for(0.005);
  const double d1 = max_abs(k1 - 2.0 * k2);
  const double d2 = max_abs(k2 - 2.0 * k4);
  EXPECT_LT(d1, 1e-2 * max_abs(k1));
  EXPECT_NEAR(d1 / d2, 4.0, 0.2);
}

TEST(EvolveTransfer, BornAgreementAtSmallAmplitude) {
  const double k = 2.0;
  const MomentumGrid g(k, 8);
  auto discrepancy = [&](double c) {
    const PotentialSpec pot = GaussianBump{cplx{c, 0.0}, 0.0, 0.0, 0.5, 0.8};
    const OutgoingSolution s = solve_outgoing(evolve_transfer(pot, g, quiet(pot, 400)));
    double d = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Born1 b = born1_T(pot, k, g.node(j));
      d = std::max(d, std::abs(s.T_plus.smooth(static_cast<Eigen::Index>(j)) - b.smooth_plus));
      d = std::max(d, std::abs(s.T_minus.smooth(static_cast<Eigen::Index>(j)) - b.smooth_minus));
    }
    return d / (c * c);
  };
  const double r1 = discrepancy(1e-2);
  const double r2 = discrepancy(5e-3);
  EXPECT_NEAR(r2 / r1, 1.0, 0.05);
}

TEST(EvolveTransfer, HalvingCheckWarnsWhenUnderResolved) {
  const MomentumGrid g(2.0, 4);
  const PotentialSpec pot = Slab{cplx{4.0, 0.0}, 2.0, 0.0};
  EvolutionConfig cfg = EvolutionConfig::for_potential(pot, 4);
  std::vector<AccuracyWarning> seen;
  cfg.on_warning = [&](const AccuracyWarning& w) { seen.push_back(w); };
  (void)evolve_transfer(pot, g, cfg);
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_EQ(seen[0].op, "evolve_transfer");
  EXPECT_EQ(seen[0].steps, 4u);
  EXPECT_GT(seen[0].delta, cfg.halving_tolerance);

  seen.clear();
  cfg.steps = 4000;
  (void)evolve_transfer(pot, g, cfg);
  EXPECT_TRUE(seen.empty());
}

TEST(EvolveTransfer, PointInteractionsAreRejected) {
  const MomentumGrid g(2.0, 4);
  const PotentialSpec pot = Delta2D{cplx{1.0, 0.0}};
  EXPECT_THROW(evolve_transfer(pot, g, EvolutionConfig{}), UnsupportedEvaluation);
}

TEST(EvolveTransfer, SumOfSlabsEqualsProductOfClosedForms) {
  const double k = 2.0;
  const MomentumGrid g(k, 6);
  Sum s;
  s.members.push_back({Slab{cplx{2.0, 0.0}, 0.5, 0.0}, Interval{0.0, 0.5}});
  s.members.push_back({Slab{cplx{1.5, 0.1}, 0.7, 0.5}, Interval{0.5, 1.2}});
  const PotentialSpec pot = s;
  const TransferOperator num = evolve_transfer(pot, g, quiet(pot, 3000));
  const TransferOperator ref =
      compose(slab_operator(SlabParams{cplx{1.5, 0.1}, 0.7, k}, g, 0.5), slab_operator(SlabParams{cplx{2.0, 0.0}, 0.5, k}, g));
  EXPECT_LT(max_abs(num.dense() - ref.dense()), 1e-8);
  EXPECT_LT((num.mult_at_zero() - ref.mult_at_zero()).cwiseAbs().maxCoeff(), 1e-8);
}

}  // namespace
}  // namespace tmscat
