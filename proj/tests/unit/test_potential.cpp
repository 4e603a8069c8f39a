#include <cmath>

#include <gtest/gtest.h>

#include "tmscat/errors.hpp"
#include "tmscat/gauss_legendre.hpp"
#include "tmscat/potential.hpp"

namespace tmscat {
namespace {

// int dy e^{-iqy} v(x, y) for a Gaussian by direct quadrature on a wide window.
cplx numeric_fourier_y(const GaussianBump& g, double x, double q) {
  const QuadratureRule r = gauss_legendre(200, g.y0 - 12.0 * g.sigma_y, g.y0 + 12.0 * g.sigma_y);
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const double y = r.nodes[i];
    const double dx = x - g.x0;
    const double dy = y - g.y0;
    const cplx v = g.amplitude * std::exp(-dx * dx / (2 * g.sigma_x * g.sigma_x)) *
                   std::exp(-dy * dy / (2 * g.sigma_y * g.sigma_y));
    acc += r.weights[i] * std::exp(-I * q * y) * v;
  }
  return acc;
}

TEST(FourierY, UnitGaussianAtZeroIsSqrtTwoPi) {
  const PotentialSpec g = GaussianBump{cplx{1.0, 0.0}, 0.0, 0.0, 1.0, 1.0};
  EXPECT_NEAR(std::abs(fourier_y(g, 0.0, 0.0) - std::sqrt(2.0 * pi)), 0.0, 1e-14);
}

TEST(FourierY, MatchesDirectIntegration) {
  const GaussianBump g{cplx{0.7, -0.2}, 0.3, 0.4, 0.6, 0.8};
  for (double q : {-2.0, 0.0, 0.5, 3.0}) {
    for (double x : {-0.5, 0.3, 1.2}) {
      EXPECT_NEAR(std::abs(fourier_y(g, x, q) - numeric_fourier_y(g, x, q)), 0.0, 1e-12);
    }
  }
}

TEST(FourierY, LinearInAmplitude) {
  const GaussianBump a{cplx{1.0, 0.0}, 0.0, 0.2, 1.0, 0.5};
  GaussianBump b = a;
  b.amplitude = cplx{-2.5, 1.5};
  const cplx fa = fourier_y(a, 0.1, 0.7);
  const cplx fb = fourier_y(b, 0.1, 0.7);
  EXPECT_NEAR(std::abs(fb - b.amplitude * fa), 0.0, 1e-14);
}

TEST(FourierY, EvenInQForCentredBump) {
  const PotentialSpec g = GaussianBump{cplx{1.0, 0.3}, 0.0, 0.0, 1.0, 0.7};
  EXPECT_EQ(fourier_y(g, 0.2, 1.3), fourier_y(g, 0.2, -1.3));
}

TEST(FourierY, ConjugateSymmetryForRealPotential) {
  const PotentialSpec g = GaussianBump{cplx{1.0, 0.0}, 0.0, 0.5, 1.0, 0.7};
  const cplx a = fourier_y(g, 0.2, 1.3);
  const cplx b = fourier_y(g, 0.2, -1.3);
  EXPECT_NEAR(std::abs(a - std::conj(b)), 0.0, 1e-15);
}

TEST(FourierY, SymbolicFactorsThrow) {
  EXPECT_THROW(fourier_y(Slab{cplx{2.0, 0.0}, 1.0, 0.0}, 0.5, 0.0), UnsupportedEvaluation);
  EXPECT_THROW(fourier_y(Delta2D{cplx{1.0, 0.0}}, 0.0, 0.0), UnsupportedEvaluation);
}

TEST(UniformProfile, SlabGivesZTildeInsideOnly) {
  const PotentialSpec s = Slab{cplx{2.0, 0.1}, 1.0, 0.5};
  const double k = 2.0;
  EXPECT_EQ(uniform_profile(s, 1.0, k), k * k * (1.0 - cplx{2.0, 0.1}));
  EXPECT_EQ(uniform_profile(s, 0.2, k), cplx{});
  EXPECT_EQ(uniform_profile(s, 1.7, k), cplx{});
}

TEST(FourierXY, GaussianMatchesAnalyticTransform) {
  const GaussianBump g{cplx{1.0, 0.0}, 0.0, 0.0, 0.5, 2.0};
  const double kx = 0.7;
  const double ky = -0.4;
  const cplx expected = 2.0 * pi * 0.5 * 2.0 * std::exp(-0.5 * (0.25 * kx * kx + 4.0 * ky * ky));
  EXPECT_NEAR(std::abs(fourier_xy(g, kx, ky) - expected), 0.0, 1e-14);
  EXPECT_EQ(fourier_xy(Delta2D{cplx{0.3, 0.2}}, 1.0, 2.0), cplx(0.3, 0.2));
}

TEST(Validate, RejectsBadGeometry) {
  EXPECT_THROW(validate(Slab{cplx{2.0, 0.0}, 0.0, 0.0}), InvalidArgument);
  EXPECT_THROW(validate(GaussianBump{cplx{1.0, 0.0}, 0.0, 0.0, -1.0, 1.0}), InvalidArgument);
  Sum s;
  s.members.push_back({Slab{cplx{2.0, 0.0}, 1.0, 0.0}, Interval{0.0, 1.0}});
  s.members.push_back({Slab{cplx{2.0, 0.0}, 1.0, 0.5}, Interval{0.5, 1.5}});
  EXPECT_THROW(validate(s), InvalidArgument);
}

TEST(Validate, TouchingSupportsAreAllowed) {
  Sum s;
  s.members.push_back({Slab{cplx{2.0, 0.0}, 1.0, 0.0}, Interval{0.0, 1.0}});
  s.members.push_back({Slab{cplx{3.0, 0.0}, 1.0, 1.0}, Interval{1.0, 2.0}});
  EXPECT_NO_THROW(validate(s));
  const Interval w = support_window(s);
  EXPECT_EQ(w.lo, 0.0);
  EXPECT_EQ(w.hi, 2.0);
}

TEST(SupportWindow, GaussianTailsAtEightSigma) {
  const Interval w = support_window(GaussianBump{cplx{1.0, 0.0}, 1.0, 0.0, 0.5, 1.0});
  EXPECT_DOUBLE_EQ(w.lo, 1.0 - 4.0);
  EXPECT_DOUBLE_EQ(w.hi, 1.0 + 4.0);
}

TEST(Document, RoundTripsEveryKind) {
  Sum sum;
  sum.members.push_back({Slab{cplx{1.5, -0.25}, 0.5, 0.0}, Interval{0.0, 0.5}});
  sum.members.push_back({GaussianBump{cplx{0.1, 0.2}, 2.0, -0.5, 0.25, 0.75}, Interval{0.5, 4.0}});
  const std::vector<PotentialSpec> pots = {
      Delta2D{cplx{1.0, -3.0}},
      Delta3D{cplx{0.1, 0.7}},
      Slab{cplx{2.0, 0.01}, 1.0, 0.3},
      SlabWithDefect{cplx{2.0, 0.01}, 1.0, cplx{1.0, 0.0}},
      GaussianBump{cplx{0.5, 0.0}, 0.1, 0.2, 0.3, 0.4},
      sum,
  };
  for (const auto& p : pots) {
    const std::string doc = to_document(p);
    EXPECT_EQ(to_document(potential_from_document(doc)), doc);
  }
}

TEST(Document, NumbersMayBeStringsOrLiterals) {
  const PotentialSpec a = potential_from_document(
      R"({"kind": "slab", "epsilon": {"re": "2", "im": 0.5}, "thickness": 1.25})");
  const auto& s = std::get<Slab>(a);
  EXPECT_EQ(s.epsilon, cplx(2.0, 0.5));
  EXPECT_EQ(s.thickness, 1.25);
  EXPECT_EQ(s.x_start, 0.0);
}

TEST(Document, MalformedInputsThrowParseError) {
  EXPECT_THROW(potential_from_document("{"), ParseError);
  EXPECT_THROW(potential_from_document(R"({"strength": 1})"), ParseError);
  EXPECT_THROW(potential_from_document(R"({"kind": "torus"})"), ParseError);
  EXPECT_THROW(potential_from_document(R"({"kind": "slab", "epsilon": "2"})"), ParseError);
  EXPECT_THROW(potential_from_document(R"({"kind": "slab", "epsilon": "2x", "thickness": 1})"), ParseError);
  EXPECT_THROW(potential_from_document(R"({"kind": "slab", "epsilon": 2, "thickness": -1})"), ParseError);
}

TEST(IsXSingular, DeltaKindsOnly) {
  EXPECT_TRUE(is_x_singular(Delta2D{cplx{1.0, 0.0}}));
  EXPECT_TRUE(is_x_singular(SlabWithDefect{cplx{2.0, 0.0}, 1.0, cplx{1.0, 0.0}}));
  EXPECT_FALSE(is_x_singular(Slab{cplx{2.0, 0.0}, 1.0, 0.0}));
  EXPECT_FALSE(is_x_singular(GaussianBump{cplx{1.0, 0.0}, 0.0, 0.0, 1.0, 1.0}));
}

}  // namespace
}  // namespace tmscat
