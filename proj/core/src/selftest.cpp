#include "tmscat/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "tmscat/closed_forms.hpp"
#include "tmscat/errors.hpp"
#include "tmscat/evolution.hpp"
#include "tmscat/io.hpp"
#include "tmscat/oracle.hpp"
#include "tmscat/potential.hpp"
#include "tmscat/spectral.hpp"
#include "tmscat/three_d.hpp"
#include "tmscat/transfer_operator.hpp"

namespace tmscat {

namespace {

using Clock = std::chrono::steady_clock;

// Outcome of one check: pass flag and a short measured summary.
struct Outcome {
  bool passed;
  std::string detail;
};

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

double rel_diff(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double max_rel_diff(const Mat2& a, const Mat2& b) {
  double d = 0.0;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) d = std::max(d, rel_diff(a(r, c), b(r, c)));
  }
  return d;
}

template <class Grid>
double mult_distance(const BasicTransferOperator<Grid>& a, const BasicTransferOperator<Grid>& b) {
  double d = max_rel_diff(a.mult_at_zero(), b.mult_at_zero());
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, max_rel_diff(a.mult_at_node(j), b.mult_at_node(j)));
  d = std::max(d, a.kernel().cwiseAbs().maxCoeff());
  d = std::max(d, b.kernel().cwiseAbs().maxCoeff());
  return d;
}

EvolutionConfig quiet_config(const PotentialSpec& pot, std::size_t steps) {
  EvolutionConfig cfg = EvolutionConfig::for_potential(pot, steps);
  cfg.halving_check = false;
  return cfg;
}

// 1. delta2d_operator -> solve_outgoing -> amplitude equals the closed form.
Outcome delta2d_exactness() {
  const auto start = Clock::now();
  const MomentumGrid grid(1.0, 16);
  const std::vector<double> thetas = sample_angles(50);
  double worst = 0.0;
  for (cplx z : {cplx{1.0, 0.0}, cplx{0.0, 1.0}, cplx{2.0, -3.0}}) {
    const ScatteringResult r = scatter(delta2d_operator(z, grid), thetas);
    const cplx expected = delta2d_f(z);
    for (const auto& s : r.f_samples) worst = std::max(worst, std::abs(s.f - expected));
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  return {thetas.size() == 50 && worst < 1e-10 && secs < 1.0,
          "max |df| = " + sci(worst) + " over 150 samples, " + sci(secs) + " s"};
}

// 2. Second-order remainder of the Born approximation.
Outcome born_limit() {
  std::vector<double> ratios;
  for (double z : {1e-2, 1e-3, 1e-4}) {
    const cplx zz{z, 0.0};
    ratios.push_back(std::abs(delta2d_f(zz) - born2d_f(zz)) / (z * z));
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  const double spread = *hi / *lo - 1.0;
  return {spread < 0.05, "ratio " + sci(ratios.front()) + ", spread " + sci(spread)};
}

// 3. z = 4i is flagged by closed form and pipeline; wire round trip.
Outcome spectral_singularity_check() {
  bool closed_flagged = false;
  try {
    (void)delta2d_f(cplx{0.0, 4.0});
  } catch (const SpectralSingularity&) {
    closed_flagged = true;
  }
  const MomentumGrid grid(2.0, 16);
  const OutgoingSolution sol = solve_outgoing(delta2d_operator(cplx{0.0, 4.0}, grid));
  const bool pipeline_flagged = sol.diagnostic.kind == SingularityDiagnostic::Kind::singular;

  const double k = wire_modes(-1.0, WireMode::lasing);
  const cplx z = DefectParams::from_wire(-1.0, k).strength;
  const bool round_trip = k == 2.0 && z == cplx{0.0, 4.0};
  const double k_cpa = wire_modes(4.0, WireMode::cpa);
  const bool cpa = k_cpa == 1.0 && DefectParams::from_wire(4.0, k_cpa).strength == cplx{0.0, -4.0};
  return {closed_flagged && pipeline_flagged && round_trip && cpa,
          std::string("closed form ") + (closed_flagged ? "raised" : "silent") + ", pipeline " +
              to_string(sol.diagnostic.kind) + ", lasing k = " + format_decimal(k)};
}

// 4. Numeric evolution of the slab against the closed form.
Outcome slab_numeric() {
  const auto start = Clock::now();
  const SlabParams sp{cplx{2.0, 0.01}, 1.0, 2.0};
  const MomentumGrid grid(2.0, 16);
  const PotentialSpec pot = Slab{sp.epsilon, sp.L, 0.0};
  const TransferOperator num = evolve_transfer(pot, grid, EvolutionConfig::for_potential(pot, 4000));
  const TransferOperator ref = slab_operator(sp, grid);
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        const cplx a = num.mult_at_node(j)(r, c);
        const cplx b = ref.mult_at_node(j)(r, c);
        worst = std::max(worst, std::abs(a - b) / std::abs(b));
      }
    }
  }
  worst = std::max(worst, num.kernel().cwiseAbs().maxCoeff());
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  return {worst < 1e-6 && secs < 10.0, "max relative error " + sci(worst) + ", " + sci(secs) + " s"};
}

// 5. The p = 0 slab matrix equals the 1D rectangular barrier.
Outcome one_d_reduction() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> radius(0.0, 5.0);
  std::uniform_real_distribution<double> angle(-pi, pi);
  std::uniform_real_distribution<double> length(0.3, 2.0);
  std::uniform_real_distribution<double> wave(0.5, 3.0);
  double worst = 0.0;
  for (int draw = 0; draw < 10; ++draw) {
    const cplx eps = std::polar(radius(rng), angle(rng));
    const SlabParams sp{eps, length(rng), wave(rng)};
    const MomentumGrid grid(sp.k, 4);
    const Mat2 analytic = slab_operator(sp, grid).mult_at_zero();
    const cplx v0 = sp.z_tilde();
    const Transfer1D t = transfer_1d([v0](double) { return v0; }, Interval{0.0, sp.L}, sp.k, 20000);
    worst = std::max(worst, max_rel_diff(t.M, analytic));
  }
  return {worst < 1e-8, "max relative error " + sci(worst) + " over 10 draws"};
}

// 6. Half slabs compose to the full slab (closed, numeric, 3D).
Outcome composition() {
  const SlabParams sp{cplx{2.0, 0.01}, 1.0, 2.0};
  const SlabParams half{sp.epsilon, 0.5 * sp.L, sp.k};
  const MomentumGrid grid(sp.k, 16);
  const TransferOperator full = slab_operator(sp, grid);
  const double closed = mult_distance(compose(slab_operator(half, grid, half.L), slab_operator(half, grid)), full);

  const PotentialSpec left = Slab{sp.epsilon, half.L, 0.0};
  const PotentialSpec right = Slab{sp.epsilon, half.L, half.L};
  const TransferOperator num = compose(evolve_transfer(right, grid, quiet_config(right, 2000)),
                                       evolve_transfer(left, grid, quiet_config(left, 2000)));
  const double numeric = mult_distance(num, full);

  const DiscGrid disc(sp.k, 4, 8);
  const TransferOperator3D full3 = slab_operator_3d(sp, disc);
  const TransferOperator3D num3 = compose(evolve_transfer_3d(right, disc, quiet_config(right, 2000)),
                                          evolve_transfer_3d(left, disc, quiet_config(left, 2000)));
  const double three = std::max(mult_distance(num3, full3),
                                mult_distance(compose(slab_operator_3d(half, disc, half.L), slab_operator_3d(half, disc)), full3));
  return {closed < 1e-12 && numeric < 1e-6 && three < 1e-6,
          "closed " + sci(closed) + ", numeric " + sci(numeric) + ", 3D " + sci(three)};
}

// 7. Direct slab-with-defect amplitudes against the operator pipeline.
Outcome slab_defect() {
  const SlabParams sp{cplx{2.0, 0.01}, 1.0, 2.0};
  const cplx z{1.0, 0.0};
  const MomentumGrid grid(sp.k, 128);
  const SlabDefectSolution direct = slab_defect_T(sp, z, grid);
  const OutgoingSolution pipe = solve_outgoing(compose(slab_operator(sp, grid), delta2d_operator(z, grid)));
  double worst = std::max(rel_diff(pipe.T_plus.delta_coeff, direct.T_plus.delta_coeff),
                          rel_diff(pipe.T_minus.delta_coeff, direct.T_minus.delta_coeff));
  for (Eigen::Index j = 0; j < direct.T_plus.smooth.size(); ++j) {
    worst = std::max(worst, rel_diff(pipe.T_plus.smooth(j), direct.T_plus.smooth(j)));
    worst = std::max(worst, rel_diff(pipe.T_minus.smooth(j), direct.T_minus.smooth(j)));
  }
  return {worst < 1e-8 && direct.identity_residual < 1e-10,
          "max difference " + sci(worst) + ", identity residual " + sci(direct.identity_residual)};
}

// 8. Shape of the threshold-gain curve.
Outcome threshold_curve() {
  const double L = 1.0;
  bool ok = true;
  double worst_zero = 0.0;
  for (double eta : {1.2, 1.5, 3.0}) {
    const double g0 = threshold_gain_deg(eta, 0.0, L);
    const double expected = (2.0 / L) * std::log((eta + 1.0) / (eta - 1.0));
    worst_zero = std::max(worst_zero, std::abs(g0 - expected));
    double prev = g0;
    for (int t = 1; t <= 180; ++t) {
      const double g = threshold_gain_deg(eta, t, L);
      if (g > g0) ok = false;
      if (t <= 90 && !(g < prev)) ok = false;
      if (g != threshold_gain_deg(eta, 180 - t, L)) ok = false;
      prev = g;
    }
    if (threshold_gain_deg(eta, 90.0, L) != 0.0) ok = false;
  }
  return {ok && worst_zero < 1e-12, "theta = 0 error " + sci(worst_zero)};
}

// 9. Three-dimensional point interaction.
Outcome delta3d() {
  const cplx z{2.0, -1.0};
  const double k = 1.5;
  const DiscGrid grid(k, 4, 8);
  const OutgoingSolution sol = solve_outgoing_3d(delta3d_operator(z, grid));
  const cplx expected = delta3d_f(z, k);
  double worst = 0.0;
  double spread = 0.0;
  cplx first{};
  for (int s = 0; s < 32; ++s) {
    const double theta = pi * (static_cast<double>(s % 8) + 0.5) / 8.0;
    const double phi = 2.0 * pi * static_cast<double>(s / 8) / 4.0 + 0.3;
    const cplx f = amplitude3d(sol.T_plus, sol.T_minus, grid, theta, phi);
    if (s == 0) first = f;
    worst = std::max(worst, std::abs(f - expected));
    spread = std::max(spread, std::abs(f - first));
  }

  const double k_small = 1e-12;
  const DiscGrid tiny(k_small, 4, 8);
  const OutgoingSolution sol_small = solve_outgoing_3d(delta3d_operator(z, tiny));
  const cplx xi = -amplitude3d(sol_small.T_plus, sol_small.T_minus, tiny, 0.1, 0.0);
  const double xi_err = std::abs(xi - scattering_length(z));

  const cplx zr{3.0, 0.0};
  const double mu = cross_section_scale(zr);
  double law = 0.0;
  for (double kk : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const DiscGrid g(kk, 4, 8);
    const OutgoingSolution s = solve_outgoing_3d(delta3d_operator(zr, g));
    const cplx f = amplitude3d(s.T_plus, s.T_minus, g, 0.4, 1.0);
    law = std::max(law, std::abs(std::norm(f) * (kk * kk + mu * mu) - 1.0));
  }
  return {worst < 1e-10 && spread < 1e-10 && xi_err < 1e-10 && law < 1e-10,
          "|df| " + sci(worst) + ", isotropy " + sci(spread) + ", xi " + sci(xi_err) + ", cross-section law " +
              sci(law)};
}

// 10. Quadrature identities.
Outcome quadrature_identities() {
  double half_err = 0.0;
  for (std::size_t n : {2u, 7u, 16u, 64u}) {
    const MomentumGrid grid(1.3, n);
    const std::vector<cplx> ones(n, cplx{1.0, 0.0});
    half_err = std::max(half_err, std::abs(quadrature(grid, ones, Measure::over_omega) - 0.5));
  }
  double disc_err = 0.0;
  for (double k : {0.5, 1.0, 3.0}) {
    const DiscGrid grid(k, 5, 8);
    std::vector<cplx> inv(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) inv[j] = 1.0 / grid.omega(j);
    const cplx total = 4.0 * pi * pi * disc_quadrature(grid, inv);
    disc_err = std::max(disc_err, std::abs(total - 2.0 * pi * k) / (2.0 * pi * k));
  }
  return {half_err < 4.0 * std::numeric_limits<double>::epsilon() && disc_err < 1e-12,
          "(1/2pi) int dp/omega error " + sci(half_err) + ", disc 1/omega error " + sci(disc_err)};
}

// 11. Property suites.
Outcome properties() {
  const MomentumGrid grid(2.0, 12);

  // Free region: the potential vanishes on the evolution window.
  const PotentialSpec far_slab = Slab{cplx{2.0, 0.5}, 1.0, 5.0};
  EvolutionConfig free_cfg = quiet_config(far_slab, 200);
  free_cfg.x_min = 0.0;
  free_cfg.x_max = 4.0;
  const TransferOperator free_op = evolve_transfer(far_slab, grid, free_cfg);
  Sum sum;
  sum.members.push_back(SumMember{GaussianBump{cplx{1.0, 0.0}, 0.5, 0.0, 0.2, 1.0}, Interval{0.0, 1.0}});
  const PotentialSpec bounded = sum;
  EvolutionConfig dense_cfg = quiet_config(bounded, 50);
  dense_cfg.x_min = 2.0;
  dense_cfg.x_max = 3.0;
  const TransferOperator free_dense = evolve_transfer(bounded, grid, dense_cfg);
  bool identity = free_op.kernel().isZero(0.0) && free_dense.kernel().isZero(0.0) &&
                  free_dense.kernel_at_zero().isZero(0.0) && free_op.mult_at_zero() == Mat2::Identity() &&
                  free_dense.mult_at_zero() == Mat2::Identity();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    identity = identity && free_op.mult_at_node(j) == Mat2::Identity() && free_dense.mult_at_node(j) == Mat2::Identity();
  }

  // Associativity of composition.
  const PotentialSpec bump = GaussianBump{cplx{0.4, 0.1}, 2.5, 0.3, 0.25, 0.8};
  const TransferOperator a = slab_operator(SlabParams{cplx{1.5, 0.02}, 0.7, 2.0}, grid, 5.0);
  const TransferOperator b = evolve_transfer(bump, grid, quiet_config(bump, 400));
  const TransferOperator c = delta2d_operator(cplx{0.5, -0.2}, grid);
  const TransferOperator abc1 = compose(a, compose(b, c));
  const TransferOperator abc2 = compose(compose(a, b), c);
  const double scale = std::max(1.0, abc1.dense().cwiseAbs().maxCoeff());
  const double assoc = std::max((abc1.dense() - abc2.dense()).cwiseAbs().maxCoeff(),
                                (abc1.kernel_at_zero() - abc2.kernel_at_zero()).cwiseAbs().maxCoeff()) /
                       scale;

  // Linearity of the extraction in the incident strength.
  const cplx amp{2.0, -0.5};
  const OutgoingSolution unit = solve_outgoing(abc1);
  const OutgoingSolution scaled = solve_outgoing(abc1, amp);
  double lin = std::max(std::abs(scaled.T_plus.delta_coeff - amp * unit.T_plus.delta_coeff),
                        std::abs(scaled.T_minus.delta_coeff - amp * unit.T_minus.delta_coeff));
  lin = std::max(lin, (scaled.T_plus.smooth - amp * unit.T_plus.smooth).cwiseAbs().maxCoeff());
  lin = std::max(lin, (scaled.T_minus.smooth - amp * unit.T_minus.smooth).cwiseAbs().maxCoeff());

  // Parity of a y-even potential.
  const PotentialSpec centred = GaussianBump{cplx{0.5, 0.0}, 0.0, 0.0, 1.0, 1.0};
  const MomentumGrid pgrid(2.0, 16);
  const TransferOperator even = evolve_transfer(centred, pgrid, quiet_config(centred, 400));
  std::vector<double> thetas;
  for (double t : sample_angles(24)) {
    thetas.push_back(t);
    thetas.push_back(2.0 * pi - t);
  }
  const ScatteringResult r = scatter(even, thetas);
  double parity = 0.0;
  for (std::size_t i = 0; i + 1 < r.f_samples.size(); i += 2) {
    parity = std::max(parity, std::abs(r.f_samples[i].f - r.f_samples[i + 1].f));
  }

  return {identity && assoc < 1e-12 && lin < 1e-12 && parity < 1e-6,
          std::string("free identity ") + (identity ? "exact" : "broken") + ", associativity " + sci(assoc) +
              ", linearity " + sci(lin) + ", parity " + sci(parity)};
}

struct Check {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

std::vector<CriterionResult> run_acceptance(std::ostream& log) {
  const std::vector<Check> checks = {
      {1, "2D delta exactness", delta2d_exactness},
      {2, "Born limit", born_limit},
      {3, "spectral singularity", spectral_singularity_check},
      {4, "slab numeric vs analytic", slab_numeric},
      {5, "1D reduction", one_d_reduction},
      {6, "composition", composition},
      {7, "slab with defect", slab_defect},
      {8, "threshold-gain curve", threshold_curve},
      {9, "3D delta", delta3d},
      {10, "quadrature identities", quadrature_identities},
      {11, "property suites", properties},
  };
  const auto suite_start = Clock::now();
  std::vector<CriterionResult> results;
  for (const Check& c : checks) {
    CriterionResult res;
    res.id = c.id;
    res.name = c.name;
    const auto start = Clock::now();
    try {
      const Outcome o = c.run();
      res.passed = o.passed;
      res.detail = o.detail;
    } catch (const std::exception& e) {
      res.passed = false;
      res.detail = std::string("exception: ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (c.id == 11) {
      const double total = std::chrono::duration<double>(Clock::now() - suite_start).count();
      res.detail += ", suite " + sci(total) + " s";
      res.passed = res.passed && total < 60.0;
    }
    log << (res.passed ? "PASS" : "FAIL") << " [" << res.id << "] " << res.name << ": " << res.detail << '\n';
    log.flush();
    results.push_back(std::move(res));
  }
  return results;
}

int run_selftest(std::ostream& log) {
  const auto results = run_acceptance(log);
  const auto passed = std::count_if(results.begin(), results.end(), [](const CriterionResult& r) { return r.passed; });
  log << passed << "/" << results.size() << " criteria passed\n";
  return passed == static_cast<long>(results.size()) ? 0 : 1;
}

}  // namespace tmscat
