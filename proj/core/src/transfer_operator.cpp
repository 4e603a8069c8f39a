#include "tmscat/transfer_operator.hpp"

#include <cmath>
#include <string>

namespace tmscat {

const char* to_string(SingularityDiagnostic::Kind kind) {
  switch (kind) {
    case SingularityDiagnostic::Kind::none:
      return "none";
    case SingularityDiagnostic::Kind::near_singular:
      return "near-singular";
    case SingularityDiagnostic::Kind::singular:
      return "singular";
  }
  return "unknown";
}

namespace {

std::vector<cplx> omega_weighted(const MomentumGrid& grid, const VectorXc& smooth) {
  if (static_cast<std::size_t>(smooth.size()) != grid.size()) {
    throw InvalidArgument("amplitude samples do not match the grid size");
  }
  std::vector<cplx> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) out[j] = grid.omega(j) * smooth(static_cast<Eigen::Index>(j));
  return out;
}

}  // namespace

cplx interpolate_smooth(const MomentumGrid& grid, const VectorXc& smooth, double p) {
  const double w = grid.omega_at(p);
  if (!(w > 0.0)) throw InvalidArgument("interpolate_smooth: T is undefined at |p| = k");
  return grid.interpolate(omega_weighted(grid, smooth), p) / w;
}

std::vector<AmplitudeSample> amplitude(const SpectralAmplitude& T_plus, const SpectralAmplitude& T_minus,
                                       const MomentumGrid& grid, std::span<const double> thetas) {
  const std::vector<cplx> wt_plus = omega_weighted(grid, T_plus.smooth);
  const std::vector<cplx> wt_minus = omega_weighted(grid, T_minus.smooth);
  const double prefactor = 1.0 / std::sqrt(2.0 * pi);
  const double k = grid.k();

  std::vector<AmplitudeSample> out;
  out.reserve(thetas.size());
  for (double theta : thetas) {
    double t = std::fmod(theta, 2.0 * pi);
    if (t < 0.0) t += 2.0 * pi;
    const double c = std::cos(t);
    if (std::abs(c) < 1e-14) {
      throw InvalidArgument("amplitude: undefined at cos(theta) = 0 (theta = " + std::to_string(theta) + ")");
    }
    double p = k * std::sin(t);
    p = std::clamp(p, -k, k);
    // omega(p) T(p) is interpolated directly; f = -i omega T / sqrt(2pi).
    const cplx wt = grid.interpolate(c > 0.0 ? wt_plus : wt_minus, p);
    out.push_back(AmplitudeSample{t, -I * wt * prefactor});
  }
  return out;
}

ScatteringResult scatter(const TransferOperator& m, std::span<const double> thetas) {
  OutgoingSolution sol = solve_outgoing(m);
  ScatteringResult r;
  r.f_samples = amplitude(sol.T_plus, sol.T_minus, m.grid(), thetas);
  r.T_plus = std::move(sol.T_plus);
  r.T_minus = std::move(sol.T_minus);
  r.diagnostic = sol.diagnostic;
  return r;
}

std::vector<double> sample_angles(std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // cos(2pi i / count) = 0 exactly when 4i / count is an odd integer.
    if ((4 * i) % count == 0 && ((4 * i) / count) % 2 == 1) continue;
    out.push_back(2.0 * pi * static_cast<double>(i) / static_cast<double>(count));
  }
  return out;
}

}  // namespace tmscat
