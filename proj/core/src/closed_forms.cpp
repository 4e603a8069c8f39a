#include "tmscat/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tmscat/errors.hpp"
#include "tmscat/gauss_legendre.hpp"

namespace tmscat {

namespace {

cplx index_of(cplx z_tilde, cplx w) { return std::sqrt(1.0 - z_tilde / (w * w)); }

// sin(z) / z, accurate near zero.
cplx sinc(cplx z) {
  if (std::abs(z) < 1e-4) {
    const cplx z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

struct SlabTrig {
  cplx c;         // cos(nLw)
  cplx np_sin;    // n+ sin(nLw)
  cplx nm_sin;    // n- sin(nLw)
};

SlabTrig slab_trig(cplx z_tilde, double L, cplx w) {
  const cplx n = index_of(z_tilde, w);
  const cplx arg = n * L * w;
  const cplx s = std::sin(arg);
  const cplx s_over_n = L * w * sinc(arg);
  return SlabTrig{std::cos(arg), 0.5 * (n * s + s_over_n), 0.5 * (n * s - s_over_n)};
}

cplx z_function(cplx z_tilde, double L, cplx w) {
  const cplx n = index_of(z_tilde, w);
  const cplx r = (n - 1.0) / (n + 1.0);
  return std::exp(-2.0 * I * n * L * w) - r * r;
}

bool vanishes(cplx value, double scale) { return std::abs(value) <= 64.0 * std::numeric_limits<double>::epsilon() * scale; }

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be finite");
}

}  // namespace

void SlabParams::validate() const {
  require_finite(epsilon.real(), "epsilon");
  require_finite(epsilon.imag(), "epsilon");
  require_finite(L, "slab thickness");
  require_finite(k, "wavenumber");
  if (!(L > 0.0)) throw InvalidArgument("slab thickness must be positive");
  if (!(k > 0.0)) throw InvalidArgument("wavenumber must be positive");
}

cplx SlabParams::n(cplx w) const { return index_of(z_tilde(), w); }

cplx SlabParams::n_plus(cplx w) const {
  const cplx nn = n(w);
  return 0.5 * (nn + 1.0 / nn);
}

cplx SlabParams::n_minus(cplx w) const {
  const cplx nn = n(w);
  return 0.5 * (nn - 1.0 / nn);
}

cplx SlabParams::refractive_index() const { return std::sqrt(epsilon); }

DefectParams DefectParams::from_wire(double zeta, double k) { return DefectParams{-I * zeta * k * k}; }

Mat2 slab_matrix(cplx z_tilde, double L, cplx w, double x_start) {
  const SlabTrig fwd = slab_trig(z_tilde, L, w);
  // n depends on w^2 only, so w -> -w flips the sign of the sine terms.
  const cplx e = std::exp(-I * w * L);
  Mat2 m;
  m(0, 0) = (fwd.c + I * fwd.np_sin) * e;
  m(1, 1) = (fwd.c - I * fwd.np_sin) / e;
  m(0, 1) = I * fwd.nm_sin * e;
  m(1, 0) = -I * fwd.nm_sin / e;
  if (x_start != 0.0) {
    const cplx shift = std::exp(-2.0 * I * w * x_start);
    m(0, 1) *= shift;
    m(1, 0) /= shift;
  }
  return m;
}

Mat2 slab_matrix(const SlabParams& sp, cplx w, double x_start) {
  return slab_matrix(sp.z_tilde(), sp.L, w, x_start);
}

TransferOperator slab_operator(const SlabParams& sp, const MomentumGrid& grid, double x_start) {
  return slab_operator_on(sp, grid, x_start);
}

cplx slab_Z(const SlabParams& sp, cplx w) { return z_function(sp.z_tilde(), sp.L, w); }

SlabXZ slab_xyz(const SlabParams& sp, cplx w) {
  const Mat2 m = slab_matrix(sp, w);
  const double mscale = std::max({std::abs(m(0, 0)), std::abs(m(0, 1)), std::abs(m(1, 0)), 1.0});
  if (vanishes(m(1, 1), mscale)) throw SpectralSingularity("slab: M22 vanishes");

  const cplx n = sp.n(w);
  const cplx r = (n - 1.0) / (n + 1.0);
  const cplx e = std::exp(-2.0 * I * n * sp.L * w);
  const cplx z = e - r * r;
  if (vanishes(z, std::abs(e) + std::norm(r))) throw SpectralSingularity("slab: Z vanishes");

  SlabXZ out;
  out.X = 1.0 - m(1, 0) / m(1, 1);
  out.Z = z;
  const cplx x_closed = 2.0 * (e + r) / ((n + 1.0) * z);
  out.identity_residual = std::abs(out.X - x_closed) / std::max(1.0, std::abs(out.X));
  return out;
}

cplx slab_Y(const SlabParams& sp, cplx strength, std::size_t quad_points) {
  sp.validate();
  if (quad_points < 1) throw InvalidArgument("slab_Y: quad_points must be positive");
  if (strength == cplx{0.0, 0.0}) return cplx{2.0, 0.0};

  // Scan (0, k] for near-zeros of M22 before integrating.
  const std::size_t scan = 8 * quad_points;
  for (std::size_t i = 1; i <= scan; ++i) {
    const double w = sp.k * std::sin(0.5 * pi * static_cast<double>(i) / static_cast<double>(scan));
    const Mat2 m = slab_matrix(sp, cplx{w, 0.0});
    const double rel = std::abs(m(1, 1)) / std::max(std::abs(m(1, 0)), 1.0);
    if (rel < 1e-8) throw NearResonance("slab_Y: X has a pole on (0, k]", w);
  }

  const QuadratureRule rule = gauss_legendre(quad_points, 0.0, 0.5 * pi);
  cplx integral{0.0, 0.0};
  for (std::size_t i = 0; i < quad_points; ++i) {
    const double w = sp.k * std::sin(rule.nodes[i]);
    const Mat2 m = slab_matrix(sp, cplx{w, 0.0});
    const cplx x = 1.0 - m(1, 0) / m(1, 1);
    if (!std::isfinite(std::abs(x)) || std::abs(x) > 1e8) {
      throw NearResonance("slab_Y: X has a pole on (0, k]", w);
    }
    integral += rule.weights[i] * x;
  }
  return 2.0 + (I * strength / pi) * integral;
}

namespace {

struct DefectCommon {
  cplx X_k;
  cplx Y_k;
  cplx m22_k;
};

DefectCommon defect_common(const SlabParams& sp, cplx strength, std::size_t quad_points) {
  const Mat2 mk = slab_matrix(sp, cplx{sp.k, 0.0});
  const double scale = std::max({std::abs(mk(0, 0)), std::abs(mk(0, 1)), std::abs(mk(1, 0)), 1.0});
  if (vanishes(mk(1, 1), scale)) throw SpectralSingularity("slab with defect: M22(k) vanishes");
  DefectCommon c;
  c.m22_k = mk(1, 1);
  c.X_k = 1.0 - mk(1, 0) / mk(1, 1);
  c.Y_k = slab_Y(sp, strength, quad_points);
  if (std::abs(c.Y_k) <= 1e-14 * std::max(1.0, std::abs(strength))) {
    throw SpectralSingularity("slab with defect: Y(k) vanishes");
  }
  return c;
}

SlabDefectPoint defect_point(const SlabParams& sp, cplx strength, const DefectCommon& c, double p) {
  if (!(std::abs(p) < sp.k)) throw InvalidArgument("slab with defect: need |p| < k");
  const double w = std::sqrt(sp.k * sp.k - p * p);
  const Mat2 m = slab_matrix(sp, cplx{w, 0.0});
  const double scale = std::max({std::abs(m(0, 0)), std::abs(m(0, 1)), std::abs(m(1, 0)), 1.0});
  if (vanishes(m(1, 1), scale)) throw SpectralSingularity("slab with defect: M22(omega) vanishes");
  const cplx x_w = 1.0 - m(1, 0) / m(1, 1);
  SlabDefectPoint out;
  out.delta_minus = c.X_k - 1.0;
  out.delta_plus = 1.0 / c.m22_k - 1.0;
  out.smooth_minus = -I * strength * c.X_k * x_w / (c.Y_k * w);
  out.smooth_plus = -I * strength * c.X_k / (c.Y_k * m(1, 1) * w);
  return out;
}

}  // namespace

SlabDefectPoint slab_defect_T(const SlabParams& sp, cplx strength, double p, std::size_t quad_points) {
  const DefectCommon c = defect_common(sp, strength, quad_points);
  return defect_point(sp, strength, c, p);
}

SlabDefectSolution slab_defect_T(const SlabParams& sp, cplx strength, const MomentumGrid& grid,
                                 std::size_t quad_points) {
  const DefectCommon c = defect_common(sp, strength, quad_points);
  const auto n = static_cast<Eigen::Index>(grid.size());
  SlabDefectSolution out;
  out.X_k = c.X_k;
  out.Y_k = c.Y_k;
  out.T_plus.delta_coeff = 1.0 / c.m22_k - 1.0;
  out.T_minus.delta_coeff = c.X_k - 1.0;
  out.T_plus.smooth.resize(n);
  out.T_minus.smooth.resize(n);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const SlabDefectPoint pt = defect_point(sp, strength, c, grid.node(j));
    const auto jj = static_cast<Eigen::Index>(j);
    out.T_plus.smooth(jj) = pt.smooth_plus;
    out.T_minus.smooth(jj) = pt.smooth_minus;
  }

  // Average T_- over (-k, k) with p = k cos t, Gauss-Legendre in t on (0, pi).
  const QuadratureRule check = gauss_legendre(2 * quad_points + 1, 0.0, pi);
  cplx average{0.0, 0.0};
  for (std::size_t i = 0; i < check.nodes.size(); ++i) {
    const double t = check.nodes[i];
    average += check.weights[i] * sp.k * std::sin(t) * defect_point(sp, strength, c, sp.k * std::cos(t)).smooth_minus;
  }
  const cplx b_tilde = (c.X_k - 1.0) + average / (2.0 * pi);
  out.identity_residual = std::abs(b_tilde + 1.0 - 2.0 * c.X_k / c.Y_k);
  return out;
}

TransferOperator delta2d_operator(cplx strength, const MomentumGrid& grid) {
  const std::size_t nn = grid.size();
  const auto n = static_cast<Eigen::Index>(nn);
  const Mat2 mixer = channel_mixer();
  MatrixXc kernel(2 * n, 2 * n);
  MatrixXc k0(2 * n, 2);
  for (std::size_t j = 0; j < nn; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const cplx pref = -I * strength / (2.0 * grid.omega(j));
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const cplx entry = pref * mixer(a, b);
        k0(a * n + jj, b) = entry;
        for (std::size_t l = 0; l < nn; ++l) {
          kernel(a * n + jj, b * n + static_cast<Eigen::Index>(l)) = entry * grid.average_weight(l);
        }
      }
    }
  }
  std::vector<Mat2> nodes(nn, Mat2::Identity());
  return TransferOperator(grid, [](const double&) -> Mat2 { return Mat2::Identity(); }, std::move(nodes),
                          Mat2::Identity(), std::move(kernel), std::move(k0));
}

cplx delta2d_f(cplx strength) {
  const cplx denom = 4.0 + I * strength;
  if (std::abs(denom) <= 1e-12 * std::max(4.0, std::abs(strength))) {
    throw SpectralSingularity("delta potential: 4 + i z vanishes");
  }
  return -std::sqrt(2.0 / pi) * strength / denom;
}

cplx delta2d_T(cplx strength, double omega) {
  const cplx denom = 4.0 + I * strength;
  if (std::abs(denom) <= 1e-12 * std::max(4.0, std::abs(strength))) {
    throw SpectralSingularity("delta potential: 4 + i z vanishes");
  }
  return -2.0 * I * strength / (denom * omega);
}

cplx born2d_f(cplx strength) { return -strength / (2.0 * std::sqrt(2.0 * pi)); }

double wire_modes(double zeta, WireMode mode) {
  if (mode == WireMode::lasing) {
    if (!(zeta < 0.0)) throw InvalidArgument("wire lasing requires zeta < 0");
    return 2.0 / std::sqrt(-zeta);
  }
  if (!(zeta > 0.0)) throw InvalidArgument("wire coherent perfect absorption requires zeta > 0");
  return 2.0 / std::sqrt(zeta);
}

namespace {

double gain_from_trig(double eta, double sin_t, double abs_cos, double L) {
  if (!(eta > 1.0) || !std::isfinite(eta)) throw InvalidArgument("threshold gain requires eta > 1");
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("threshold gain requires L > 0");
  const double root = std::sqrt(eta * eta - sin_t * sin_t);
  return 4.0 * root / (eta * L) * std::log((root + abs_cos) / std::sqrt(eta * eta - 1.0));
}

}  // namespace

double threshold_gain(double eta, double theta, double L) {
  double c = std::abs(std::cos(theta));
  if (c < 1e-15) c = 0.0;
  return gain_from_trig(eta, std::sin(theta), c, L);
}

double threshold_gain_deg(double eta, double theta_deg, double L) {
  if (!std::isfinite(theta_deg)) throw InvalidArgument("threshold gain: angle must be finite");
  // Fold into [0, 90] using g(t) = g(-t) = g(180 - t).
  double t = std::fmod(std::abs(theta_deg), 360.0);
  if (t > 180.0) t = 360.0 - t;
  if (t > 90.0) t = 180.0 - t;
  if (t == 0.0) return gain_from_trig(eta, 0.0, 1.0, L);
  if (t == 90.0) return gain_from_trig(eta, 1.0, 0.0, L);
  const double rad = t * pi / 180.0;
  return gain_from_trig(eta, std::sin(rad), std::cos(rad), L);
}

SingularityRoot spectral_singularity(const SlabParams& sp, SingularityUnknown unknown, cplx guess) {
  sp.validate();
  if (!std::isfinite(guess.real()) || !std::isfinite(guess.imag())) {
    throw InvalidArgument("spectral singularity: guess must be finite");
  }
  auto z_tilde_at = [&](cplx x) { return unknown == SingularityUnknown::k ? x * x * (1.0 - sp.epsilon) : sp.z_tilde(); };
  auto z_of = [&](cplx x) { return z_function(z_tilde_at(x), sp.L, x); };

  constexpr int kMaxIterations = 200;
  cplx x0 = guess;
  cplx x1 = guess + 1e-6 * std::max(1.0, std::abs(guess));
  cplx f0 = z_of(x0);
  cplx f1 = z_of(x1);
  for (int it = 1; it <= kMaxIterations; ++it) {
    const cplx df = f1 - f0;
    if (df == cplx{0.0, 0.0} || !std::isfinite(std::abs(f1))) {
      throw NoRoot("spectral singularity: secant iteration stalled", std::abs(f1));
    }
    const cplx x2 = x1 - f1 * (x1 - x0) / df;
    const cplx f2 = z_of(x2);
    if (!std::isfinite(std::abs(x2)) || !std::isfinite(std::abs(f2))) {
      throw NoRoot("spectral singularity: secant iteration diverged", std::abs(f1));
    }
    const bool small_step = std::abs(x2 - x1) < 1e-12 * std::max(1.0, std::abs(x2));
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    if (small_step && std::abs(f2) < 1e-10) {
      SingularityRoot out;
      out.root = x2;
      out.residual = std::abs(f2);
      out.m22_abs = std::abs(slab_matrix(z_tilde_at(x2), sp.L, x2)(1, 1));
      out.iterations = it;
      return out;
    }
  }
  throw NoRoot("spectral singularity: no convergence in 200 iterations", std::abs(f1));
}

}  // namespace tmscat
