#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tmscat/types.hpp"

namespace tmscat {

/// Point interaction z delta(x) delta(y).
struct Delta2D {
  cplx strength;
};

/// Homogeneous slab of permittivity epsilon on [x_start, x_start + thickness],
/// i.e. v = k^2 (1 - epsilon) there and zero elsewhere. Independent of y.
struct Slab {
  cplx epsilon;
  double thickness = 1.0;
  double x_start = 0.0;
};

/// Slab on [0, L] with a line defect z delta(x) delta(y) on its left face.
struct SlabWithDefect {
  cplx epsilon;
  double thickness = 1.0;
  cplx strength;
};

/// amplitude * exp(-(x-x0)^2 / 2 sigma_x^2) * exp(-(y-y0)^2 / 2 sigma_y^2)
struct GaussianBump {
  cplx amplitude;
  double x0 = 0.0;
  double y0 = 0.0;
  double sigma_x = 1.0;
  double sigma_y = 1.0;
};

/// Point interaction z delta(x) delta(y) delta(z) in three dimensions.
struct Delta3D {
  cplx strength;
};

struct SumMember;

/// Superposition of pieces whose declared x-supports overlap at most at endpoints.
/// Each member only contributes inside its declared interval.
struct Sum {
  std::vector<SumMember> members;
};

using PotentialSpec = std::variant<Delta2D, Slab, SlabWithDefect, GaussianBump, Sum, Delta3D>;

struct SumMember {
  PotentialSpec potential;
  Interval support;
};

/// Throws InvalidArgument when thickness or widths are not positive, or when
/// Sum supports overlap by more than a point.
void validate(const PotentialSpec& pot);

/// Window of the scattering axis outside which the potential vanishes
/// (Gaussian tails truncated at 8 sigma_x).
Interval support_window(const PotentialSpec& pot);

/// True for potentials carrying a delta function in x (no pointwise kernel).
bool is_x_singular(const PotentialSpec& pot);

/// Transverse Fourier transform  int dy e^{-iqy} v(x, y).
///
/// Only smooth transforms are returned. A y-independent factor (slab) is a
/// symbolic 2pi delta(q), and a delta(x) factor is x-singular; both throw
/// UnsupportedEvaluation. Sum members contribute inside their support.
cplx fourier_y(const PotentialSpec& pot, double x, double q);

/// Smooth part of the transverse transform, with y-independent pieces skipped.
cplx smooth_fourier_y(const PotentialSpec& pot, double x, double q);

/// y-independent part v0(x) of the potential at wavenumber k (slab: k^2 (1 - eps)).
cplx uniform_profile(const PotentialSpec& pot, double x, double k);

/// Full two-dimensional transform int dx dy e^{-i(Kx x + Ky y)} v(x, y) for
/// potentials where it is finite (Gaussian, point interaction).
cplx fourier_xy(const PotentialSpec& pot, double kx, double ky);

/// Key-value document form. Complex numbers are {"re": ..., "im": ...} and
/// numbers are written as decimal strings; numbers are accepted either way on input.
std::string to_document(const PotentialSpec& pot);
PotentialSpec potential_from_document(std::string_view text);

}  // namespace tmscat
