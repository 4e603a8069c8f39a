#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tmscat/spectral.hpp"
#include "tmscat/transfer_operator.hpp"
#include "tmscat/types.hpp"

namespace tmscat {

/// 17 significant digits, '.' decimal separator, independent of the locale.
std::string format_decimal(double value);

/// Parses a decimal string; throws ParseError on trailing garbage or empty input.
double parse_decimal(std::string_view text);

inline double rad_to_deg(double rad) { return rad * 180.0 / pi; }
inline double deg_to_rad(double deg) { return deg * pi / 180.0; }

/// theta_deg,re_f,im_f,abs_f_sq
void write_amplitude_csv(std::ostream& os, std::span<const AmplitudeSample> samples);

struct AmplitudeSample3D {
  double theta;
  double phi;
  cplx f;
};

/// theta_deg,phi_deg,re_f,im_f,abs_f_sq
void write_amplitude3d_csv(std::ostream& os, std::span<const AmplitudeSample3D> samples);

struct GainSample {
  double theta_deg;
  double g_times_L;
};

/// theta_deg,g_times_L
void write_gain_csv(std::ostream& os, std::span<const GainSample> samples);

struct TransferRow {
  double p;
  Mat2 m;
};

/// p,re_m11,im_m11,re_m12,im_m12,re_m21,im_m21,re_m22,im_m22
void write_transfer_csv(std::ostream& os, std::span<const TransferRow> rows);

/// p,re_tplus,im_tplus,re_tminus,im_tminus (smooth parts on the grid nodes)
void write_tpm_csv(std::ostream& os, const MomentumGrid& grid, const SpectralAmplitude& T_plus,
                   const SpectralAmplitude& T_minus);

/// JSON object with k, N, delta coefficients of T+- and the singularity flag.
std::string scattering_metadata(const ScatteringResult& result, double k, std::size_t n);

}  // namespace tmscat
