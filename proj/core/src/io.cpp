#include "tmscat/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <system_error>

#include <json.hpp>

#include "tmscat/errors.hpp"

namespace tmscat {

std::string format_decimal(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_decimal(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParseError("not a decimal number: '" + std::string(text) + "'");
  }
  return value;
}

namespace {

void put(std::ostream& os, double v) { os << format_decimal(v); }

}  // namespace

void write_amplitude_csv(std::ostream& os, std::span<const AmplitudeSample> samples) {
  os << "theta_deg,re_f,im_f,abs_f_sq\n";
  for (const auto& s : samples) {
    put(os, rad_to_deg(s.theta));
    os << ',';
    put(os, s.f.real());
    os << ',';
    put(os, s.f.imag());
    os << ',';
    put(os, std::norm(s.f));
    os << '\n';
  }
}

void write_amplitude3d_csv(std::ostream& os, std::span<const AmplitudeSample3D> samples) {
  os << "theta_deg,phi_deg,re_f,im_f,abs_f_sq\n";
  for (const auto& s : samples) {
    put(os, rad_to_deg(s.theta));
    os << ',';
    put(os, rad_to_deg(s.phi));
    os << ',';
    put(os, s.f.real());
    os << ',';
    put(os, s.f.imag());
    os << ',';
    put(os, std::norm(s.f));
    os << '\n';
  }
}

void write_gain_csv(std::ostream& os, std::span<const GainSample> samples) {
  os << "theta_deg,g_times_L\n";
  for (const auto& s : samples) {
    put(os, s.theta_deg);
    os << ',';
    put(os, s.g_times_L);
    os << '\n';
  }
}

void write_transfer_csv(std::ostream& os, std::span<const TransferRow> rows) {
  os << "p,re_m11,im_m11,re_m12,im_m12,re_m21,im_m21,re_m22,im_m22\n";
  for (const auto& r : rows) {
    put(os, r.p);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        os << ',';
        put(os, r.m(a, b).real());
        os << ',';
        put(os, r.m(a, b).imag());
      }
    }
    os << '\n';
  }
}

void write_tpm_csv(std::ostream& os, const MomentumGrid& grid, const SpectralAmplitude& T_plus,
                   const SpectralAmplitude& T_minus) {
  os << "p,re_tplus,im_tplus,re_tminus,im_tminus\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    put(os, grid.node(j));
    os << ',';
    put(os, T_plus.smooth(jj).real());
    os << ',';
    put(os, T_plus.smooth(jj).imag());
    os << ',';
    put(os, T_minus.smooth(jj).real());
    os << ',';
    put(os, T_minus.smooth(jj).imag());
    os << '\n';
  }
}

std::string scattering_metadata(const ScatteringResult& result, double k, std::size_t n) {
  using nlohmann::ordered_json;
  auto cx = [](cplx z) { return ordered_json{{"re", format_decimal(z.real())}, {"im", format_decimal(z.imag())}}; };
  ordered_json j;
  j["k"] = format_decimal(k);
  j["N"] = n;
  j["delta_coeff_T_plus"] = cx(result.T_plus.delta_coeff);
  j["delta_coeff_T_minus"] = cx(result.T_minus.delta_coeff);
  j["singularity_flag"] = to_string(result.diagnostic.kind);
  j["condition_estimate"] = format_decimal(result.diagnostic.condition);
  return j.dump(2);
}

}  // namespace tmscat
