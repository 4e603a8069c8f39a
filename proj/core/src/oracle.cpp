#include "tmscat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "tmscat/errors.hpp"
#include "tmscat/io.hpp"

namespace tmscat {

Transfer1D transfer_1d(const std::function<cplx(double)>& v, Interval support, double k, std::size_t steps,
                       const std::vector<double>& breakpoints) {
  if (!(k > 0.0)) throw InvalidArgument("transfer_1d: k must be positive");
  if (!(support.lo < support.hi)) throw InvalidArgument("transfer_1d: empty support");
  if (steps < 1) throw InvalidArgument("transfer_1d: need at least one step");

  std::vector<double> cuts{support.lo, support.hi};
  for (double b : breakpoints) {
    if (b > support.lo && b < support.hi) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Mat2 u = Mat2::Identity();
  for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
    const double a = cuts[piece];
    const double b = cuts[piece + 1];
    const auto n = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(steps) * (b - a) / support.length())));
    const double h = (b - a) / static_cast<double>(n);
    auto rhs = [&](double x, const Mat2& y) -> Mat2 {
      const double xs = std::clamp(x, std::nextafter(a, b), std::nextafter(b, a));
      const cplx c = v(xs) / (2.0 * k);
      const cplx e = std::exp(-2.0 * I * k * x);
      Mat2 hm;
      hm << c, c * e, -c / e, -c;
      return -I * (hm * y);
    };
    for (std::size_t s = 0; s < n; ++s) {
      const double x = a + static_cast<double>(s) * h;
      const Mat2 k1 = rhs(x, u);
      const Mat2 k2 = rhs(x + 0.5 * h, u + 0.5 * h * k1);
      const Mat2 k3 = rhs(x + 0.5 * h, u + 0.5 * h * k2);
      const Mat2 k4 = rhs(s + 1 == n ? b : x + h, u + h * k3);
      u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  if (!u.allFinite()) throw DivergenceError("transfer_1d produced non-finite entries");
  return Transfer1D{u, k, std::abs(u.determinant() - 1.0)};
}

namespace {

void born_accumulate(const PotentialSpec& pot, double k, double p, double w, Born1& out) {
  const cplx pref = -I / (2.0 * w);
  const cplx pref0 = -I / (2.0 * k);
  auto add_layer = [&](cplx z_tilde, double a, double L) {
    out.delta_plus += pref0 * z_tilde * L;
    // int_a^{a+L} e^{2ikx} dx
    const cplx phase = std::exp(2.0 * I * k * a) * (std::exp(2.0 * I * k * L) - 1.0) / (2.0 * I * k);
    out.delta_minus += pref0 * z_tilde * phase;
  };
  auto add_smooth = [&](const PotentialSpec& piece) {
    out.smooth_plus += pref * fourier_xy(piece, w - k, p);
    out.smooth_minus += pref * fourier_xy(piece, -(w + k), p);
  };
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Delta2D> || std::is_same_v<T, GaussianBump>) {
          add_smooth(v);
        } else if constexpr (std::is_same_v<T, Slab>) {
          add_layer(k * k * (1.0 - v.epsilon), v.x_start, v.thickness);
        } else if constexpr (std::is_same_v<T, SlabWithDefect>) {
          add_layer(k * k * (1.0 - v.epsilon), 0.0, v.thickness);
          add_smooth(Delta2D{v.strength});
        } else if constexpr (std::is_same_v<T, Sum>) {
          for (const auto& m : v.members) born_accumulate(m.potential, k, p, w, out);
        } else {
          throw InvalidArgument("born1_T: unsupported potential kind");
        }
      },
      pot);
}

}  // namespace

Born1 born1_T(const PotentialSpec& pot, double k, double p) {
  if (!(k > 0.0)) throw InvalidArgument("born1_T: k must be positive");
  if (!(std::abs(p) < k)) throw InvalidArgument("born1_T: need |p| < k");
  Born1 out;
  born_accumulate(pot, k, p, std::sqrt(k * k - p * p), out);
  return out;
}

ConvergenceReport convergence_report(const std::function<cplx(std::size_t)>& fn, const std::vector<std::size_t>& sizes) {
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw InvalidArgument("convergence_report: sizes must increase");
  }
  ConvergenceReport rep;
  for (std::size_t s : sizes) rep.rows.push_back({s, fn(s)});
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    rep.deltas.push_back(std::abs(rep.rows[i].value - rep.rows[i - 1].value));
  }
  if (rep.deltas.size() >= 2) {
    const std::size_t last = rep.deltas.size() - 1;
    const double d0 = rep.deltas[last - 1];
    const double d1 = rep.deltas[last];
    if (d0 > 0.0 && d1 > 0.0) {
      const double ratio = static_cast<double>(sizes[last + 1]) / static_cast<double>(sizes[last]);
      rep.order = std::log(d0 / d1) / std::log(ratio);
    }
  }
  return rep;
}

std::string ConvergenceReport::to_text() const {
  std::ostringstream os;
  os << "size  re_value  im_value  delta\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << rows[i].size << "  " << format_decimal(rows[i].value.real()) << "  "
       << format_decimal(rows[i].value.imag()) << "  " << (i == 0 ? std::string("-") : format_decimal(deltas[i - 1]))
       << '\n';
  }
  os << "order  " << (order ? format_decimal(*order) : std::string("undefined")) << '\n';
  return os.str();
}

std::string ConvergenceReport::to_json() const {
  nlohmann::ordered_json j;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"size", r.size},
                         {"value", {{"re", format_decimal(r.value.real())}, {"im", format_decimal(r.value.imag())}}}});
  }
  j["deltas"] = nlohmann::ordered_json::array();
  for (double d : deltas) j["deltas"].push_back(format_decimal(d));
  j["order"] = order ? nlohmann::ordered_json(format_decimal(*order)) : nlohmann::ordered_json(nullptr);
  return j.dump(2);
}

}  // namespace tmscat
