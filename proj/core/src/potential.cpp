#include "tmscat/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "tmscat/errors.hpp"
#include "tmscat/io.hpp"

namespace tmscat {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kGaussianCutoff = 8.0;

double gaussian(double x, double center, double sigma) {
  const double t = (x - center) / sigma;
  return std::exp(-0.5 * t * t);
}

cplx gaussian_transform_y(const GaussianBump& g, double x, double q) {
  const double sy = g.sigma_y;
  const double mag = std::sqrt(2.0 * pi) * sy * std::exp(-0.5 * sy * sy * q * q);
  return g.amplitude * gaussian(x, g.x0, g.sigma_x) * mag * std::exp(-I * (q * g.y0));
}

bool in_slab(double x, double x_start, double thickness) {
  return x_start <= x && x <= x_start + thickness;
}

}  // namespace

void validate(const PotentialSpec& pot) {
  std::visit(overloaded{
                 [](const Slab& s) {
                   if (!(s.thickness > 0.0)) throw InvalidArgument("slab thickness must be positive");
                 },
                 [](const SlabWithDefect& s) {
                   if (!(s.thickness > 0.0)) throw InvalidArgument("slab thickness must be positive");
                 },
                 [](const GaussianBump& g) {
                   if (!(g.sigma_x > 0.0) || !(g.sigma_y > 0.0)) {
                     throw InvalidArgument("gaussian widths must be positive");
                   }
                 },
                 [](const Sum& s) {
                   std::vector<Interval> spans;
                   for (const auto& m : s.members) {
                     if (!(m.support.lo < m.support.hi)) {
                       throw InvalidArgument("sum member support must have lo < hi");
                     }
                     validate(m.potential);
                     spans.push_back(m.support);
                   }
                   std::sort(spans.begin(), spans.end(),
                             [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
                   for (std::size_t i = 1; i < spans.size(); ++i) {
                     if (spans[i].lo < spans[i - 1].hi) {
                       throw InvalidArgument("sum member supports overlap by more than a point");
                     }
                   }
                 },
                 [](const auto&) {},
             },
             pot);
}

Interval support_window(const PotentialSpec& pot) {
  return std::visit(
      overloaded{
          [](const Delta2D&) { return Interval{0.0, 0.0}; },
          [](const Delta3D&) { return Interval{0.0, 0.0}; },
          [](const Slab& s) { return Interval{s.x_start, s.x_start + s.thickness}; },
          [](const SlabWithDefect& s) { return Interval{0.0, s.thickness}; },
          [](const GaussianBump& g) {
            return Interval{g.x0 - kGaussianCutoff * g.sigma_x, g.x0 + kGaussianCutoff * g.sigma_x};
          },
          [](const Sum& s) {
            if (s.members.empty()) return Interval{0.0, 0.0};
            Interval w{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
            for (const auto& m : s.members) {
              const Interval inner = support_window(m.potential);
              w.lo = std::min(w.lo, std::max(inner.lo, m.support.lo));
              w.hi = std::max(w.hi, std::min(inner.hi, m.support.hi));
            }
            return w;
          },
      },
      pot);
}

bool is_x_singular(const PotentialSpec& pot) {
  return std::visit(overloaded{
                        [](const Delta2D&) { return true; },
                        [](const Delta3D&) { return true; },
                        [](const SlabWithDefect&) { return true; },
                        [](const Sum& s) {
                          return std::any_of(s.members.begin(), s.members.end(),
                                             [](const SumMember& m) { return is_x_singular(m.potential); });
                        },
                        [](const auto&) { return false; },
                    },
                    pot);
}

cplx fourier_y(const PotentialSpec& pot, double x, double q) {
  return std::visit(
      overloaded{
          [&](const GaussianBump& g) { return gaussian_transform_y(g, x, q); },
          [&](const Slab& s) -> cplx {
            if (!in_slab(x, s.x_start, s.thickness)) return cplx{0.0, 0.0};
            throw UnsupportedEvaluation("slab transform is 2pi delta(q) and cannot be sampled");
          },
          [&](const Sum& s) {
            cplx acc{0.0, 0.0};
            for (const auto& m : s.members) {
              if (m.support.contains(x)) acc += fourier_y(m.potential, x, q);
            }
            return acc;
          },
          [&](const auto&) -> cplx {
            throw UnsupportedEvaluation("potential is singular in x; no pointwise transverse transform");
          },
      },
      pot);
}

cplx smooth_fourier_y(const PotentialSpec& pot, double x, double q) {
  return std::visit(overloaded{
                        [&](const GaussianBump& g) { return gaussian_transform_y(g, x, q); },
                        [&](const Slab&) { return cplx{0.0, 0.0}; },
                        [&](const Sum& s) {
                          cplx acc{0.0, 0.0};
                          for (const auto& m : s.members) {
                            if (m.support.contains(x)) acc += smooth_fourier_y(m.potential, x, q);
                          }
                          return acc;
                        },
                        [&](const auto&) -> cplx {
                          throw UnsupportedEvaluation("potential is singular in x; use its closed form");
                        },
                    },
                    pot);
}

cplx uniform_profile(const PotentialSpec& pot, double x, double k) {
  return std::visit(overloaded{
                        [&](const Slab& s) {
                          return in_slab(x, s.x_start, s.thickness) ? k * k * (1.0 - s.epsilon)
                                                                    : cplx{0.0, 0.0};
                        },
                        [&](const GaussianBump&) { return cplx{0.0, 0.0}; },
                        [&](const Sum& s) {
                          cplx acc{0.0, 0.0};
                          for (const auto& m : s.members) {
                            if (m.support.contains(x)) acc += uniform_profile(m.potential, x, k);
                          }
                          return acc;
                        },
                        [&](const auto&) -> cplx {
                          throw UnsupportedEvaluation("potential is singular in x; use its closed form");
                        },
                    },
                    pot);
}

cplx fourier_xy(const PotentialSpec& pot, double kx, double ky) {
  return std::visit(
      overloaded{
          [&](const Delta2D& d) { return d.strength; },
          [&](const GaussianBump& g) {
            const double sx = g.sigma_x;
            const double sy = g.sigma_y;
            const double mag = 2.0 * pi * sx * sy * std::exp(-0.5 * (sx * sx * kx * kx + sy * sy * ky * ky));
            return g.amplitude * mag * std::exp(-I * (kx * g.x0 + ky * g.y0));
          },
          [&](const Sum& s) {
            cplx acc{0.0, 0.0};
            for (const auto& m : s.members) acc += fourier_xy(m.potential, kx, ky);
            return acc;
          },
          [&](const auto&) -> cplx {
            throw UnsupportedEvaluation("two-dimensional transform is not a function for this potential");
          },
      },
      pot);
}

// --- document form --------------------------------------------------------

namespace {

using nlohmann::json;

double read_number(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_decimal(v.get<std::string>());
  throw ParseError(std::string("field '") + key + "' is not a number");
}

double read_number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? read_number(j, key) : fallback;
}

cplx read_complex(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (v.is_object()) return {read_number_or(v, "re", 0.0), read_number_or(v, "im", 0.0)};
  if (v.is_number() || v.is_string()) return {read_number(j, key), 0.0};
  throw ParseError(std::string("field '") + key + "' is not a complex number");
}

json write_complex(cplx z) {
  return json{{"re", format_decimal(z.real())}, {"im", format_decimal(z.imag())}};
}

json to_json(const PotentialSpec& pot) {
  return std::visit(
      overloaded{
          [](const Delta2D& d) { return json{{"kind", "delta2d"}, {"strength", write_complex(d.strength)}}; },
          [](const Delta3D& d) { return json{{"kind", "delta3d"}, {"strength", write_complex(d.strength)}}; },
          [](const Slab& s) {
            return json{{"kind", "slab"},
                        {"epsilon", write_complex(s.epsilon)},
                        {"thickness", format_decimal(s.thickness)},
                        {"x_start", format_decimal(s.x_start)}};
          },
          [](const SlabWithDefect& s) {
            return json{{"kind", "slab_with_defect"},
                        {"epsilon", write_complex(s.epsilon)},
                        {"thickness", format_decimal(s.thickness)},
                        {"strength", write_complex(s.strength)}};
          },
          [](const GaussianBump& g) {
            return json{{"kind", "gaussian"},
                        {"amplitude", write_complex(g.amplitude)},
                        {"x0", format_decimal(g.x0)},
                        {"y0", format_decimal(g.y0)},
                        {"sigma_x", format_decimal(g.sigma_x)},
                        {"sigma_y", format_decimal(g.sigma_y)}};
          },
          [](const Sum& s) {
            json members = json::array();
            for (const auto& m : s.members) {
              members.push_back(json{{"potential", to_json(m.potential)},
                                     {"support", json{{"lo", format_decimal(m.support.lo)},
                                                      {"hi", format_decimal(m.support.hi)}}}});
            }
            return json{{"kind", "sum"}, {"members", members}};
          },
      },
      pot);
}

PotentialSpec from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ParseError("potential document needs a string 'kind' discriminator");
  }
  const std::string kind = j.at("kind").get<std::string>();
  PotentialSpec out;
  if (kind == "delta2d") {
    out = Delta2D{read_complex(j, "strength")};
  } else if (kind == "delta3d") {
    out = Delta3D{read_complex(j, "strength")};
  } else if (kind == "slab") {
    out = Slab{read_complex(j, "epsilon"), read_number(j, "thickness"), read_number_or(j, "x_start", 0.0)};
  } else if (kind == "slab_with_defect") {
    out = SlabWithDefect{read_complex(j, "epsilon"), read_number(j, "thickness"), read_complex(j, "strength")};
  } else if (kind == "gaussian") {
    out = GaussianBump{read_complex(j, "amplitude"),      read_number_or(j, "x0", 0.0),
                       read_number_or(j, "y0", 0.0),       read_number(j, "sigma_x"),
                       read_number(j, "sigma_y")};
  } else if (kind == "sum") {
    if (!j.contains("members") || !j.at("members").is_array()) throw ParseError("sum needs a 'members' array");
    Sum s;
    for (const auto& m : j.at("members")) {
      if (!m.contains("potential")) throw ParseError("sum member needs a 'potential'");
      PotentialSpec inner = from_json(m.at("potential"));
      Interval support;
      if (m.contains("support")) {
        support = Interval{read_number(m.at("support"), "lo"), read_number(m.at("support"), "hi")};
      } else {
        support = support_window(inner);
      }
      s.members.push_back(SumMember{std::move(inner), support});
    }
    out = std::move(s);
  } else {
    throw ParseError("unknown potential kind '" + kind + "'");
  }
  try {
    validate(out);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("invalid potential: ") + e.what());
  }
  return out;
}

}  // namespace

std::string to_document(const PotentialSpec& pot) { return to_json(pot).dump(2); }

PotentialSpec potential_from_document(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed potential document: ") + e.what());
  }
  return from_json(j);
}

}  // namespace tmscat
