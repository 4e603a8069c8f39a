#include "tmscat/evolution.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <variant>

#include "evolution_engine.hpp"
#include "tmscat/errors.hpp"
#include "tmscat/io.hpp"

namespace tmscat {

namespace detail {

std::vector<Segment> make_segments(Interval window, std::vector<double> breakpoints, std::size_t steps) {
  if (!(window.lo < window.hi) || !std::isfinite(window.lo) || !std::isfinite(window.hi)) {
    throw InvalidArgument("evolution window must satisfy x_min < x_max");
  }
  if (steps < 1) throw InvalidArgument("evolution needs at least one step");
  breakpoints.push_back(window.lo);
  breakpoints.push_back(window.hi);
  std::sort(breakpoints.begin(), breakpoints.end());
  std::vector<double> pts;
  for (double b : breakpoints) {
    if (b < window.lo || b > window.hi) continue;
    if (!pts.empty() && b <= pts.back()) continue;
    pts.push_back(b);
  }
  const double total = window.hi - window.lo;
  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double len = pts[i + 1] - pts[i];
    const auto n = static_cast<std::size_t>(std::llround(static_cast<double>(steps) * len / total));
    out.push_back(Segment{pts[i], pts[i + 1], std::max<std::size_t>(1, n)});
  }
  return out;
}

std::vector<Segment> with_steps(std::vector<Segment> segments, std::size_t factor) {
  for (auto& s : segments) s.steps *= factor;
  return segments;
}

Mat2 evolve_uniform(const std::vector<Segment>& segments, const UniformFn& uniform, double w) {
  Mat2 u = Mat2::Identity();
  for (const Segment& seg : segments) {
    const double h = (seg.hi - seg.lo) / static_cast<double>(seg.steps);
    auto gen = [&](double x) -> Mat2 {
      const cplx v0 = uniform(inside(x, seg));
      if (v0 == cplx{0.0, 0.0}) return Mat2::Zero();
      return -I * uniform_hamiltonian(v0, w, x);
    };
    Mat2 g0 = gen(seg.lo);
    for (std::size_t s = 0; s < seg.steps; ++s) {
      const double x = seg.lo + static_cast<double>(s) * h;
      const Mat2 gm = gen(x + 0.5 * h);
      const Mat2 g1 = gen(s + 1 == seg.steps ? seg.hi : x + h);
      const Mat2 k1 = g0 * u;
      const Mat2 k2 = gm * (u + 0.5 * h * k1);
      const Mat2 k3 = gm * (u + 0.5 * h * k2);
      const Mat2 k4 = g1 * (u + h * k3);
      u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      g0 = g1;
    }
  }
  return u;
}

EngineOutput evolve_dense(const std::vector<Segment>& segments, const SliceFn& slice,
                          const std::vector<double>& omegas, double k) {
  const auto n = static_cast<Eigen::Index>(omegas.size());
  const Eigen::Index dim = 2 * n + 2;
  const Mat2 mixer = channel_mixer();

  MatrixXc z = MatrixXc::Identity(dim, dim);
  for (const Segment& seg : segments) {
    const double h = (seg.hi - seg.lo) / static_cast<double>(seg.steps);
    auto gen = [&](double x) -> MatrixXc {
      const Slice sl = slice(inside(x, seg));
      MatrixXc g = MatrixXc::Zero(dim, dim);
      MatrixXc v = MatrixXc::Zero(n, n);
      if (sl.smooth_kernel.size() > 0) v = sl.smooth_kernel;
      v.diagonal().array() += sl.uniform;
      g.topLeftCorner(2 * n, 2 * n) = assemble_hamiltonian(v, omegas, x);
      if (sl.smooth_source.size() > 0) {
        const cplx right[2] = {std::exp(I * (k * x)), std::exp(-I * (k * x))};
        for (Eigen::Index j = 0; j < n; ++j) {
          const double w = omegas[static_cast<std::size_t>(j)];
          const cplx left[2] = {std::exp(-I * (w * x)), std::exp(I * (w * x))};
          const cplx base = sl.smooth_source(j) / (2.0 * w);
          for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
              g(a * n + j, 2 * n + b) = base * left[a] * mixer(a, b) * right[b];
            }
          }
        }
      }
      if (sl.uniform != cplx{0.0, 0.0}) {
        g.bottomRightCorner(2, 2) = uniform_hamiltonian(sl.uniform, k, x);
      }
      g *= -I;
      return g;
    };
    MatrixXc g0 = gen(seg.lo);
    for (std::size_t s = 0; s < seg.steps; ++s) {
      const double x = seg.lo + static_cast<double>(s) * h;
      const MatrixXc gm = gen(x + 0.5 * h);
      MatrixXc g1 = gen(s + 1 == seg.steps ? seg.hi : x + h);
      const MatrixXc k1 = g0 * z;
      const MatrixXc k2 = gm * (z + (0.5 * h) * k1);
      const MatrixXc k3 = gm * (z + (0.5 * h) * k2);
      const MatrixXc k4 = g1 * (z + h * k3);
      z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      g0 = std::move(g1);
    }
  }
  EngineOutput out;
  out.u = z.topLeftCorner(2 * n, 2 * n);
  out.source = z.topRightCorner(2 * n, 2);
  out.delta_channel = z.bottomRightCorner(2, 2);
  return out;
}

void collect_breakpoints(const PotentialSpec& pot, std::vector<double>& out) {
  if (const auto* s = std::get_if<Slab>(&pot)) {
    out.push_back(s->x_start);
    out.push_back(s->x_start + s->thickness);
  } else if (const auto* sum = std::get_if<Sum>(&pot)) {
    for (const auto& m : sum->members) {
      out.push_back(m.support.lo);
      out.push_back(m.support.hi);
      collect_breakpoints(m.potential, out);
    }
  }
}

}  // namespace detail

namespace {

bool has_y_dependence(const PotentialSpec& pot) {
  if (std::holds_alternative<GaussianBump>(pot)) return true;
  if (const auto* s = std::get_if<Sum>(&pot)) {
    for (const auto& m : s->members) {
      if (has_y_dependence(m.potential)) return true;
    }
  }
  return false;
}

void require_pointwise(const PotentialSpec& pot) {
  if (is_x_singular(pot)) {
    throw UnsupportedEvaluation("potential is singular in x; use its closed-form transfer operator");
  }
}

}  // namespace

MatrixXc HamiltonianBlock::assembled() const {
  const auto n = h11.rows();
  MatrixXc h(2 * n, 2 * n);
  h << h11, h12, h21, h22;
  return h;
}

void emit_to_stderr(const AccuracyWarning& w) {
  std::cerr << "{\"op\": \"" << w.op << "\", \"steps\": " << w.steps << ", \"delta\": " << format_decimal(w.delta)
            << "}\n";
}

EvolutionConfig EvolutionConfig::for_potential(const PotentialSpec& pot, std::size_t steps) {
  const Interval w = support_window(pot);
  EvolutionConfig cfg;
  cfg.x_min = w.lo;
  cfg.x_max = w.hi;
  cfg.steps = steps;
  return cfg;
}

MatrixXc potential_kernel(const PotentialSpec& pot, double x, const MomentumGrid& grid) {
  require_pointwise(pot);
  const auto n = static_cast<Eigen::Index>(grid.size());
  MatrixXc v = MatrixXc::Zero(n, n);
  if (has_y_dependence(pot)) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index l = 0; l < n; ++l) {
        const auto jj = static_cast<std::size_t>(j);
        const auto ll = static_cast<std::size_t>(l);
        v(j, l) = grid.average_weight(ll) * smooth_fourier_y(pot, x, grid.node(jj) - grid.node(ll));
      }
    }
  }
  v.diagonal().array() += uniform_profile(pot, x, grid.k());
  return v;
}

HamiltonianBlock effective_hamiltonian(const PotentialSpec& pot, double x, const MomentumGrid& grid) {
  const MatrixXc v = potential_kernel(pot, x, grid);
  std::vector<double> omegas(grid.omegas().begin(), grid.omegas().end());
  const MatrixXc h = detail::assemble_hamiltonian(v, omegas, x);
  const auto n = static_cast<Eigen::Index>(grid.size());
  HamiltonianBlock out;
  out.x = x;
  out.h11 = h.topLeftCorner(n, n);
  out.h12 = h.topRightCorner(n, n);
  out.h21 = h.bottomLeftCorner(n, n);
  out.h22 = h.bottomRightCorner(n, n);
  return out;
}

TransferOperator evolve_transfer(const PotentialSpec& pot, const MomentumGrid& grid, const EvolutionConfig& cfg) {
  require_pointwise(pot);
  validate(pot);
  std::vector<double> bps;
  detail::collect_breakpoints(pot, bps);
  const auto segments = detail::make_segments(Interval{cfg.x_min, cfg.x_max}, bps, cfg.steps);

  const double k = grid.k();
  const bool y_dep = has_y_dependence(pot);
  detail::UniformFn uniform = [pot, k](double x) { return uniform_profile(pot, x, k); };
  detail::SliceFn slice = [&pot, &grid, k, y_dep](double x) {
    detail::Slice s;
    s.uniform = uniform_profile(pot, x, k);
    if (y_dep) {
      const auto n = static_cast<Eigen::Index>(grid.size());
      s.smooth_kernel.resize(n, n);
      s.smooth_source.resize(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        const double pj = grid.node(static_cast<std::size_t>(j));
        s.smooth_source(j) = smooth_fourier_y(pot, x, pj);
        for (Eigen::Index l = 0; l < n; ++l) {
          const auto ll = static_cast<std::size_t>(l);
          s.smooth_kernel(j, l) = grid.average_weight(ll) * smooth_fourier_y(pot, x, pj - grid.node(ll));
        }
      }
    }
    return s;
  };
  const bool dense = y_dep || !cfg.exploit_diagonal;

  TransferOperator op = detail::evolve_operator(grid, segments, slice, uniform, dense);
  if (cfg.halving_check) {
    TransferOperator fine = detail::evolve_operator(grid, detail::with_steps(segments, 2), slice, uniform, dense);
    const double delta = detail::operator_distance(op, fine);
    if (delta > cfg.halving_tolerance && cfg.on_warning) {
      cfg.on_warning(AccuracyWarning{"evolve_transfer", cfg.steps, delta});
    }
  }
  return op;
}

}  // namespace tmscat
