#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "tmscat/closed_forms.hpp"
#include "tmscat/errors.hpp"
#include "tmscat/evolution.hpp"
#include "tmscat/io.hpp"
#include "tmscat/parallel.hpp"
#include "tmscat/potential.hpp"
#include "tmscat/selftest.hpp"
#include "tmscat/spectral.hpp"
#include "tmscat/three_d.hpp"
#include "tmscat/transfer_operator.hpp"

namespace tmscat::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::size_t kDefaultN = 32;
constexpr std::size_t kDefaultSteps = 2000;
constexpr std::size_t kDefaultQuadPoints = 200;
constexpr std::size_t kDefaultThetaSamples = 360;
constexpr std::size_t kDefaultGainSamples = 181;
constexpr std::size_t kAzimuths3D = 8;

double number(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  const json& v = doc.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_decimal(v.get<std::string>());
  throw ParseError(std::string("field '") + key + "' is not a number");
}

double number_or(const json& doc, const char* key, double fallback) {
  return doc.contains(key) ? number(doc, key) : fallback;
}

cplx complex_number(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  const json& v = doc.at(key);
  if (v.is_object()) return {number_or(v, "re", 0.0), number_or(v, "im", 0.0)};
  return {number(doc, key), 0.0};
}

std::size_t count_knob(const std::optional<std::size_t>& flag, const json& doc, const char* key,
                       std::size_t fallback) {
  if (flag) {
    if (*flag == 0) throw InvalidArgument(std::string("knob '") + key + "' must be positive");
    return *flag;
  }
  if (!doc.contains(key)) return fallback;
  const double v = number(doc, key);
  if (!(v >= 1.0) || v != std::floor(v)) throw ParseError(std::string("knob '") + key + "' must be a positive integer");
  return static_cast<std::size_t>(v);
}

ordered_json complex_json(cplx z) { return {{"re", format_decimal(z.real())}, {"im", format_decimal(z.imag())}}; }

json read_document(const RunConfig& cfg) {
  if (!cfg.input) throw ParseError(std::string(command_name(cfg.command)) + " needs --input");
  std::ifstream in(*cfg.input, std::ios::binary);
  if (!in) throw ParseError("cannot read input document " + cfg.input->string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    json doc = json::parse(buf.str());
    if (!doc.is_object()) throw ParseError("input document must be a JSON object");
    return doc;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed input document: ") + e.what());
  }
}

SlabParams slab_params(const json& doc) {
  SlabParams sp;
  sp.k = number(doc, "k");
  sp.epsilon = complex_number(doc, "epsilon");
  sp.L = doc.contains("L") ? number(doc, "L") : number(doc, "thickness");
  sp.validate();
  return sp;
}

// Collects named artifacts; writes them into the output directory or the
// primary one onto the stream.
class Sink {
 public:
  Sink(const RunConfig& cfg, std::ostream& out) : dir_(cfg.output), out_(out) {
    if (dir_) {
      std::error_code ec;
      std::filesystem::create_directories(*dir_, ec);
      if (ec || !std::filesystem::is_directory(*dir_)) {
        throw ParseError("cannot create output directory " + dir_->string());
      }
    }
  }

  void emit(const std::string& name, const std::function<void(std::ostream&)>& writer, bool primary) {
    if (!dir_) {
      if (primary) writer(out_);
      return;
    }
    const std::filesystem::path path = *dir_ / name;
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw ParseError("cannot write " + path.string());
    writer(file);
    if (!file) throw ParseError("failed writing " + path.string());
  }

  void emit_text(const std::string& name, const std::string& text, bool primary) {
    emit(name, [&text](std::ostream& os) { os << text << '\n'; }, primary);
  }

 private:
  std::optional<std::filesystem::path> dir_;
  std::ostream& out_;
};

std::vector<AmplitudeSample> amplitudes_parallel(const SpectralAmplitude& tp, const SpectralAmplitude& tm,
                                                 const MomentumGrid& grid, const std::vector<double>& thetas) {
  std::vector<AmplitudeSample> out(thetas.size());
  parallel_for(thetas.size(), [&](std::size_t i) {
    out[i] = amplitude(tp, tm, grid, std::span<const double>(&thetas[i], 1)).front();
  });
  return out;
}

void check_diagnostic(const SingularityDiagnostic& d, std::ostream& err) {
  if (d.kind == SingularityDiagnostic::Kind::singular) {
    throw SpectralSingularity("outgoing-wave system is singular (condition " + format_decimal(d.condition) + ")");
  }
  if (d.kind == SingularityDiagnostic::Kind::near_singular) {
    ordered_json w{{"warning", "near singular"}, {"condition", format_decimal(d.condition)}};
    err << w.dump() << '\n';
  }
}

void emit_scattering(Sink& sink, const OutgoingSolution& sol, const MomentumGrid& grid, std::size_t theta_samples,
                     ordered_json meta) {
  ScatteringResult r;
  r.T_plus = sol.T_plus;
  r.T_minus = sol.T_minus;
  r.diagnostic = sol.diagnostic;
  r.f_samples = amplitudes_parallel(sol.T_plus, sol.T_minus, grid, sample_angles(theta_samples));
  sink.emit("amplitude.csv", [&](std::ostream& os) { write_amplitude_csv(os, r.f_samples); }, true);
  sink.emit("t_pm.csv", [&](std::ostream& os) { write_tpm_csv(os, grid, r.T_plus, r.T_minus); }, false);
  ordered_json full = ordered_json::parse(scattering_metadata(r, grid.k(), grid.size()));
  for (auto it = meta.begin(); it != meta.end(); ++it) full[it.key()] = it.value();
  sink.emit_text("metadata.json", full.dump(2), false);
}

int cmd_delta2d(const RunConfig& cfg, const json& doc, Sink& sink, std::ostream& err) {
  const double k = number(doc, "k");
  const cplx z = complex_number(doc, "strength");
  const cplx f_closed = delta2d_f(z);
  const MomentumGrid grid(k, count_knob(cfg.knobs.N, doc, "N", kDefaultN));
  const OutgoingSolution sol = solve_outgoing(delta2d_operator(z, grid));
  check_diagnostic(sol.diagnostic, err);
  ordered_json meta;
  meta["strength"] = complex_json(z);
  meta["f_closed_form"] = complex_json(f_closed);
  meta["T_closed_form_at_normal"] = complex_json(delta2d_T(z, k));
  emit_scattering(sink, sol, grid, count_knob(cfg.knobs.theta_samples, doc, "theta_samples", kDefaultThetaSamples),
                  meta);
  return kExitOk;
}

int cmd_delta3d(const RunConfig& cfg, const json& doc, Sink& sink, std::ostream& err) {
  const double k = number(doc, "k");
  const cplx z = complex_number(doc, "strength");
  const cplx f_closed = delta3d_f(z, k);
  const DiscGrid grid(k, count_knob(cfg.knobs.N, doc, "N", 4), kAzimuths3D);
  const OutgoingSolution sol = solve_outgoing_3d(delta3d_operator(z, grid));
  check_diagnostic(sol.diagnostic, err);

  const std::size_t n_theta = count_knob(cfg.knobs.theta_samples, doc, "theta_samples", 36);
  std::vector<AmplitudeSample3D> samples;
  for (std::size_t i = 0; i < n_theta; ++i) {
    if (2 * i + 1 == n_theta) continue;  // theta = 90 degrees
    const double theta = pi * (static_cast<double>(i) + 0.5) / static_cast<double>(n_theta);
    for (std::size_t m = 0; m < kAzimuths3D; ++m) {
      const double phi = 2.0 * pi * static_cast<double>(m) / static_cast<double>(kAzimuths3D);
      samples.push_back({theta, phi, cplx{}});
    }
  }
  parallel_for(samples.size(), [&](std::size_t i) {
    samples[i].f = amplitude3d(sol.T_plus, sol.T_minus, grid, samples[i].theta, samples[i].phi);
  });
  double deviation = 0.0;
  for (const auto& s : samples) deviation = std::max(deviation, std::abs(s.f - f_closed));

  ordered_json report;
  report["k"] = format_decimal(k);
  report["strength"] = complex_json(z);
  report["f_closed_form"] = complex_json(f_closed);
  report["f_pipeline_max_deviation"] = format_decimal(deviation);
  report["scattering_length"] = complex_json(scattering_length(z));
  if (z.imag() == 0.0 && z.real() != 0.0) {
    report["cross_section_scale"] = format_decimal(cross_section_scale(z));
  } else {
    report["cross_section_scale"] = nullptr;
  }
  report["singularity_flag"] = to_string(sol.diagnostic.kind);
  sink.emit("amplitude3d.csv", [&](std::ostream& os) { write_amplitude3d_csv(os, samples); }, false);
  sink.emit_text("report.json", report.dump(2), true);
  return kExitOk;
}

EvolutionConfig evolution_config(const RunConfig& cfg, const json& doc, const PotentialSpec& pot) {
  const json evo = doc.contains("evolution") ? doc.at("evolution") : json::object();
  if (!evo.is_object()) throw ParseError("field 'evolution' must be an object");
  const std::size_t steps = count_knob(cfg.knobs.steps, evo.contains("steps") ? evo : doc, "steps", kDefaultSteps);
  EvolutionConfig ec = EvolutionConfig::for_potential(pot, steps);
  ec.x_min = number_or(evo, "x_min", ec.x_min);
  ec.x_max = number_or(evo, "x_max", ec.x_max);
  if (evo.contains("halving_check")) {
    if (!evo.at("halving_check").is_boolean()) throw ParseError("field 'halving_check' must be a boolean");
    ec.halving_check = evo.at("halving_check").get<bool>();
  }
  ec.halving_tolerance = number_or(evo, "halving_tolerance", ec.halving_tolerance);
  return ec;
}

int cmd_slab(const RunConfig& cfg, const json& doc, Sink& sink, std::ostream& err) {
  const SlabParams sp = slab_params(doc);
  const double x_start = number_or(doc, "x_start", 0.0);
  const MomentumGrid grid(sp.k, count_knob(cfg.knobs.N, doc, "N", kDefaultN));
  const std::string method = doc.value("method", std::string("closed"));
  TransferOperator op = [&] {
    if (method == "closed") return slab_operator(sp, grid, x_start);
    if (method == "numeric") {
      const PotentialSpec pot = Slab{sp.epsilon, sp.L, x_start};
      EvolutionConfig ec = evolution_config(cfg, doc, pot);
      ec.on_warning = [&err](const AccuracyWarning& w) {
        ordered_json j{{"op", w.op}, {"steps", w.steps}, {"delta", format_decimal(w.delta)}};
        err << j.dump() << '\n';
      };
      return evolve_transfer(pot, grid, ec);
    }
    throw ParseError("field 'method' must be \"closed\" or \"numeric\"");
  }();
  std::vector<TransferRow> rows;
  rows.reserve(grid.size() + 1);
  for (std::size_t j = 0; j < grid.size(); ++j) rows.push_back({grid.node(j), op.mult_at_node(j)});
  // Odd grids already carry p = 0 as a node.
  if (grid.size() % 2 == 0) rows.push_back({0.0, op.mult_at_zero()});
  std::stable_sort(rows.begin(), rows.end(), [](const TransferRow& a, const TransferRow& b) { return a.p < b.p; });
  sink.emit("transfer.csv", [&](std::ostream& os) { write_transfer_csv(os, rows); }, true);
  return kExitOk;
}

int cmd_slab_defect(const RunConfig& cfg, const json& doc, Sink& sink) {
  const SlabParams sp = slab_params(doc);
  const cplx z = complex_number(doc, "strength");
  const MomentumGrid grid(sp.k, count_knob(cfg.knobs.N, doc, "N", kDefaultN));
  const std::size_t q = count_knob(cfg.knobs.quad_points, doc, "quad_points", kDefaultQuadPoints);
  const SlabDefectSolution s = slab_defect_T(sp, z, grid, q);
  OutgoingSolution sol;
  sol.T_plus = s.T_plus;
  sol.T_minus = s.T_minus;
  ordered_json meta;
  meta["epsilon"] = complex_json(sp.epsilon);
  meta["L"] = format_decimal(sp.L);
  meta["strength"] = complex_json(z);
  meta["X_k"] = complex_json(s.X_k);
  meta["Y_k"] = complex_json(s.Y_k);
  meta["identity_residual"] = format_decimal(s.identity_residual);
  emit_scattering(sink, sol, grid, count_knob(cfg.knobs.theta_samples, doc, "theta_samples", kDefaultThetaSamples),
                  meta);
  return kExitOk;
}

int cmd_threshold_gain(const RunConfig& cfg, const json& doc, Sink& sink) {
  const double eta = number(doc, "eta");
  const double L = number(doc, "L");
  const std::size_t n = count_knob(cfg.knobs.theta_samples, doc, "theta_samples", kDefaultGainSamples);
  if (n < 2) throw InvalidArgument("threshold-gain needs at least 2 angle samples");
  std::vector<GainSample> samples(n);
  parallel_for(n, [&](std::size_t i) {
    const double deg = 180.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    samples[i] = {deg, threshold_gain_deg(eta, deg, L) * L};
  });
  sink.emit("gain.csv", [&](std::ostream& os) { write_gain_csv(os, samples); }, true);
  return kExitOk;
}

int cmd_scatter(const RunConfig& cfg, const json& doc, Sink& sink, std::ostream& err) {
  if (!doc.contains("potential")) throw ParseError("missing field 'potential'");
  const PotentialSpec pot = potential_from_document(doc.at("potential").dump());
  const double k = number(doc, "k");
  const MomentumGrid grid(k, count_knob(cfg.knobs.N, doc, "N", kDefaultN));
  EvolutionConfig ec = evolution_config(cfg, doc, pot);
  ec.on_warning = [&err](const AccuracyWarning& w) {
    ordered_json j{{"op", w.op}, {"steps", w.steps}, {"delta", format_decimal(w.delta)}};
    err << j.dump() << '\n';
  };
  const OutgoingSolution sol = solve_outgoing(evolve_transfer(pot, grid, ec));
  check_diagnostic(sol.diagnostic, err);
  ordered_json meta;
  meta["steps"] = ec.steps;
  meta["x_min"] = format_decimal(ec.x_min);
  meta["x_max"] = format_decimal(ec.x_max);
  emit_scattering(sink, sol, grid, count_knob(cfg.knobs.theta_samples, doc, "theta_samples", kDefaultThetaSamples),
                  meta);
  return kExitOk;
}

int cmd_singularity(const json& doc, Sink& sink) {
  const SlabParams sp = slab_params(doc);
  const std::string unknown_name = doc.value("unknown", std::string("omega"));
  SingularityUnknown unknown;
  if (unknown_name == "omega") {
    unknown = SingularityUnknown::omega;
  } else if (unknown_name == "k") {
    unknown = SingularityUnknown::k;
  } else {
    throw ParseError("field 'unknown' must be \"omega\" or \"k\"");
  }
  const cplx guess = complex_number(doc, "guess");
  const SingularityRoot r = spectral_singularity(sp, unknown, guess);
  ordered_json j;
  j["unknown"] = unknown_name;
  j["root_re"] = format_decimal(r.root.real());
  j["root_im"] = format_decimal(r.root.imag());
  j["residual"] = format_decimal(r.residual);
  j["m22_abs"] = format_decimal(r.m22_abs);
  j["iterations"] = r.iterations;
  sink.emit_text("root.json", j.dump(2), true);
  return kExitOk;
}

int cmd_selftest(Sink& sink) {
  std::ostringstream log;
  const int status = run_selftest(log);
  std::string text = log.str();
  if (!text.empty() && text.back() == '\n') text.pop_back();
  sink.emit_text("selftest.txt", text, true);
  return status == 0 ? kExitOk : kExitFailure;
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.command == Command::selftest) {
    Sink sink(cfg, out);
    return cmd_selftest(sink);
  }
  const json doc = read_document(cfg);
  Sink sink(cfg, out);
  switch (cfg.command) {
    case Command::delta2d:
      return cmd_delta2d(cfg, doc, sink, err);
    case Command::delta3d:
      return cmd_delta3d(cfg, doc, sink, err);
    case Command::slab:
      return cmd_slab(cfg, doc, sink, err);
    case Command::slab_defect:
      return cmd_slab_defect(cfg, doc, sink);
    case Command::threshold_gain:
      return cmd_threshold_gain(cfg, doc, sink);
    case Command::scatter:
      return cmd_scatter(cfg, doc, sink, err);
    case Command::singularity:
      return cmd_singularity(doc, sink);
    case Command::selftest:
      break;
  }
  return kExitOk;
}

void report(std::ostream& err, const char* kind, const std::string& message, int code, ordered_json extra = {}) {
  ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit"] = code;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  err << j.dump() << '\n';
}

}  // namespace

Command parse_command(const std::string& name) {
  static const std::pair<const char*, Command> table[] = {
      {"delta2d", Command::delta2d},         {"delta3d", Command::delta3d},
      {"slab", Command::slab},               {"slab-defect", Command::slab_defect},
      {"threshold-gain", Command::threshold_gain}, {"scatter", Command::scatter},
      {"singularity", Command::singularity}, {"selftest", Command::selftest},
  };
  for (const auto& [n, c] : table) {
    if (name == n) return c;
  }
  throw ParseError("unknown command '" + name + "'");
}

const char* command_name(Command c) {
  switch (c) {
    case Command::delta2d:
      return "delta2d";
    case Command::delta3d:
      return "delta3d";
    case Command::slab:
      return "slab";
    case Command::slab_defect:
      return "slab-defect";
    case Command::threshold_gain:
      return "threshold-gain";
    case Command::scatter:
      return "scatter";
    case Command::singularity:
      return "singularity";
    case Command::selftest:
      return "selftest";
  }
  return "unknown";
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(cfg, out, err);
  } catch (const ParseError& e) {
    report(err, e.kind(), e.what(), kExitUsage);
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    report(err, e.kind(), e.what(), kExitUsage);
    return kExitUsage;
  } catch (const NearResonance& e) {
    report(err, e.kind(), e.what(), kExitNumeric, {{"pole_estimate", format_decimal(e.pole_estimate())}});
    return kExitNumeric;
  } catch (const NoRoot& e) {
    report(err, e.kind(), e.what(), kExitNumeric, {{"residual", format_decimal(e.residual())}});
    return kExitNumeric;
  } catch (const Error& e) {
    report(err, e.kind(), e.what(), kExitNumeric);
    return kExitNumeric;
  } catch (const std::exception& e) {
    report(err, "numeric error", e.what(), kExitNumeric);
    return kExitNumeric;
  }
}

}  // namespace tmscat::cli
