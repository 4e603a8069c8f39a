#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
  using tmscat::cli::Command;

  CLI::App app{"Transfer-matrix scattering toolkit"};
  app.require_subcommand(1);

  tmscat::cli::RunConfig cfg;
  std::string input;
  std::string output;
  std::size_t n = 0;
  std::size_t steps = 0;
  std::size_t quad_points = 0;
  std::size_t theta_samples = 0;

  struct Entry {
    Command command;
    const char* help;
  };
  const Entry entries[] = {
      {Command::delta2d, "2D point interaction: amplitude, T+- and closed form"},
      {Command::delta3d, "3D point interaction: amplitude, scattering length, cross-section scale"},
      {Command::slab, "slab transfer entries against p"},
      {Command::slab_defect, "slab with a surface line defect: T+- and amplitude"},
      {Command::threshold_gain, "threshold gain against incidence angle"},
      {Command::scatter, "numeric pipeline for a potential document"},
      {Command::singularity, "spectral singularity root search"},
      {Command::selftest, "run the acceptance suite"},
  };
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(tmscat::cli::command_name(e.command), e.help);
    if (e.command != Command::selftest) sub->add_option("-i,--input", input, "JSON parameter document")->required();
    sub->add_option("-o,--output", output, "directory for the artifacts (primary table to stdout if omitted)");
    if (e.command != Command::selftest && e.command != Command::singularity) {
      sub->add_option("--N", n, "grid size")->check(CLI::PositiveNumber);
      sub->add_option("--steps", steps, "evolution steps")->check(CLI::PositiveNumber);
      sub->add_option("--quad-points", quad_points, "quadrature points for Y")->check(CLI::PositiveNumber);
      sub->add_option("--theta-samples", theta_samples, "angle samples")->check(CLI::PositiveNumber);
    }
    sub->callback([&cfg, e] { cfg.command = e.command; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tmscat::cli::kExitUsage;
  }

  if (!input.empty()) cfg.input = input;
  if (!output.empty()) cfg.output = output;
  if (n > 0) cfg.knobs.N = n;
  if (steps > 0) cfg.knobs.steps = steps;
  if (quad_points > 0) cfg.knobs.quad_points = quad_points;
  if (theta_samples > 0) cfg.knobs.theta_samples = theta_samples;
  return tmscat::cli::run(cfg, std::cout, std::cerr);
}
