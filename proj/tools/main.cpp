#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"heisgeo - hypersurface geometry in the Heisenberg group H^n"};
  app.require_subcommand(1);

  heisgeo::cli::CommonOptions opts;

  const auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config)
      cmd->add_option("--config", opts.config_path, "run config (JSON)")
          ->required();
    cmd->add_option("--out", opts.out_path, "output file (default: stdout)");
    cmd->add_option("--format", opts.format, "csv|json");
    cmd->add_option("--workers", opts.workers, "worker threads (default: all cores)");
    cmd->add_option("--tol-char", opts.tol_char, "characteristic-point threshold");
    cmd->add_option("--tol-member", opts.tol_member, "membership tolerance");
    cmd->add_option("--step", opts.step, "step size override");
    cmd->add_option("--horizon", opts.horizon, "parameter horizon override");
  };

  CLI::App* curvature =
      app.add_subcommand("curvature", "curvature grid report over a surface");
  add_common(curvature, true);
  CLI::App* geodesic =
      app.add_subcommand("geodesic", "integrate a surface geodesic in a chart");
  add_common(geodesic, true);
  CLI::App* ruling =
      app.add_subcommand("ruling", "horizontal tangent ray scans");
  add_common(ruling, true);
  CLI::App* verify =
      app.add_subcommand("verify", "run the built-in verification suite");
  (void)verify;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage/config errors exit with 2
  }

  if (curvature->parsed()) return heisgeo::cli::run_curvature(opts);
  if (geodesic->parsed()) return heisgeo::cli::run_geodesic(opts);
  if (ruling->parsed()) return heisgeo::cli::run_ruling(opts);
  if (verify->parsed()) {
    const char* mutate = std::getenv("HEISGEO_MUTATE");
    const bool corrupt = mutate != nullptr && std::string(mutate) == "group-law";
    return heisgeo::cli::run_verify(corrupt);
  }
  return 2;
}
