#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "dpplab/cli.hpp"
#include "dpplab/simd/simd.hpp"

using namespace dpplab;

int main(int argc, char** argv) {
  CLI::App app{"dpplab: cumulants and samples of thinned determinantal gases"};
  app.require_subcommand(1);

  std::string config_path, outdir = ".";
  std::uint64_t seed = 42;
  int workers = 0;
  app.add_option("--config", config_path, "experiment config file");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--workers", workers, "worker threads (0 = hardware)");
  app.add_option("--out", outdir, "output directory");

  const char* names[] = {"combinatorics-check", "exact-cumulants",
                         "quadrature-cumulants", "sample", "crossover-scan",
                         "meso-scan", "limits-table", "decay-report",
                         "validate"};
  const char* descr[] = {
      "exact composition-calculus identities",
      "exact thinned cumulants of polynomial statistics (1-d)",
      "cyclic-integral cumulants by quadrature (orders <= 3)",
      "exact sampling with optional thinning; dumps samples and statistics",
      "1-d thinning ladders against the crossover targets",
      "mesoscopic ladders against the Gaussian-noise targets",
      "closed-form limiting values for the configured statistics",
      "off-diagonal kernel decay fits and truncation masses",
      "validate the experiment config and exit"};
  for (int i = 0; i < 9; ++i)
    app.add_subcommand(names[i], descr[i])->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    cli::RunOptions opt{seed, workers, outdir};
    const std::string sub = app.get_subcommands().front()->get_name();

    if (sub == "combinatorics-check") return cli::cmd_combinatorics_check(opt);

    cli::ExperimentConfig cfg;
    if (!config_path.empty())
      cfg = cli::config_from(Config::parse_file(config_path));
    else
      cfg = cli::default_config(sub == "meso-scan" ? 2 : 1);

    if (sub == "validate") return cli::cmd_validate(cfg, opt);
    const auto violations = cli::validate_config(cfg);
    if (!violations.empty()) {
      for (const auto& v : violations)
        std::cerr << "config error: " << v.field << ": " << v.message << "\n";
      return cli::kValidationFailure;
    }
    if (sub == "exact-cumulants") return cli::cmd_exact_cumulants(cfg, opt);
    if (sub == "quadrature-cumulants")
      return cli::cmd_quadrature_cumulants(cfg, opt);
    if (sub == "sample") return cli::cmd_sample(cfg, opt);
    if (sub == "crossover-scan") return cli::cmd_crossover_scan(cfg, opt);
    if (sub == "meso-scan") return cli::cmd_meso_scan(cfg, opt);
    if (sub == "limits-table") return cli::cmd_limits_table(cfg, opt);
    if (sub == "decay-report") return cli::cmd_decay_report(cfg, opt);
    std::cerr << "unknown subcommand " << sub << "\n";
    return cli::kRuntimeError;
  } catch (const range_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return cli::kValidationFailure;
  } catch (const numeric_error& e) {
    std::cerr << "numerical check failed: " << e.what() << "\n";
    return cli::kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kRuntimeError;
  }
}
