#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dpplab/core/config.hpp"
#include "dpplab/cumulants.hpp"
#include "dpplab/kernels.hpp"
#include "dpplab/orthopoly.hpp"
#include "dpplab/testfunction.hpp"

// Batch experiment runner: declarative configs select a model, a thinning
// schedule, test functions, orders and engines; emits cumulant-report CSVs,
// convergence ladders and regime-verdict summaries.

namespace dpplab::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kValidationFailure = 1;
inline constexpr int kNumericalFailure = 2;
inline constexpr int kRuntimeError = 3;

struct FnSpec {
  std::string kind;            // poly | gauss | bump | radialbump
  std::vector<double> params;  // poly: coefficients; gauss/bump: center width
  std::string label;
};

struct ExperimentConfig {
  int dimension = 1;
  std::string potential = "quadratic";  // quadratic|quartic / ginibre|radial2d
  double quartic_t = 0.0;
  std::vector<double> radial_coeffs{1.0};

  std::vector<int> ladder{25, 50, 100, 200};

  cumulants::ThinningRegime thinning;

  bool mesoscopic = false;
  double alpha = 0.25;
  double x0 = 0.0;

  std::vector<FnSpec> functions;
  std::vector<int> orders{2, 3};

  bool use_exact = true, use_quadrature = false, use_mc = false;
  long replicas = 10000;
  double tolerance = 0.03;  // regime-verdict tolerance (relative)
};

ExperimentConfig default_config(int dimension = 1);
ExperimentConfig config_from(const Config& raw);

struct Violation {
  std::string field;
  std::string message;
};

std::vector<Violation> validate_config(const ExperimentConfig& c);

struct RunOptions {
  std::uint64_t seed = 42;
  int workers = 0;  // 0 = hardware
  std::string outdir = ".";
};

// Ladder verdict: |value - target| decreasing over the last three rungs and
// the final gap below tol_abs.
struct Verdict {
  bool converged = false;
  double final_gap = 0.0;
  std::string note;
};
Verdict ladder_verdict(const std::vector<double>& values,
                       const std::vector<double>& targets, double tol_abs);

int cmd_validate(const ExperimentConfig&, const RunOptions&);
int cmd_combinatorics_check(const RunOptions&);
int cmd_exact_cumulants(const ExperimentConfig&, const RunOptions&);
int cmd_quadrature_cumulants(const ExperimentConfig&, const RunOptions&);
int cmd_sample(const ExperimentConfig&, const RunOptions&);
int cmd_crossover_scan(const ExperimentConfig&, const RunOptions&);
int cmd_meso_scan(const ExperimentConfig&, const RunOptions&);
int cmd_limits_table(const ExperimentConfig&, const RunOptions&);
int cmd_decay_report(const ExperimentConfig&, const RunOptions&);

// helpers shared with tests
std::shared_ptr<const TestFunction1D> make_fn_1d(const FnSpec& s);
std::shared_ptr<const TestFunction2D> make_fn_2d(const FnSpec& s);
orthopoly::JacobiMatrix jacobi_for(const orthopoly::Potential1D& V, int N, int size);

}  // namespace dpplab::cli
