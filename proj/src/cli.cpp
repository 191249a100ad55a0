#include "dpplab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <tuple>

#include "dpplab/core/csv.hpp"
#include "dpplab/core/parallel.hpp"
#include "dpplab/core/quadrature.hpp"
#include "dpplab/limits.hpp"
#include "dpplab/sampler.hpp"

namespace dpplab::cli {

using cumulants::CumulantEntry;
using cumulants::ThinningRegime;

// ---------------------------------------------------------------------------
// Configuration

ExperimentConfig default_config(int dimension) {
  ExperimentConfig c;
  c.dimension = dimension;
  if (dimension == 1) {
    c.potential = "quadratic";
    c.functions = {{"poly", {0.0, 1.0}, "x"}, {"poly", {0.0, 0.0, 1.0}, "x^2"}};
    c.orders = {2, 3, 4};
  } else {
    c.potential = "ginibre";
    c.ladder = {40, 80, 160};
    c.functions = {{"gauss", {0.0, 0.5}, "gauss"}};
    c.orders = {2, 3};
    c.use_exact = false;
    c.use_quadrature = true;
  }
  return c;
}

ExperimentConfig config_from(const Config& raw) {
  ExperimentConfig c = default_config(raw.get_int("model", "dimension", 1));
  c.potential = raw.get("model", "potential", c.potential);
  c.quartic_t = raw.get_double("model", "t", c.quartic_t);
  if (raw.has("model", "coeffs")) c.radial_coeffs = raw.get_doubles("model", "coeffs");

  if (raw.has("ladder", "N")) c.ladder = raw.get_ints("ladder", "N");

  const std::string tk = raw.get("thinning", "kind", "none");
  const double tau = raw.get_double("thinning", "tau", 1.0);
  const double s = raw.get_double("thinning", "s", tk == "sub" ? 2.0 : 0.5);
  if (tk == "none")
    c.thinning = ThinningRegime::none();
  else if (tk == "critical")
    c.thinning = ThinningRegime::critical(tau);
  else if (tk == "sub")
    c.thinning = ThinningRegime::sub(tau, s);
  else if (tk == "super")
    c.thinning = ThinningRegime::super(tau, s);
  else
    throw range_error("thinning.kind must be none|critical|sub|super");

  c.mesoscopic = raw.get("scale", "kind", "macro") == "meso";
  c.alpha = raw.get_double("scale", "alpha", c.alpha);
  c.x0 = raw.get_double("scale", "x0", c.x0);

  if (!raw.keys("functions").empty()) {
    c.functions.clear();
    for (const std::string& key : raw.keys("functions")) {
      std::istringstream in(raw.get("functions", key));
      FnSpec f;
      in >> f.kind;
      double v;
      while (in >> v) f.params.push_back(v);
      f.label = key;
      c.functions.push_back(std::move(f));
    }
  }

  if (raw.has("orders", "n")) c.orders = raw.get_ints("orders", "n");

  if (raw.has("engines", "use")) {
    c.use_exact = c.use_quadrature = c.use_mc = false;
    std::istringstream in(raw.get("engines", "use"));
    std::string e;
    while (in >> e) {
      if (e == "exact") c.use_exact = true;
      else if (e == "quadrature") c.use_quadrature = true;
      else if (e == "mc") c.use_mc = true;
      else throw range_error("engines.use: unknown engine " + e);
    }
  }
  c.replicas = raw.get_int("mc", "replicas", static_cast<int>(c.replicas));
  c.tolerance = raw.get_double("run", "tolerance", c.tolerance);
  return c;
}

std::shared_ptr<const TestFunction1D> make_fn_1d(const FnSpec& s) {
  if (s.kind == "poly") return std::make_shared<Poly1D>(Poly(s.params));
  require(s.params.size() == 2, s.kind + ": expected `center width`");
  if (s.kind == "gauss") return std::make_shared<Gaussian1D>(s.params[0], s.params[1]);
  if (s.kind == "bump") return std::make_shared<Bump1D>(s.params[0], s.params[1]);
  throw range_error("unknown 1-d function kind: " + s.kind);
}

std::shared_ptr<const TestFunction2D> make_fn_2d(const FnSpec& s) {
  if (s.kind == "gauss") {
    require(s.params.size() == 2, "gauss: expected `center width`");
    return std::make_shared<Gaussian2D>(cplx{s.params[0], 0.0}, s.params[1]);
  }
  if (s.kind == "bump") {
    require(s.params.size() == 2, "bump: expected `center radius`");
    return std::make_shared<Bump2D>(cplx{s.params[0], 0.0}, s.params[1]);
  }
  if (s.kind == "radialbump") {
    require(s.params.size() == 2, "radialbump: expected `power s_max`");
    return std::make_shared<RadialMonomialBump2D>(static_cast<int>(s.params[0]),
                                                  s.params[1]);
  }
  throw range_error("unknown 2-d function kind: " + s.kind);
}

orthopoly::JacobiMatrix jacobi_for(const orthopoly::Potential1D& V, int N,
                                   int size) {
  if (V.kind() == orthopoly::Potential1D::Kind::quadratic)
    return orthopoly::hermite_recurrence(N, size);
  return orthopoly::stieltjes_coeffs(V, N, size);
}

namespace {

orthopoly::Potential1D potential_1d(const ExperimentConfig& c) {
  if (c.potential == "quadratic") return orthopoly::Potential1D::quadratic();
  if (c.potential == "quartic") return orthopoly::Potential1D::quartic(c.quartic_t);
  throw range_error("1-d potential must be quadratic|quartic");
}

kernels::Potential2D potential_2d(const ExperimentConfig& c) {
  if (c.potential == "ginibre") return kernels::Potential2D::quadratic();
  if (c.potential == "radial2d") return kernels::Potential2D::radial(c.radial_coeffs);
  throw range_error("2-d potential must be ginibre|radial2d");
}

std::filesystem::path out_path(const RunOptions& opt, const std::string& name) {
  std::filesystem::create_directories(opt.outdir);
  return std::filesystem::path(opt.outdir) / name;
}

int workers_of(const RunOptions& opt) {
  return opt.workers > 0 ? opt.workers : hardware_workers();
}

// \int f^n rho dx over the bulk.
double intensity_moment_1d(const TestFunction1D& f,
                           const orthopoly::EquilibriumMeasure1D& eq, int n) {
  const Grid1D g = gl_panels(eq.left, eq.right, 400, 8);
  return g.integrate([&](double x) { return std::pow(f(x), n) * eq.density(x); });
}

// Unified finite-N comparison target for the 1-d macroscopic ladders:
// delta_2(n) * chebyshev + T_N (-1)^n \int Q^n rho  (T_N = N q_N).
double target_1d_macro(const TestFunction1D& f,
                       const orthopoly::EquilibriumMeasure1D& eq,
                       const ThinningRegime& th, int n, int N) {
  if (n == 1)
    return (1.0 - th.q_at(N)) * N * intensity_moment_1d(f, eq, 1);
  double t = (n == 2) ? limits::chebyshev_variance(f) : 0.0;
  const double T = cumulants::macro_T(N, th.q_at(N));
  if (T != 0.0) {
    const double sign = (n % 2) ? -1.0 : 1.0;
    t += T * sign * intensity_moment_1d(f, eq, n);
  }
  return t;
}

std::string regime_label(const ExperimentConfig& c) {
  return (c.mesoscopic ? std::string("meso-") : std::string("macro-")) +
         c.thinning.label();
}

struct CellError {
  std::string cell;
  std::string message;
};

void write_entries(const RunOptions& opt, const std::string& file,
                   std::vector<CumulantEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.model, a.order, a.N, a.method) <
           std::tie(b.model, b.order, b.N, b.method);
  });
  CsvWriter w(CumulantEntry::csv_header());
  for (const auto& e : entries) w.add_row(e.cells());
  w.save(out_path(opt, file).string());
  std::cout << "wrote " << out_path(opt, file).string() << " (" << w.size()
            << " rows)\n";
}

}  // namespace

// ---------------------------------------------------------------------------
// Validation

std::vector<Violation> validate_config(const ExperimentConfig& c) {
  std::vector<Violation> v;
  if (c.dimension != 1 && c.dimension != 2)
    v.push_back({"model.dimension", "must be 1 or 2"});
  if (c.dimension == 1 && c.potential != "quadratic" && c.potential != "quartic")
    v.push_back({"model.potential", "1-d potential must be quadratic|quartic"});
  if (c.dimension == 2 && c.potential != "ginibre" && c.potential != "radial2d")
    v.push_back({"model.potential", "2-d potential must be ginibre|radial2d"});
  if (c.quartic_t < 0.0) v.push_back({"model.t", "quartic coefficient must be >= 0"});
  if (c.dimension == 2 &&
      (c.radial_coeffs.empty() || c.radial_coeffs[0] <= 0.0))
    v.push_back({"model.coeffs", "radial potential needs c_1 > 0"});

  if (c.ladder.empty()) v.push_back({"ladder.N", "empty ladder"});
  for (std::size_t i = 0; i < c.ladder.size(); ++i) {
    if (c.ladder[i] < 4 || c.ladder[i] > 2000)
      v.push_back({"ladder.N", "gas sizes must lie in [4, 2000]"});
    if (i && c.ladder[i] <= c.ladder[i - 1])
      v.push_back({"ladder.N", "ladder must be strictly increasing"});
  }

  if (c.thinning.kind != ThinningRegime::Kind::none) {
    if (c.thinning.tau <= 0.0) v.push_back({"thinning.tau", "must be > 0"});
    for (int N : c.ladder) {
      if (c.thinning.tau * std::pow(static_cast<double>(N), -c.thinning.s) >= 1.0)
        v.push_back({"thinning", "q_N >= 1 at N=" + std::to_string(N)});
    }
  }

  if (c.mesoscopic) {
    const double amax = (c.dimension == 1) ? 1.0 : 0.5;
    if (!(c.alpha > 0.0 && c.alpha < amax))
      v.push_back({"scale.alpha",
                   "mesoscopic exponent must lie in (0," + fmt_g(amax) + ")"});
    if (c.dimension == 2) {
      const kernels::Potential2D V = potential_2d(c);
      const auto eq = kernels::equilibrium_2d(V);
      if (!eq.in_bulk(cplx{c.x0, 0.0}))
        v.push_back({"scale.x0", "base point outside the bulk (droplet radius " +
                                     fmt_g(eq.radius()) + ")"});
    } else {
      if (std::abs(c.x0) >= 1.0)
        v.push_back({"scale.x0", "base point outside the bulk of the 1-d gas"});
    }
  }

  if (c.functions.empty()) v.push_back({"functions", "no test functions"});
  for (const auto& f : c.functions) {
    try {
      if (c.dimension == 1)
        make_fn_1d(f);
      else
        make_fn_2d(f);
    } catch (const std::exception& e) {
      v.push_back({"functions." + f.label, e.what()});
    }
    if (c.dimension == 1 && c.use_exact && f.kind != "poly")
      v.push_back({"functions." + f.label, "exact engine needs polynomial statistics"});
  }

  if (c.orders.empty()) v.push_back({"orders.n", "no orders requested"});
  for (int n : c.orders) {
    if (n < 1 || n > 6) v.push_back({"orders.n", "orders must lie in [1,6]"});
    if (c.use_quadrature && n > 3)
      v.push_back({"orders.n", "quadrature engine is capped at order 3"});
  }
  if (!c.use_exact && !c.use_quadrature && !c.use_mc)
    v.push_back({"engines.use", "no engine selected"});
  if (c.use_mc && c.replicas < 1000)
    v.push_back({"mc.replicas", "at least 1000 replicas required"});
  if (c.use_exact && c.dimension == 2)
    v.push_back({"engines.use", "exact engine is 1-d only"});
  if (c.use_mc && c.dimension == 2 && c.potential != "ginibre")
    v.push_back({"engines.use",
                 "2-d sampling uses the exact radial law of the quadratic potential"});
  return v;
}

int cmd_validate(const ExperimentConfig& c, const RunOptions&) {
  const auto v = validate_config(c);
  if (v.empty()) {
    std::cout << "configuration valid\n";
    return kOk;
  }
  for (const auto& x : v)
    std::cout << "violation: " << x.field << ": " << x.message << "\n";
  return kValidationFailure;
}

// ---------------------------------------------------------------------------
// Combinatorial identities

int cmd_combinatorics_check(const RunOptions&) {
  using combi::Rational;
  bool ok = true;
  auto check = [&](bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      std::cout << "FAIL " << what << "\n";
    }
  };
  for (int n = 1; n <= 12; ++n)
    check(combi::compositions(n).size() == (std::size_t{1} << (n - 1)),
          "composition count n=" + std::to_string(n));
  for (int n = 2; n <= 10; ++n) {
    Rational s = 0;
    for (const auto& k : combi::compositions(n))
      s += combi::upsilon(combi::UpsilonMap::base_map(), k);
    check(s == 0, "base upsilon sum n=" + std::to_string(n));
  }
  for (int n = 1; n <= 10; ++n)
    for (int m = 1; m <= n; ++m) {
      Rational s = 0;
      for (const auto& k : combi::compositions(n))
        s += combi::upsilon(combi::UpsilonMap::indexed(m), k);
      check(s == 0, "indexed upsilon sum n=" + std::to_string(n) + " m=" +
                        std::to_string(m));
    }
  for (int n = 2; n <= 10; ++n)
    check(combi::gamma_coeff(n, 0) == 0, "gamma(n,0)=0 n=" + std::to_string(n));
  for (int n = 1; n <= 10; ++n)
    check(combi::gamma_coeff(n, 1) == ((n % 2) ? -1 : 1),
          "gamma(n,1) n=" + std::to_string(n));
  for (int n = 1; n <= 10; ++n)
    check(combi::rv_sum(n) == (n == 2 ? 1 : 0), "window sum n=" + std::to_string(n));
  std::cout << (ok ? "combinatorics: all identities hold\n"
                   : "combinatorics: FAILURES\n");
  return ok ? kOk : kNumericalFailure;
}

// ---------------------------------------------------------------------------
// Verdicts

Verdict ladder_verdict(const std::vector<double>& values,
                       const std::vector<double>& targets, double tol_abs) {
  Verdict v;
  require(values.size() == targets.size() && !values.empty(),
          "ladder_verdict: size mismatch");
  std::vector<double> gap(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    gap[i] = std::abs(values[i] - targets[i]);
  v.final_gap = gap.back();
  bool mono = true;
  const std::size_t k = values.size();
  for (std::size_t i = (k >= 3 ? k - 3 : 0); i + 1 < k; ++i)
    mono = mono && gap[i + 1] <= gap[i] + 1e-14;
  v.converged = mono && v.final_gap <= tol_abs;
  v.note = mono ? (v.converged ? "converges" : "monotone, gap above tolerance")
                : "not monotone";
  return v;
}

// ---------------------------------------------------------------------------
// Exact-engine table

int cmd_exact_cumulants(const ExperimentConfig& c, const RunOptions& opt) {
  require(c.dimension == 1, "exact-cumulants: 1-d models only");
  const auto V = potential_1d(c);
  const auto eq = orthopoly::equilibrium_1d(V);
  const int max_order = *std::max_element(c.orders.begin(), c.orders.end());

  struct Cell {
    std::size_t fi;
    int N;
  };
  std::vector<Cell> cells;
  for (std::size_t fi = 0; fi < c.functions.size(); ++fi)
    for (int N : c.ladder) cells.push_back({fi, N});

  std::vector<std::vector<CumulantEntry>> results(cells.size());
  std::vector<CellError> errors;
  std::mutex err_mu;

  parallel_for(cells.size(), workers_of(opt), [&](std::size_t ci) {
    const auto& cell = cells[ci];
    try {
      const auto fs = c.functions[cell.fi];
      require(fs.kind == "poly", "exact engine needs polynomial statistics");
      const Poly Q(fs.params);
      const Poly1D f(Q);
      const int N = cell.N;
      const double q = c.thinning.q_at(N), p = 1.0 - q;
      const auto J =
          jacobi_for(V, N, N + max_order * std::max(1, Q.degree()) + 16);
      const auto cums = cumulants::exact_cumulants_1d(J, Q, N, max_order, p);
      for (int n : c.orders) {
        CumulantEntry e;
        e.model = V.name() + ":" + fs.label;
        e.N = N;
        e.order = n;
        e.p = p;
        e.q = q;
        e.T = cumulants::macro_T(N, q);
        e.method = "exact";
        e.value = cums[n];
        e.target = target_1d_macro(f, eq, c.thinning, n, N);
        e.regime = regime_label(c);
        results[ci].push_back(e);
      }
    } catch (const std::exception& ex) {
      std::lock_guard<std::mutex> lock(err_mu);
      errors.push_back({c.functions[cell.fi].label + "/N=" +
                            std::to_string(cell.N),
                        ex.what()});
    }
  });

  std::vector<CumulantEntry> flat;
  for (auto& r : results) flat.insert(flat.end(), r.begin(), r.end());
  write_entries(opt, "cumulants_exact.csv", std::move(flat));
  for (const auto& e : errors)
    std::cout << "cell error: " << e.cell << ": " << e.message << "\n";
  return errors.empty() ? kOk : kNumericalFailure;
}

// ---------------------------------------------------------------------------
// Quadrature table

int cmd_quadrature_cumulants(const ExperimentConfig& c, const RunOptions& opt) {
  std::vector<int> orders;
  for (int n : c.orders)
    if (n <= 3) orders.push_back(n);
  require(!orders.empty(), "quadrature-cumulants: needs an order <= 3");

  struct Cell {
    std::size_t fi;
    int N;
    int n;
  };
  std::vector<Cell> cells;
  for (std::size_t fi = 0; fi < c.functions.size(); ++fi)
    for (int N : c.ladder)
      for (int n : orders) cells.push_back({fi, N, n});
  std::vector<CumulantEntry> entries(cells.size());
  std::vector<CellError> errors;
  std::mutex err_mu;

  if (c.dimension == 1) {
    const auto V = potential_1d(c);
    const auto eq = orthopoly::equilibrium_1d(V);
    parallel_for(cells.size(), workers_of(opt), [&](std::size_t ci) {
      const auto& cell = cells[ci];
      try {
        const auto f = make_fn_1d(c.functions[cell.fi]);
        const int N = cell.N;
        const double q = c.thinning.q_at(N), p = 1.0 - q;
        const auto J = jacobi_for(V, N, N + 24);
        const auto K = orthopoly::cd_kernel(J, V);
        std::shared_ptr<const TestFunction1D> stat = f;
        double alpha = 0.0;
        if (c.mesoscopic) {
          alpha = c.alpha;
          stat = std::make_shared<Rescaled1D>(
              f, std::pow(static_cast<double>(N), alpha), c.x0);
        }
        const auto r = cumulants::quadrature_cumulant(*K, *stat, cell.n, p);
        CumulantEntry e;
        e.model = V.name() + ":" + c.functions[cell.fi].label;
        e.N = N;
        e.alpha = alpha;
        e.order = cell.n;
        e.p = p;
        e.q = q;
        e.T = c.mesoscopic
                  ? cumulants::meso_T_1d(N, q, alpha, eq.density(c.x0))
                  : cumulants::macro_T(N, q);
        e.method = "quadrature";
        e.value = r.value;
        e.target = c.mesoscopic
                       ? (cell.n == 2 ? 2.0 * limits::h_half_variance(*f) : 0.0)
                       : target_1d_macro(*f, eq, c.thinning, cell.n, N);
        e.regime = regime_label(c);
        entries[ci] = e;
      } catch (const std::exception& ex) {
        std::lock_guard<std::mutex> lock(err_mu);
        errors.push_back({"cell " + std::to_string(ci), ex.what()});
      }
    });
  } else {
    const auto V = potential_2d(c);
    const auto eq = kernels::equilibrium_2d(V);
    parallel_for(cells.size(), workers_of(opt), [&](std::size_t ci) {
      const auto& cell = cells[ci];
      try {
        const auto f = make_fn_2d(c.functions[cell.fi]);
        const int N = cell.N;
        const double q = c.thinning.q_at(N), p = 1.0 - q;
        const auto K = kernels::ginibre_finite(V, N);
        std::shared_ptr<const TestFunction2D> stat = f;
        double alpha = 0.0;
        if (c.mesoscopic) {
          alpha = c.alpha;
          stat = std::make_shared<Rescaled2D>(
              f, std::pow(static_cast<double>(N), alpha), cplx{c.x0, 0.0});
        }
        const auto r = cumulants::quadrature_cumulant(*K, *stat, cell.n, p);
        CumulantEntry e;
        e.model = V.name() + ":" + c.functions[cell.fi].label;
        e.N = N;
        e.alpha = alpha;
        e.order = cell.n;
        e.p = p;
        e.q = q;
        const double L = std::pow(static_cast<double>(N), alpha);
        e.T = c.mesoscopic
                  ? cumulants::meso_T_2d(N, q, L, eq.density(cplx{c.x0, 0.0}))
                  : cumulants::macro_T(N, q);
        e.method = "quadrature";
        e.value = r.value;
        if (c.mesoscopic) {
          e.target = (cell.n == 2) ? limits::h1_variance(*f) : 0.0;
        } else {
          e.target = (cell.n == 2) ? limits::h1_variance(*f) : 0.0;
          if (e.T != 0.0) {
            const double sign = (cell.n % 2) ? -1.0 : 1.0;
            e.target += e.T * sign *
                        limits::poisson_cumulant(
                            *f, limits::Intensity2D::equilibrium(eq),
                            std::max(2, cell.n));
          }
        }
        e.regime = regime_label(c);
        entries[ci] = e;
      } catch (const std::exception& ex) {
        std::lock_guard<std::mutex> lock(err_mu);
        errors.push_back({"cell " + std::to_string(ci), ex.what()});
      }
    });
  }
  write_entries(opt, "cumulants_quadrature.csv", std::move(entries));
  for (const auto& e : errors)
    std::cout << "cell error: " << e.cell << ": " << e.message << "\n";
  return errors.empty() ? kOk : kNumericalFailure;
}

// ---------------------------------------------------------------------------
// Sampling

int cmd_sample(const ExperimentConfig& c, const RunOptions& opt) {
  require(!c.ladder.empty(), "sample: ladder must contain a gas size");
  const int N = c.ladder.front();
  const double q = c.thinning.q_at(N), p = 1.0 - q;

  KernelHandle K;
  std::unique_ptr<sampler::Proposal> prop;
  if (c.dimension == 1) {
    const auto V = potential_1d(c);
    const auto J = jacobi_for(V, N, N + 8);
    K = orthopoly::cd_kernel(J, V);
    prop = sampler::envelope_proposal_1d(*K);
  } else {
    K = kernels::ginibre_finite(potential_2d(c), N);
    prop = sampler::mixture_proposal_2d(*K);
  }
  const ProjectionBasis* basis = K->basis();
  require(basis != nullptr, "sample: kernel exposes no basis");

  std::vector<sampler::PointConfig> reps(c.replicas);
  parallel_for(c.replicas, workers_of(opt), [&](std::size_t r) {
    RngStream rng(opt.seed, r);
    sampler::PointConfig cfg = sampler::hkpv_sample(*basis, *prop, rng);
    if (p < 1.0) cfg = sampler::bernoulli_thin(cfg, p, rng);
    reps[r] = std::move(cfg);
  });

  CsvWriter pw({"seed", "replica", "point", "x", "y"});
  for (const auto& cfg : reps)
    for (std::size_t i = 0; i < cfg.pts.size(); ++i)
      pw.add_row({std::to_string(opt.seed), std::to_string(cfg.replica),
                  std::to_string(i), fmt_g(cfg.pts[i].x), fmt_g(cfg.pts[i].y)});
  pw.save(out_path(opt, "samples.csv").string());

  CsvWriter sw({"seed", "replica", "function", "value"});
  CsvWriter mw({"function", "order", "k", "se", "replicas"});
  for (const auto& fs : c.functions) {
    std::vector<double> vals(reps.size());
    if (c.dimension == 1) {
      const auto f = make_fn_1d(fs);
      for (std::size_t r = 0; r < reps.size(); ++r) {
        double s = 0.0;
        for (const Point& x : reps[r].pts) s += (*f)(x.x);
        vals[r] = s;
      }
    } else {
      const auto f = make_fn_2d(fs);
      for (std::size_t r = 0; r < reps.size(); ++r) {
        double s = 0.0;
        for (const Point& x : reps[r].pts) s += (*f)(to_cplx(x));
        vals[r] = s;
      }
    }
    for (std::size_t r = 0; r < vals.size(); ++r)
      sw.add_row({std::to_string(opt.seed), std::to_string(r), fs.label,
                  fmt_g(vals[r])});
    const auto ks = sampler::mc_cumulants(vals, 4);
    for (int n = 1; n <= 4; ++n)
      mw.add_row({fs.label, std::to_string(n), fmt_g(ks.k[n]), fmt_g(ks.se[n]),
                  std::to_string(ks.n)});
  }
  sw.save(out_path(opt, "statistics.csv").string());
  mw.save(out_path(opt, "mc_summary.csv").string());
  std::cout << "wrote samples/statistics/mc_summary to " << opt.outdir << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// Scans with regime verdicts

int cmd_crossover_scan(const ExperimentConfig& c, const RunOptions& opt) {
  require(c.dimension == 1, "crossover-scan: 1-d exact ladders");
  const auto V = potential_1d(c);
  const auto eq = orthopoly::equilibrium_1d(V);
  const int max_order = *std::max_element(c.orders.begin(), c.orders.end());

  CsvWriter summary({"function", "n", "N_top", "value", "target", "final_gap",
                     "verdict"});
  bool any_error = false;
  for (const auto& fs : c.functions) {
    if (fs.kind != "poly") continue;
    const Poly Q(fs.params);
    const Poly1D f(Q);
    std::vector<std::vector<double>> vals(max_order + 1);
    std::vector<std::vector<double>> tgts(max_order + 1);
    try {
      for (int N : c.ladder) {
        const double q = c.thinning.q_at(N);
        const auto J =
            jacobi_for(V, N, N + max_order * std::max(1, Q.degree()) + 16);
        const auto cums =
            cumulants::exact_cumulants_1d(J, Q, N, max_order, 1.0 - q);
        for (int n : c.orders) {
          vals[n].push_back(cums[n]);
          tgts[n].push_back(target_1d_macro(f, eq, c.thinning, n, N));
        }
      }
    } catch (const std::exception& ex) {
      std::cout << "cell error: " << fs.label << ": " << ex.what() << "\n";
      any_error = true;
      continue;
    }
    const double scale =
        std::max(std::abs(limits::chebyshev_variance(f)), 1e-6);
    for (int n : c.orders) {
      const double tol =
          c.tolerance * std::max(std::abs(tgts[n].back()), scale);
      const auto v = ladder_verdict(vals[n], tgts[n], tol);
      summary.add_row({fs.label, std::to_string(n),
                       std::to_string(c.ladder.back()), fmt_g(vals[n].back()),
                       fmt_g(tgts[n].back()), fmt_g(v.final_gap), v.note});
      std::cout << fs.label << " n=" << n << ": value " << fmt_g(vals[n].back())
                << " target " << fmt_g(tgts[n].back()) << " [" << v.note
                << "]\n";
    }
  }
  summary.save(out_path(opt, "crossover_summary.csv").string());
  const int rc = cmd_exact_cumulants(c, opt);
  return any_error ? kNumericalFailure : rc;
}

int cmd_meso_scan(const ExperimentConfig& c, const RunOptions& opt) {
  ExperimentConfig cc = c;
  cc.mesoscopic = true;
  cc.use_quadrature = true;
  const auto violations = validate_config(cc);
  if (!violations.empty()) return cmd_validate(cc, opt);

  CsvWriter summary({"function", "n", "N_top", "value", "target", "final_gap",
                     "verdict"});
  bool any_error = false;
  std::vector<int> orders;
  for (int n : cc.orders)
    if (n <= 3 && n >= 2) orders.push_back(n);

  // model data shared across the ladder
  std::optional<kernels::Potential2D> V2;
  std::optional<kernels::EquilibriumMeasure2D> eq2;
  std::optional<orthopoly::Potential1D> V1;
  std::optional<orthopoly::EquilibriumMeasure1D> eq1;
  if (cc.dimension == 2) {
    V2 = potential_2d(cc);
    eq2 = kernels::equilibrium_2d(*V2);
  } else {
    V1 = potential_1d(cc);
    eq1 = orthopoly::equilibrium_1d(*V1);
  }

  for (const auto& fs : cc.functions) {
    std::vector<std::vector<double>> vals(4), tgts(4);
    try {
      for (int N : cc.ladder) {
        const double L = std::pow(static_cast<double>(N), cc.alpha);
        if (cc.dimension == 2) {
          const auto& V = *V2;
          const auto& eq = *eq2;
          const auto f = make_fn_2d(fs);
          const double rho0 = eq.density(cplx{cc.x0, 0.0});
          double q = 0.0;
          if (cc.thinning.kind == ThinningRegime::Kind::critical)
            q = cc.thinning.tau * L * L / (N * rho0);
          const auto K = kernels::ginibre_finite(V, N);
          const Rescaled2D fN(f, L, cplx{cc.x0, 0.0});
          for (int n : orders) {
            const auto r = cumulants::quadrature_cumulant(*K, fN, n, 1.0 - q);
            vals[n].push_back(r.value);
            double t = (n == 2) ? limits::h1_variance(*f) : 0.0;
            if (q > 0.0) {
              const double sign = (n % 2) ? -1.0 : 1.0;
              t += cc.thinning.tau * sign *
                   limits::poisson_cumulant(*f, limits::Intensity2D::lebesgue(),
                                            n);
            }
            tgts[n].push_back(t);
          }
        } else {
          const auto& V = *V1;
          const auto& eq = *eq1;
          const auto f = make_fn_1d(fs);
          const double rho0 = eq.density(cc.x0);
          double q = 0.0;
          if (cc.thinning.kind == ThinningRegime::Kind::critical)
            q = cc.thinning.tau /
                (std::pow(static_cast<double>(N), 1.0 - cc.alpha) * rho0);
          const auto J = jacobi_for(V, N, N + 24);
          const auto K = orthopoly::cd_kernel(J, V);
          const Rescaled1D fN(f, L, cc.x0);
          for (int n : orders) {
            const auto r = cumulants::quadrature_cumulant(*K, fN, n, 1.0 - q);
            vals[n].push_back(r.value);
            double t = (n == 2) ? 2.0 * limits::h_half_variance(*f) : 0.0;
            if (q > 0.0) {
              const double sign = (n % 2) ? -1.0 : 1.0;
              t += cc.thinning.tau * sign *
                   limits::poisson_cumulant(*f, limits::Intensity1D::lebesgue(),
                                            n);
            }
            tgts[n].push_back(t);
          }
        }
      }
    } catch (const std::exception& ex) {
      std::cout << "cell error: " << fs.label << ": " << ex.what() << "\n";
      any_error = true;
      continue;
    }
    for (int n : orders) {
      if (vals[n].empty()) continue;
      const double scale = std::max(std::abs(tgts[2].back()), 1e-6);
      const double tol = cc.tolerance * std::max(std::abs(tgts[n].back()), scale);
      const auto v = ladder_verdict(vals[n], tgts[n], tol);
      summary.add_row({fs.label, std::to_string(n),
                       std::to_string(cc.ladder.back()), fmt_g(vals[n].back()),
                       fmt_g(tgts[n].back()), fmt_g(v.final_gap), v.note});
      std::cout << fs.label << " n=" << n << ": value " << fmt_g(vals[n].back())
                << " target " << fmt_g(tgts[n].back()) << " [" << v.note
                << "]\n";
    }
  }
  summary.save(out_path(opt, "meso_summary.csv").string());
  return any_error ? kNumericalFailure : kOk;
}

// ---------------------------------------------------------------------------
// Limits table

int cmd_limits_table(const ExperimentConfig& c, const RunOptions& opt) {
  CsvWriter w({"function", "quantity", "value"});
  const double tau =
      c.thinning.kind == ThinningRegime::Kind::none ? 1.0 : c.thinning.tau;
  for (const auto& fs : c.functions) {
    if (c.dimension == 1) {
      const auto f = make_fn_1d(fs);
      if (std::isfinite(f->support_radius()) ||
          dynamic_cast<const Poly1D*>(f.get())) {
        try {
          w.add_row({fs.label, "chebyshev_variance",
                     fmt_g(limits::chebyshev_variance(*f))});
        } catch (const std::exception&) {
        }
      }
      if (f->has_fourier())
        w.add_row({fs.label, "h_half_variance", fmt_g(limits::h_half_variance(*f))});
      const auto V = potential_1d(c);
      const auto eq = orthopoly::equilibrium_1d(V);
      for (int n = 2; n <= 4; ++n)
        w.add_row({fs.label, "poisson_macro_n" + std::to_string(n),
                   fmt_g(limits::poisson_cumulant(
                       *f, limits::Intensity1D::equilibrium(eq), n))});
      for (int n = 2; n <= 4; ++n)
        w.add_row({fs.label, "crossover_macro_n" + std::to_string(n),
                   fmt_g(limits::crossover_cumulant(*f, n, tau,
                                                    limits::Setting::macro1d,
                                                    &eq))});
    } else {
      const auto f = make_fn_2d(fs);
      w.add_row({fs.label, "h1_variance", fmt_g(limits::h1_variance(*f))});
      const auto V = potential_2d(c);
      const auto eq = kernels::equilibrium_2d(V);
      for (int n = 2; n <= 4; ++n)
        w.add_row({fs.label, "poisson_macro_n" + std::to_string(n),
                   fmt_g(limits::poisson_cumulant(
                       *f, limits::Intensity2D::equilibrium(eq), n))});
      for (int n = 2; n <= 4; ++n)
        w.add_row({fs.label, "crossover_meso_n" + std::to_string(n),
                   fmt_g(limits::crossover_cumulant(*f, n, tau,
                                                    limits::Setting::meso2d))});
    }
  }
  w.save(out_path(opt, "limits.csv").string());
  std::cout << "wrote " << out_path(opt, "limits.csv").string() << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// Decay report

int cmd_decay_report(const ExperimentConfig& c, const RunOptions& opt) {
  CsvWriter w({"N", "distance", "absK", "fitted_rate"});
  bool ok = true;
  for (int N : c.ladder) {
    kernels::DecayReport rep;
    if (c.dimension == 1) {
      const auto V = potential_1d(c);
      const auto J = jacobi_for(V, N, N + 8);
      const auto K = orthopoly::cd_kernel(J, V);
      rep = kernels::decay_diagnostics(*K, {0.0, 0.0}, 0.5, N, 4.0, 1.0);
    } else {
      const auto V = potential_2d(c);
      const auto eq = kernels::equilibrium_2d(V);
      const auto K = kernels::ginibre_finite(V, N);
      rep = kernels::decay_diagnostics(*K, {0.0, 0.0}, 0.5 * eq.radius(), N, 4.0,
                                       eq.radius());
    }
    for (const auto& s : rep.samples)
      w.add_row({std::to_string(N), fmt_g(s.distance), fmt_g(s.absK),
                 fmt_g(rep.rate)});
    std::cout << "N=" << N << " rate=" << fmt_g(rep.rate)
              << " residual=" << fmt_g(rep.rate_residual)
              << " tail_mass=" << fmt_g(rep.tail_mass)
              << " eps_N=" << fmt_g(rep.eps_N) << "\n";
    ok = ok && rep.rate_positive();
  }
  w.save(out_path(opt, "decay.csv").string());
  return ok ? kOk : kNumericalFailure;
}

}  // namespace dpplab::cli
