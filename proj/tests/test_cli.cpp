#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dpplab/cli.hpp"

using namespace dpplab;
using namespace dpplab::cli;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TmpDir {
  std::filesystem::path path;
  explicit TmpDir(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TmpDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("config round trip") {
  const auto raw = Config::parse_string(
      "[model]\ndimension = 1\npotential = quadratic\n"
      "[ladder]\nN = 10 20\n"
      "[thinning]\nkind = critical\ntau = 1.5\n"
      "[functions]\nQ1 = poly 0 1\n"
      "[orders]\nn = 2 3\n"
      "[engines]\nuse = exact\n");
  const auto c = config_from(raw);
  CHECK(c.dimension == 1);
  CHECK(c.ladder == std::vector<int>{10, 20});
  CHECK(c.thinning.kind == cumulants::ThinningRegime::Kind::critical);
  CHECK(c.thinning.tau == doctest::Approx(1.5));
  REQUIRE(c.functions.size() == 1);
  CHECK(c.functions[0].kind == "poly");
  CHECK(c.functions[0].label == "Q1");
  CHECK(c.use_exact);
  CHECK(!c.use_quadrature);
}

TEST_CASE("validation catches the documented violations") {
  SUBCASE("default configs are valid") {
    CHECK(validate_config(default_config(1)).empty());
    CHECK(validate_config(default_config(2)).empty());
  }
  SUBCASE("mesoscopic exponent range in 2-d") {
    auto c = default_config(2);
    c.mesoscopic = true;
    c.alpha = 0.6;
    bool hit = false;
    for (const auto& v : validate_config(c)) hit |= v.field == "scale.alpha";
    CHECK(hit);
  }
  SUBCASE("base point outside the droplet") {
    auto c = default_config(2);
    c.mesoscopic = true;
    c.alpha = 0.25;
    c.x0 = 2.0;
    bool hit = false;
    std::string msg;
    for (const auto& v : validate_config(c))
      if (v.field == "scale.x0") {
        hit = true;
        msg = v.message;
      }
    CHECK(hit);
    CHECK(msg.find("0.707") != std::string::npos);
  }
  SUBCASE("quadrature order cap") {
    auto c = default_config(1);
    c.use_quadrature = true;
    c.orders = {2, 5};
    bool hit = false;
    for (const auto& v : validate_config(c)) hit |= v.field == "orders.n";
    CHECK(hit);
  }
  SUBCASE("thinning schedule must keep q below one") {
    auto c = default_config(1);
    c.ladder = {5, 10};
    c.thinning = cumulants::ThinningRegime::critical(8.0);
    bool hit = false;
    for (const auto& v : validate_config(c)) hit |= v.field == "thinning";
    CHECK(hit);
  }
}

TEST_CASE("ladder verdict rule") {
  const std::vector<double> t = {1.0, 1.0, 1.0, 1.0};
  CHECK(ladder_verdict({1.5, 1.2, 1.1, 1.02}, t, 0.05).converged);
  CHECK(!ladder_verdict({1.5, 1.2, 1.1, 1.2}, t, 0.25).converged);   // not monotone
  CHECK(!ladder_verdict({1.5, 1.4, 1.3, 1.2}, t, 0.05).converged);   // gap too big
  CHECK(ladder_verdict({1.0, 1.0, 1.0, 1.0}, t, 0.01).converged);    // exact ties
}

TEST_CASE("combinatorics-check subcommand") {
  CHECK(cmd_combinatorics_check(RunOptions{}) == kOk);
}

TEST_CASE("exact-cumulants writes deterministic reports") {
  TmpDir tmp("dpplab_test_exact");
  auto c = default_config(1);
  c.ladder = {8, 12};
  c.orders = {1, 2, 3};
  c.thinning = cumulants::ThinningRegime::critical(0.5);
  RunOptions opt;
  opt.outdir = tmp.path.string();
  opt.workers = 2;
  REQUIRE(cmd_exact_cumulants(c, opt) == kOk);
  const auto csv = tmp.path / "cumulants_exact.csv";
  REQUIRE(std::filesystem::exists(csv));
  const std::string first = slurp(csv);
  CHECK(first.find("model,N,alpha,n,p,q,T_N,method,value,stderr,target,regime") !=
        std::string::npos);
  CHECK(first.find("exact") != std::string::npos);
  CHECK(first.find("macro-critical") != std::string::npos);
  REQUIRE(cmd_exact_cumulants(c, opt) == kOk);
  CHECK(slurp(csv) == first);  // byte-identical rerun
}

TEST_CASE("quadrature and scan subcommands run end to end") {
  TmpDir tmp("dpplab_test_scan");
  RunOptions opt;
  opt.outdir = tmp.path.string();
  opt.workers = 2;

  SUBCASE("1-d quadrature table") {
    auto c = default_config(1);
    c.ladder = {10};
    c.orders = {1, 2};
    c.use_quadrature = true;
    CHECK(cmd_quadrature_cumulants(c, opt) == kOk);
    CHECK(std::filesystem::exists(tmp.path / "cumulants_quadrature.csv"));
  }

  SUBCASE("crossover scan emits a summary with verdicts") {
    auto c = default_config(1);
    c.ladder = {8, 12, 16};
    c.orders = {2};
    c.thinning = cumulants::ThinningRegime::critical(0.5);
    c.functions = {{"poly", {0.0, 1.0}, "x"}};
    CHECK(cmd_crossover_scan(c, opt) == kOk);
    const std::string sum = slurp(tmp.path / "crossover_summary.csv");
    CHECK(sum.find("verdict") != std::string::npos);
    CHECK(sum.find("x") != std::string::npos);
  }

  SUBCASE("limits table") {
    auto c = default_config(1);
    CHECK(cmd_limits_table(c, opt) == kOk);
    CHECK(std::filesystem::exists(tmp.path / "limits.csv"));
  }

  SUBCASE("decay report") {
    auto c = default_config(2);
    c.ladder = {24};
    CHECK(cmd_decay_report(c, opt) == kOk);
    const std::string csv = slurp(tmp.path / "decay.csv");
    CHECK(csv.find("N,distance,absK,fitted_rate") != std::string::npos);
  }
}

TEST_CASE("sample subcommand dumps samples and statistics") {
  TmpDir tmp("dpplab_test_sample");
  RunOptions opt;
  opt.outdir = tmp.path.string();
  opt.workers = 2;
  opt.seed = 99;
  auto c = default_config(2);
  c.ladder = {10};
  c.replicas = 1200;
  c.functions = {{"radialbump", {1, 0.45}, "s"}};
  REQUIRE(cmd_sample(c, opt) == kOk);
  const std::string pts = slurp(tmp.path / "samples.csv");
  CHECK(pts.find("seed,replica,point,x,y") != std::string::npos);
  const std::string stats = slurp(tmp.path / "statistics.csv");
  CHECK(stats.find("99,0,s,") != std::string::npos);
  CHECK(std::filesystem::exists(tmp.path / "mc_summary.csv"));
}
