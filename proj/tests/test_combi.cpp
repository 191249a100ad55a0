#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dpplab/combi.hpp"
#include "support/oracles.hpp"

using namespace dpplab;
using combi::Composition;
using combi::Rational;
using combi::UpsilonMap;

TEST_CASE("compositions enumerate exactly 2^(n-1) tuples, lexicographically") {
  CHECK(combi::compositions(1).size() == 1);
  const auto c3 = combi::compositions(3);
  REQUIRE(c3.size() == 4);
  CHECK(c3[0].parts == std::vector<int>{1, 1, 1});
  CHECK(c3[1].parts == std::vector<int>{1, 2});
  CHECK(c3[2].parts == std::vector<int>{2, 1});
  CHECK(c3[3].parts == std::vector<int>{3});
  CHECK(combi::compositions(8).size() == 128);
  for (int n = 1; n <= 12; ++n) {
    const auto cs = combi::compositions(n);
    CHECK(cs.size() == (std::size_t{1} << (n - 1)));
    for (const auto& k : cs) {
      int s = 0;
      for (int part : k.parts) {
        CHECK(part >= 1);
        s += part;
      }
      CHECK(s == n);
    }
  }
  CHECK_THROWS_AS(combi::compositions(13), range_error);
  CHECK_THROWS_AS(combi::compositions(0), range_error);
}

TEST_CASE("multinomial coefficients") {
  auto comp = [](std::vector<int> p) {
    Composition k;
    k.parts = std::move(p);
    for (int v : k.parts) k.n += v;
    return k;
  };
  CHECK(combi::multinomial(comp({1, 1, 1})) == 6);
  CHECK(combi::multinomial(comp({2, 1})) == 3);
  CHECK(combi::multinomial(comp({3})) == 1);
  CHECK(combi::multinomial(comp({1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1})) ==
        combi::BigInt(479001600));  // 12!
}

TEST_CASE("gamma coefficients: low-order identities") {
  // gamma(n,0) vanishes above n = 1; at n = 1 the composition sum gives -1,
  // matching the generating function.
  CHECK(combi::gamma_coeff(1, 0) == -1);
  for (int n = 2; n <= 10; ++n) CHECK(combi::gamma_coeff(n, 0) == 0);
  for (int n = 1; n <= 10; ++n)
    CHECK(combi::gamma_coeff(n, 1) == ((n % 2) ? -1 : 1));
}

TEST_CASE("gamma coefficients match the generating function expansion") {
  for (int n = 1; n <= 8; ++n)
    for (int m = 0; m <= n; ++m)
      CHECK(combi::gamma_coeff(n, m) ==
            oracles::gamma_from_generating_function(n, m));
}

TEST_CASE("upsilon values and normalization") {
  auto comp = [](std::vector<int> p) {
    Composition k;
    k.parts = std::move(p);
    for (int v : k.parts) k.n += v;
    return k;
  };
  CHECK(combi::upsilon(UpsilonMap::base_map(), comp({2})) == -1);
  CHECK(combi::upsilon(UpsilonMap::base_map(), comp({1, 1})) == 1);

  for (int n = 2; n <= 10; ++n) {
    Rational s = 0;
    for (const auto& k : combi::compositions(n))
      s += combi::upsilon(UpsilonMap::base_map(), k);
    CHECK(s == 0);
  }
  for (int n = 1; n <= 10; ++n)
    for (int m = 1; m <= n; ++m) {
      Rational s = 0;
      for (const auto& k : combi::compositions(n))
        s += combi::upsilon(UpsilonMap::indexed(m), k);
      CHECK(s == 0);
    }
}

TEST_CASE("upsilon_apply") {
  auto f = [](double x) { return 1.0 + x * x; };

  SUBCASE("collapses to zero on the diagonal") {
    for (int n = 2; n <= 6; ++n) {
      const std::vector<double> x(n, 0.7);
      CHECK(combi::upsilon_apply(UpsilonMap::base_map(), f, x) ==
            doctest::Approx(0.0).epsilon(1e-12));
      CHECK(combi::upsilon_apply(UpsilonMap::indexed(1), f, x) ==
            doctest::Approx(0.0).epsilon(1e-12));
    }
  }

  SUBCASE("n = 2 closed form: f(a)f(b) - f(a)^2") {
    const double a = 0.3, b = -1.2;
    const double got =
        combi::upsilon_apply(UpsilonMap::base_map(), f, {a, b});
    CHECK(got == doctest::Approx(f(a) * f(b) - f(a) * f(a)).epsilon(1e-14));
  }
}

TEST_CASE("window sum collapses to the variance order only") {
  for (int n = 1; n <= 10; ++n)
    CHECK(combi::rv_sum(n) == (n == 2 ? Rational(1) : Rational(0)));
}
