#include "dpplab/combi.hpp"

#include <cmath>

namespace dpplab::combi {
namespace {

void check_order(int n) {
  require(n >= 1 && n <= kMaxOrder, "composition order out of supported range [1,12]");
}

void emit(int remaining, Composition& cur, std::vector<Composition>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (int first = 1; first <= remaining; ++first) {
    cur.parts.push_back(first);
    emit(remaining - first, cur, out);
    cur.parts.pop_back();
  }
}

}  // namespace

std::vector<Composition> compositions(int n) {
  check_order(n);
  std::vector<Composition> out;
  out.reserve(std::size_t{1} << (n - 1));
  Composition cur;
  cur.n = n;
  emit(n, cur, out);
  return out;
}

BigInt multinomial(const Composition& k) {
  require(k.length() >= 1, "multinomial: empty composition");
  BigInt num = 1;
  int seen = 0;
  // n!/(k_1!...k_l!) as a product of binomials to stay integral throughout
  for (int part : k.parts) {
    require(part >= 1, "multinomial: parts must be positive");
    for (int j = 1; j <= part; ++j) {
      ++seen;
      num = num * seen / j;
    }
  }
  require(seen == k.n, "multinomial: parts do not sum to n");
  return num;
}

BigInt binomial(int l, int m) {
  if (m < 0 || m > l) return 0;
  BigInt r = 1;
  for (int j = 1; j <= m; ++j) r = r * (l - m + j) / j;
  return r;
}

Rational gamma_coeff(int n, int m) {
  check_order(n);
  require(m >= 0 && m <= n, "gamma_coeff: need 0 <= m <= n");
  Rational acc = 0;
  for (const auto& k : compositions(n)) {
    const int l = k.length();
    const BigInt c = binomial(l, m);
    if (c == 0) continue;
    Rational term(c * multinomial(k), l);
    if (l % 2) term = -term;
    acc += term;
  }
  return acc;
}

Rational upsilon(const UpsilonMap& map, const Composition& k) {
  check_order(k.n);
  const int l = k.length();
  if (map.kind == UpsilonMap::Kind::base) {
    Rational r(multinomial(k), l);
    return (l % 2) ? -r : r;
  }
  const int m = map.m;
  if (l == 1) {
    // trivial composition: fixed so the full sum over k |- n vanishes
    Rational r = -gamma_coeff(k.n, m);
    if (m == 1) r -= 1;
    return r;
  }
  const BigInt c = binomial(l, m);
  if (c == 0) return 0;
  Rational r(c * multinomial(k), l);
  return (l % 2) ? -r : r;
}

double upsilon_apply_values(const UpsilonMap& map, const std::vector<double>& fx) {
  const int n = static_cast<int>(fx.size());
  check_order(n);
  double acc = 0.0;
  for (const auto& k : compositions(n)) {
    const Rational w = upsilon(map, k);
    if (w == 0) continue;
    double prod = 1.0;
    for (int j = 0; j < k.length(); ++j) prod *= std::pow(fx[j], k.parts[j]);
    acc += static_cast<double>(w) * prod;
  }
  return acc;
}

double upsilon_apply(const UpsilonMap& map, const std::function<double(double)>& f,
                     const std::vector<double>& x) {
  std::vector<double> fx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) fx[i] = f(x[i]);
  return upsilon_apply_values(map, fx);
}

Rational rv_sum(int n) {
  require(n >= 1 && n <= 10, "rv_sum: order out of supported range [1,10]");
  Rational acc = 0;
  for (const auto& k : compositions(n)) {
    const int l = k.length();
    BigInt brace = 0;
    for (int r = 2; r <= l; ++r)
      for (int s = r + 1; s <= l; ++s) brace += BigInt(k.parts[r - 1]) * k.parts[s - 1];
    for (int r = 2; r <= l; ++r) brace += BigInt(k.parts[r - 1]) * (k.parts[r - 1] - n);
    if (brace == 0) continue;
    acc += upsilon(UpsilonMap::base_map(), k) * Rational(brace);
  }
  return -acc;
}

}  // namespace dpplab::combi
