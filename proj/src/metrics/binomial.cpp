#include "msent/metrics/binomial.hpp"

#include <algorithm>
#include <cmath>

namespace msent::binomial {
namespace {

constexpr int kExactLimit = 50;

struct Neumaier {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) c += (sum - t) + x;
    else c += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

}  // namespace

double log_choose(int n, int k) {
  if (k < 0 || k > n) return -INFINITY;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (n <= kExactLimit) {
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
  }
  return std::exp(log_choose(n, k));
}

double pmf(int k, int n, double p) {
  if (k < 0 || k > n) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  if (n <= kExactLimit) return choose(n, k) * std::pow(p, k) * std::pow(1.0 - p, n - k);
  return std::exp(log_choose(n, k) + k * std::log(p) + (n - k) * std::log1p(-p));
}

double cdf(int k, int n, double p) {
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  Neumaier acc;
  for (int j = 0; j <= k; ++j) acc.add(pmf(j, n, p));
  return std::min(acc.value(), 1.0);
}

std::vector<double> pmf_vector(int n, double p) {
  std::vector<double> out(n + 1);
  for (int k = 0; k <= n; ++k) out[k] = pmf(k, n, p);
  return out;
}

}  // namespace msent::binomial
