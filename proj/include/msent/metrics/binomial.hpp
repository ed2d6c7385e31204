#pragma once

#include <vector>

namespace msent::binomial {

// Binomial distribution helpers. Small N uses exact products; larger N works
// in log space so that N in the thousands neither overflows nor underflows.

double log_choose(int n, int k);
double choose(int n, int k);

// b(k; n, p)
double pmf(int k, int n, double p);
// B(k; n, p) = sum_{j<=k} b(j; n, p), Neumaier-compensated. B(-1) = 0.
double cdf(int k, int n, double p);
// Full pmf vector, index k = 0..n.
std::vector<double> pmf_vector(int n, double p);

}  // namespace msent::binomial
