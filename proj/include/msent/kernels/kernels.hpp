#pragma once

// Data-parallel complex arithmetic used by the dense backend.
//
// Every kernel has a portable scalar reference implementation. On x86-64 an
// AVX2/FMA variant is compiled into a separate translation unit and selected
// at runtime when the CPU supports it. Setting MSENT_KERNELS=scalar in the
// environment forces the reference path.
//
// All buffers are unaligned, contiguous and row-major. Outputs must not alias
// inputs unless stated otherwise.

#include <complex>
#include <cstddef>
#include <span>

namespace msent::kernels {

using cplx = std::complex<double>;

struct KernelTable {
  const char* name;
  // sum_i conj(x_i) * y_i
  cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
  // y += a * x
  void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  // x *= a (in place)
  void (*scale)(cplx a, cplx* x, std::size_t n);
  // sum_i |x_i|^2
  double (*norm_sq)(const cplx* x, std::size_t n);
  // sum_i |p_i - q_i|
  double (*abs_diff_sum)(const double* p, const double* q, std::size_t n);
  // c = a * b with a: m x k, b: k x n, c: m x n
  void (*gemm)(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
               std::size_t n);
};

const KernelTable& scalar_table();

// nullptr when the AVX2 variant was not built or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

bool cpu_supports_avx2();

// Table chosen once per process.
const KernelTable& active();

inline cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
  return active().dotc(x.data(), y.data(), x.size());
}
inline void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}
inline void scale(cplx a, std::span<cplx> x) { active().scale(a, x.data(), x.size()); }
inline double norm_sq(std::span<const cplx> x) { return active().norm_sq(x.data(), x.size()); }
inline double abs_diff_sum(std::span<const double> p, std::span<const double> q) {
  return active().abs_diff_sum(p.data(), q.data(), p.size());
}

}  // namespace msent::kernels
