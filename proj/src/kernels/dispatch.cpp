#include <cstdlib>
#include <string_view>

#include "msent/kernels/kernels.hpp"

namespace msent::kernels {

#if defined(MSENT_HAVE_AVX2)
const KernelTable& avx2_table_unchecked();
#endif

bool cpu_supports_avx2() {
#if defined(MSENT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

const KernelTable* avx2_table() {
#if defined(MSENT_HAVE_AVX2)
  if (cpu_supports_avx2()) return &avx2_table_unchecked();
#endif
  return nullptr;
}

const KernelTable& active() {
  static const KernelTable& chosen = [&]() -> const KernelTable& {
    if (const char* env = std::getenv("MSENT_KERNELS"); env && std::string_view(env) == "scalar") {
      return scalar_table();
    }
    if (const KernelTable* t = avx2_table()) return *t;
    return scalar_table();
  }();
  return chosen;
}

}  // namespace msent::kernels
