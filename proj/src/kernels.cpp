#include "sqg/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace sqg::kernels {

#if defined(SQG_HAVE_AVX2_TU)
const KernelTable& avx2_table_impl();
#endif
#if defined(SQG_HAVE_NEON_TU)
const KernelTable& neon_table_impl();
#endif

const KernelTable* avx2_table() {
#if defined(SQG_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_table_impl() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() {
#if defined(SQG_HAVE_NEON_TU)
  return &neon_table_impl();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() {
  const char* env = std::getenv("SQG_KERNELS");
  const std::string_view forced = env != nullptr ? std::string_view(env) : std::string_view();
  if (forced == "scalar") {
    return scalar_table();
  }
  if (const KernelTable* t = avx2_table(); t != nullptr) {
    return *t;
  }
  if (const KernelTable* t = neon_table(); t != nullptr) {
    return *t;
  }
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace sqg::kernels
