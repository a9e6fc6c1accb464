#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"

namespace cpt::kernels {

namespace {

const KernelTable kScalar{"scalar", detail::axpy_scalar, detail::gemv_scalar, detail::dotu_scalar};

#if defined(CPT_HAVE_AVX2_KERNELS)
const KernelTable kAvx2{"avx2", detail::axpy_avx2, detail::gemv_avx2, detail::dotu_avx2};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable* initial_choice() {
  const char* forced = std::getenv("CPT_KERNELS");
  if (forced != nullptr && std::string(forced) == "scalar") return &kScalar;
  if (const KernelTable* t = avx2_table()) return t;
  return &kScalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_choice()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if defined(CPT_HAVE_AVX2_KERNELS)
  static const bool supported = cpu_has_avx2();
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

std::vector<const KernelTable*> available() {
  std::vector<const KernelTable*> out{&kScalar};
  if (const KernelTable* t = avx2_table()) out.push_back(t);
  return out;
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

bool select(std::string_view name) {
  for (const KernelTable* t : available()) {
    if (t->name == name) {
      current().store(t, std::memory_order_release);
      return true;
    }
  }
  return false;
}

}  // namespace cpt::kernels
