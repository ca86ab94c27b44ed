#include <atomic>
#include <cstdlib>
#include <string>

#include "fbauction/error.hpp"
#include "tables.hpp"

namespace fba::kernels {
namespace {

const KernelTable* detect() noexcept {
  const char* env = std::getenv("FBA_ISA");
  if (env != nullptr && std::string_view(env) == "scalar") return &detail::kScalarTable;
  if (const KernelTable* t = avx2_table(); t != nullptr) return t;
  return &detail::kScalarTable;
}

std::atomic<const KernelTable*>& slot() noexcept {
  static std::atomic<const KernelTable*> current{detect()};
  return current;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable& scalar_table() noexcept { return detail::kScalarTable; }

bool cpu_supports(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(FBA_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* avx2_table() noexcept {
#if defined(FBA_HAVE_AVX2)
  if (cpu_supports(Isa::avx2)) return &detail::kAvx2Table;
#endif
  return nullptr;
}

const KernelTable& active() noexcept { return *slot().load(std::memory_order_relaxed); }

void select(Isa isa) {
  if (!cpu_supports(isa)) {
    throw InputError("kernel variant " + std::string(to_string(isa)) + " is not supported here");
  }
  slot().store(isa == Isa::scalar ? &detail::kScalarTable : avx2_table(), std::memory_order_relaxed);
}

void reset() { slot().store(detect(), std::memory_order_relaxed); }

}  // namespace fba::kernels
