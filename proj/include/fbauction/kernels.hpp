#pragma once

// Dense double-precision inner loops used by the learner and PCA.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The variant is picked once at startup from CPUID and can
// be overridden with FBA_ISA=scalar|avx2 or kernels::select(). Variants differ
// only in summation order, so results agree to rounding, not bit-for-bit.

#include <cstddef>
#include <span>
#include <string_view>

namespace fba::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // A += alpha * x x^T, A is n x n row-major
  void (*syr)(double alpha, const double* x, double* a, std::size_t n);
  // y = A x, A is rows x cols row-major
  void (*gemv)(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols);
};

const KernelTable& scalar_table() noexcept;
/// nullptr when the build or the CPU lacks AVX2+FMA.
const KernelTable* avx2_table() noexcept;

bool cpu_supports(Isa isa) noexcept;

/// Currently selected table.
const KernelTable& active() noexcept;

/// Force a variant; throws InputError if the CPU cannot run it.
void select(Isa isa);

/// Re-run detection (honours FBA_ISA).
void reset();

// Span conveniences over active().

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void syr(double alpha, std::span<const double> x, std::span<double> a) {
  active().syr(alpha, x.data(), a.data(), x.size());
}

inline void gemv(std::span<const double> a, std::span<const double> x, std::span<double> y) {
  active().gemv(a.data(), x.data(), y.data(), y.size(), x.size());
}

}  // namespace fba::kernels
