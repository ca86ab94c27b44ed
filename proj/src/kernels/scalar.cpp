#include "tables.hpp"

namespace fba::kernels::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void syr_scalar(double alpha, const double* x, double* a, std::size_t n) {
  for (std::size_t r = 0; r < n; ++r) {
    const double s = alpha * x[r];
    double* row = a + r * n;
    for (std::size_t c = 0; c < n; ++c) row[c] += s * x[c];
  }
}

void gemv_scalar(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_scalar(a + r * cols, x, cols);
}

}  // namespace

const KernelTable kScalarTable{Isa::scalar, dot_scalar, axpy_scalar, syr_scalar, gemv_scalar};

}  // namespace fba::kernels::detail
