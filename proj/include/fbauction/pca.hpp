#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fba {

/// Top-k principal components of a data matrix.
struct PcaModel {
  std::size_t input_dim = 0;
  std::vector<double> mean;                 // input_dim
  std::vector<double> components;           // k x input_dim row-major, rows orthonormal
  std::vector<double> explained_variance;   // k, non-increasing, sample (N-1) normalization

  std::size_t rank() const noexcept { return explained_variance.size(); }
  std::span<const double> component(std::size_t j) const {
    return std::span<const double>(components).subspan(j * input_dim, input_dim);
  }
};

struct PcaOptions {
  double tolerance = 1e-9;
  std::size_t max_iterations = 10000;
};

/// Power iteration with deflation on the centred sample covariance. `data` is
/// rows x cols row-major. Each component is sign-normalized so its first
/// nonzero coordinate is positive. Throws InputError for bad shapes or k and
/// ConvergenceError (with the achieved residual) when an eigenpair fails to
/// converge.
PcaModel pca_fit(std::span<const double> data, std::size_t rows, std::size_t cols, std::size_t k,
                 PcaOptions options = {});

/// components . (x - mean)
std::vector<double> pca_transform(const PcaModel& model, std::span<const double> x);

/// mean + components^T z
std::vector<double> pca_reconstruct(const PcaModel& model, std::span<const double> z);

/// Per-coordinate affine map to [0,1] fitted on a training set; constant
/// coordinates map to 0.
struct MinMaxScaler {
  std::vector<double> min;
  std::vector<double> max;

  static MinMaxScaler fit(std::span<const std::vector<double>> rows);
  std::vector<double> apply(std::span<const double> x) const;
};

}  // namespace fba
