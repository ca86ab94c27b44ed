#include "fbauction/pca.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fbauction/error.hpp"
#include "fbauction/kernels.hpp"

namespace fba {
namespace {

double norm(std::span<const double> v) { return std::sqrt(kernels::dot(v, v)); }

// Removes the projections onto the accepted components (rows of `basis`).
void orthogonalize(std::vector<double>& v, const std::vector<double>& basis, std::size_t count, std::size_t dim) {
  for (std::size_t j = 0; j < count; ++j) {
    std::span<const double> b(basis.data() + j * dim, dim);
    kernels::axpy(-kernels::dot(b, v), b, v);
  }
}

void fix_sign(std::span<double> v) {
  for (double x : v) {
    if (std::abs(x) > 1e-12) {
      if (x < 0.0) {
        for (double& y : v) y = -y;
      }
      return;
    }
  }
}

}  // namespace

PcaModel pca_fit(std::span<const double> data, std::size_t rows, std::size_t cols, std::size_t k,
                 PcaOptions options) {
  if (data.size() != rows * cols) throw InputError("pca_fit: data size does not match rows x cols");
  if (rows < 2) throw InputError("pca_fit needs at least two rows");
  if (k < 1 || k > std::min(rows, cols)) {
    throw InputError("pca_fit: k=" + std::to_string(k) + " outside [1, " + std::to_string(std::min(rows, cols)) + "]");
  }

  PcaModel model;
  model.input_dim = cols;
  model.mean.assign(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) kernels::axpy(1.0, data.subspan(r * cols, cols), model.mean);
  for (double& m : model.mean) m /= static_cast<double>(rows);

  std::vector<double> cov(cols * cols, 0.0);
  std::vector<double> centred(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) centred[c] = data[r * cols + c] - model.mean[c];
    kernels::syr(1.0 / static_cast<double>(rows - 1), centred, cov);
  }
  double trace = 0.0;
  for (std::size_t c = 0; c < cols; ++c) trace += cov[c * cols + c];
  // Residuals are judged relative to the total variance.
  const double scale = std::max(trace, 1e-300);

  model.components.assign(k * cols, 0.0);
  model.explained_variance.assign(k, 0.0);
  std::vector<double> v(cols), w(cols);

  for (std::size_t j = 0; j < k; ++j) {
    // Deterministic start: the largest remaining diagonal direction plus a
    // small fixed tilt so the start is never orthogonal to the top eigenvector.
    std::size_t pivot = 0;
    for (std::size_t c = 1; c < cols; ++c) {
      if (cov[c * cols + c] > cov[pivot * cols + pivot]) pivot = c;
    }
    for (std::size_t c = 0; c < cols; ++c) v[c] = 1e-3 * std::cos(1.0 + 0.7 * static_cast<double>(c));
    v[pivot] += 1.0;
    orthogonalize(v, model.components, j, cols);
    double nv = norm(v);
    if (nv < 1e-12) {
      // Start collapsed into the accepted span; fall back to a basis vector outside it.
      for (std::size_t c = 0; c < cols && nv < 1e-6; ++c) {
        std::fill(v.begin(), v.end(), 0.0);
        v[c] = 1.0;
        orthogonalize(v, model.components, j, cols);
        nv = norm(v);
      }
    }
    for (double& x : v) x /= nv;

    double lambda = 0.0;
    double residual = 0.0;
    bool converged = false;
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
      kernels::gemv(cov, v, w);
      // Iterates live in the complement of the accepted components; deflation
      // leaves rounding-level mass along them that must not count as residual.
      orthogonalize(w, model.components, j, cols);
      lambda = kernels::dot(v, w);
      // r = C v - lambda v
      double r2 = 0.0;
      for (std::size_t c = 0; c < cols; ++c) {
        const double d = w[c] - lambda * v[c];
        r2 += d * d;
      }
      residual = std::sqrt(r2) / scale;
      if (residual <= options.tolerance) {
        converged = true;
        break;
      }
      const double nw = norm(w);
      if (nw <= 1e-300) {
        // C v = 0 on the remaining subspace: v is an eigenvector with eigenvalue 0.
        lambda = 0.0;
        converged = true;
        break;
      }
      for (std::size_t c = 0; c < cols; ++c) v[c] = w[c] / nw;
    }
    if (!converged) {
      throw ConvergenceError("pca_fit: component " + std::to_string(j) + " did not converge (residual " +
                                 std::to_string(residual) + ")",
                             residual);
    }

    orthogonalize(v, model.components, j, cols);
    const double nfinal = norm(v);
    for (double& x : v) x /= nfinal;
    fix_sign(v);
    std::copy(v.begin(), v.end(), model.components.begin() + static_cast<std::ptrdiff_t>(j * cols));
    model.explained_variance[j] = std::max(lambda, 0.0);

    // Deflate: C -= lambda v v^T.
    kernels::syr(-lambda, v, cov);
  }

  // Deflation order already yields non-increasing values up to convergence
  // error; enforce it exactly for ties.
  for (std::size_t j = 1; j < k; ++j) {
    model.explained_variance[j] = std::min(model.explained_variance[j], model.explained_variance[j - 1]);
  }
  return model;
}

std::vector<double> pca_transform(const PcaModel& model, std::span<const double> x) {
  if (x.size() != model.input_dim) {
    throw InputError("pca_transform: input has dimension " + std::to_string(x.size()) + ", model expects " +
                     std::to_string(model.input_dim));
  }
  std::vector<double> centred(x.begin(), x.end());
  kernels::axpy(-1.0, model.mean, centred);
  std::vector<double> z(model.rank());
  kernels::gemv(model.components, centred, z);
  return z;
}

std::vector<double> pca_reconstruct(const PcaModel& model, std::span<const double> z) {
  if (z.size() != model.rank()) throw InputError("pca_reconstruct: code has the wrong length");
  std::vector<double> x = model.mean;
  for (std::size_t j = 0; j < model.rank(); ++j) kernels::axpy(z[j], model.component(j), x);
  return x;
}

MinMaxScaler MinMaxScaler::fit(std::span<const std::vector<double>> rows) {
  MinMaxScaler s;
  if (rows.empty()) return s;
  s.min = rows.front();
  s.max = rows.front();
  for (const auto& r : rows) {
    if (r.size() != s.min.size()) throw InputError("MinMaxScaler: ragged rows");
    for (std::size_t i = 0; i < r.size(); ++i) {
      s.min[i] = std::min(s.min[i], r[i]);
      s.max[i] = std::max(s.max[i], r[i]);
    }
  }
  return s;
}

std::vector<double> MinMaxScaler::apply(std::span<const double> x) const {
  if (x.size() != min.size()) throw InputError("MinMaxScaler: dimension mismatch");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double span = max[i] - min[i];
    out[i] = span > 0.0 ? std::clamp((x[i] - min[i]) / span, 0.0, 1.0) : 0.0;
  }
  return out;
}

}  // namespace fba
