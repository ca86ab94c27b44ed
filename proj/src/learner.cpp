#include "fbauction/learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fbauction/error.hpp"
#include "fbauction/kernels.hpp"

namespace fba {

ValueModel::ValueModel(std::size_t dim, ValueModelOptions options)
    : dim_(dim),
      ridge_(options.ridge),
      prior_(options.prior_estimate),
      min_samples_(options.min_samples == 0 ? dim : options.min_samples),
      gram_(dim * dim, 0.0),
      moment_(dim, 0.0),
      coef_(dim, 0.0) {
  if (dim == 0) throw InputError("value model dimension must be positive");
  if (!(ridge_ >= 0.0)) throw InputError("ridge must be nonnegative");
  if (!(prior_ >= 0.0 && prior_ <= 1.0)) throw InputError("prior estimate must lie in [0,1]");
}

void ValueModel::check_dim(const Context& w) const {
  if (w.dim() != dim_) {
    throw InputError("context has dimension " + std::to_string(w.dim()) + ", model expects " +
                     std::to_string(dim_));
  }
}

void ValueModel::ingest(const Context& w, const Report& report) {
  ingest_value(w, report.value ? 1.0 : 0.0);
}

void ValueModel::ingest_value(const Context& w, double target) {
  check_dim(w);
  kernels::syr(1.0, w.features(), gram_);
  if (target != 0.0) kernels::axpy(target, w.features(), moment_);
  ++count_;
  stale_ = true;
}

void ValueModel::fit() {
  std::vector<double> a = gram_;
  for (std::size_t i = 0; i < dim_; ++i) a[i * dim_ + i] += ridge_;
  coef_ = solve_spd(a, moment_);
  stale_ = false;
}

double ValueModel::predict_raw(const Context& w) const {
  check_dim(w);
  if (stale_) throw std::logic_error("ValueModel::predict on a stale model; call refresh() first");
  return kernels::dot(coef_, w.features());
}

double ValueModel::predict(const Context& w) const {
  const double raw = predict_raw(w);
  if (count_ < min_samples_) return prior_;
  return std::clamp(raw, 0.0, 1.0);
}

std::vector<double> solve_spd(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = b.size();
  if (a.size() != n * n) throw InputError("solve_spd: matrix/vector size mismatch");

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a[i * n + i]));
  const double tol = 1e-13 * std::max(scale, 1e-300);

  // Lower factor, row-major; row i of L is contiguous so the inner products
  // run through the dot kernel.
  std::vector<double> l(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* li = l.data() + i * n;
    for (std::size_t j = 0; j < i; ++j) {
      const double* lj = l.data() + j * n;
      const double s = a[i * n + j] - kernels::active().dot(li, lj, j);
      l[i * n + j] = s / lj[j];
    }
    const double d = a[i * n + i] - kernels::active().dot(li, li, i);
    if (!(d > tol)) {
      throw SingularDesignError("design matrix is singular or not positive definite (pivot " +
                                std::to_string(i) + ")");
    }
    l[i * n + i] = std::sqrt(d);
  }

  std::vector<double> x(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = (x[i] - kernels::active().dot(l.data() + i * n, x.data(), i)) / l[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l[k * n + i] * x[k];
    x[i] = s / l[i * n + i];
  }
  return x;
}

double estimate_mean_from_reports(std::span<const std::pair<double, bool>> samples) {
  if (samples.empty()) throw InputError("estimate_mean_from_reports: no samples");
  std::size_t positive = 0;
  for (const auto& [price, value] : samples) positive += value ? 1 : 0;
  return static_cast<double>(positive) / static_cast<double>(samples.size());
}

}  // namespace fba
