#pragma once

// Per-agent linear value model fit by least squares on comparison reports.
//
// Under truthful reports r = 1{u >= c} with c ~ Uniform[0,1], E[r | w] equals
// E[u | w], so a regression of the boolean report on the context recovers the
// agent's expected utility without ever seeing a numeric value.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fbauction/core.hpp"

namespace fba {

struct ValueModelOptions {
  double ridge = 1e-6;
  double prior_estimate = 0.5;
  /// Samples needed before predictions leave the prior; 0 means "use d".
  std::size_t min_samples = 0;
};

class ValueModel {
 public:
  explicit ValueModel(std::size_t dim, ValueModelOptions options = {});

  std::size_t dim() const noexcept { return dim_; }
  std::size_t sample_count() const noexcept { return count_; }
  double ridge() const noexcept { return ridge_; }
  double prior_estimate() const noexcept { return prior_; }
  std::size_t min_samples() const noexcept { return min_samples_; }
  bool stale() const noexcept { return stale_; }

  /// Gram matrix sum w w^T, row-major d x d.
  std::span<const double> gram() const noexcept { return gram_; }
  /// sum target * w.
  std::span<const double> moment() const noexcept { return moment_; }
  /// Coefficients as of the last fit().
  std::span<const double> coefficients() const noexcept { return coef_; }

  /// Adds one (context, report) observation. Only report.value enters the
  /// regression target.
  void ingest(const Context& w, const Report& report);

  /// Adds one observation with an arbitrary real target (the direct-utility
  /// baseline regresses on realized utilities).
  void ingest_value(const Context& w, double target);

  /// Solves (G + ridge I) coef = b. Throws SingularDesignError when the
  /// system is not positive definite (only possible with ridge = 0).
  void fit();

  /// fit() if anything was ingested since the last solve.
  void refresh() {
    if (stale_) fit();
  }

  /// Prior while fewer than min_samples observations, else clamp(coef.w, 0, 1).
  /// Throws std::logic_error if the model is stale.
  double predict(const Context& w) const;

  /// coef.w without the clamp or the cold-start rule.
  double predict_raw(const Context& w) const;

  friend bool operator==(const ValueModel&, const ValueModel&) = default;

 private:
  void check_dim(const Context& w) const;

  std::size_t dim_;
  double ridge_;
  double prior_;
  std::size_t min_samples_;
  std::size_t count_ = 0;
  std::vector<double> gram_;
  std::vector<double> moment_;
  std::vector<double> coef_;
  bool stale_ = false;
};

/// Fraction of positive reports. With comparison prices drawn uniformly on
/// [0,1] this is an unbiased estimate of E[u] for any u supported on [0,1].
/// Throws InputError on an empty sample.
double estimate_mean_from_reports(std::span<const std::pair<double, bool>> samples);

/// Cholesky solve of the symmetric positive definite system A x = b, A row-major
/// n x n. Throws SingularDesignError when a pivot is not safely positive.
std::vector<double> solve_spd(std::span<const double> a, std::span<const double> b);

}  // namespace fba
