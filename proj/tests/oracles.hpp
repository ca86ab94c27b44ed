#pragma once

// Reference computations that share no code with the library: a cyclic Jacobi
// eigensolver, a dense normal-equation solve through Eigen, and a sort-based
// second price.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Eigenvalues of a symmetric n x n row-major matrix, sorted descending.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n) {
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

/// Sample covariance (N-1) of a rows x cols row-major matrix.
inline std::vector<double> sample_covariance(const std::vector<double>& x, std::size_t rows, std::size_t cols) {
  std::vector<double> mean(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) mean[c] += x[r * cols + c];
  for (double& m : mean) m /= static_cast<double>(rows);
  std::vector<double> cov(cols * cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t i = 0; i < cols; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        cov[i * cols + j] += (x[r * cols + i] - mean[i]) * (x[r * cols + j] - mean[j]);
  for (double& v : cov) v /= static_cast<double>(rows - 1);
  return cov;
}

/// argmin ||X theta - y||^2 + ridge ||theta||^2 from the raw design.
inline std::vector<double> normal_equations(const std::vector<std::vector<double>>& rows,
                                            const std::vector<double>& y, double ridge) {
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd x(m, d);
  Eigen::VectorXd target(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    target(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::MatrixXd lhs = x.transpose() * x + ridge * Eigen::MatrixXd::Identity(d, d);
  const Eigen::VectorXd sol = lhs.fullPivLu().solve(x.transpose() * target);
  return {sol.data(), sol.data() + d};
}

/// (winner, price) by sorting (value, index) pairs.
inline std::pair<std::size_t, double> sorted_second_price(const std::vector<double>& v) {
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t i = 0; i < v.size(); ++i) order.emplace_back(-v[i], i);
  std::sort(order.begin(), order.end());
  return {order[0].second, -order[1].first};
}

}  // namespace oracle
