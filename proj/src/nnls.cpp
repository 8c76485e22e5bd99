#include "nnls.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <vector>

namespace hlpareto::detail {

namespace {

Vector solve_on_passive(const Matrix& A, const Vector& b,
                        const std::vector<bool>& passive) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    if (passive[j]) cols.push_back(j);
  Vector s = Vector::Zero(A.cols());
  if (cols.empty()) return s;
  Matrix sub(A.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) sub.col(c) = A.col(cols[c]);
  const Vector z = sub.colPivHouseholderQr().solve(b);
  for (std::size_t c = 0; c < cols.size(); ++c) s(cols[c]) = z(c);
  return s;
}

}  // namespace

Vector nonnegative_least_squares(const Matrix& A, const Vector& b) {
  const Eigen::Index n = A.cols();
  Vector x = Vector::Zero(n);
  if (n == 0) return x;
  std::vector<bool> passive(n, false);
  const double tol = 1e-12 * std::max(1.0, A.norm() * b.norm());

  for (int outer = 0; outer < 3 * n + 10; ++outer) {
    const Vector w = A.transpose() * (b - A * x);
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && w(j) > best_w) {
        best = j;
        best_w = w(j);
      }
    }
    if (best < 0) break;
    passive[best] = true;

    for (int inner = 0; inner < 3 * n + 10; ++inner) {
      const Vector s = solve_on_passive(A, b, passive);
      bool feasible = true;
      double step = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && s(j) <= 0.0) {
          feasible = false;
          const double denom = x(j) - s(j);
          if (denom > 0.0) step = std::min(step, x(j) / denom);
        }
      }
      if (feasible) {
        x = s;
        break;
      }
      x += step * (s - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && x(j) <= 1e-15) {
          passive[j] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  return x.cwiseMax(0.0);
}

}  // namespace hlpareto::detail
