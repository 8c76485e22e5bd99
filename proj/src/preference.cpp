#include "hlpareto/preference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "hlpareto/errors.hpp"

namespace hlpareto {

namespace {

double log_sum_exp(const Vector& a) {
  const double m = a.maxCoeff();
  return m + std::log((a.array() - m).exp().sum());
}

// Solves z + kappa e^z = a. The left side is convex and increasing, so Newton
// started to the right of the root converges monotonically.
double solve_log_weight(double a, double kappa) {
  double z = a;
  if (a > 0.0) z = std::max(0.0, std::min(a, std::log(a / kappa)));
  for (int it = 0; it < 200; ++it) {
    const double ez = kappa * std::exp(z);
    const double step = (z + ez - a) / (1.0 + ez);
    z -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) return z;
  }
  throw NumericalFailure("softmax prox: inner Newton did not converge");
}

// prox of rho * (conjugate of eps * logsumexp(./eps)) evaluated at w/rho, i.e.
// the simplex point pi with pi = softmax((w - pi/rho)/eps). Returns pi.
//
// Writing z_i = log pi_i and L for the normalizer, each z_i solves
// z + kappa e^z = w_i/eps - L with kappa = 1/(rho eps), and L is fixed by
// sum_i e^{z_i} = 1. The sum is decreasing in L and the root lies in
// [LSE(w/eps) - kappa, LSE(w/eps)].
Vector softmax_prox_weights(const Vector& w, double rho, double eps) {
  const double kappa = 1.0 / (rho * eps);
  const Vector scaled = w / eps;
  const double lse = log_sum_exp(scaled);
  double lo = lse - kappa;
  double hi = lse;
  Vector z(w.size());

  auto residual = [&](double L, double* slope) {
    double total = 0.0;
    double d = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      z(i) = solve_log_weight(scaled(i) - L, kappa);
      const double p = std::exp(z(i));
      total += p;
      d -= p / (1.0 + kappa * p);
    }
    if (slope) *slope = d;
    return total - 1.0;
  };

  double L = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double slope = 0.0;
    const double f = residual(L, &slope);
    if (f > 0.0) {
      lo = L;
    } else {
      hi = L;
    }
    if (std::abs(f) <= 1e-15 || hi - lo <= 1e-15 * std::max(1.0, std::abs(L)))
      break;
    double next = slope < 0.0 ? L - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    L = next;
  }
  residual(L, nullptr);
  Vector pi = z.array().exp();
  return pi / pi.sum();
}

}  // namespace

PreferenceFunction::PreferenceFunction(PreferenceKind kind, int dim_obj,
                                       double eps, Vector weights)
    : kind_(kind), dim_obj_(dim_obj), eps_(eps), weights_(std::move(weights)) {}

PreferenceFunction PreferenceFunction::softmax(int dim_obj, double eps) {
  if (dim_obj <= 0) throw InvalidArgument("softmax: dimension must be > 0");
  if (!(eps > 0.0)) throw InvalidArgument("softmax: eps must be > 0");
  return PreferenceFunction(PreferenceKind::softmax, dim_obj, eps,
                            Vector::Constant(dim_obj, 1.0 / dim_obj));
}

PreferenceFunction PreferenceFunction::weighted_sum(Vector weights) {
  if (weights.size() == 0) throw InvalidArgument("weighted_sum: no weights");
  require_finite(weights, "weighted_sum weights");
  if ((weights.array() < 0.0).any())
    throw InvalidArgument("weighted_sum: weights must be nonnegative");
  const int n = static_cast<int>(weights.size());
  return PreferenceFunction(PreferenceKind::weighted_sum, n, 0.0,
                            std::move(weights));
}

PreferenceFunction PreferenceFunction::chebyshev(Vector weights) {
  if (weights.size() == 0) throw InvalidArgument("chebyshev: no weights");
  require_finite(weights, "chebyshev weights");
  if ((weights.array() <= 0.0).any())
    throw InvalidArgument("chebyshev: weights must be positive");
  const int n = static_cast<int>(weights.size());
  return PreferenceFunction(PreferenceKind::chebyshev, n, 0.0,
                            std::move(weights));
}

double PreferenceFunction::value(const Vector& y) const {
  if (y.size() != dim_obj_) throw InvalidArgument("preference: wrong dimension");
  require_finite(y, "preference input");
  switch (kind_) {
    case PreferenceKind::softmax:
      return eps_ * log_sum_exp(y / eps_);
    case PreferenceKind::weighted_sum:
      return weights_.dot(y);
    case PreferenceKind::chebyshev:
      return weights_.cwiseProduct(y).maxCoeff();
  }
  return 0.0;
}

bool PreferenceFunction::differentiable_at(const Vector& y) const {
  if (kind_ != PreferenceKind::chebyshev) return true;
  const Vector s = weights_.cwiseProduct(y);
  const double m = s.maxCoeff();
  return (s.array() == m).count() == 1;
}

Vector PreferenceFunction::gradient(const Vector& y) const {
  if (y.size() != dim_obj_) throw InvalidArgument("preference: wrong dimension");
  require_finite(y, "preference input");
  switch (kind_) {
    case PreferenceKind::softmax: {
      const Vector a = y / eps_;
      const Vector e = (a.array() - a.maxCoeff()).exp();
      return e / e.sum();
    }
    case PreferenceKind::weighted_sum:
      return weights_;
    case PreferenceKind::chebyshev: {
      if (!differentiable_at(y))
        throw NotDifferentiable("chebyshev: tie between objectives");
      Eigen::Index arg = 0;
      weights_.cwiseProduct(y).maxCoeff(&arg);
      Vector grad = Vector::Zero(dim_obj_);
      grad(arg) = weights_(arg);
      return grad;
    }
  }
  return Vector();
}

Vector PreferenceFunction::prox_scaled(const Vector& w, double rho) const {
  if (w.size() != dim_obj_) throw InvalidArgument("prox: wrong dimension");
  if (!(rho > 0.0)) throw InvalidArgument("prox: rho must be > 0");
  require_finite(w, "prox input");
  switch (kind_) {
    case PreferenceKind::softmax:
      return w - softmax_prox_weights(w, rho, eps_) / rho;
    case PreferenceKind::weighted_sum:
      return w - weights_ / rho;
    case PreferenceKind::chebyshev:
      return w - project_weighted_simplex(rho * w, weights_) / rho;
  }
  return Vector();
}

double PreferenceFunction::dual_domain_violation(const Vector& pi) const {
  if (pi.size() != dim_obj_) throw InvalidArgument("preference: wrong dimension");
  switch (kind_) {
    case PreferenceKind::softmax:
      return std::max({0.0, -pi.minCoeff(), std::abs(pi.sum() - 1.0)});
    case PreferenceKind::weighted_sum:
      return (pi - weights_).lpNorm<Eigen::Infinity>();
    case PreferenceKind::chebyshev:
      return std::max({0.0, -pi.minCoeff(),
                       std::abs(pi.cwiseQuotient(weights_).sum() - 1.0)});
  }
  return 0.0;
}

std::string PreferenceFunction::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case PreferenceKind::softmax:
      os << "softmax(eps=" << eps_ << ")";
      break;
    case PreferenceKind::weighted_sum:
      os << "weighted_sum(" << weights_.transpose() << ")";
      break;
    case PreferenceKind::chebyshev:
      os << "chebyshev(" << weights_.transpose() << ")";
      break;
  }
  return os.str();
}

Vector prox_conjugate(const PreferenceFunction& g, const Vector& v,
                      double rho) {
  if (!(rho > 0.0)) throw InvalidArgument("prox_conjugate: rho must be > 0");
  if (g.kind() == PreferenceKind::weighted_sum) return g.weights();
  return v - rho * g.prox_scaled(v / rho, rho);
}

Vector project_weighted_simplex(const Vector& v, const Vector& weights) {
  if (v.size() != weights.size())
    throw InvalidArgument("weighted simplex: dimension mismatch");
  const Eigen::Index n = v.size();
  // pi_i = max(0, v_i - theta / lam_i); breakpoints at theta = v_i lam_i.
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return v(a) * weights(a) > v(b) * weights(b);
  });
  double num = 0.0;
  double den = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index i = order[k];
    num += v(i) / weights(i);
    den += 1.0 / (weights(i) * weights(i));
    const double candidate = (num - 1.0) / den;
    if (v(i) * weights(i) > candidate) theta = candidate;
  }
  Vector pi(n);
  for (Eigen::Index i = 0; i < n; ++i)
    pi(i) = std::max(0.0, v(i) - theta / weights(i));
  return pi;
}

}  // namespace hlpareto
