#include "hlpareto/types.hpp"

#include "hlpareto/errors.hpp"

namespace hlpareto {

void require_finite(const Vector& v, const std::string& what) {
  if (!v.allFinite()) throw InvalidArgument(what + ": non-finite entry");
}

QuadraticRegularizer::QuadraticRegularizer(double mu_) : mu(mu_) {
  if (!(mu > 0.0)) throw InvalidArgument("regularizer: mu must be positive");
}

double bregman_divergence(const QuadraticRegularizer& reg, const Vector& u,
                          const Vector& v) {
  if (u.size() != v.size())
    throw InvalidArgument("bregman_divergence: dimension mismatch");
  return 0.5 * reg.mu * (u - v).squaredNorm();
}

void HopfLaxParams::validate() const {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (!(c > 0.0)) throw InvalidArgument("c must be positive");
  if (!(mu > 0.0)) throw InvalidArgument("mu must be positive");
  require_finite(x, "x");
  require_finite(tau, "tau");
}

}  // namespace hlpareto
