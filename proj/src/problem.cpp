#include "hlpareto/problem.hpp"

namespace hlpareto {

HopfLaxParams MooProblem::params_at(const Vector& tau) const {
  HopfLaxParams p;
  p.x = defaults.x;
  p.tau = tau;
  p.alpha = defaults.alpha;
  p.c = defaults.c;
  p.mu = defaults.mu;
  return p;
}

}  // namespace hlpareto
