#include "hlpareto/projection.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "hlpareto/errors.hpp"

namespace hlpareto {

Vector dykstra(const Vector& u, std::span<const Projector> projectors,
               int cycles) {
  if (cycles < 1) throw InvalidArgument("dykstra: cycles must be >= 1");
  Vector x = u;
  std::vector<Vector> corrections(projectors.size(),
                                  Vector::Zero(u.size()));
  for (int c = 0; c < cycles; ++c) {
    for (std::size_t i = 0; i < projectors.size(); ++i) {
      const Vector shifted = x + corrections[i];
      x = projectors[i](shifted);
      corrections[i] = shifted - x;
    }
  }
  return x;
}

Vector project_parabola_epigraph(const Vector& u, double root_tol) {
  if (u.size() != 2) throw InvalidArgument("parabola projection needs d = 2");
  const double a = u(0);
  const double b = u(1);
  if (b >= a * a) return u;
  if (a == 0.0) return Vector::Zero(2);

  // 2 s^3 + (1 - 2b) s - a has a single root with the sign of a, and it
  // lies strictly between 0 and a.
  auto cubic = [&](double s) { return 2.0 * s * s * s + (1.0 - 2.0 * b) * s - a; };
  double lo = std::min(0.0, a);
  double hi = std::max(0.0, a);
  auto on_parabola = [](double s) {
    Vector p(2);
    p << s, s * s;
    return p;
  };
  double s = a;
  for (int it = 0; it < 200; ++it) {
    const double val = cubic(s);
    if (val == 0.0) return on_parabola(s);
    if (val > 0.0) {
      hi = s;
    } else {
      lo = s;
    }
    const double slope = 6.0 * s * s + 1.0 - 2.0 * b;
    double next = slope != 0.0 ? s - val / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double move = std::abs(next - s);
    s = next;
    if (move <= root_tol || hi - lo <= root_tol) return on_parabola(s);
  }
  throw NumericalFailure("parabola projection: root finder did not converge");
}

Vector project_halfspace(const Vector& u, const Vector& normal, double offset) {
  const double excess = normal.dot(u) - offset;
  if (excess <= 0.0) return u;
  return u - (excess / normal.squaredNorm()) * normal;
}

Vector dykstra_project(const Vector& u, int cycles, double root_tol) {
  if (u.size() != 2) throw InvalidArgument("dykstra_project needs d = 2");
  Vector normal(2);
  normal << 1.0, 2.0;
  const std::array<Projector, 2> sets = {
      [root_tol](const Vector& v) {
        return project_parabola_epigraph(v, root_tol);
      },
      [normal](const Vector& v) { return project_halfspace(v, normal, 3.0); }};
  return dykstra(u, sets, cycles);
}

}  // namespace hlpareto
