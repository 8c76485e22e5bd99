#pragma once

#include <functional>
#include <span>

#include "hlpareto/types.hpp"

namespace hlpareto {

using Projector = std::function<Vector(const Vector&)>;

/// Dykstra's corrected alternating projections onto the intersection of the
/// given convex sets, run for a fixed number of cycles.
Vector dykstra(const Vector& u, std::span<const Projector> projectors,
               int cycles);

/// Projection of (a, b) onto {(s, t) : t >= s^2}. The foot point s solves the
/// cubic 2 s^3 + (1 - 2 b) s - a = 0, which has exactly one root between 0
/// and a; it is found by safeguarded Newton to `root_tol`.
Vector project_parabola_epigraph(const Vector& u, double root_tol = 1e-6);

/// Projection onto the halfspace {v : <normal, v> <= offset}.
Vector project_halfspace(const Vector& u, const Vector& normal, double offset);

/// Projection onto {u2 >= u1^2} cap {u1 + 2 u2 <= 3} by Dykstra.
Vector dykstra_project(const Vector& u, int cycles = 10,
                       double root_tol = 1e-6);

}  // namespace hlpareto
