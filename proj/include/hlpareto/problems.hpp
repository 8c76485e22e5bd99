#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hlpareto/problem.hpp"

namespace hlpareto::problems {

/// l = (-u1, u1 + u2^2) on {u2 >= u1^2} cap {u1 + 2 u2 <= 3}.
MooProblem example1();
/// Smooth nonconvex bi-objective front on [0, 1]^2.
MooProblem example2_case1();
/// Highly nonconvex bi-objective front on [0, 1]^2.
MooProblem example2_case2();
/// Mean/variance bi-objective problem on [0, 1]^d.
MooProblem example3_case1(int d);
/// Five objectives of the mean s(u) and spread r^2(u) on [0, 1]^20.
MooProblem example3_case2();

/// Mean and variance of the entries of u.
double mean_of(const Vector& u);
double spread_of(const Vector& u);

/// Looks up `ex1`, `ex2a`, `ex2b`, `ex3a-d<N>`, `ex3b`, then any registered
/// plugin. Throws InvalidArgument for unknown ids.
MooProblem by_id(const std::string& id);

/// Registered ids (plugins included); `ex3a-d<N>` is listed as a pattern.
std::vector<std::string> known_ids();

/// Plugin hook: register a code-defined problem under a new id.
void register_problem(const std::string& id, std::function<MooProblem()> make);

}  // namespace hlpareto::problems
