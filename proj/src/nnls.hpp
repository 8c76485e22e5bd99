#pragma once

#include "hlpareto/types.hpp"

namespace hlpareto::detail {

/// min |A x - b| subject to x >= 0 (Lawson-Hanson active set).
Vector nonnegative_least_squares(const Matrix& A, const Vector& b);

}  // namespace hlpareto::detail
