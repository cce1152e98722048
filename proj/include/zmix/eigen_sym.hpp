#pragma once

#include <vector>

#include "zmix/matrix.hpp"

namespace zmix {

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, sorted
/// descending. Only the upper triangle is read.
std::vector<double> symmetric_eigenvalues(Matrix<double> a);

}  // namespace zmix
