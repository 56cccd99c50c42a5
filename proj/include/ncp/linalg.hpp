#pragma once

#include "ncp/types.hpp"

namespace ncp {

/// Outcome of a dense LU solve. When ok is false the factorization met a
/// pivot below threshold; pivot_index names the offending elimination step.
struct LuResult {
  Vec x;
  bool ok = false;
  int pivot_index = -1;
  double determinant = 0.0;
};

/// Solves A d = b by dense LU with partial pivoting. A pivot is rejected when
/// its magnitude falls below 1e-14 * max|A_ij|.
LuResult lu_solve(const Mat& A, const Vec& b);

/// Determinant through the same pivoted factorization.
double lu_determinant(const Mat& A);

}  // namespace ncp
