#include "ncp/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace ncp {

LuResult lu_solve(const Mat& A, const Vec& b) {
  if (A.rows() != A.cols() || A.rows() != b.size())
    throw std::invalid_argument("lu_solve: dimension mismatch");
  if (!A.allFinite() || !b.allFinite())
    throw std::invalid_argument("lu_solve: non-finite entries");

  Eigen::PartialPivLU<Mat> lu(A);
  LuResult res;
  const double scale = A.cwiseAbs().maxCoeff();
  const double floor = 1e-14 * scale;
  const auto& U = lu.matrixLU();
  double det = lu.permutationP().determinant();
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    const double piv = U(i, i);
    det *= piv;
    if (std::abs(piv) <= floor) {
      res.pivot_index = static_cast<int>(i);
      res.determinant = 0.0;
      return res;
    }
  }
  res.x = lu.solve(b);
  res.ok = res.x.allFinite();
  res.determinant = det;
  return res;
}

double lu_determinant(const Mat& A) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("lu_determinant: matrix not square");
  return Eigen::PartialPivLU<Mat>(A).determinant();
}

}  // namespace ncp
