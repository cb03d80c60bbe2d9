#include "sinoma/linalg.hpp"

#include <limits>
#include <sstream>

#include "sinoma/errors.hpp"

namespace sinoma {

bool all_finite(const ComplexMatrix& A) {
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      const cdouble z = A(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

namespace {

void require_wide_finite(const ComplexMatrix& A, const char* who) {
  if (A.rows() < 1 || A.cols() < 1) {
    throw InvalidInput(std::string(who) + ": empty matrix");
  }
  if (A.cols() < A.rows()) {
    throw InvalidInput(std::string(who) + ": expected cols >= rows");
  }
  if (!all_finite(A)) {
    throw InvalidInput(std::string(who) + ": non-finite entry");
  }
}

}  // namespace

SingularTriplets singular_triplets(const ComplexMatrix& A) {
  require_wide_finite(A, "singular_triplets");
  // Divide and conquer works on A directly (no A A^H), so singular values
  // stay accurate to about eps * s_1; about 3x faster than Jacobi at 50 x 270.
  Eigen::BDCSVD<ComplexMatrix> svd(A, Eigen::ComputeThinU);
  return {svd.matrixU(), svd.singularValues()};
}

RealVector singular_values(const ComplexMatrix& A) {
  require_wide_finite(A, "singular_values");
  Eigen::BDCSVD<ComplexMatrix> svd(A);
  return svd.singularValues();
}

ComplexVector eigenvalues(const ComplexMatrix& Q) {
  if (Q.rows() != Q.cols()) {
    throw InvalidInput("eigenvalues: matrix is not square");
  }
  if (Q.rows() == 0) return ComplexVector(0);
  if (!all_finite(Q)) throw InvalidInput("eigenvalues: non-finite entry");
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(Q, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw InvalidInput("eigenvalues: QR iteration did not converge");
  }
  return solver.eigenvalues();
}

ComplexMatrix least_squares(const ComplexMatrix& A, const ComplexMatrix& B) {
  if (A.rows() != B.rows()) {
    throw InvalidInput("least_squares: row count mismatch");
  }
  if (A.rows() < A.cols()) {
    throw InvalidInput("least_squares: system is underdetermined");
  }
  if (A.cols() == 0) return ComplexMatrix::Zero(0, B.cols());
  if (!all_finite(A) || !all_finite(B)) {
    throw InvalidInput("least_squares: non-finite entry");
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (!(smin > kRankTolerance * smax)) {
    const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    std::ostringstream msg;
    msg << "least_squares: rank-deficient design matrix (condition " << cond << ")";
    throw RankDeficient(msg.str(), cond);
  }
  return svd.solve(B);
}

}  // namespace sinoma
