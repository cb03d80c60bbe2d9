#pragma once

#include <complex>

#include <Eigen/Dense>

namespace sinoma {

using cdouble = std::complex<double>;

/// Dense complex matrix, column-major (Eigen default storage order).
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct SingularTriplets {
  ComplexMatrix U;  ///< rows(A) x rows(A), orthonormal columns
  RealVector s;     ///< descending, length rows(A)
};

/// Left singular vectors and singular values of a wide (or square) matrix.
/// The right factor is never formed.
SingularTriplets singular_triplets(const ComplexMatrix& A);

/// Singular values only, descending.
RealVector singular_values(const ComplexMatrix& A);

/// Eigenvalues of a square matrix, in the backend's order.
ComplexVector eigenvalues(const ComplexMatrix& Q);

/// Minimum-Frobenius-norm solution X of A X ~= B for a tall, full column
/// rank A. Throws RankDeficient when s_min <= 1e-10 * s_max.
ComplexMatrix least_squares(const ComplexMatrix& A, const ComplexMatrix& B);

/// Relative threshold on s_min / s_max used by least_squares.
inline constexpr double kRankTolerance = 1e-10;

bool all_finite(const ComplexMatrix& A);

}  // namespace sinoma
