#include "sinoma/snapshots.hpp"

#include <string>

#include "sinoma/errors.hpp"

namespace sinoma {

int snapshot_columns(int M, int J, int l) { return 2 * J * (M - l + 1); }

ComplexMatrix frame_snapshots(const ComplexVector& y, int l) {
  const auto M = static_cast<int>(y.size());
  if (l <= 1 || l > M) {
    throw InvalidInput("frame_snapshots: snapshot length " + std::to_string(l) +
                       " outside (1, " + std::to_string(M) + "]");
  }
  const int cols = M - l + 1;
  ComplexMatrix S(l, cols);
  for (int m = 0; m < cols; ++m) S.col(m) = y.segment(m, l);
  return S;
}

ComplexMatrix backward_extend(const ComplexMatrix& S) {
  ComplexMatrix out(S.rows(), 2 * S.cols());
  out.leftCols(S.cols()) = S;
  out.rightCols(S.cols()) = S.conjugate().colwise().reverse();
  return out;
}

SnapshotMatrix build_data_matrix(const ComplexMatrix& Y, int l) {
  const auto M = static_cast<int>(Y.rows());
  const auto J = static_cast<int>(Y.cols());
  if (J < 1) throw InvalidInput("build_data_matrix: no frames");
  if (l <= 1 || l > M) {
    throw InvalidInput("build_data_matrix: snapshot length " + std::to_string(l) +
                       " outside (1, " + std::to_string(M) + "]");
  }
  const int block = 2 * (M - l + 1);
  SnapshotMatrix out;
  out.l = l;
  out.J = J;
  out.M = M;
  out.S_bar.resize(l, static_cast<Eigen::Index>(block) * J);
  for (int j = 0; j < J; ++j) {
    out.S_bar.middleCols(static_cast<Eigen::Index>(j) * block, block) =
        backward_extend(frame_snapshots(Y.col(j), l));
  }
  return out;
}

}  // namespace sinoma
