#pragma once

#include "sinoma/linalg.hpp"

namespace sinoma {

/// Forward-backward snapshot matrix of a received block.
struct SnapshotMatrix {
  ComplexMatrix S_bar;  ///< l x 2J(M-l+1)
  int l = 0;
  int J = 0;
  int M = 0;
};

/// Number of columns 2J(M-l+1).
int snapshot_columns(int M, int J, int l);

/// Hankel arrangement: column m is (y(m), ..., y(m+l-1)), m = 0..M-l.
ComplexMatrix frame_snapshots(const ComplexVector& y, int l);

/// [S | K conj(S)] where K reverses the row order.
ComplexMatrix backward_extend(const ComplexMatrix& S);

/// Concatenate backward_extend(frame_snapshots(y_j, l)) over the frames.
SnapshotMatrix build_data_matrix(const ComplexMatrix& Y, int l);

}  // namespace sinoma
