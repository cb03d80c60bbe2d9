#pragma once

#include <span>
#include <vector>

#include "sinoma/config.hpp"
#include "sinoma/linalg.hpp"
#include "sinoma/order.hpp"
#include "sinoma/snapshots.hpp"

namespace sinoma {

/// Leading k left singular vectors of the snapshot matrix.
struct SubspaceEstimate {
  ComplexMatrix theta;  ///< l x k
  int k = 0;
};

struct FrequencyEstimate {
  std::vector<double> omegas;  ///< arg(raw_eigs) wrapped into [0, 2pi)
  std::vector<int> indices;    ///< rounded, deduplicated (first kept), sorted
  ComplexVector raw_eigs;
};

SubspaceEstimate signal_subspace(const SnapshotMatrix& S, int k);
SubspaceEstimate signal_subspace(const SingularTriplets& svd, int k);

/// Shift-invariance step: solve theta[0:l-1] Q = theta[1:l] in the least
/// squares sense and read frequencies off the eigenvalues of Q. Leaves
/// `indices` empty. Throws EstimationFailure if the shifted subspace is
/// rank deficient.
FrequencyEstimate esprit_frequencies(const SubspaceEstimate& sub);

/// Round each frequency to its sequence index, keep the first occurrence of
/// any collision, and sort.
std::vector<int> indices_from_frequencies(std::span<const double> omegas, int N);

/// Intermediate products of one detection pass.
struct DetectionTrace {
  RealVector singular_values;
  OrderSelection order;
  double svd_seconds = 0.0;
  double order_seconds = 0.0;
  double esprit_seconds = 0.0;
};

/// Snapshot matrix -> SVD -> model order -> ESPRIT -> user indices.
FrequencyEstimate detect_users(const ComplexMatrix& Y, const SystemConfig& cfg,
                               DetectionTrace* trace = nullptr);

}  // namespace sinoma
