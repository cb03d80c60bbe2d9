#pragma once

#include <optional>
#include <vector>

#include "sinoma/config.hpp"
#include "sinoma/esprit.hpp"
#include "sinoma/estimator.hpp"
#include "sinoma/order.hpp"
#include "sinoma/varpro.hpp"

namespace sinoma {

/// Wall-clock seconds spent in each receiver stage.
struct StageTimings {
  double snapshot_svd = 0.0;
  double order = 0.0;
  double esprit = 0.0;
  double varpro = 0.0;
  double estimation = 0.0;

  double total() const { return snapshot_svd + order + esprit + varpro + estimation; }
};

/// Everything the base station concludes from one received block.
struct ReceiverOutput {
  std::vector<int> detected;  ///< sorted, distinct
  OrderSelection order;
  FrequencyEstimate esprit;
  std::optional<RefineResult> refinement;
  GainMatrix gains;
  std::vector<UserEstimate> users;  ///< aligned with `detected`
  StageTimings timings;
  bool estimation_failed = false;  ///< a numerical failure emptied the detection
};

/// Detection, optional ML refinement, gain recovery and per-user decoding.
/// Only Y and the receiver-side fields of cfg are used; the noise level
/// is never consulted.
ReceiverOutput run_receiver(const ComplexMatrix& Y, const SystemConfig& cfg);

}  // namespace sinoma
