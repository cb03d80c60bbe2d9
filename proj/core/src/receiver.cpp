#include "sinoma/receiver.hpp"

#include <chrono>
#include <unordered_set>

#include "sinoma/errors.hpp"

namespace sinoma {

namespace {
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ESPRIT frequencies whose rounded index is seen for the first time, in
// estimation order. These seed the refinement so that Phi stays full rank.
std::vector<double> distinct_grid_frequencies(const std::vector<double>& omegas, int N) {
  std::vector<double> kept;
  std::unordered_set<int> seen;
  for (double w : omegas) {
    if (seen.insert(frequency_to_index(w, N)).second) kept.push_back(w);
  }
  return kept;
}
}  // namespace

ReceiverOutput run_receiver(const ComplexMatrix& Y, const SystemConfig& cfg) {
  ReceiverOutput out;
  DetectionTrace trace;
  try {
    out.esprit = detect_users(Y, cfg, &trace);
  } catch (const EstimationFailure&) {
    out.estimation_failed = true;
    out.order = std::move(trace.order);
    return out;
  }
  out.order = std::move(trace.order);
  out.timings.snapshot_svd = trace.svd_seconds;
  out.timings.order = trace.order_seconds;
  out.timings.esprit = trace.esprit_seconds;
  out.detected = out.esprit.indices;

  if (cfg.refine && !out.detected.empty()) {
    const auto t0 = Clock::now();
    const std::vector<double> init = distinct_grid_frequencies(out.esprit.omegas, cfg.N);
    try {
      out.refinement = refine_ml(init, Y, cfg.gamma());
      out.detected = indices_from_frequencies(out.refinement->omegas, cfg.N);
    } catch (const RankDeficient&) {
      // Keep the ESPRIT decision when the initial Phi is singular.
    }
    out.timings.varpro = seconds_since(t0);
  }

  const auto t0 = Clock::now();
  try {
    out.gains = estimate_gains(out.detected, Y, cfg.codebook());
  } catch (const RankDeficient&) {
    out.estimation_failed = true;
    out.detected.clear();
    out.gains = GainMatrix{{}, ComplexMatrix::Zero(0, Y.cols())};
    out.timings.estimation = seconds_since(t0);
    return out;
  }
  out.users.reserve(out.detected.size());
  for (std::size_t n = 0; n < out.detected.size(); ++n) {
    const ComplexVector row = out.gains.upsilon_hat.row(static_cast<Eigen::Index>(n)).transpose();
    out.users.push_back(estimate_user(out.detected[n], row, cfg.L, cfg.reliability, cfg.lambda));
  }
  out.timings.estimation = seconds_since(t0);
  return out;
}

}  // namespace sinoma
