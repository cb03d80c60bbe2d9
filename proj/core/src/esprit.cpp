#include "sinoma/esprit.hpp"

#include <algorithm>
#include <chrono>
#include <complex>
#include <unordered_set>

#include "sinoma/codes.hpp"
#include "sinoma/errors.hpp"

namespace sinoma {

namespace {
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}
}  // namespace

SubspaceEstimate signal_subspace(const SingularTriplets& svd, int k) {
  const auto l = static_cast<int>(svd.U.rows());
  if (k < 0 || k >= l) {
    throw InvalidInput("signal_subspace: model order must satisfy 0 <= k < l");
  }
  return {svd.U.leftCols(k), k};
}

SubspaceEstimate signal_subspace(const SnapshotMatrix& S, int k) {
  if (k < 1 || k >= S.S_bar.rows()) {
    throw InvalidInput("signal_subspace: model order must satisfy 1 <= k < l");
  }
  return signal_subspace(singular_triplets(S.S_bar), k);
}

FrequencyEstimate esprit_frequencies(const SubspaceEstimate& sub) {
  FrequencyEstimate est;
  if (sub.k == 0) {
    est.raw_eigs.resize(0);
    return est;
  }
  const auto l = sub.theta.rows();
  if (l < sub.k + 1) throw InvalidInput("esprit_frequencies: need l >= k + 1");
  ComplexMatrix Q;
  try {
    Q = least_squares(sub.theta.topRows(l - 1), sub.theta.bottomRows(l - 1));
  } catch (const RankDeficient& e) {
    throw EstimationFailure(std::string("esprit: shifted subspace is rank deficient: ") +
                            e.what());
  }
  est.raw_eigs = eigenvalues(Q);
  est.omegas.reserve(static_cast<std::size_t>(sub.k));
  for (Eigen::Index i = 0; i < est.raw_eigs.size(); ++i) {
    est.omegas.push_back(wrap_to_two_pi(std::arg(est.raw_eigs(i))));
  }
  return est;
}

std::vector<int> indices_from_frequencies(std::span<const double> omegas, int N) {
  std::vector<int> out;
  std::unordered_set<int> seen;
  for (double w : omegas) {
    const int n = frequency_to_index(w, N);
    if (seen.insert(n).second) out.push_back(n);
  }
  std::sort(out.begin(), out.end());
  return out;
}

FrequencyEstimate detect_users(const ComplexMatrix& Y, const SystemConfig& cfg,
                               DetectionTrace* trace) {
  const int l = cfg.snapshot_length();
  auto t0 = Clock::now();
  const SnapshotMatrix S = build_data_matrix(Y, l);
  const SingularTriplets svd = singular_triplets(S.S_bar);
  const double t_svd = seconds_since(t0);

  t0 = Clock::now();
  const int P = static_cast<int>(S.S_bar.cols());
  std::vector<double> s(svd.s.data(), svd.s.data() + svd.s.size());
  OrderSelection order = estimate_num_active(s, l, P, cfg.criterion, cfg.order_scan_limit());
  const double t_order = seconds_since(t0);

  t0 = Clock::now();
  FrequencyEstimate est = esprit_frequencies(signal_subspace(svd, order.k_hat));
  est.indices = indices_from_frequencies(est.omegas, cfg.N);
  const double t_esprit = seconds_since(t0);

  if (trace) {
    trace->singular_values = svd.s;
    trace->order = std::move(order);
    trace->svd_seconds = t_svd;
    trace->order_seconds = t_order;
    trace->esprit_seconds = t_esprit;
  }
  return est;
}

}  // namespace sinoma
