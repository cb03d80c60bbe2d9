#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sinoma/config.hpp"
#include "sinoma/receiver.hpp"
#include "sinoma/scenario.hpp"

namespace sinoma {

struct TrialResult {
  GroundTruth truth;
  ReceiverOutput rx;
};

/// Draw a scenario from `trial_seed` and run the receiver on it.
TrialResult run_trial(const SystemConfig& cfg, std::uint64_t trial_seed);

/// |truth \ detected| / |truth|; 0 for an empty truth.
double mdr(std::span<const int> truth, std::span<const int> detected);

/// |detected \ truth| / (N - |truth|); 0 when every user is active.
double far(std::span<const int> truth, std::span<const int> detected, int N);

enum class NserMode {
  Strict,        ///< missed users contribute J-1 errors each
  DetectedOnly,  ///< only correctly detected users are scored
};

/// Net symbol error rate over frames 2..J. False alarms are not scored.
double nser(const GroundTruth& truth, std::span<const UserEstimate> users, NserMode mode);

struct RmseValue {
  double value = 0.0;
  bool empty = true;  ///< no correctly detected user to score
};

/// sqrt(mean |h_hat - h|^2) over correctly detected users.
RmseValue rmse_ce(const GroundTruth& truth, std::span<const UserEstimate> users);

/// Integer bookkeeping for one trial; aggregation sums these.
struct TrialTally {
  long active = 0;
  long inactive = 0;
  long missed = 0;
  long false_alarms = 0;
  long detected = 0;
  long unreliable = 0;
  long matched = 0;         ///< detected and truly active
  long symbol_errors = 0;   ///< among matched users
  long symbols_scored = 0;  ///< matched * (J-1)
  double channel_sq_error = 0.0;
  double runtime_s = 0.0;
  int k_hat = 0;
};

TrialTally tally(const TrialResult& trial, int N, int J);

enum class SweepAxis { M, TxPowerDbm, ActivationProbability };

std::string_view axis_name(SweepAxis axis);
/// Accepts "M", "tx_power_dbm" or "p_a". Throws InvalidInput otherwise.
SweepAxis parse_axis(std::string_view name);

/// Base config with the swept parameter replaced. Sweeping M keeps an
/// automatic snapshot length automatic.
SystemConfig apply_axis(SystemConfig cfg, SweepAxis axis, double value);

/// Seed of trial `trial` at one sweep point, derived from (seed, axis, value, trial).
std::uint64_t sweep_trial_seed(std::uint64_t seed, SweepAxis axis, double value, int trial);

/// Pooled metrics for one sweep point.
struct MetricsRecord {
  std::string axis;
  double value = 0.0;
  int trials = 0;
  double mdr = 0.0;
  double far = 0.0;
  double nser_strict = 0.0;
  double nser_detected_only = 0.0;
  double rmse_ce = 0.0;
  double unreliable_frac = 0.0;
  double mean_runtime_s = 0.0;

  // Pooled counts behind the rates.
  long active = 0;
  long missed = 0;
  long detected = 0;
  long unreliable = 0;
  long false_alarms = 0;
  long order_exact = 0;  ///< trials with k_hat == |truth|
  long order_over = 0;   ///< trials with k_hat > |truth|
};

/// Sum tallies in order and turn them into rates.
MetricsRecord aggregate(std::string_view axis, double value, std::span<const TrialTally> tallies,
                        int J);

struct SweepOptions {
  int workers = 1;
  bool timing = true;  ///< false zeroes runtime so output is byte-reproducible
};

/// Run `fn(i)` for i in [0, count) on up to `workers` threads.
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

/// One MetricsRecord per value; trials are independent and seeded per point.
std::vector<MetricsRecord> sweep(const SystemConfig& base, SweepAxis axis,
                                 std::span<const double> values, int trials,
                                 const SweepOptions& opts = {});

inline constexpr std::string_view kMetricsCsvHeader =
    "axis,value,trials,mdr,far,nser_strict,nser_detected_only,rmse_ce,unreliable_frac,"
    "mean_runtime_s";

void write_metrics_csv(std::ostream& out, std::span<const MetricsRecord> records);

}  // namespace sinoma
