#pragma once

#include <cstdint>
#include <vector>

#include "sinoma/config.hpp"
#include "sinoma/linalg.hpp"
#include "sinoma/rng.hpp"

namespace sinoma {

/// Latent state of one random-access opportunity.
struct GroundTruth {
  std::vector<double> distances_km;  ///< length N
  std::vector<double> variances;     ///< tau_n, linear, length N
  std::vector<int> active_set;       ///< sorted, distinct
  std::vector<cdouble> channels;     ///< h for each active user, aligned with active_set
  /// symbols[k][j] in {0..L-1}; symbols[k][0] == 0 is the pilot.
  std::vector<std::vector<int>> symbols;

  bool operator==(const GroundTruth&) const = default;
};

struct ReceivedSignal {
  ComplexMatrix Y;              ///< M x J
  double noise_variance = 0.0;  ///< sigma^2 per complex sample; never given to the receiver
};

struct Scenario {
  GroundTruth truth;
  ReceivedSignal signal;
};

/// NLOS path-loss variance 10^((-128.1 - 36.7 log10 d)/10), d in km.
double path_loss_variance(double d_km);

/// Thermal noise power in watts for a PSD (dBm/Hz) over a bandwidth (Hz).
double noise_variance(double psd_dbm_hz, double bandwidth_hz);

/// N distances (km), uniform over the annulus area between min_dist and radius.
std::vector<double> place_users(const SystemConfig& cfg, Rng& rng);

/// Activity, channels and PSK symbol indices for one opportunity.
GroundTruth sample_truth(const SystemConfig& cfg, std::vector<double> distances_km, Rng& rng);

/// Y = Phi * Upsilon + W with W circular Gaussian of variance sigma^2
/// (zero when cfg.noiseless).
ReceivedSignal synthesize(const SystemConfig& cfg, const GroundTruth& truth, Rng& rng);

/// Gain matrix Upsilon_{k,j} = h_k * exp(i 2 pi q_{k,j} / L).
ComplexMatrix gain_matrix(const GroundTruth& truth, int L);

/// Full trial draw using per-purpose streams derived from `trial_seed`.
Scenario generate_scenario(const SystemConfig& cfg, std::uint64_t trial_seed);

}  // namespace sinoma
