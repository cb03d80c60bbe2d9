#include "sinoma/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "sinoma/codes.hpp"
#include "sinoma/errors.hpp"

namespace sinoma {

double path_loss_variance(double d_km) {
  if (!(d_km > 0.0)) throw InvalidInput("path_loss_variance: distance must be positive");
  const double db = -128.1 - 36.7 * std::log10(d_km);
  return std::pow(10.0, db / 10.0);
}

double noise_variance(double psd_dbm_hz, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) throw InvalidInput("noise_variance: bandwidth must be positive");
  const double dbm = psd_dbm_hz + 10.0 * std::log10(bandwidth_hz);
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

std::vector<double> place_users(const SystemConfig& cfg, Rng& rng) {
  const double r0 = cfg.min_dist_m;
  const double R = cfg.cell_radius_m;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> d(static_cast<std::size_t>(cfg.N));
  for (double& di : d) {
    const double r = std::sqrt(unit(rng) * (R * R - r0 * r0) + r0 * r0);
    di = std::clamp(r, r0, R) / 1000.0;
  }
  return d;
}

GroundTruth sample_truth(const SystemConfig& cfg, std::vector<double> distances_km, Rng& rng) {
  if (static_cast<int>(distances_km.size()) != cfg.N) {
    throw InvalidInput("sample_truth: need one distance per user");
  }
  GroundTruth t;
  t.distances_km = std::move(distances_km);
  t.variances.reserve(t.distances_km.size());
  for (double d : t.distances_km) t.variances.push_back(path_loss_variance(d));

  if (cfg.fixed_active >= 0) {
    // Partial Fisher-Yates: first fixed_active entries form a uniform subset.
    std::vector<int> pool(static_cast<std::size_t>(cfg.N));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < cfg.fixed_active; ++i) {
      std::uniform_int_distribution<int> pick(i, cfg.N - 1);
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
    }
    t.active_set.assign(pool.begin(), pool.begin() + cfg.fixed_active);
    std::sort(t.active_set.begin(), t.active_set.end());
  } else {
    std::bernoulli_distribution active(cfg.p_a);
    for (int n = 0; n < cfg.N; ++n) {
      if (active(rng)) t.active_set.push_back(n);
    }
  }

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> symbol(0, cfg.L - 1);
  for (int n : t.active_set) {
    const double s = std::sqrt(t.variances[static_cast<std::size_t>(n)] / 2.0);
    const double re = gauss(rng);
    const double im = gauss(rng);
    t.channels.emplace_back(s * re, s * im);
    std::vector<int> q(static_cast<std::size_t>(cfg.J), 0);
    for (int j = 1; j < cfg.J; ++j) q[static_cast<std::size_t>(j)] = symbol(rng);
    t.symbols.push_back(std::move(q));
  }
  return t;
}

ComplexMatrix gain_matrix(const GroundTruth& truth, int L) {
  const auto K = static_cast<Eigen::Index>(truth.active_set.size());
  const auto J = truth.symbols.empty() ? Eigen::Index{0}
                                       : static_cast<Eigen::Index>(truth.symbols.front().size());
  ComplexMatrix ups(K, J);
  for (Eigen::Index k = 0; k < K; ++k) {
    const auto& q = truth.symbols[static_cast<std::size_t>(k)];
    for (Eigen::Index j = 0; j < J; ++j) {
      const double phase = 2.0 * std::numbers::pi * q[static_cast<std::size_t>(j)] / L;
      ups(k, j) = truth.channels[static_cast<std::size_t>(k)] * std::polar(1.0, phase);
    }
  }
  return ups;
}

ReceivedSignal synthesize(const SystemConfig& cfg, const GroundTruth& truth, Rng& rng) {
  ReceivedSignal out;
  out.Y = ComplexMatrix::Zero(cfg.M, cfg.J);
  if (!truth.active_set.empty()) {
    const ComplexMatrix phi = code_matrix(truth.active_set, cfg.codebook());
    out.Y = phi * gain_matrix(truth, cfg.L);
  }
  out.noise_variance = cfg.noiseless ? 0.0 : noise_variance(cfg.noise_psd_dbm_hz, cfg.bandwidth_hz);
  if (out.noise_variance > 0.0) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(out.noise_variance / 2.0));
    // Column-major fill: frame by frame, resource by resource.
    for (Eigen::Index j = 0; j < out.Y.cols(); ++j) {
      for (Eigen::Index m = 0; m < out.Y.rows(); ++m) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        out.Y(m, j) += cdouble(re, im);
      }
    }
  }
  return out;
}

Scenario generate_scenario(const SystemConfig& cfg, std::uint64_t trial_seed) {
  Rng placement = make_rng(trial_seed, Stream::Placement);
  Rng activity = make_rng(trial_seed, Stream::Activity);
  Rng noise = make_rng(trial_seed, Stream::Noise);
  Scenario s;
  s.truth = sample_truth(cfg, place_users(cfg, placement), activity);
  s.signal = synthesize(cfg, s.truth, noise);
  return s;
}

}  // namespace sinoma
