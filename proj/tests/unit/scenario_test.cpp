#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "../oracles.hpp"
#include "sinoma/codes.hpp"
#include "sinoma/errors.hpp"
#include "sinoma/rng.hpp"
#include "sinoma/scenario.hpp"

namespace sinoma {
namespace {

double to_db(double x) { return 10.0 * std::log10(x); }

TEST(PathLoss, Examples) {
  EXPECT_NEAR(to_db(path_loss_variance(0.1)), -91.4, 1e-9);
  EXPECT_NEAR(to_db(path_loss_variance(0.2)), -102.448, 1e-3);
  EXPECT_NEAR(to_db(path_loss_variance(1.0)), -128.1, 1e-9);
  EXPECT_THROW(path_loss_variance(0.0), InvalidInput);
  EXPECT_THROW(path_loss_variance(-1.0), InvalidInput);
}

TEST(NoiseVariance, Examples) {
  EXPECT_NEAR(noise_variance(-170, 1e6) / 1e-14, 1.0, 1e-12);
  EXPECT_NEAR(noise_variance(-170, 1) / 1e-20, 1.0, 1e-12);
  EXPECT_NEAR(noise_variance(-140, 1e3) / 1e-14, 1.0, 1e-12);
}

TEST(PlaceUsers, DegenerateAnnulus) {
  SystemConfig cfg;
  cfg.min_dist_m = cfg.cell_radius_m - 1e-6;
  Rng rng = make_rng(3, Stream::Placement);
  for (double d : place_users(cfg, rng)) EXPECT_NEAR(d, 0.2, 1e-8);
}

TEST(PlaceUsers, DeterministicAndInRange) {
  SystemConfig cfg;
  Rng a = make_rng(42, Stream::Placement), b = make_rng(42, Stream::Placement);
  const auto da = place_users(cfg, a), db = place_users(cfg, b);
  EXPECT_EQ(da, db);
  ASSERT_EQ(static_cast<int>(da.size()), cfg.N);
  for (double d : da) {
    EXPECT_GE(d, cfg.min_dist_m / 1000.0);
    EXPECT_LE(d, cfg.cell_radius_m / 1000.0);
  }
}

TEST(PlaceUsers, SquaredRadiusIsUniform) {
  SystemConfig cfg;
  Rng rng = make_rng(7, Stream::Placement);
  const double r0 = cfg.min_dist_m / 1000.0, R = cfg.cell_radius_m / 1000.0;
  std::vector<double> r2;
  while (r2.size() < 100000) {
    for (double d : place_users(cfg, rng)) r2.push_back(d * d);
  }
  r2.resize(100000);
  const double D = oracle::ks_statistic(r2, [&](double x) {
    return std::clamp((x - r0 * r0) / (R * R - r0 * r0), 0.0, 1.0);
  });
  EXPECT_GT(oracle::ks_p_value(D, r2.size()), 0.01);
}

TEST(SampleTruth, ExtremeActivity) {
  SystemConfig cfg;
  Rng placement = make_rng(1, Stream::Placement);
  const auto d = place_users(cfg, placement);
  Rng rng = make_rng(1, Stream::Activity);
  cfg.p_a = 1.0;
  auto all = sample_truth(cfg, d, rng);
  EXPECT_EQ(static_cast<int>(all.active_set.size()), cfg.N);
  cfg.p_a = 0.0;
  auto none = sample_truth(cfg, d, rng);
  EXPECT_TRUE(none.active_set.empty());
  EXPECT_TRUE(none.channels.empty());
  EXPECT_TRUE(none.symbols.empty());
}

TEST(SampleTruth, StructureAndPilot) {
  SystemConfig cfg;
  cfg.p_a = 0.3;
  const Scenario s = generate_scenario(cfg, 11);
  const auto& t = s.truth;
  EXPECT_TRUE(std::is_sorted(t.active_set.begin(), t.active_set.end()));
  EXPECT_EQ(std::adjacent_find(t.active_set.begin(), t.active_set.end()), t.active_set.end());
  ASSERT_EQ(t.channels.size(), t.active_set.size());
  ASSERT_EQ(t.symbols.size(), t.active_set.size());
  for (const auto& q : t.symbols) {
    ASSERT_EQ(static_cast<int>(q.size()), cfg.J);
    EXPECT_EQ(q[0], 0);
    for (int v : q) {
      EXPECT_GE(v, 0);
      EXPECT_LT(v, cfg.L);
    }
  }
  for (std::size_t n = 0; n < t.variances.size(); ++n) {
    EXPECT_DOUBLE_EQ(t.variances[n], path_loss_variance(t.distances_km[n]));
  }
}

TEST(SampleTruth, FixedCardinality) {
  SystemConfig cfg;
  for (int k : {0, 1, 7, 12}) {
    cfg.fixed_active = k;
    EXPECT_EQ(static_cast<int>(generate_scenario(cfg, 100 + k).truth.active_set.size()), k);
  }
}

TEST(SampleTruth, MeanActiveCountIsBinomial) {
  SystemConfig cfg;  // p_a = 0.1, N = 128
  const int trials = 10000;
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_rng(derive_seed(5, {static_cast<std::uint64_t>(t)}), Stream::Activity);
    sum += sample_truth(cfg, std::vector<double>(cfg.N, 0.1), rng).active_set.size();
  }
  const double mean = sum / trials;
  const double sd = std::sqrt(cfg.N * cfg.p_a * (1 - cfg.p_a) / trials);
  EXPECT_NEAR(mean, 12.8, 3 * sd);
}

TEST(Synthesize, EmptyNoiselessIsZero) {
  SystemConfig cfg;
  cfg.p_a = 0.0;
  cfg.noiseless = true;
  const Scenario s = generate_scenario(cfg, 9);
  EXPECT_EQ(s.signal.Y.rows(), cfg.M);
  EXPECT_EQ(s.signal.Y.cols(), cfg.J);
  EXPECT_EQ(s.signal.Y.norm(), 0.0);
  EXPECT_EQ(s.signal.noise_variance, 0.0);
}

TEST(Synthesize, SingleUserSingleFrame) {
  SystemConfig cfg;
  cfg.J = 1;  // boundary below the config invariant; synthesize itself does not need J >= 2
  cfg.noiseless = true;
  GroundTruth t;
  t.distances_km.assign(cfg.N, 0.1);
  t.variances.assign(cfg.N, 1.0);
  t.active_set = {17};
  t.channels = {cdouble(0.3, -0.4)};
  t.symbols = {{0}};
  Rng rng(1);
  const auto sig = synthesize(cfg, t, rng);
  const ComplexVector expect = spreading_sequence(17, cfg.codebook()) * t.channels[0];
  EXPECT_LE((sig.Y.col(0) - expect).norm(), 1e-15 * expect.norm());
}

TEST(Synthesize, MatchesGainModelNoiseless) {
  SystemConfig cfg;
  cfg.noiseless = true;
  cfg.fixed_active = 5;
  const Scenario s = generate_scenario(cfg, 21);
  const std::vector<int>& a = s.truth.active_set;
  const ComplexMatrix Y = code_matrix(a, cfg.codebook()) * gain_matrix(s.truth, cfg.L);
  EXPECT_LE((s.signal.Y - Y).norm(), 1e-14 * Y.norm());
  const ComplexMatrix U = gain_matrix(s.truth, cfg.L);
  for (int k = 0; k < 5; ++k) {
    EXPECT_EQ(U(k, 0), s.truth.channels[k]);  // pilot is unity
    for (int j = 0; j < cfg.J; ++j) EXPECT_NEAR(std::abs(U(k, j)), std::abs(s.truth.channels[k]), 1e-20);
  }
}

TEST(Synthesize, NoiseEnergyConcentrates) {
  SystemConfig cfg;
  double ratio_sum = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Scenario s = generate_scenario(cfg, 1000 + t);
    const ComplexMatrix clean =
        code_matrix(s.truth.active_set, cfg.codebook()) * gain_matrix(s.truth, cfg.L);
    const double e = (s.signal.Y - clean).squaredNorm();
    ratio_sum += e / (cfg.M * cfg.J * s.signal.noise_variance);
  }
  EXPECT_NEAR(ratio_sum / 100, 1.0, 0.05);
}

TEST(Scenario, DeterministicPerSeed) {
  SystemConfig cfg;
  const Scenario a = generate_scenario(cfg, 77), b = generate_scenario(cfg, 77);
  EXPECT_TRUE(a.truth == b.truth);
  EXPECT_TRUE(a.signal.Y == b.signal.Y);
  const Scenario c = generate_scenario(cfg, 78);
  EXPECT_FALSE(a.signal.Y == c.signal.Y);
}

TEST(Scenario, PerSymbolPowerAccounting) {
  SystemConfig cfg;
  const double gamma = cfg.gamma();
  EXPECT_NEAR(cfg.M * gamma * gamma, cfg.tx_power_w(), 1e-18);
  EXPECT_NEAR(cfg.tx_power_w(), 0.1, 1e-15);
}

// Lemma: beta * h with beta uniform on L-PSK and h ~ CN(0, tau) is CN(0, tau).
TEST(Scenario, RotatedGaussianStaysGaussian) {
  SystemConfig cfg;
  cfg.p_a = 1.0;
  const double tau = 2.5;
  std::vector<double> re, im, pw;
  std::uint64_t t = 0;
  while (re.size() < 100000) {
    Rng rng = make_rng(derive_seed(99, {t++}), Stream::Activity);
    const auto truth = sample_truth(cfg, std::vector<double>(cfg.N, 0.1), rng);
    for (std::size_t k = 0; k < truth.active_set.size() && re.size() < 100000; ++k) {
      const double scale = std::sqrt(tau / truth.variances[truth.active_set[k]]);
      const cdouble z = scale * truth.channels[k] *
                        std::polar(1.0, 2 * std::numbers::pi * truth.symbols[k][1] / cfg.L);
      re.push_back(z.real());
      im.push_back(z.imag());
      pw.push_back(std::norm(z));
    }
  }
  const auto gauss = [&](double x) { return oracle::normal_cdf(x, tau / 2); };
  EXPECT_GT(oracle::ks_p_value(oracle::ks_statistic(re, gauss), re.size()), 0.01);
  EXPECT_GT(oracle::ks_p_value(oracle::ks_statistic(im, gauss), im.size()), 0.01);
  EXPECT_GT(oracle::ks_p_value(oracle::ks_statistic(pw, [&](double x) {
                                 return x <= 0 ? 0.0 : 1.0 - std::exp(-x / tau);
                               }),
                               pw.size()),
            0.01);
}

}  // namespace
}  // namespace sinoma
