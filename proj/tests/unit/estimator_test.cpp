#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "../oracles.hpp"
#include "sinoma/codes.hpp"
#include "sinoma/errors.hpp"
#include "sinoma/estimator.hpp"
#include "sinoma/scenario.hpp"

namespace sinoma {
namespace {

constexpr double kPi = std::numbers::pi;

ComplexVector psk_row(cdouble h, const std::vector<int>& q, int L) {
  ComplexVector row(static_cast<Eigen::Index>(q.size()));
  for (std::size_t j = 0; j < q.size(); ++j) row(static_cast<Eigen::Index>(j)) = h * std::polar(1.0, 2 * kPi * q[j] / L);
  return row;
}

TEST(EstimateGains, NoiselessPerfectDetection) {
  SystemConfig cfg;
  cfg.noiseless = true;
  cfg.fixed_active = 6;
  const Scenario s = generate_scenario(cfg, 31);
  const GainMatrix G = estimate_gains(s.truth.active_set, s.signal.Y, cfg.codebook());
  const ComplexMatrix U = gain_matrix(s.truth, cfg.L);
  EXPECT_LE((G.upsilon_hat - U).norm(), 1e-10 * U.norm());
  EXPECT_EQ(G.indices, s.truth.active_set);
}

TEST(EstimateGains, EmptyIndexList) {
  const GainMatrix G = estimate_gains({}, ComplexMatrix::Random(64, 9), CodebookConfig{});
  EXPECT_EQ(G.upsilon_hat.rows(), 0);
  EXPECT_EQ(G.upsilon_hat.cols(), 9);
}

TEST(EstimateGains, OrthogonalClosedForm) {
  const CodebookConfig cb{16, 16, 0.5};
  const std::vector<int> idx{2, 9};
  const ComplexMatrix Y = ComplexMatrix::Random(16, 3);
  const GainMatrix G = estimate_gains(idx, Y, cb);
  for (int n = 0; n < 2; ++n) {
    const ComplexVector phi = spreading_sequence(idx[n], cb);
    const ComplexMatrix expect = phi.adjoint() * Y / (16 * 0.25);
    EXPECT_LE((G.upsilon_hat.row(n) - expect).norm(), 1e-12);
  }
}

TEST(LogMagnitude, Examples) {
  ComplexVector r(3);
  r << std::polar(2.0, 0.1), std::polar(2.0, 1.9), std::polar(2.0, -3.0);
  EXPECT_NEAR(log_magnitude(r), std::log(2.0), 1e-15);
  ComplexVector two(2);
  two << 1.0, cdouble(0, std::exp(2.0));
  EXPECT_NEAR(log_magnitude(two), 1.0, 1e-15);
  two(0) = 0.0;
  EXPECT_THROW(log_magnitude(two), DegenerateGain);
}

TEST(PhaseBase, Examples) {
  EXPECT_NEAR(phase_base(psk_row(std::polar(1.5, 0.3), {0, 1, 2, 3, 1}, 4), 4), 1.2, 1e-12);
  const double z = phase_base(psk_row(2.0, {0, 3, 1, 2}, 4), 4);
  EXPECT_NEAR(std::min(z, 2 * kPi - z), 0.0, 1e-12);
  // Per-frame values 2pi - 0.1 and 0.1 (L = 1 keeps them as is).
  ComplexVector r(2);
  r << std::polar(1.0, -0.1), std::polar(1.0, 0.1);
  const double c = phase_base(r, 1);
  EXPECT_NEAR(std::min(c, 2 * kPi - c), 0.0, 1e-12);
}

TEST(PhaseBase, VanishingResultant) {
  ComplexVector r(2);
  r << std::polar(1.0, 0.0), std::polar(1.0, kPi / 4);  // L * arg = 0 and pi
  EXPECT_THROW(phase_base(r, 4), PhaseAmbiguous);
}

TEST(ResolvePhase, Examples) {
  const cdouble h = std::polar(0.7, 0.3);
  EXPECT_NEAR(resolve_phase(1.2, h, 4), 0.3, 1e-10);
  EXPECT_NEAR(resolve_phase(0.0, 3.0, 4), 0.0, 1e-15);
  // Pilot halfway between candidates 0 (angle 0) and 1 (angle pi/2).
  EXPECT_NEAR(resolve_phase(0.0, std::polar(1.0, kPi / 4), 4), 0.0, 1e-15);
  EXPECT_THROW(resolve_phase(0.0, 0.0, 4), PhaseAmbiguous);
}

TEST(ResolvePhase, RecoversEveryQuadrant) {
  for (int L : {2, 4, 8}) {
    for (double zeta = 0.05; zeta < 2 * kPi; zeta += 0.37) {
      const ComplexVector row = psk_row(std::polar(1.0, zeta), {0, 1, L - 1}, L);
      const double zh = resolve_phase(phase_base(row, L), row(0), L);
      EXPECT_NEAR(std::abs(std::polar(1.0, zh) - std::polar(1.0, zeta)), 0.0, 1e-10);
    }
  }
}

TEST(DetectSymbols, ConstellationPointsAndErasure) {
  const cdouble h = std::polar(0.01, 2.0);
  ComplexVector row = psk_row(h, {0, 1, 3, 2}, 4);
  EXPECT_EQ(detect_symbols(row, 2.0, 4), (std::vector<int>{1, 3, 2}));
  row(2) = 0.0;
  EXPECT_EQ(detect_symbols(row, 2.0, 4), (std::vector<int>{1, kErasedSymbol, 2}));
}

TEST(DetectSymbols, AgreesWithExhaustiveSearch) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  for (int inst = 0; inst < 300; ++inst) {
    const int L = 2 << (inst % 3);
    ComplexVector row(9);
    for (int j = 0; j < 9; ++j) row(j) = {g(rng), g(rng)};
    const double zeta = u(rng);
    const auto q = detect_symbols(row, zeta, L);
    for (int j = 1; j < 9; ++j) EXPECT_EQ(q[j - 1], oracle::brute_force_psk(row(j), zeta, L));
  }
}

TEST(Reliability, ThresholdAndNoiseless) {
  EXPECT_NEAR(reliability_threshold(4), 7.0711, 1e-4);
  EXPECT_NEAR(reliability_threshold(2), 5.0, 1e-15);
  const ComplexVector row = psk_row(std::polar(1e-5, 1.0), {0, 1, 2, 3}, 4);
  for (auto rule : {ReliabilityRule::Linear, ReliabilityRule::LogDomain}) {
    const Reliability r = reliability(row, log_magnitude(row), 4, rule);
    EXPECT_NEAR(r.eta, 0.0, 1e-12);
    if (rule == ReliabilityRule::Linear) EXPECT_TRUE(r.reliable);
  }
}

TEST(Reliability, EtaIsScaleInvariant) {
  ComplexVector row(5);
  row << cdouble(1, 0.2), cdouble(0.3, 0.9), cdouble(-1.1, 0.1), cdouble(0.2, -0.7), cdouble(1, 1);
  const double mu = log_magnitude(row);
  const Reliability a = reliability(row, mu, 4);
  const ComplexVector scaled = 37.0 * row;
  const Reliability b = reliability(scaled, log_magnitude(scaled), 4);
  EXPECT_NEAR(a.eta, b.eta, 1e-12);
  EXPECT_EQ(a.reliable, b.reliable);
}

TEST(Reliability, LinearGateAndOverride) {
  ComplexVector row(4);
  row << 1.0, 1.1, 0.9, 1.0;  // mean 1, std ~0.0707 -> ratio ~14.1
  EXPECT_TRUE(reliability(row, log_magnitude(row), 4).reliable);
  EXPECT_FALSE(reliability(row, log_magnitude(row), 4, ReliabilityRule::Linear, 20.0).reliable);
  // Log-domain rule: mu = ln|h| is negative for any realistic channel.
  EXPECT_FALSE(reliability(1e-5 * row, log_magnitude(1e-5 * row), 4, ReliabilityRule::LogDomain).reliable);
}

TEST(EstimateUser, NoiselessRoundTrip) {
  SystemConfig cfg;
  cfg.noiseless = true;
  cfg.fixed_active = 8;
  for (int t = 0; t < 20; ++t) {
    const Scenario s = generate_scenario(cfg, 400 + t);
    const GainMatrix G = estimate_gains(s.truth.active_set, s.signal.Y, cfg.codebook());
    for (int k = 0; k < 8; ++k) {
      const UserEstimate u = estimate_user(G.indices[k], G.upsilon_hat.row(k).transpose(), cfg.L);
      const cdouble h = s.truth.channels[k];
      EXPECT_LE(std::abs(u.h_hat - h), 1e-9 * std::abs(h));
      EXPECT_NEAR(std::abs(u.h_hat), std::exp(u.mu), 1e-15 * std::exp(u.mu));
      ASSERT_EQ(static_cast<int>(u.symbols_hat.size()), cfg.J - 1);
      for (int j = 1; j < cfg.J; ++j) EXPECT_EQ(u.symbols_hat[j - 1], s.truth.symbols[k][j]);
      EXPECT_TRUE(u.reliable);
      EXPECT_TRUE(u.decodable);
    }
  }
}

TEST(EstimateUser, ScaleCovariance) {
  ComplexVector row(6);
  row << cdouble(0.9, 0.4), cdouble(-0.5, 1.0), cdouble(-1.0, -0.3), cdouble(0.2, -1.1),
      cdouble(1.0, 0.5), cdouble(-0.4, 0.9);
  const UserEstimate a = estimate_user(3, row, 4);
  const UserEstimate b = estimate_user(3, 5.0 * row, 4);
  EXPECT_NEAR(b.mu - a.mu, std::log(5.0), 1e-12);
  EXPECT_NEAR(a.zeta_hat, b.zeta_hat, 1e-12);
  EXPECT_EQ(a.symbols_hat, b.symbols_hat);
}

TEST(EstimateUser, PilotAnchoredSymbolsInvariantToPskRotation) {
  ComplexVector row(6);
  row << cdouble(0.9, 0.4), cdouble(-0.5, 1.0), cdouble(-1.0, -0.3), cdouble(0.2, -1.1),
      cdouble(1.0, 0.5), cdouble(-0.4, 0.9);
  const UserEstimate a = estimate_user(0, row, 4);
  const UserEstimate b = estimate_user(0, std::polar(1.0, kPi / 2) * row, 4);
  EXPECT_EQ(a.symbols_hat, b.symbols_hat);
  EXPECT_NEAR(a.eta, b.eta, 1e-15);
  EXPECT_NEAR(a.mu, b.mu, 1e-15);
}

TEST(EstimateUser, PilotOnlyAndDegenerate) {
  ComplexVector one(1);
  one << std::polar(2.0, 0.4);
  const UserEstimate u = estimate_user(1, one, 4);
  EXPECT_TRUE(u.symbols_hat.empty());
  EXPECT_NEAR(std::abs(u.h_hat - one(0)), 0.0, 1e-12);

  ComplexVector dead(3);
  dead << 1.0, 0.0, 1.0;
  const UserEstimate d = estimate_user(2, dead, 4);
  EXPECT_FALSE(d.decodable);
  EXPECT_FALSE(d.reliable);
  EXPECT_TRUE(d.symbols_hat.empty());
}

}  // namespace
}  // namespace sinoma
