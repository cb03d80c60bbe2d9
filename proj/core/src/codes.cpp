#include "sinoma/codes.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <unordered_set>

#include "sinoma/errors.hpp"

namespace sinoma {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_index(int n, int N) {
  if (N < 1 || n < 0 || n >= N) {
    throw InvalidInput("user index " + std::to_string(n) + " outside [0, " +
                       std::to_string(N) + ")");
  }
}
}  // namespace

void CodebookConfig::validate() const {
  if (M < 1 || N <= M) throw InvalidInput("codebook: require 1 <= M < N");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidInput("codebook: gamma must be positive");
  }
}

double sequence_amplitude(double tx_power_w, int M, PowerMapping mapping) {
  if (!(tx_power_w > 0.0) || M < 1) {
    throw InvalidInput("sequence_amplitude: power and M must be positive");
  }
  switch (mapping) {
    case PowerMapping::PerSymbolTotal:
      return std::sqrt(tx_power_w / M);
    case PowerMapping::PerElement:
      return std::sqrt(tx_power_w);
  }
  return 0.0;
}

double user_frequency(int n, int N) {
  check_index(n, N);
  return kTwoPi * n / N;
}

ComplexVector spreading_sequence(int n, const CodebookConfig& cfg) {
  check_index(n, cfg.N);
  ComplexVector phi(cfg.M);
  for (int m = 0; m < cfg.M; ++m) {
    // Reduce m*n modulo N first so the phase argument stays small and the
    // Nyquist/DC cases come out exact.
    const long long r = (static_cast<long long>(m) * n) % cfg.N;
    phi(m) = std::polar(cfg.gamma, kTwoPi * static_cast<double>(r) / cfg.N);
  }
  return phi;
}

ComplexMatrix code_matrix(std::span<const int> indices, const CodebookConfig& cfg) {
  std::unordered_set<int> seen;
  ComplexMatrix phi(cfg.M, static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (!seen.insert(indices[k]).second) {
      throw InvalidInput("code_matrix: duplicate user index " + std::to_string(indices[k]));
    }
    phi.col(static_cast<Eigen::Index>(k)) = spreading_sequence(indices[k], cfg);
  }
  return phi;
}

ComplexMatrix frequency_matrix(std::span<const double> omegas, int M, double gamma) {
  ComplexMatrix phi(M, static_cast<Eigen::Index>(omegas.size()));
  for (std::size_t k = 0; k < omegas.size(); ++k) {
    for (int m = 0; m < M; ++m) {
      phi(m, static_cast<Eigen::Index>(k)) = std::polar(gamma, omegas[k] * m);
    }
  }
  return phi;
}

int frequency_to_index(double omega, int N) {
  const double r = std::round(N * omega / kTwoPi);
  long long n = static_cast<long long>(std::fmod(r, static_cast<double>(N)));
  if (n < 0) n += N;
  return static_cast<int>(n % N);
}

double wrap_to_two_pi(double angle) {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

}  // namespace sinoma
