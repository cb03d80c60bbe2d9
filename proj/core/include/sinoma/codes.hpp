#pragma once

#include <span>

#include "sinoma/linalg.hpp"

namespace sinoma {

/// Sinusoidal codebook: N sequences of length M, every element of modulus gamma.
struct CodebookConfig {
  int N = 128;
  int M = 64;
  double gamma = 1.0;

  void validate() const;
};

/// How the configured transmit power is spread over the M resources.
enum class PowerMapping {
  PerSymbolTotal,  ///< gamma^2 = P / M, so ||phi_n||^2 = P
  PerElement,      ///< gamma^2 = P on every resource
};

/// Sequence amplitude gamma for a transmit power in watts.
double sequence_amplitude(double tx_power_w, int M, PowerMapping mapping);

/// Angular frequency 2*pi*n/N of sequence n.
double user_frequency(int n, int N);

/// gamma * exp(i*2*pi*m*n/N), m = 0..M-1.
ComplexVector spreading_sequence(int n, const CodebookConfig& cfg);

/// Columns are the spreading sequences of `indices`, in order.
ComplexMatrix code_matrix(std::span<const int> indices, const CodebookConfig& cfg);

/// Same construction at arbitrary real frequencies: column n is
/// gamma * exp(i*omega_n*m). Used by the continuous ML refinement.
ComplexMatrix frequency_matrix(std::span<const double> omegas, int M, double gamma);

/// Nearest sequence index to an angular frequency, wrapped into [0, N).
int frequency_to_index(double omega, int N);

/// Wrap an angle into [0, 2*pi).
double wrap_to_two_pi(double angle);

}  // namespace sinoma
