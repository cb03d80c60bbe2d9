#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sinoma/codes.hpp"
#include "sinoma/config.hpp"
#include "sinoma/linalg.hpp"

namespace sinoma {

/// Least-squares gains for the detected users; row n belongs to indices[n].
struct GainMatrix {
  std::vector<int> indices;
  ComplexMatrix upsilon_hat;  ///< |indices| x J
};

/// Decoded symbol slot whose gain entry was exactly zero.
inline constexpr int kErasedSymbol = -1;

struct UserEstimate {
  int index = 0;
  double mu = 0.0;         ///< mean of ln|row|, estimates ln|h|
  double zeta_bar = 0.0;   ///< circular mean of L*arg(row) mod 2pi
  double zeta_hat = 0.0;   ///< channel phase in [0, 2pi)
  cdouble h_hat{};         ///< exp(mu) * exp(i zeta_hat)
  std::vector<int> symbols_hat;  ///< frames 2..J; empty when undecodable
  double eta = 0.0;
  bool reliable = false;
  bool decodable = false;  ///< false on degenerate or phase-ambiguous rows
};

GainMatrix estimate_gains(std::span<const int> indices, const ComplexMatrix& Y,
                          const CodebookConfig& cfg);

/// (1/J) sum_j ln|row_j|. Throws DegenerateGain on a zero entry.
double log_magnitude(const ComplexVector& row);

/// arg(sum_j exp(i L arg(row_j))) in [0, 2pi). Throws PhaseAmbiguous when
/// the resultant is below 1e-12 of its maximum possible length.
double phase_base(const ComplexVector& row, int L);

/// Among (zeta_bar + 2 pi k) / L, k = 0..L-1, the candidate closest on the
/// unit circle to the pilot direction; ties go to the smaller k.
double resolve_phase(double zeta_bar, cdouble pilot_gain, int L);

/// Nearest L-PSK point to row_j / |row_j| * exp(-i zeta_hat) for frames
/// j = 2..J (0-based 1..J-1). Zero entries decode to kErasedSymbol.
std::vector<int> detect_symbols(const ComplexVector& row, double zeta_hat, int L);

/// 5 / sin(pi / L).
double reliability_threshold(int L);

struct Reliability {
  double eta = 0.0;
  bool reliable = false;
};

/// eta = std of ln|row| about mu. The gate compares against lambda either
/// the log-domain ratio mu / eta or the linear ratio mean|row| / std|row|.
/// A zero spread is reliable by convention.
Reliability reliability(const ComplexVector& row, double mu, int L,
                        ReliabilityRule rule = ReliabilityRule::Linear,
                        std::optional<double> lambda_override = std::nullopt);

/// Magnitude, phase, symbols and reliability for one detected user.
UserEstimate estimate_user(int index, const ComplexVector& row, int L,
                           ReliabilityRule rule = ReliabilityRule::Linear,
                           std::optional<double> lambda_override = std::nullopt);

}  // namespace sinoma
