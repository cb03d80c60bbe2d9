#include "sinoma/estimator.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sinoma/errors.hpp"

namespace sinoma {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Distances closer than this count as ties and keep the earlier candidate.
constexpr double kTieTolerance = 1e-12;
}

GainMatrix estimate_gains(std::span<const int> indices, const ComplexMatrix& Y,
                          const CodebookConfig& cfg) {
  GainMatrix g;
  g.indices.assign(indices.begin(), indices.end());
  if (indices.empty()) {
    g.upsilon_hat = ComplexMatrix::Zero(0, Y.cols());
    return g;
  }
  if (static_cast<Eigen::Index>(indices.size()) > Y.rows()) {
    throw InvalidInput("estimate_gains: more users than resources");
  }
  g.upsilon_hat = least_squares(code_matrix(indices, cfg), Y);
  return g;
}

double log_magnitude(const ComplexVector& row) {
  if (row.size() == 0) throw InvalidInput("log_magnitude: empty row");
  double acc = 0.0;
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    const double a = std::abs(row(j));
    if (!(a > 0.0)) throw DegenerateGain("log_magnitude: zero gain entry");
    acc += std::log(a);
  }
  return acc / static_cast<double>(row.size());
}

double phase_base(const ComplexVector& row, int L) {
  if (row.size() == 0) throw InvalidInput("phase_base: empty row");
  cdouble resultant{};
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    if (std::abs(row(j)) == 0.0) throw DegenerateGain("phase_base: zero gain entry");
    resultant += std::polar(1.0, L * std::arg(row(j)));
  }
  if (std::abs(resultant) < 1e-12 * static_cast<double>(row.size())) {
    throw PhaseAmbiguous("phase_base: resultant vanishes");
  }
  return wrap_to_two_pi(std::arg(resultant));
}

double resolve_phase(double zeta_bar, cdouble pilot_gain, int L) {
  const double mag = std::abs(pilot_gain);
  if (!(mag > 0.0)) throw PhaseAmbiguous("resolve_phase: zero pilot gain");
  const cdouble pilot = pilot_gain / mag;
  double best = 0.0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int k = 0; k < L; ++k) {
    const double cand = (zeta_bar + kTwoPi * k) / L;
    const double dist = std::abs(std::polar(1.0, cand) - pilot);
    if (dist < best_dist - kTieTolerance) {
      best_dist = dist;
      best = cand;
    }
  }
  return wrap_to_two_pi(best);
}

std::vector<int> detect_symbols(const ComplexVector& row, double zeta_hat, int L) {
  std::vector<int> q;
  const cdouble derotate = std::polar(1.0, -zeta_hat);
  for (Eigen::Index j = 1; j < row.size(); ++j) {
    const double a = std::abs(row(j));
    if (!(a > 0.0)) {
      q.push_back(kErasedSymbol);
      continue;
    }
    const cdouble z = row(j) / a * derotate;
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int c = 0; c < L; ++c) {
      const double dist = std::abs(z - std::polar(1.0, kTwoPi * c / L));
      if (dist < best_dist - kTieTolerance) {
        best_dist = dist;
        best = c;
      }
    }
    q.push_back(best);
  }
  return q;
}

double reliability_threshold(int L) { return 5.0 / std::sin(std::numbers::pi / L); }

Reliability reliability(const ComplexVector& row, double mu, int L, ReliabilityRule rule,
                        std::optional<double> lambda_override) {
  const double lambda = lambda_override.value_or(reliability_threshold(L));
  const auto J = static_cast<double>(row.size());
  Reliability r;
  double var = 0.0;
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    const double d = std::log(std::abs(row(j))) - mu;
    var += d * d;
  }
  r.eta = std::sqrt(var / J);

  if (rule == ReliabilityRule::LogDomain) {
    r.reliable = r.eta == 0.0 || mu / r.eta > lambda;
    return r;
  }
  const Eigen::ArrayXd mags = row.array().abs();
  const double mean = mags.mean();
  const double spread = std::sqrt((mags - mean).square().sum() / J);
  r.reliable = spread == 0.0 || mean / spread > lambda;
  return r;
}

UserEstimate estimate_user(int index, const ComplexVector& row, int L, ReliabilityRule rule,
                           std::optional<double> lambda_override) {
  UserEstimate u;
  u.index = index;
  try {
    u.mu = log_magnitude(row);
    u.zeta_bar = phase_base(row, L);
    u.zeta_hat = resolve_phase(u.zeta_bar, row(0), L);
  } catch (const DegenerateGain&) {
    return u;
  } catch (const PhaseAmbiguous&) {
    return u;
  }
  u.decodable = true;
  u.h_hat = std::polar(std::exp(u.mu), u.zeta_hat);
  u.symbols_hat = detect_symbols(row, u.zeta_hat, L);
  const Reliability r = reliability(row, u.mu, L, rule, lambda_override);
  u.eta = r.eta;
  u.reliable = r.reliable;
  return u;
}

}  // namespace sinoma
