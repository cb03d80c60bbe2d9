#include "sinoma/order.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sinoma/errors.hpp"

namespace sinoma {

namespace {
constexpr double kZeroTail = 1e-300;
constexpr double kNumericalFloor = 1e-12;
}

double log_likelihood(std::span<const double> s, int k, int P) {
  const auto l = static_cast<int>(s.size());
  if (k < 0 || k > l - 1) {
    throw InvalidInput("log_likelihood: k=" + std::to_string(k) + " outside [0, l-1]");
  }
  if (P <= 0) throw InvalidInput("log_likelihood: P must be positive");
  const int tail = l - k;
  if (tail == 1) return 0.0;

  bool all_zero = true;
  for (int i = k; i < l; ++i) {
    if (s[static_cast<std::size_t>(i)] >= kZeroTail) all_zero = false;
  }
  if (all_zero) return 0.0;

  double mean_log = 0.0;
  double mean = 0.0;
  for (int i = k; i < l; ++i) {
    const double v = s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(i)] / P;
    mean_log += std::log(v);  // -inf for an exact zero: the model is infinitely unlikely
    mean += v;
  }
  mean_log /= tail;
  mean /= tail;
  const double ll = static_cast<double>(tail) * P * (mean_log - std::log(mean));
  // AM >= GM; clamp rounding noise on a flat tail.
  return std::min(ll, 0.0);
}

double bic_penalty(int k, int l, int P) {
  return 0.5 * k * (2.0 * l - k) * std::log(static_cast<double>(P));
}

double aic_penalty(int k, int l) { return static_cast<double>(k) * (2.0 * l - k); }

double penalty(Criterion c, int k, int l, int P) {
  return c == Criterion::BIC ? bic_penalty(k, l, P) : aic_penalty(k, l);
}

OrderSelection estimate_num_active(std::span<const double> s, int l, int P, Criterion criterion,
                                   int k_max) {
  if (static_cast<int>(s.size()) != l) {
    throw InvalidInput("estimate_num_active: expected l singular values");
  }
  if (k_max < 0 || k_max > l - 1) {
    throw InvalidInput("estimate_num_active: k_max must lie in [0, l-1]");
  }
  // Singular values at rounding level relative to s_1 carry no information
  // and are not white; treat them as exact zeros so noiseless data selects
  // its true rank.
  std::vector<double> cleaned(s.begin(), s.end());
  const double floor = l > 0 ? kNumericalFloor * cleaned.front() : 0.0;
  for (double& v : cleaned) {
    if (v <= floor) v = 0.0;
  }

  OrderSelection sel;
  sel.criterion = criterion;
  sel.k_max = k_max;
  sel.scores.reserve(static_cast<std::size_t>(k_max) + 1);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= k_max; ++k) {
    const double score = -log_likelihood(cleaned, k, P) + penalty(criterion, k, l, P);
    sel.scores.push_back(score);
    if (score < best) {
      best = score;
      sel.k_hat = k;
    }
  }
  return sel;
}

}  // namespace sinoma
