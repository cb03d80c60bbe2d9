#pragma once

#include <span>
#include <vector>

#include "sinoma/config.hpp"

namespace sinoma {

/// Model-order decision over k = 0..k_max.
struct OrderSelection {
  int k_hat = 0;
  std::vector<double> scores;  ///< -log f(S, k) + W_k
  Criterion criterion = Criterion::BIC;
  int k_max = 0;
};

/// Log-likelihood of a rank-k signal model given the l singular values of an
/// l x P snapshot matrix: (l-k) P ln(GM / AM) of the trailing s_i^2 / P.
/// Always <= 0. A tail of exact zeros (all below 1e-300) yields 0.
double log_likelihood(std::span<const double> s, int k, int P);

/// 0.5 k (2l - k) ln P.
double bic_penalty(int k, int l, int P);

/// k (2l - k).
double aic_penalty(int k, int l);

double penalty(Criterion c, int k, int l, int P);

/// argmin over k in [0, k_max] of -log_likelihood + penalty, ties to the
/// smaller k. `s` must hold all l singular values in descending order;
/// values at or below 1e-12 * s_1 are treated as exact zeros.
OrderSelection estimate_num_active(std::span<const double> s, int l, int P, Criterion criterion,
                                   int k_max);

}  // namespace sinoma
