#include "sinoma/varpro.hpp"

#include <cmath>
#include <limits>

#include "sinoma/codes.hpp"
#include "sinoma/errors.hpp"

namespace sinoma {

namespace {

// Cost below this fraction of ||Y||^2 is an exact fit up to rounding.
constexpr double kExactFit = 1e-24;
constexpr int kMaxBackoffs = 5;

struct Projection {
  ComplexMatrix phi;
  ComplexMatrix ups;
  ComplexMatrix resid;
  double cost = 0.0;
};

Projection project(std::span<const double> omegas, const ComplexMatrix& Y, double gamma) {
  Projection p;
  p.phi = frequency_matrix(omegas, static_cast<int>(Y.rows()), gamma);
  p.ups = least_squares(p.phi, Y);
  p.resid = Y - p.phi * p.ups;
  p.cost = p.resid.squaredNorm();
  return p;
}

// d Phi / d omega_n only touches column n: i * m * Phi(m, n).
ComplexMatrix derivative_columns(const ComplexMatrix& phi) {
  ComplexMatrix d = phi;
  for (Eigen::Index m = 0; m < d.rows(); ++m) d.row(m) *= cdouble(0.0, static_cast<double>(m));
  return d;
}

Eigen::VectorXd gradient_of(const Projection& p, const ComplexMatrix& D) {
  // g_n = -2 Re[(D^H R Ups^H)_{nn}]
  const ComplexMatrix DR = D.adjoint() * p.resid;
  Eigen::VectorXd g(p.phi.cols());
  for (Eigen::Index n = 0; n < g.size(); ++n) {
    g(n) = -2.0 * (DR.row(n) * p.ups.row(n).adjoint()).value().real();
  }
  return g;
}

// Kaufman approximation: J_n = -P_perp D_n Ups_n, so
// H_{np} = Re<J_n, J_p> = Re[(E^H E)_{np} (Ups Ups^H)_{pn}] with E = P_perp D.
Eigen::MatrixXd gauss_newton_matrix(const Projection& p, const ComplexMatrix& D) {
  const ComplexMatrix E = D - p.phi * least_squares(p.phi, D);
  const ComplexMatrix EE = E.adjoint() * E;
  const ComplexMatrix G = p.ups * p.ups.adjoint();
  Eigen::MatrixXd H(EE.rows(), EE.cols());
  for (Eigen::Index n = 0; n < H.rows(); ++n) {
    for (Eigen::Index q = 0; q < H.cols(); ++q) H(n, q) = (EE(n, q) * G(q, n)).real();
  }
  return 0.5 * (H + H.transpose());
}

}  // namespace

double varpro_cost(std::span<const double> omegas, const ComplexMatrix& Y, double gamma) {
  if (omegas.empty()) return Y.squaredNorm();
  return project(omegas, Y, gamma).cost;
}

std::vector<double> varpro_gradient(std::span<const double> omegas, const ComplexMatrix& Y,
                                    double gamma) {
  if (omegas.empty()) return {};
  const Projection p = project(omegas, Y, gamma);
  const Eigen::VectorXd g = gradient_of(p, derivative_columns(p.phi));
  return {g.data(), g.data() + g.size()};
}

RefineResult refine_ml(std::span<const double> omega_init, const ComplexMatrix& Y, double gamma,
                       const RefineOptions& opts) {
  if (opts.max_iters < 1 || !(opts.cost_tol > 0.0) || !(opts.step_damping > 0.0)) {
    throw InvalidInput("refine_ml: invalid options");
  }
  RefineResult out;
  Eigen::VectorXd omega = Eigen::Map<const Eigen::VectorXd>(
      omega_init.data(), static_cast<Eigen::Index>(omega_init.size()));
  auto finish = [&](bool converged) {
    out.converged = converged;
    out.omegas.clear();
    for (double w : omega) out.omegas.push_back(wrap_to_two_pi(w));
    return out;
  };

  if (omega.size() == 0) {
    out.cost_trace.push_back(Y.squaredNorm());
    return finish(true);
  }

  Projection cur = project(omega_init, Y, gamma);
  out.cost_trace.push_back(cur.cost);
  if (cur.cost <= kExactFit * Y.squaredNorm()) return finish(true);

  double mu = opts.step_damping;
  while (out.iterations < opts.max_iters) {
    const ComplexMatrix D = derivative_columns(cur.phi);
    const Eigen::VectorXd g = gradient_of(cur, D);
    const Eigen::MatrixXd H = gauss_newton_matrix(cur, D);
    const Eigen::VectorXd diag = H.diagonal().cwiseMax(1e-12 * H.diagonal().maxCoeff());

    bool accepted = false;
    for (int attempt = 0; attempt <= kMaxBackoffs; ++attempt) {
      Eigen::MatrixXd A = H;
      A.diagonal() += mu * diag;
      const Eigen::VectorXd delta = A.ldlt().solve(-0.5 * g);
      if (!delta.allFinite()) {
        mu *= 10.0;
        continue;
      }
      if (attempt == 0) {
        // Gauss-Newton model reduction; nothing left to gain at a stationary point.
        const double predicted = -(g.dot(delta) + delta.dot(H * delta));
        if (predicted <= opts.cost_tol * cur.cost) return finish(true);
      }
      const Eigen::VectorXd trial = omega + delta;
      Projection next;
      try {
        next = project(std::span<const double>(trial.data(), static_cast<std::size_t>(trial.size())),
                       Y, gamma);
      } catch (const RankDeficient&) {
        next.cost = std::numeric_limits<double>::infinity();
      }
      if (next.cost < cur.cost) {
        const double rel = (cur.cost - next.cost) / cur.cost;
        omega = trial;
        cur = std::move(next);
        out.cost_trace.push_back(cur.cost);
        ++out.iterations;
        mu = std::max(mu / 10.0, 1e-12);
        accepted = true;
        if (rel < opts.cost_tol || cur.cost <= kExactFit * Y.squaredNorm()) return finish(true);
        break;
      }
      mu *= 10.0;
    }
    if (!accepted) return finish(false);
  }
  return finish(false);
}

}  // namespace sinoma
