#pragma once

// Test-only reference computations. Nothing here calls full_generator,
// dissipator_matrix, kossakowski_matrix or the matrix exponential.

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <utility>

#include "cpi/bloch.hpp"
#include "cpi/generator.hpp"

namespace cpi::testing {

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

inline double signed_log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::bernoulli_distribution coin(0.5);
  const double m = log_uniform(rng, lo, hi);
  return coin(rng) ? m : -m;
}

/// Parameters from a random positive semidefinite 3x3 real matrix K, using
/// a = S + T, alpha = R + T, gamma = R + S, (b, c, beta) = -(K12, K13, K23),
/// at a log-uniform overall scale in [1e-25, 1e-18] GeV.
inline DissipationParams random_cp_params(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Matrix3d g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = n(rng);
  // random rank 1..3
  std::uniform_int_distribution<int> rank(1, 3);
  const int r = rank(rng);
  const Eigen::MatrixXd gr = g.leftCols(r);
  Eigen::Matrix3d k = gr * gr.transpose();
  k *= log_uniform(rng, 1e-25, 1e-18) / k.trace();
  return {k(1, 1) + k(2, 2), -k(0, 1), -k(0, 2), k(0, 0) + k(2, 2), -k(1, 2), k(0, 0) + k(1, 1)};
}

/// Independent log-uniform magnitudes, non-negative diagonals, random-sign
/// off-diagonals.
inline DissipationParams random_generic_params(std::mt19937_64& rng) {
  return {log_uniform(rng, 1e-25, 1e-18),        signed_log_uniform(rng, 1e-25, 1e-18),
          signed_log_uniform(rng, 1e-25, 1e-18), log_uniform(rng, 1e-25, 1e-18),
          signed_log_uniform(rng, 1e-25, 1e-18), log_uniform(rng, 1e-25, 1e-18)};
}

/// A CP-valid draw with every constant perturbed by a relative amount in
/// [1e-3, 1]; lands on both sides of the boundary.
inline DissipationParams random_perturbed_params(std::mt19937_64& rng) {
  DissipationParams d = random_cp_params(rng);
  const double s = d.max_abs();
  auto kick = [&](double& x) { x += signed_log_uniform(rng, 1e-3, 1.0) * s * 0.3; };
  kick(d.a), kick(d.b), kick(d.c), kick(d.alpha), kick(d.beta), kick(d.gamma);
  return d;
}

/// Cycles through the three families above.
inline DissipationParams random_params(std::mt19937_64& rng, int i) {
  switch (i % 3) {
    case 0: return random_cp_params(rng);
    case 1: return random_generic_params(rng);
    default: return random_perturbed_params(rng);
  }
}

inline DensityMatrix random_state(std::mt19937_64& rng) {
  // point in the Bloch ball
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::Vector3d v(n(rng), n(rng), n(rng));
  v *= 0.5 * std::cbrt(u(rng)) / v.norm();
  return from_bloch({0.5, v(0), v(1), v(2)});
}

/// Roots of lambda^2 - tr lambda + det = 0, largest first.
inline std::pair<double, double> quadratic_eigenvalues(const Matrix2c& m) {
  const double tr = (m(0, 0) + m(1, 1)).real();
  const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
  return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

/// Kossakowski matrix written out by hand for comparison:
/// [[R, -b, -c], [-b, S, -beta], [-c, -beta, T]].
inline Eigen::Matrix3d closed_form_kossakowski(const DissipationParams& d) {
  const double R = 0.5 * (d.alpha + d.gamma - d.a);
  const double S = 0.5 * (d.a + d.gamma - d.alpha);
  const double T = 0.5 * (d.a + d.alpha - d.gamma);
  Eigen::Matrix3d k;
  k << R, -d.b, -d.c, -d.b, S, -d.beta, -d.c, -d.beta, T;
  return k;
}

/// sum_k w_k (A_k rho A_k - 1/2 {A_k^2, rho}) with Hermitian A_k = sum_i v_ki s_i
/// from the eigendecomposition K = sum_k w_k v_k v_k^T. For K >= 0 this is the
/// usual sum over jump operators sqrt(w_k) A_k.
struct JumpOperators {
  std::array<double, 3> weight{};
  std::array<Matrix2c, 3> op{};

  explicit JumpOperators(const Eigen::Matrix3d& k) {
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(k);
    for (int j = 0; j < 3; ++j) {
      weight[j] = es.eigenvalues()(j);
      op[j] = Matrix2c::Zero();
      for (int i = 0; i < 3; ++i) op[j] += es.eigenvectors()(i, j) * pauli(i + 1);
    }
  }

  [[nodiscard]] Matrix2c apply(const Matrix2c& rho) const {
    Matrix2c out = Matrix2c::Zero();
    for (int j = 0; j < 3; ++j) {
      const Matrix2c a2 = op[j] * op[j];
      out += weight[j] * (op[j] * rho * op[j] - 0.5 * (a2 * rho + rho * a2));
    }
    return out;
  }
};

inline Matrix2c lindblad_from_kossakowski(const Eigen::Matrix3d& k, const Matrix2c& rho) {
  return JumpOperators(k).apply(rho);
}

/// Adaptive classical RK4 with step doubling on the 2x2 master equation.
inline Matrix2c integrate_master(const HamiltonianParams& h, const DissipationParams& d,
                                 Matrix2c rho, double t_end, double rtol = 1e-13) {
  const JumpOperators jumps(closed_form_kossakowski(d));
  const cplx i(0.0, 1.0);
  const Matrix2c H = hamiltonian_matrix(h);
  auto rhs = [&](const Matrix2c& r) -> Matrix2c {
    return -i * (H * r - r * H) + jumps.apply(r);
  };
  auto rk4 = [&](const Matrix2c& y, double dt) {
    const Matrix2c k1 = rhs(y);
    const Matrix2c k2 = rhs(y + 0.5 * dt * k1);
    const Matrix2c k3 = rhs(y + 0.5 * dt * k2);
    const Matrix2c k4 = rhs(y + dt * k3);
    return Matrix2c(y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  };
  const double rate = 2.0 * std::abs(h.omega) + 4.0 * d.max_abs() + 1e-300;
  double dt = std::min(t_end, 0.05 / rate);
  double t = 0.0;
  while (t < t_end) {
    dt = std::min(dt, t_end - t);
    const Matrix2c full = rk4(rho, dt);
    const Matrix2c half = rk4(rk4(rho, 0.5 * dt), 0.5 * dt);
    const double err = (half - full).cwiseAbs().maxCoeff() / 15.0;
    const double scale = rtol * std::max(1.0, half.cwiseAbs().maxCoeff());
    if (err <= scale || dt < 1e-12 * t_end) {
      t += dt;
      rho = half + (half - full) / 15.0;  // Richardson
      const double grow = err > 0.0 ? 0.9 * std::pow(scale / err, 0.2) : 2.0;
      dt *= std::min(2.0, std::max(0.5, grow));
    } else {
      dt *= std::max(0.2, 0.9 * std::pow(scale / err, 0.2));
    }
  }
  return rho;
}

}  // namespace cpi::testing
