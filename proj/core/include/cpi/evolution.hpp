#pragma once

#include <span>
#include <vector>

#include "cpi/bloch.hpp"
#include "cpi/generator.hpp"

namespace cpi {

/// A * t below this value counts as inside the first-order regime.
inline constexpr double kPerturbativeThreshold = 0.2;

struct PropagationRequest {
  DensityMatrix initial;
  HamiltonianParams h;
  DissipationParams d;
  double t = 0.0;  // GeV^-1
};

struct PerturbativeValidity {
  double At = 0.0;
  bool ok = true;
};

struct PerturbativeState {
  DensityMatrix rho;
  PerturbativeValidity validity;
};

/// sin(w t) / w, continued to t at w = 0. Switches to the series
/// t (1 - (w t)^2 / 6) when |w t| < 1e-8.
double sin_over(double w, double t);

/// exp(M t) for the Bloch-space generator M = full_generator(h, d).
/// Throws std::domain_error for t < 0.
Matrix4 propagator_matrix(const HamiltonianParams& h, const DissipationParams& d, double t);

/// Exact evolution by matrix exponential of the Bloch generator.
/// Throws std::domain_error for t < 0. At t = 0 returns the initial state unchanged.
DensityMatrix propagate_exact(const PropagationRequest& req);

/// Exact evolution at each time in `times`; equivalent to calling
/// propagate_exact per entry.
std::vector<DensityMatrix> propagate_exact_batch(const DensityMatrix& initial,
                                                 const HamiltonianParams& h,
                                                 const DissipationParams& d,
                                                 std::span<const double> times);

/// First-order closed form in the dissipative constants:
///
///   rho1(t) = (1 - g t) rho1 + g t rho2 - (C/w) e^{-iwt} sin(wt) rho3 - (C*/w) e^{iwt} sin(wt) rho4
///   rho2(t) = g t rho1 + (1 - g t) rho2 + (C/w) e^{-iwt} sin(wt) rho3 + (C*/w) e^{iwt} sin(wt) rho4
///   rho3(t) = -(C*/w) e^{-iwt} sin(wt) (rho1 - rho2) + (1 - A t) e^{-2iwt} rho3
///             + (B / 2w) sin(2wt) rho4
///
/// with g = gamma, w = omega and A, B, C from derived_combos. rho4(t) is the
/// conjugate of rho3(t). Throws std::domain_error for t < 0.
PerturbativeState propagate_perturbative(const PropagationRequest& req);

/// A t = (alpha + a) t and whether it is below kPerturbativeThreshold.
PerturbativeValidity perturbative_validity(const DissipationParams& d, double t);

using Matrix4c = Eigen::Matrix4cd;

/// (Phi_t (x) id)(|W><W|) with |W> = (|00> + |11>) / sqrt(2) and Phi_t the
/// exact one-qubit evolution map. Positive semidefinite for every t >= 0 iff
/// the semigroup is completely positive.
Matrix4c extended_state(const HamiltonianParams& h, const DissipationParams& d, double t);

/// Smallest eigenvalue of extended_state(h, d, t).
double extended_min_eigenvalue(const HamiltonianParams& h, const DissipationParams& d, double t);

}  // namespace cpi
