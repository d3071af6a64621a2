#pragma once

#include <string>
#include <vector>

#include "cpi/bloch.hpp"

namespace cpi {

using Matrix3c = Eigen::Matrix3cd;

/// Effective two-level Hamiltonian diag(E + omega, E - omega), both in GeV.
/// The sign of omega encodes the slab orientation.
struct HamiltonianParams {
  double energy = 0.0;
  double omega = 0.0;
};

/// The six real dissipative constants (GeV). a, alpha and gamma must be
/// non-negative for an admissible parameter set; this is diagnosed by
/// check_complete_positivity, not enforced on construction.
struct DissipationParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  [[nodiscard]] DissipationParams scaled(double k) const {
    return {k * a, k * b, k * c, k * alpha, k * beta, k * gamma};
  }
  /// max(|a|, |alpha|, |gamma|)
  [[nodiscard]] double diagonal_scale() const;
  /// Largest absolute value among all six constants.
  [[nodiscard]] double max_abs() const;
};

/// A = alpha + a, B = alpha - a + 2ib, C = c + i beta.
struct DerivedCombos {
  double A = 0.0;
  cplx B{0.0, 0.0};
  cplx C{0.0, 0.0};
  double B_mod = 0.0;
  double theta_B = 0.0;
};

struct ConstraintViolation {
  std::string id;
  double residual = 0.0;  // lhs - rhs, in GeV^k for a degree-k inequality
};

struct CpVerdict {
  bool is_cp = true;
  double R = 0.0;
  double S = 0.0;
  double T = 0.0;
  std::vector<ConstraintViolation> violated;
};

Matrix2c hamiltonian_matrix(const HamiltonianParams& h);

/// Bloch-space dissipator -2 [[0,0,0,0],[0,a,b,c],[0,b,alpha,beta],[0,c,beta,gamma]].
Matrix4 dissipator_matrix(const DissipationParams& d);

DerivedCombos derived_combos(const DissipationParams& d);

/// Evaluates the full inequality system for complete positivity:
///   2R = alpha + gamma - a, 2S = a + gamma - alpha, 2T = a + alpha - gamma,
///   R, S, T >= 0,  RS >= b^2,  RT >= c^2,  ST >= beta^2,
///   RST >= 2 b c beta + R beta^2 + S c^2 + T b^2,
/// together with a, alpha, gamma >= 0. A degree-k inequality counts as
/// violated when its residual is below -1e-12 * scale^k, where
/// scale = max(|a|, |alpha|, |gamma|).
CpVerdict check_complete_positivity(const DissipationParams& d);

/// Coefficient matrix K of the Pauli-basis Lindblad form
///   L[rho] = sum_ij K_ij (s_i rho s_j - 1/2 {s_j s_i, rho}),  i, j = 1..3,
/// obtained by solving the linear system that matches this form's Bloch
/// action to dissipator_matrix(d). Complete positivity holds iff K >= 0.
Matrix3c kossakowski_matrix(const DissipationParams& d);

/// Smallest eigenvalue of kossakowski_matrix(d).
double kossakowski_min_eigenvalue(const DissipationParams& d);

/// Applies the Pauli-basis Lindblad form with coefficient matrix K directly
/// in operator space.
Matrix2c apply_lindblad_form(const Matrix3c& kossakowski, const Matrix2c& rho);

/// M with d r_mu / dt = M_mu,nu r_nu. The commutator contributes a rotation
/// of (r1, r2) at angular rate 2 omega; the energy E drops out.
Matrix4 full_generator(const HamiltonianParams& h, const DissipationParams& d);

}  // namespace cpi
