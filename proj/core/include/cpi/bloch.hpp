#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace cpi {

using cplx = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Vector4 = Eigen::Vector4d;
using Matrix4 = Eigen::Matrix4d;

/// Eigenvalue floor used when deciding whether a state is a positive operator.
inline constexpr double kPositivityTolerance = 1e-10;

/// Two-beam density matrix
///
///     | rho1          rho3 |
///     | conj(rho3)    rho2 |
///
/// The lower off-diagonal is never stored, so Hermiticity holds by
/// construction.
struct DensityMatrix {
  double rho1 = 0.0;
  double rho2 = 0.0;
  cplx rho3{0.0, 0.0};

  [[nodiscard]] cplx rho4() const { return std::conj(rho3); }
  [[nodiscard]] double trace() const { return rho1 + rho2; }
  [[nodiscard]] Matrix2c matrix() const;

  /// Reads a 2x2 matrix, taking the Hermitian part of the off-diagonals.
  static DensityMatrix from_matrix(const Matrix2c& m);

  friend bool operator==(const DensityMatrix&, const DensityMatrix&) = default;
};

/// Coefficients of rho = r0 s0 + r1 s1 + r2 s2 + r3 s3.
///
/// Pauli convention used everywhere in the library:
///   s1 = [[0, 1], [1, 0]], s2 = [[0, -i], [i, 0]], s3 = [[1, 0], [0, -1]].
struct BlochState {
  double r0 = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;

  [[nodiscard]] Vector4 vector() const { return {r0, r1, r2, r3}; }
  static BlochState from_vector(const Vector4& v) { return {v[0], v[1], v[2], v[3]}; }

  friend bool operator==(const BlochState&, const BlochState&) = default;
};

BlochState to_bloch(const DensityMatrix& rho);
DensityMatrix from_bloch(const BlochState& b);

/// Closed-form eigenvalues of the 2x2 Hermitian matrix, largest first.
std::pair<double, double> eigenvalues(const DensityMatrix& rho);

/// True when the trace is 1 (to 1e-12) and the smallest eigenvalue is above
/// -kPositivityTolerance.
bool is_physical(const DensityMatrix& rho);

/// -Tr(rho ln rho) in nats, with 0 ln 0 = 0 and small negative eigenvalues
/// clamped. Diagnostic only.
double von_neumann_entropy(const DensityMatrix& rho);

/// The two beam orientations a neutron can enter the interferometer with.
DensityMatrix entrance_state_plus();   // 1/2 [[1, 1], [1, 1]]
DensityMatrix entrance_state_minus();  // 1/2 [[1, -1], [-1, 1]]
DensityMatrix maximally_mixed();

/// Pauli matrix s_mu for mu = 0..3 (s0 is the identity).
Matrix2c pauli(int mu);

}  // namespace cpi
