#include "cpi/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cpi {

Matrix2c DensityMatrix::matrix() const {
  Matrix2c m;
  m << cplx(rho1, 0.0), rho3, rho4(), cplx(rho2, 0.0);
  return m;
}

DensityMatrix DensityMatrix::from_matrix(const Matrix2c& m) {
  return {m(0, 0).real(), m(1, 1).real(), 0.5 * (m(0, 1) + std::conj(m(1, 0)))};
}

BlochState to_bloch(const DensityMatrix& rho) {
  return {0.5 * (rho.rho1 + rho.rho2), rho.rho3.real(), -rho.rho3.imag(),
          0.5 * (rho.rho1 - rho.rho2)};
}

DensityMatrix from_bloch(const BlochState& b) {
  return {b.r0 + b.r3, b.r0 - b.r3, cplx(b.r1, -b.r2)};
}

std::pair<double, double> eigenvalues(const DensityMatrix& rho) {
  const double mean = 0.5 * (rho.rho1 + rho.rho2);
  const double half_gap = 0.5 * (rho.rho1 - rho.rho2);
  const double radius = std::hypot(half_gap, std::abs(rho.rho3));
  return {mean + radius, mean - radius};
}

bool is_physical(const DensityMatrix& rho) {
  return std::abs(rho.trace() - 1.0) <= 1e-12 &&
         eigenvalues(rho).second >= -kPositivityTolerance;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const auto [hi, lo] = eigenvalues(rho);
  double s = 0.0;
  for (double p : {hi, lo}) {
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

DensityMatrix entrance_state_plus() { return {0.5, 0.5, cplx(0.5, 0.0)}; }
DensityMatrix entrance_state_minus() { return {0.5, 0.5, cplx(-0.5, 0.0)}; }
DensityMatrix maximally_mixed() { return {0.5, 0.5, cplx(0.0, 0.0)}; }

Matrix2c pauli(int mu) {
  using namespace std::complex_literals;
  Matrix2c m;
  switch (mu) {
    case 0: m << 1.0, 0.0, 0.0, 1.0; break;
    case 1: m << 0.0, 1.0, 1.0, 0.0; break;
    case 2: m << 0.0, -1i, 1i, 0.0; break;
    case 3: m << 1.0, 0.0, 0.0, -1.0; break;
    default: throw std::out_of_range("pauli: index must be in 0..3");
  }
  return m;
}

}  // namespace cpi
