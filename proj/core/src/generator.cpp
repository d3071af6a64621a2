#include "cpi/generator.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace cpi {

double DissipationParams::diagonal_scale() const {
  return std::max({std::abs(a), std::abs(alpha), std::abs(gamma)});
}

double DissipationParams::max_abs() const {
  return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(alpha), std::abs(beta),
                   std::abs(gamma)});
}

Matrix2c hamiltonian_matrix(const HamiltonianParams& h) {
  Matrix2c m = Matrix2c::Zero();
  m(0, 0) = h.energy + h.omega;
  m(1, 1) = h.energy - h.omega;
  return m;
}

Matrix4 dissipator_matrix(const DissipationParams& d) {
  Matrix4 m;
  // clang-format off
  m << 0.0, 0.0,  0.0,     0.0,
       0.0, d.a,  d.b,     d.c,
       0.0, d.b,  d.alpha, d.beta,
       0.0, d.c,  d.beta,  d.gamma;
  // clang-format on
  return -2.0 * m;
}

DerivedCombos derived_combos(const DissipationParams& d) {
  DerivedCombos out;
  out.A = d.alpha + d.a;
  out.B = cplx(d.alpha - d.a, 2.0 * d.b);
  out.C = cplx(d.c, d.beta);
  out.B_mod = std::abs(out.B);
  out.theta_B = std::atan2(2.0 * d.b, d.alpha - d.a);
  return out;
}

CpVerdict check_complete_positivity(const DissipationParams& d) {
  CpVerdict v;
  v.R = 0.5 * (d.alpha + d.gamma - d.a);
  v.S = 0.5 * (d.a + d.gamma - d.alpha);
  v.T = 0.5 * (d.a + d.alpha - d.gamma);

  const double scale = d.diagonal_scale();
  auto require = [&](const char* id, double residual, int degree) {
    const double tol = 1e-12 * std::pow(scale, degree);
    if (residual < -tol) v.violated.push_back({id, residual});
  };

  const double R = v.R, S = v.S, T = v.T;
  const double b = d.b, c = d.c, beta = d.beta;
  require("a>=0", d.a, 1);
  require("alpha>=0", d.alpha, 1);
  require("gamma>=0", d.gamma, 1);
  require("R>=0", R, 1);
  require("S>=0", S, 1);
  require("T>=0", T, 1);
  require("RS>=b^2", R * S - b * b, 2);
  require("RT>=c^2", R * T - c * c, 2);
  require("ST>=beta^2", S * T - beta * beta, 2);
  require("RST>=2bc*beta+R*beta^2+S*c^2+T*b^2",
          R * S * T - (2.0 * b * c * beta + R * beta * beta + S * c * c + T * b * b), 3);

  v.is_cp = v.violated.empty();
  return v;
}

Matrix2c apply_lindblad_form(const Matrix3c& k, const Matrix2c& rho) {
  Matrix2c out = Matrix2c::Zero();
  for (int i = 0; i < 3; ++i) {
    const Matrix2c si = pauli(i + 1);
    for (int j = 0; j < 3; ++j) {
      if (k(i, j) == cplx(0.0, 0.0)) continue;
      const Matrix2c sj = pauli(j + 1);
      const Matrix2c sjsi = sj * si;
      out += k(i, j) * (si * rho * sj - 0.5 * (sjsi * rho + rho * sjsi));
    }
  }
  return out;
}

namespace {

// Hermitian basis for the 3x3 coefficient matrix: 3 real diagonals, then
// (Re, Im) pairs for the (0,1), (0,2), (1,2) off-diagonals.
Matrix3c hermitian_basis(int n) {
  Matrix3c e = Matrix3c::Zero();
  static constexpr std::array<std::pair<int, int>, 3> kOff{{{0, 1}, {0, 2}, {1, 2}}};
  if (n < 3) {
    e(n, n) = 1.0;
    return e;
  }
  const auto [i, j] = kOff[static_cast<std::size_t>((n - 3) / 2)];
  const cplx w = ((n - 3) % 2 == 0) ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
  e(i, j) = w;
  e(j, i) = std::conj(w);
  return e;
}

// Rows: Re and Im of the Pauli component mu of the image of s_nu.
using DesignMatrix = Eigen::Matrix<double, 32, 9>;

DesignMatrix matching_design() {
  DesignMatrix design = DesignMatrix::Zero();
  for (int n = 0; n < 9; ++n) {
    const Matrix3c basis = hermitian_basis(n);
    for (int nu = 0; nu < 4; ++nu) {
      const Matrix2c image = apply_lindblad_form(basis, pauli(nu));
      for (int mu = 0; mu < 4; ++mu) {
        const cplx comp = 0.5 * (pauli(mu) * image).trace();
        const int row = 2 * (4 * mu + nu);
        design(row, n) = comp.real();
        design(row + 1, n) = comp.imag();
      }
    }
  }
  return design;
}

}  // namespace

Matrix3c kossakowski_matrix(const DissipationParams& d) {
  static const Eigen::ColPivHouseholderQR<DesignMatrix> solver(matching_design());

  const Matrix4 target = dissipator_matrix(d);
  Eigen::Matrix<double, 32, 1> rhs = Eigen::Matrix<double, 32, 1>::Zero();
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) rhs(2 * (4 * mu + nu)) = target(mu, nu);
  }
  const Eigen::Matrix<double, 9, 1> x = solver.solve(rhs);

  Matrix3c k = Matrix3c::Zero();
  for (int n = 0; n < 9; ++n) k += x(n) * hermitian_basis(n);
  return k;
}

double kossakowski_min_eigenvalue(const DissipationParams& d) {
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(kossakowski_matrix(d), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Matrix4 full_generator(const HamiltonianParams& h, const DissipationParams& d) {
  Matrix4 m = dissipator_matrix(d);
  m(1, 2) += -2.0 * h.omega;
  m(2, 1) += 2.0 * h.omega;
  return m;
}

}  // namespace cpi
