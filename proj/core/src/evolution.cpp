#include "cpi/evolution.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace cpi {

namespace {

void require_forward_time(double t) {
  if (!(t >= 0.0)) throw std::domain_error("evolution time must be >= 0");
}

}  // namespace

double sin_over(double w, double t) {
  const double x = w * t;
  if (std::abs(x) < 1e-8) return t * (1.0 - x * x / 6.0);
  return std::sin(x) / w;
}

Matrix4 propagator_matrix(const HamiltonianParams& h, const DissipationParams& d, double t) {
  require_forward_time(t);
  if (t == 0.0) return Matrix4::Identity();
  const Matrix4 mt = full_generator(h, d) * t;
  return mt.exp();
}

DensityMatrix propagate_exact(const PropagationRequest& req) {
  require_forward_time(req.t);
  if (req.t == 0.0) return req.initial;
  const Vector4 r = propagator_matrix(req.h, req.d, req.t) * to_bloch(req.initial).vector();
  return from_bloch(BlochState::from_vector(r));
}

std::vector<DensityMatrix> propagate_exact_batch(const DensityMatrix& initial,
                                                 const HamiltonianParams& h,
                                                 const DissipationParams& d,
                                                 std::span<const double> times) {
  std::vector<DensityMatrix> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(propagate_exact({initial, h, d, t}));
  return out;
}

PerturbativeValidity perturbative_validity(const DissipationParams& d, double t) {
  require_forward_time(t);
  const double At = (d.alpha + d.a) * t;
  return {At, At < kPerturbativeThreshold};
}

PerturbativeState propagate_perturbative(const PropagationRequest& req) {
  require_forward_time(req.t);
  const double t = req.t;
  const double w = req.h.omega;
  const double g = req.d.gamma;
  const DerivedCombos k = derived_combos(req.d);

  const double r1 = req.initial.rho1;
  const double r2 = req.initial.rho2;
  const cplx r3 = req.initial.rho3;
  const cplx r4 = req.initial.rho4();

  const cplx phase1 = std::polar(1.0, -w * t);  // e^{-iwt}
  const cplx phase2 = std::polar(1.0, -2.0 * w * t);
  const double s1 = sin_over(w, t);              // sin(wt) / w
  const double s2 = sin_over(2.0 * w, t);        // sin(2wt) / (2w)

  const cplx mix = k.C * phase1 * s1 * r3 + std::conj(k.C) * std::conj(phase1) * s1 * r4;

  DensityMatrix out;
  out.rho1 = (1.0 - g * t) * r1 + g * t * r2 - mix.real();
  out.rho2 = g * t * r1 + (1.0 - g * t) * r2 + mix.real();
  out.rho3 = -std::conj(k.C) * phase1 * s1 * (r1 - r2) + (1.0 - k.A * t) * phase2 * r3 +
             k.B * s2 * r4;
  return {out, perturbative_validity(req.d, t)};
}

Matrix4c extended_state(const HamiltonianParams& h, const DissipationParams& d, double t) {
  const Matrix4 prop = propagator_matrix(h, d, t);
  Matrix4c out = Matrix4c::Zero();
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      Matrix2c unit = Matrix2c::Zero();
      unit(k, l) = 1.0;
      Eigen::Vector4cd coeff;
      for (int mu = 0; mu < 4; ++mu) coeff(mu) = 0.5 * (pauli(mu) * unit).trace();
      const Eigen::Vector4cd image_coeff = prop.cast<cplx>() * coeff;
      Matrix2c image = Matrix2c::Zero();
      for (int mu = 0; mu < 4; ++mu) image += image_coeff(mu) * pauli(mu);
      // system index is the outer (row-major block) factor
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) out(2 * i + k, 2 * j + l) += 0.5 * image(i, j);
      }
    }
  }
  return out;
}

double extended_min_eigenvalue(const HamiltonianParams& h, const DissipationParams& d, double t) {
  const Matrix4c m = extended_state(h, d, t);
  const Matrix4c herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace cpi
