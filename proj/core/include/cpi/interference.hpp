#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "cpi/bloch.hpp"
#include "cpi/generator.hpp"

namespace cpi {

enum class Branch { plus, minus };

inline double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }
inline const char* branch_name(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

/// Exit-beam projector 1/2 [[1, e^{i th}], [e^{-i th}, 1]] with th = theta on
/// the plus beam and theta + pi on the minus beam.
struct ExitProjector {
  double theta = 0.0;
  Branch branch = Branch::plus;
};

Matrix2c projector_matrix(const ExitProjector& p);

/// Tr[O rho] for the exit projector O.
double intensity(const DensityMatrix& rho, const ExitProjector& p);

/// How the e^{-At} damping of the fringe term is written.
///
/// `linearized` is (1 - A t), the exact trace of the first-order propagated
/// state; `exponential` is the resummed e^{-A t}. They differ at O((At)^2).
enum class DampingForm { linearized, exponential };

/// Ideal-interferometer fringe intensity for a neutron entering in
/// entrance_state_plus():
///
///   I(t) = 1/2 {1 +- [D(At) cos(theta + 2 w t) + (|B| / 2w) sin(2 w t) cos(theta - theta_B)]}
///
/// The smaller of the two intensities is evaluated as 1 minus the larger, so
/// I_plus + I_minus == 1 holds exactly in floating point whenever the fringe
/// term is at most 3 in magnitude.
double ideal_pattern(double theta, double omega, double t, const DissipationParams& d,
                     Branch branch, DampingForm form = DampingForm::linearized);

/// sin(phi) / phi, continued to 1 at phi = 0.
double sinc(double phi);

/// Per-beam parameters of the phenomenological count model
///   N(phi) = N0 {1 +- [P cos(theta + phi) + Q sin(phi) / phi]}.
struct FringeParams {
  double n0 = 0.0;
  double P = 0.0;
  double Q = 0.0;
  double theta = 0.0;
};

double fringe_counts(const FringeParams& f, double phi, Branch branch);

/// Realistic count model with fringe contrasts and physical dissipation
/// combinations. P = C e^{-At}, Q = C |B| t cos(theta - theta_B).
struct CountModel {
  double n0_plus = 0.0;
  double n0_minus = 0.0;
  double contrast_plus = 1.0;
  double contrast_minus = 1.0;
  double theta = 0.0;
  double A = 0.0;        // GeV
  double B_mod = 0.0;    // GeV
  double theta_B = 0.0;  // rad
  double t = 0.0;        // GeV^-1

  [[nodiscard]] double contrast(Branch b) const {
    return b == Branch::plus ? contrast_plus : contrast_minus;
  }
  [[nodiscard]] double n0(Branch b) const { return b == Branch::plus ? n0_plus : n0_minus; }
  [[nodiscard]] double P(Branch b) const;
  [[nodiscard]] double Q(Branch b) const;
  [[nodiscard]] FringeParams fringe(Branch b) const;
};

double count_pattern(const CountModel& m, double phi, Branch branch);

/// (N_max - N_min) / (N_max + N_min). Throws std::invalid_argument unless
/// n_max >= n_min >= 0 and n_max > 0.
double contrast_from_extrema(double n_max, double n_min);

/// Applies contrast_from_extrema to the extrema of a smooth fringe curve
/// sampled on `samples` evenly spaced phases in [phi_min, phi_max].
double curve_contrast(const FringeParams& f, Branch branch, double phi_min, double phi_max,
                      int samples = 4001);

/// A value with a one-sigma uncertainty.
struct Measured {
  double value = 0.0;
  double sigma = 0.0;
};

/// N0+ C+ - N0- C-, which particle conservation requires to vanish.
struct ConservationResidual {
  double value = 0.0;
  double sigma = 0.0;
  /// |value| / sigma; infinite when sigma is zero and value is not.
  [[nodiscard]] double significance() const;
};

ConservationResidual conservation_residual(const CountModel& m);
ConservationResidual conservation_residual(Measured n0_plus, Measured contrast_plus,
                                           Measured n0_minus, Measured contrast_minus);

/// Contrast from the linearized a = 0 relations P = C (1 - alpha t),
/// Q = C alpha t cos(theta): C = P + Q / cos(theta).
/// Throws std::invalid_argument when |cos(theta)| < 1e-6.
double simplified_contrast(double P, double Q, double theta);

/// One phase point of a two-beam fringe scan.
struct FringeSample {
  double phi = 0.0;  // rad
  long counts_plus = 0;
  long counts_minus = 0;
  double sigma_plus = 1.0;
  double sigma_minus = 1.0;
};

/// sqrt(max(counts, 1))
double poisson_sigma(long counts);

/// Reads `phi,n_plus,sigma_plus,n_minus,sigma_minus` CSV. Column order is
/// taken from the header; the sigma columns (or empty sigma cells) fall back
/// to poisson_sigma. Throws std::runtime_error with the line number on
/// malformed input.
std::vector<FringeSample> read_fringe_csv(std::istream& in);
void write_fringe_csv(std::ostream& out, const std::vector<FringeSample>& samples);

/// n evenly spaced phases covering [lo, hi] inclusive; a single point is lo.
std::vector<double> phase_grid(double lo, double hi, int n);

}  // namespace cpi
