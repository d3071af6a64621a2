#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cpi/interference.hpp"

namespace cpi {

struct FitConfig {
  int max_iterations = 500;
  double relative_tolerance = 1e-10;
  int multistart_count = 4;
  std::uint64_t seed = 1;
  /// One theta for both beams instead of one per beam.
  bool shared_theta = false;
  /// Hold Q at zero (standard quantum mechanics nested model).
  bool fix_q = false;
};

/// Count-model parameters for both beams.
struct PatternParams {
  FringeParams plus;
  FringeParams minus;

  [[nodiscard]] const FringeParams& branch(Branch b) const {
    return b == Branch::plus ? plus : minus;
  }
  FringeParams& branch(Branch b) { return b == Branch::plus ? plus : minus; }
};

struct FitResult {
  std::vector<std::string> names;
  std::vector<std::string> units;
  Eigen::VectorXd values;
  Eigen::MatrixXd covariance;
  double chi2 = 0.0;
  int dof = 0;
  bool converged = false;
  int iterations = 0;
  /// Curvature matrix singular to within a 1e-12 condition threshold.
  bool degenerate = false;
  Eigen::VectorXd null_direction;
  std::string message;
  bool shared_theta = false;

  [[nodiscard]] std::optional<std::size_t> index(const std::string& name) const;
  [[nodiscard]] double value(const std::string& name) const;
  [[nodiscard]] double sigma(const std::string& name) const;
  [[nodiscard]] double cov(const std::string& x, const std::string& y) const;
  [[nodiscard]] Measured measured(const std::string& name) const {
    return {value(name), sigma(name)};
  }
  /// Parameter names for one beam: n0_<b>, P_<b>, Q_<b>, theta_<b> (or theta).
  [[nodiscard]] std::string name_of(const char* param, Branch b) const;
  [[nodiscard]] PatternParams pattern() const;
};

/// Sum over samples and both beams of ((N_obs - N_model) / sigma)^2.
/// Throws std::invalid_argument for empty data or a non-positive sigma.
double chi_squared(std::span<const FringeSample> data, const PatternParams& model);

/// Weighted least-squares fit of both beams' count patterns by damped
/// Gauss-Newton (Levenberg-Marquardt) iterations from several starts.
///
/// Starts are N0 = mean counts, P = raw-data contrast, Q = 0, theta = 0, plus
/// `multistart_count - 1` seeded perturbations. The result is canonicalized to
/// P >= 0 and theta in (-pi, pi]. Covariance is the inverse of J^T W J at the
/// optimum. Throws std::invalid_argument with fewer than 6 samples.
FitResult fit_pattern(std::span<const FringeSample> data, const FitConfig& config = {});

/// How A is obtained from P / C.
enum class DampingInversion {
  linearized,  // A t = 1 - P / C
  logarithm,   // A t = -ln(P / C)
};

struct ABEstimate {
  Measured A;    // GeV
  Measured ReB;  // GeV
  double cov_A_ReB = 0.0;
  /// P > C: A came out negative.
  bool negative_A = false;
  /// P is not significantly above zero (P < 2 sigma_P), so the damping
  /// carries no usable information about A.
  bool unidentifiable_A = false;
};

/// Inverts P = C e^{-At}, Q = C Re(B) t for A and Re(B), with the
/// cos(theta - theta_B) |B| factor taken as Re(B). P, Q and C are treated as
/// independent; the shared C makes A and Re(B) correlated and that
/// covariance is returned. Throws std::invalid_argument unless inv_t > 0 and
/// C > 0.
ABEstimate extract_AB(Measured P, Measured Q, Measured contrast, double inv_t,
                      DampingInversion mode = DampingInversion::linearized);

/// Full complex B from Q under an externally assumed phase theta_B:
/// |B| = Q / (C t cos(theta - theta_B)). A single fringe scan cannot fix
/// theta_B, so `identifiable` is always false; the split is only as good as
/// the assumed phase.
struct ComplexBEstimate {
  double re = 0.0;  // GeV
  double im = 0.0;  // GeV
  bool identifiable = false;
};
ComplexBEstimate resolve_B(double Q, double contrast, double inv_t, double theta,
                           double assumed_theta_B);

struct AAlphaEstimate {
  Measured a;      // GeV
  Measured alpha;  // GeV
};

/// a = (A - ReB) / 2, alpha = (A + ReB) / 2.
AAlphaEstimate extract_a_alpha(Measured A, Measured ReB, double cov_A_ReB = 0.0);

/// Fitted P, Q, theta for one beam, used by the a = 0 analysis.
struct BeamFit {
  Measured P;
  Measured Q;
  Measured theta;
  double cov_PQ = 0.0;
};

struct SimplifiedBeam {
  Measured contrast;         // P + Q / cos(theta)
  Measured alpha_t_damping;  // 1 - P / C
  Measured alpha_t_offset;   // Q / (C cos(theta))
  Measured alpha;            // GeV
};

struct SimplifiedAlpha {
  SimplifiedBeam plus;
  SimplifiedBeam minus;
  Measured alpha;  // GeV, inverse-variance combination of both beams
};

/// Analysis under a = 0 (then gamma = alpha and b = c = beta = 0, so
/// A = B = alpha): per beam, alpha t follows from either linearized relation
/// with C eliminated through simplified_contrast. With that C the two
/// relations coincide, so each beam contributes one determination; the two
/// beams are combined by inverse-variance weighting.
SimplifiedAlpha combined_alpha_simplified(const BeamFit& plus, const BeamFit& minus,
                                          double inv_t);

/// Poisson counts around count_pattern(truth, phi) * exposure. Deterministic
/// for a fixed seed. An infinite exposure returns the rounded expectation.
/// Throws std::invalid_argument for exposure <= 0.
std::vector<FringeSample> synthesize_counts(const CountModel& truth,
                                            std::span<const double> phi_grid, double exposure,
                                            std::uint64_t seed);

/// Same, for explicit per-beam count parameters.
std::vector<FringeSample> synthesize_counts(const PatternParams& truth,
                                            std::span<const double> phi_grid, double exposure,
                                            std::uint64_t seed);

// -- end-to-end analysis -----------------------------------------------------

struct AnalysisOptions {
  FitConfig fit;
  double inv_t = 5.83e-21;  // GeV
  /// External contrast calibrations; when absent the contrast is taken from
  /// the extrema of the fitted curve over the data's phase range.
  std::optional<Measured> contrast_plus;
  std::optional<Measured> contrast_minus;
  DampingInversion inversion = DampingInversion::linearized;
  bool simplified = false;
};

struct BeamExtraction {
  Measured contrast;
  bool contrast_from_curve = false;
  ABEstimate ab;
};

struct AnalysisReport {
  FitResult fit;
  BeamExtraction plus;
  BeamExtraction minus;
  /// Beam whose A has the smaller uncertainty; a and alpha come from it.
  Branch best = Branch::minus;
  AAlphaEstimate a_alpha;
  ConservationResidual conservation;
  std::optional<SimplifiedAlpha> simplified;
};

AnalysisReport analyze(std::span<const FringeSample> data, const AnalysisOptions& options);

}  // namespace cpi
