#include "cpi/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace cpi {

namespace {

constexpr Branch kBranches[] = {Branch::plus, Branch::minus};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double wrap_phase(double theta) {
  double r = std::remainder(theta, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

// Uniform double in [0, 1) built from the top 53 bits of the engine output,
// so the sequence does not depend on the standard library's distributions.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Where each beam's parameters live in the packed vector; -1 marks a
// parameter held fixed (Q under fix_q).
struct Layout {
  struct Beam {
    int n0 = -1, P = -1, Q = -1, theta = -1;
  };
  Beam plus, minus;
  int size = 0;
  std::vector<std::string> names;
  std::vector<std::string> units;

  [[nodiscard]] const Beam& beam(Branch b) const { return b == Branch::plus ? plus : minus; }

  static Layout make(const FitConfig& cfg) {
    Layout l;
    auto add = [&](std::string name, const char* unit) {
      l.names.push_back(std::move(name));
      l.units.emplace_back(unit);
      return l.size++;
    };
    for (Branch b : kBranches) {
      Beam& beam = b == Branch::plus ? l.plus : l.minus;
      const std::string sfx = std::string("_") + branch_name(b);
      beam.n0 = add("n0" + sfx, "counts");
      beam.P = add("P" + sfx, "dimensionless");
      if (!cfg.fix_q) beam.Q = add("Q" + sfx, "dimensionless");
      if (!cfg.shared_theta) beam.theta = add("theta" + sfx, "rad");
    }
    if (cfg.shared_theta) l.plus.theta = l.minus.theta = add("theta", "rad");
    return l;
  }

  [[nodiscard]] FringeParams unpack(const Eigen::VectorXd& p, Branch b) const {
    const Beam& k = beam(b);
    return {p(k.n0), p(k.P), k.Q >= 0 ? p(k.Q) : 0.0, p(k.theta)};
  }

  [[nodiscard]] Eigen::VectorXd pack(const PatternParams& pp) const {
    Eigen::VectorXd p(size);
    for (Branch b : kBranches) {
      const Beam& k = beam(b);
      const FringeParams& f = pp.branch(b);
      p(k.n0) = f.n0;
      p(k.P) = f.P;
      if (k.Q >= 0) p(k.Q) = f.Q;
      p(k.theta) = f.theta;
    }
    return p;
  }
};

struct Linearization {
  Eigen::VectorXd residual;  // (obs - model) / sigma
  Eigen::MatrixXd jacobian;  // d model / d p, divided by sigma
};

Linearization linearize(std::span<const FringeSample> data, const Layout& layout,
                        const Eigen::VectorXd& p) {
  const auto n = static_cast<Eigen::Index>(data.size());
  Linearization lin{Eigen::VectorXd(2 * n), Eigen::MatrixXd::Zero(2 * n, layout.size)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const FringeSample& s = data[static_cast<std::size_t>(i)];
    for (Branch b : kBranches) {
      const Eigen::Index row = b == Branch::plus ? 2 * i : 2 * i + 1;
      const auto& k = layout.beam(b);
      const FringeParams f = layout.unpack(p, b);
      const double sign = branch_sign(b);
      const double c = std::cos(f.theta + s.phi);
      const double sn = std::sin(f.theta + s.phi);
      const double sc = sinc(s.phi);
      const double model = f.n0 * (1.0 + sign * (f.P * c + f.Q * sc));
      const double obs = static_cast<double>(b == Branch::plus ? s.counts_plus : s.counts_minus);
      const double sigma = b == Branch::plus ? s.sigma_plus : s.sigma_minus;
      lin.residual(row) = (obs - model) / sigma;
      lin.jacobian(row, k.n0) += (1.0 + sign * (f.P * c + f.Q * sc)) / sigma;
      lin.jacobian(row, k.P) += f.n0 * sign * c / sigma;
      if (k.Q >= 0) lin.jacobian(row, k.Q) += f.n0 * sign * sc / sigma;
      lin.jacobian(row, k.theta) += -f.n0 * sign * f.P * sn / sigma;
    }
  }
  return lin;
}

struct LocalFit {
  Eigen::VectorXd p;
  double chi2 = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
};

LocalFit levenberg_marquardt(std::span<const FringeSample> data, const Layout& layout,
                             Eigen::VectorXd p, const FitConfig& cfg) {
  LocalFit out;
  Linearization lin = linearize(data, layout, p);
  double chi2 = lin.residual.squaredNorm();
  double lambda = 1e-3;
  const double chi2_floor = 1e-24 * static_cast<double>(lin.residual.size());

  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    if (chi2 <= chi2_floor) {
      out.converged = true;
      break;
    }
    const Eigen::MatrixXd jtj = lin.jacobian.transpose() * lin.jacobian;
    const Eigen::VectorXd grad = lin.jacobian.transpose() * lin.residual;

    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd damped = jtj;
      for (Eigen::Index k = 0; k < damped.rows(); ++k) {
        damped(k, k) += lambda * std::max(jtj(k, k), 1e-300);
      }
      const Eigen::VectorXd step = damped.ldlt().solve(grad);
      const Eigen::VectorXd trial = p + step;
      Linearization trial_lin = linearize(data, layout, trial);
      const double trial_chi2 = trial_lin.residual.squaredNorm();
      if (step.allFinite() && trial_chi2 < chi2) {
        const double rel = (chi2 - trial_chi2) / std::max(chi2, 1e-300);
        p = trial;
        lin = std::move(trial_lin);
        chi2 = trial_chi2;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        if (rel < cfg.relative_tolerance) out.converged = true;
      } else {
        lambda *= 10.0;
        if (lambda > 1e16) {
          // No damped step lowers chi2: the relative change has reached zero.
          out.converged = true;
          break;
        }
      }
    }
    if (out.converged) break;
  }
  out.p = std::move(p);
  out.chi2 = chi2;
  out.iterations = it + 1;
  return out;
}

PatternParams base_start(std::span<const FringeSample> data) {
  PatternParams start;
  for (Branch b : kBranches) {
    double sum = 0.0;
    double hi = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& s : data) {
      const double n = static_cast<double>(b == Branch::plus ? s.counts_plus : s.counts_minus);
      sum += n;
      hi = std::max(hi, n);
      lo = std::min(lo, n);
    }
    FringeParams& f = start.branch(b);
    f.n0 = sum / static_cast<double>(data.size());
    f.P = hi > 0.0 ? contrast_from_extrema(hi, lo) : 0.0;
    f.Q = 0.0;
    f.theta = 0.0;
  }
  return start;
}

void canonicalize(Eigen::VectorXd& p, const Layout& layout) {
  const bool shared = layout.plus.theta == layout.minus.theta;
  if (shared) {
    if (p(layout.plus.P) < 0.0 && p(layout.minus.P) < 0.0) {
      p(layout.plus.P) = -p(layout.plus.P);
      p(layout.minus.P) = -p(layout.minus.P);
      p(layout.plus.theta) += std::numbers::pi;
    }
    p(layout.plus.theta) = wrap_phase(p(layout.plus.theta));
    return;
  }
  for (Branch b : kBranches) {
    const auto& k = layout.beam(b);
    if (p(k.P) < 0.0) {
      p(k.P) = -p(k.P);
      p(k.theta) += std::numbers::pi;
    }
    p(k.theta) = wrap_phase(p(k.theta));
  }
}

}  // namespace

// FitResult ---------------------------------------------------------------

std::optional<std::size_t> FitResult::index(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

double FitResult::value(const std::string& name) const {
  const auto i = index(name);
  if (!i) {
    if (name.rfind("Q_", 0) == 0) return 0.0;  // held fixed
    throw std::out_of_range("FitResult: no parameter " + name);
  }
  return values(static_cast<Eigen::Index>(*i));
}

double FitResult::sigma(const std::string& name) const { return std::sqrt(cov(name, name)); }

double FitResult::cov(const std::string& x, const std::string& y) const {
  const auto i = index(x);
  const auto j = index(y);
  if (!i || !j) {
    if ((!i && x.rfind("Q_", 0) == 0) || (!j && y.rfind("Q_", 0) == 0)) return 0.0;
    throw std::out_of_range("FitResult: no parameter " + (i ? y : x));
  }
  return covariance(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(*j));
}

std::string FitResult::name_of(const char* param, Branch b) const {
  if (shared_theta && std::string(param) == "theta") return "theta";
  return std::string(param) + "_" + branch_name(b);
}

PatternParams FitResult::pattern() const {
  PatternParams pp;
  for (Branch b : kBranches) {
    pp.branch(b) = {value(name_of("n0", b)), value(name_of("P", b)), value(name_of("Q", b)),
                    value(name_of("theta", b))};
  }
  return pp;
}

// chi-squared and fitting -------------------------------------------------

double chi_squared(std::span<const FringeSample> data, const PatternParams& model) {
  if (data.empty()) throw std::invalid_argument("chi_squared: empty data");
  double chi2 = 0.0;
  for (const auto& s : data) {
    if (!(s.sigma_plus > 0.0) || !(s.sigma_minus > 0.0)) {
      throw std::invalid_argument("chi_squared: sigma must be > 0");
    }
    const double rp =
        (static_cast<double>(s.counts_plus) - fringe_counts(model.plus, s.phi, Branch::plus)) /
        s.sigma_plus;
    const double rm =
        (static_cast<double>(s.counts_minus) - fringe_counts(model.minus, s.phi, Branch::minus)) /
        s.sigma_minus;
    chi2 += rp * rp + rm * rm;
  }
  return chi2;
}

FitResult fit_pattern(std::span<const FringeSample> data, const FitConfig& config) {
  if (data.size() < 6) {
    throw std::invalid_argument("fit_pattern: need at least 6 samples per beam");
  }
  if (!(config.relative_tolerance > 0.0) || config.multistart_count < 1 ||
      config.max_iterations < 1) {
    throw std::invalid_argument("fit_pattern: invalid FitConfig");
  }
  for (const auto& s : data) {
    if (!(s.sigma_plus > 0.0) || !(s.sigma_minus > 0.0)) {
      throw std::invalid_argument("fit_pattern: sigma must be > 0");
    }
  }

  const Layout layout = Layout::make(config);
  const PatternParams base = base_start(data);

  std::mt19937_64 rng(config.seed);
  LocalFit best;
  bool have_best = false;
  for (int start = 0; start < config.multistart_count; ++start) {
    PatternParams init = base;
    if (start > 0) {
      const double shared_theta = (2.0 * unit_uniform(rng) - 1.0) * std::numbers::pi;
      for (Branch b : kBranches) {
        FringeParams& f = init.branch(b);
        f.n0 *= 0.9 + 0.2 * unit_uniform(rng);
        f.P *= 0.5 + unit_uniform(rng);
        f.Q = config.fix_q ? 0.0 : (unit_uniform(rng) - 0.5) * 0.2 * std::max(f.P, 0.05);
        f.theta = config.shared_theta ? shared_theta
                                      : (2.0 * unit_uniform(rng) - 1.0) * std::numbers::pi;
      }
    }
    LocalFit local = levenberg_marquardt(data, layout, layout.pack(init), config);
    const bool better = !have_best || (local.converged && !best.converged) ||
                        (local.converged == best.converged && local.chi2 < best.chi2);
    if (better) {
      best = std::move(local);
      have_best = true;
    }
  }

  canonicalize(best.p, layout);

  FitResult out;
  out.names = layout.names;
  out.units = layout.units;
  out.values = best.p;
  out.shared_theta = config.shared_theta;
  out.iterations = best.iterations;
  out.converged = best.converged;
  const Linearization lin = linearize(data, layout, best.p);
  out.chi2 = lin.residual.squaredNorm();
  out.dof = static_cast<int>(2 * data.size()) - layout.size;

  const Eigen::MatrixXd curvature = lin.jacobian.transpose() * lin.jacobian;
  Eigen::VectorXd scale = curvature.diagonal().cwiseSqrt();
  for (Eigen::Index k = 0; k < scale.size(); ++k) {
    if (!(scale(k) > 0.0)) scale(k) = 1.0;
  }
  const Eigen::MatrixXd normalized =
      scale.cwiseInverse().asDiagonal() * curvature * scale.cwiseInverse().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normalized);
  const double lmax = es.eigenvalues().maxCoeff();
  const double lmin = es.eigenvalues().minCoeff();
  if (!(lmax > 0.0) || lmin < 1e-12 * lmax || curvature.diagonal().minCoeff() <= 0.0) {
    out.degenerate = true;
    out.null_direction = (scale.cwiseInverse().asDiagonal() * es.eigenvectors().col(0)).normalized();
    out.covariance = curvature.completeOrthogonalDecomposition().pseudoInverse();
  } else {
    out.covariance = curvature.ldlt().solve(Eigen::MatrixXd::Identity(layout.size, layout.size));
  }
  out.covariance = (0.5 * (out.covariance + out.covariance.transpose())).eval();

  if (!out.converged) {
    out.message = "no convergence within " + std::to_string(config.max_iterations) + " iterations";
  } else if (out.degenerate) {
    out.message = "curvature is singular; see null_direction";
  } else {
    out.message = "ok";
  }
  return out;
}

// extraction --------------------------------------------------------------

ABEstimate extract_AB(Measured P, Measured Q, Measured contrast, double inv_t,
                      DampingInversion mode) {
  if (!(inv_t > 0.0)) throw std::invalid_argument("extract_AB: inv_t must be > 0");
  if (!(contrast.value > 0.0)) throw std::invalid_argument("extract_AB: contrast must be > 0");

  const double C = contrast.value;
  const double ratio = P.value / C;
  ABEstimate out;

  double dA_dP = 0.0;
  double dA_dC = 0.0;
  if (mode == DampingInversion::linearized) {
    out.A.value = (1.0 - ratio) * inv_t;
    dA_dP = -inv_t / C;
    dA_dC = inv_t * P.value / (C * C);
  } else if (P.value > 0.0) {
    out.A.value = -std::log(ratio) * inv_t;
    dA_dP = -inv_t / P.value;
    dA_dC = inv_t / C;
  } else {
    out.A.value = kNaN;
    dA_dP = dA_dC = kNaN;
  }
  out.A.sigma = std::sqrt(std::pow(dA_dP * P.sigma, 2) + std::pow(dA_dC * contrast.sigma, 2));

  out.ReB.value = Q.value / C * inv_t;
  const double dB_dQ = inv_t / C;
  const double dB_dC = -inv_t * Q.value / (C * C);
  out.ReB.sigma = std::sqrt(std::pow(dB_dQ * Q.sigma, 2) + std::pow(dB_dC * contrast.sigma, 2));
  out.cov_A_ReB = dA_dC * dB_dC * contrast.sigma * contrast.sigma;

  out.negative_A = P.value > C;
  out.unidentifiable_A = !(P.value > 2.0 * P.sigma) || !std::isfinite(out.A.value);
  return out;
}

ComplexBEstimate resolve_B(double Q, double contrast, double inv_t, double theta,
                           double assumed_theta_B) {
  const double proj = std::cos(theta - assumed_theta_B);
  if (std::abs(proj) < 1e-12 || !(contrast > 0.0)) {
    throw std::invalid_argument("resolve_B: degenerate projection");
  }
  const double mod = Q / (contrast * proj) * inv_t;
  return {mod * std::cos(assumed_theta_B), mod * std::sin(assumed_theta_B), false};
}

AAlphaEstimate extract_a_alpha(Measured A, Measured ReB, double cov_A_ReB) {
  const double var_sum = A.sigma * A.sigma + ReB.sigma * ReB.sigma;
  return {{0.5 * (A.value - ReB.value), 0.5 * std::sqrt(std::max(var_sum - 2.0 * cov_A_ReB, 0.0))},
          {0.5 * (A.value + ReB.value), 0.5 * std::sqrt(std::max(var_sum + 2.0 * cov_A_ReB, 0.0))}};
}

namespace {

// First-order propagation of f(P, Q, theta) given its gradient.
double propagate(const BeamFit& in, double dP, double dQ, double dTheta) {
  const double var = dP * dP * in.P.sigma * in.P.sigma + dQ * dQ * in.Q.sigma * in.Q.sigma +
                     2.0 * dP * dQ * in.cov_PQ + dTheta * dTheta * in.theta.sigma * in.theta.sigma;
  return std::sqrt(std::max(var, 0.0));
}

SimplifiedBeam simplified_beam(const BeamFit& in, double inv_t) {
  const double P = in.P.value;
  const double Q = in.Q.value;
  const double th = in.theta.value;
  const double cs = std::cos(th);
  const double sn = std::sin(th);

  SimplifiedBeam out;
  const double C = simplified_contrast(P, Q, th);
  out.contrast = {C, propagate(in, 1.0, 1.0 / cs, Q * sn / (cs * cs))};

  // C depends on (P, Q, theta); chain rule through it for both relations.
  const double dC_dP = 1.0, dC_dQ = 1.0 / cs, dC_dth = Q * sn / (cs * cs);

  // alpha t = 1 - P / C
  const double damp = 1.0 - P / C;
  const double dd_dP = -1.0 / C + P / (C * C) * dC_dP;
  const double dd_dQ = P / (C * C) * dC_dQ;
  const double dd_dth = P / (C * C) * dC_dth;
  out.alpha_t_damping = {damp, propagate(in, dd_dP, dd_dQ, dd_dth)};

  // alpha t = Q / (C cos theta)
  const double denom = C * cs;
  const double off = Q / denom;
  const double do_dP = -Q / (denom * denom) * cs * dC_dP;
  const double do_dQ = 1.0 / denom - Q / (denom * denom) * cs * dC_dQ;
  const double do_dth = -Q / (denom * denom) * (dC_dth * cs - C * sn);
  out.alpha_t_offset = {off, propagate(in, do_dP, do_dQ, do_dth)};

  out.alpha = {out.alpha_t_offset.value * inv_t, out.alpha_t_offset.sigma * inv_t};
  return out;
}

}  // namespace

SimplifiedAlpha combined_alpha_simplified(const BeamFit& plus, const BeamFit& minus,
                                          double inv_t) {
  if (!(inv_t > 0.0)) throw std::invalid_argument("combined_alpha_simplified: inv_t must be > 0");
  SimplifiedAlpha out;
  out.plus = simplified_beam(plus, inv_t);
  out.minus = simplified_beam(minus, inv_t);

  double wsum = 0.0;
  double wval = 0.0;
  for (const SimplifiedBeam* beam : {&out.plus, &out.minus}) {
    if (!(beam->alpha.sigma > 0.0)) continue;
    const double w = 1.0 / (beam->alpha.sigma * beam->alpha.sigma);
    wsum += w;
    wval += w * beam->alpha.value;
  }
  if (wsum > 0.0) {
    out.alpha = {wval / wsum, 1.0 / std::sqrt(wsum)};
  } else {
    // no uncertainties supplied: plain mean
    out.alpha = {0.5 * (out.plus.alpha.value + out.minus.alpha.value), 0.0};
  }
  return out;
}

// synthetic data ----------------------------------------------------------

std::vector<FringeSample> synthesize_counts(const PatternParams& truth,
                                            std::span<const double> phi_grid, double exposure,
                                            std::uint64_t seed) {
  if (!(exposure > 0.0)) throw std::invalid_argument("synthesize_counts: exposure must be > 0");
  std::mt19937_64 rng(seed);
  auto draw = [&](double mean) -> long {
    if (!(mean > 0.0)) return 0;
    if (std::isinf(exposure)) return std::lround(mean);
    std::poisson_distribution<long> pd(mean * exposure);
    return pd(rng);
  };
  std::vector<FringeSample> out;
  out.reserve(phi_grid.size());
  for (double phi : phi_grid) {
    FringeSample s;
    s.phi = phi;
    s.counts_plus = draw(fringe_counts(truth.plus, phi, Branch::plus));
    s.counts_minus = draw(fringe_counts(truth.minus, phi, Branch::minus));
    s.sigma_plus = poisson_sigma(s.counts_plus);
    s.sigma_minus = poisson_sigma(s.counts_minus);
    out.push_back(s);
  }
  return out;
}

std::vector<FringeSample> synthesize_counts(const CountModel& truth,
                                            std::span<const double> phi_grid, double exposure,
                                            std::uint64_t seed) {
  return synthesize_counts(PatternParams{truth.fringe(Branch::plus), truth.fringe(Branch::minus)},
                           phi_grid, exposure, seed);
}

// end-to-end --------------------------------------------------------------

namespace {

Measured curve_contrast_with_error(const FitResult& fit, Branch b, double phi_min,
                                   double phi_max) {
  const PatternParams pp = fit.pattern();
  const double value = curve_contrast(pp.branch(b), b, phi_min, phi_max);

  // Numerical gradient with respect to this beam's fitted parameters.
  const char* params[] = {"n0", "P", "Q", "theta"};
  std::vector<std::string> names;
  std::vector<double> grad;
  for (const char* p : params) {
    const std::string name = fit.name_of(p, b);
    if (!fit.index(name)) continue;
    const double sig = fit.sigma(name);
    const double h = sig > 0.0 ? 1e-3 * sig : 1e-7;
    auto eval = [&](double delta) {
      PatternParams q = pp;
      FringeParams& f = q.branch(b);
      const std::string key = p;
      if (key == "n0") f.n0 += delta;
      if (key == "P") f.P += delta;
      if (key == "Q") f.Q += delta;
      if (key == "theta") f.theta += delta;
      return curve_contrast(f, b, phi_min, phi_max);
    };
    names.push_back(name);
    grad.push_back((eval(h) - eval(-h)) / (2.0 * h));
  }
  double var = 0.0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = 0; j < names.size(); ++j) {
      var += grad[i] * grad[j] * fit.cov(names[i], names[j]);
    }
  }
  return {value, std::sqrt(std::max(var, 0.0))};
}

}  // namespace

AnalysisReport analyze(std::span<const FringeSample> data, const AnalysisOptions& options) {
  AnalysisReport r;
  r.fit = fit_pattern(data, options.fit);

  double phi_min = std::numeric_limits<double>::infinity();
  double phi_max = -std::numeric_limits<double>::infinity();
  for (const auto& s : data) {
    phi_min = std::min(phi_min, s.phi);
    phi_max = std::max(phi_max, s.phi);
  }

  for (Branch b : kBranches) {
    BeamExtraction& beam = b == Branch::plus ? r.plus : r.minus;
    const auto& calibration = b == Branch::plus ? options.contrast_plus : options.contrast_minus;
    if (calibration) {
      beam.contrast = *calibration;
    } else {
      beam.contrast = curve_contrast_with_error(r.fit, b, phi_min, phi_max);
      beam.contrast_from_curve = true;
    }
    beam.ab = extract_AB(r.fit.measured(r.fit.name_of("P", b)),
                         r.fit.measured(r.fit.name_of("Q", b)), beam.contrast, options.inv_t,
                         options.inversion);
  }

  const bool plus_better = std::isfinite(r.plus.ab.A.sigma) &&
                           (!std::isfinite(r.minus.ab.A.sigma) ||
                            r.plus.ab.A.sigma < r.minus.ab.A.sigma);
  r.best = plus_better ? Branch::plus : Branch::minus;
  const ABEstimate& best = plus_better ? r.plus.ab : r.minus.ab;
  r.a_alpha = extract_a_alpha(best.A, best.ReB, best.cov_A_ReB);

  r.conservation = conservation_residual(r.fit.measured("n0_plus"), r.plus.contrast,
                                         r.fit.measured("n0_minus"), r.minus.contrast);

  if (options.simplified) {
    auto beam_fit = [&](Branch b) {
      const std::string p = r.fit.name_of("P", b);
      const std::string q = r.fit.name_of("Q", b);
      return BeamFit{r.fit.measured(p), r.fit.measured(q),
                     r.fit.measured(r.fit.name_of("theta", b)), r.fit.cov(p, q)};
    };
    r.simplified =
        combined_alpha_simplified(beam_fit(Branch::plus), beam_fit(Branch::minus), options.inv_t);
  }
  return r;
}

}  // namespace cpi
