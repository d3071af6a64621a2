#include "cpi/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cpi/evolution.hpp"
#include "cpi/fitting.hpp"
#include "cpi/interference.hpp"
#include "cpi/params_io.hpp"
#include "cpi/report_json.hpp"

namespace cpi::cli {

namespace {

using report::json;
using report::quantity;

constexpr Branch kBranches[] = {Branch::plus, Branch::minus};

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

KeyValueConfig load_config(const RunConfig& rc) {
  if (rc.config.empty()) return KeyValueConfig{};
  return KeyValueConfig::load(rc.config);
}

// Writes `text` to --out when given, otherwise to `out`.
void emit(const RunConfig& rc, std::ostream& out, const std::string& text) {
  if (rc.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(rc.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + rc.out.string());
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Flight time in GeV^-1 from t, t_seconds or inv_t.
std::optional<double> read_time(const KeyValueConfig& cfg, const std::string& section) {
  const auto t = cfg.real(section, "t");
  const auto ts = cfg.real(section, "t_seconds");
  const auto inv = cfg.real(section, "inv_t");
  if (int(t.has_value()) + int(ts.has_value()) + int(inv.has_value()) > 1) {
    throw ConfigError(cfg.source() + ": [" + section +
                      "] set only one of t, t_seconds, inv_t");
  }
  if (t) return *t;
  if (ts) return seconds_to_inverse_gev(*ts);
  if (inv) {
    if (!(*inv > 0.0)) throw ConfigError(cfg.source() + ": inv_t must be > 0");
    return 1.0 / *inv;
  }
  return std::nullopt;
}

std::vector<double> read_grid(const KeyValueConfig& cfg, const std::string& section) {
  const double lo = cfg.real_or(section, "phi_min", -3.0 * std::numbers::pi);
  const double hi = cfg.real_or(section, "phi_max", 3.0 * std::numbers::pi);
  const long n = cfg.integer(section, "points").value_or(32);
  if (n < 1) throw ConfigError(cfg.source() + ": [" + section + "] points must be >= 1");
  return phase_grid(lo, hi, static_cast<int>(n));
}

FitConfig read_fit_config(const KeyValueConfig& cfg, const RunConfig& rc) {
  FitConfig fc;
  fc.max_iterations = static_cast<int>(cfg.integer("fit", "max_iterations").value_or(fc.max_iterations));
  fc.relative_tolerance = cfg.real_or("fit", "relative_tolerance", fc.relative_tolerance);
  fc.multistart_count =
      static_cast<int>(cfg.integer("fit", "multistart_count").value_or(fc.multistart_count));
  fc.shared_theta = cfg.flag("fit", "shared_theta").value_or(false);
  fc.fix_q = cfg.flag("fit", "fix_q").value_or(false);
  fc.seed = static_cast<std::uint64_t>(cfg.integer("fit", "seed").value_or(1));
  if (rc.seed) fc.seed = *rc.seed;
  return fc;
}

DampingInversion read_inversion(const KeyValueConfig& cfg) {
  const auto s = cfg.text("extract", "inversion").value_or("linearized");
  if (s == "linearized") return DampingInversion::linearized;
  if (s == "logarithm") return DampingInversion::logarithm;
  throw ConfigError(cfg.source() + ": [extract] inversion must be linearized or logarithm");
}

double read_inv_t(const KeyValueConfig& cfg) {
  const auto t = read_time(cfg, "extract");
  return t ? 1.0 / *t : 5.83e-21;
}

std::optional<Measured> read_measured(const KeyValueConfig& cfg, const std::string& section,
                                      const std::string& key) {
  const auto v = cfg.real(section, key);
  if (!v) return std::nullopt;
  return Measured{*v, cfg.real_or(section, key + "_sigma", 0.0)};
}

std::vector<FringeSample> load_samples(const RunConfig& rc) {
  std::ifstream in(rc.data);
  if (!in) throw std::runtime_error("cannot open data file " + rc.data.string());
  return read_fringe_csv(in);
}

}  // namespace

// validate-cp -------------------------------------------------------------

int run_validate_cp(const RunConfig& rc, std::ostream& out, std::ostream&) {
  const KeyValueConfig cfg = load_config(rc);
  const DissipationParams d = read_dissipation(cfg);
  const CpVerdict v = check_complete_positivity(d);
  json j{{"command", "validate-cp"}};
  j.update(report::to_json(v, d));
  emit(rc, out, dump(j));
  return v.is_cp ? kOk : kCpViolation;
}

// simulate ----------------------------------------------------------------

int run_simulate(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const KeyValueConfig cfg = load_config(rc);
  const HamiltonianParams h0 = read_hamiltonian(cfg);
  const DissipationParams d = read_dissipation(cfg);
  const auto t_opt = read_time(cfg, "simulate");
  if (!t_opt || !(*t_opt > 0.0)) {
    throw ConfigError(cfg.source() + ": [simulate] needs a positive t, t_seconds or inv_t");
  }
  const double t = *t_opt;
  const double theta = cfg.real_or("simulate", "theta", 0.0);
  const std::vector<double> grid = read_grid(cfg, "simulate");

  const PerturbativeValidity validity = perturbative_validity(d, t);
  const bool use_exact = rc.exact_only || !validity.ok;
  if (!validity.ok) {
    err << "warning: A*t = " << fmt(validity.At) << " >= " << fmt(kPerturbativeThreshold)
        << "; first-order formula out of range, reporting the exact propagator\n";
  }

  std::optional<CountModel> counts;
  if (cfg.has("simulate", "n0_plus") || cfg.has("simulate", "n0_minus")) {
    const DerivedCombos k = derived_combos(d);
    CountModel m;
    m.n0_plus = cfg.real_or("simulate", "n0_plus", 0.0);
    m.n0_minus = cfg.real_or("simulate", "n0_minus", 0.0);
    m.contrast_plus = cfg.real_or("simulate", "contrast_plus", 1.0);
    m.contrast_minus = cfg.real_or("simulate", "contrast_minus", 1.0);
    m.theta = theta;
    m.A = k.A;
    m.B_mod = k.B_mod;
    m.theta_B = k.theta_B;
    m.t = t;
    counts = m;
  }

  std::ostringstream csv;
  csv << "phi,I_plus,I_minus";
  if (!rc.exact_only) csv << ",I_plus_exact,I_minus_exact,discrepancy";
  if (counts) csv << ",N_plus,N_minus";
  csv << "\n";

  double worst = 0.0;
  for (double phi : grid) {
    HamiltonianParams h = h0;
    h.omega = phi / (2.0 * t);
    const DensityMatrix rho = propagate_exact({entrance_state_plus(), h, d, t});
    const double ep = intensity(rho, {theta, Branch::plus});
    const double em = intensity(rho, {theta, Branch::minus});
    csv << fmt(phi);
    if (rc.exact_only) {
      csv << ',' << fmt(ep) << ',' << fmt(em);
    } else {
      const double pp = ideal_pattern(theta, h.omega, t, d, Branch::plus);
      const double pm = ideal_pattern(theta, h.omega, t, d, Branch::minus);
      const double disc = std::max(std::abs(pp - ep), std::abs(pm - em));
      worst = std::max(worst, disc);
      csv << ',' << fmt(use_exact ? ep : pp) << ',' << fmt(use_exact ? em : pm) << ','
          << fmt(ep) << ',' << fmt(em) << ',' << fmt(disc);
    }
    if (counts) {
      csv << ',' << fmt(count_pattern(*counts, phi, Branch::plus)) << ','
          << fmt(count_pattern(*counts, phi, Branch::minus));
    }
    csv << "\n";
  }
  emit(rc, out, csv.str());
  if (!rc.exact_only) err << "max |exact - first order| = " << fmt(worst) << "\n";
  return kOk;
}

// synth -------------------------------------------------------------------

int run_synth(const RunConfig& rc, std::ostream& out, std::ostream&) {
  const KeyValueConfig cfg = load_config(rc);
  PatternParams truth;
  if (cfg.has("truth", "P_plus") || cfg.has("truth", "P_minus")) {
    for (Branch b : kBranches) {
      const std::string s = std::string("_") + branch_name(b);
      FringeParams& f = truth.branch(b);
      f.n0 = cfg.real_or("truth", "n0" + s, 0.0);
      f.P = cfg.real_or("truth", "P" + s, 0.0);
      f.Q = cfg.real_or("truth", "Q" + s, 0.0);
      f.theta = cfg.real_or("truth", "theta" + s, cfg.real_or("truth", "theta", 0.0));
    }
  } else {
    CountModel m;
    m.n0_plus = cfg.real_or("truth", "n0_plus", 0.0);
    m.n0_minus = cfg.real_or("truth", "n0_minus", 0.0);
    m.contrast_plus = cfg.real_or("truth", "contrast_plus", 1.0);
    m.contrast_minus = cfg.real_or("truth", "contrast_minus", 1.0);
    m.theta = cfg.real_or("truth", "theta", 0.0);
    m.A = cfg.real_or("truth", "A", 0.0);
    if (cfg.has("truth", "ReB")) {
      m.B_mod = std::abs(*cfg.real("truth", "ReB"));
      m.theta_B = *cfg.real("truth", "ReB") < 0.0 ? std::numbers::pi : 0.0;
    } else {
      m.B_mod = cfg.real_or("truth", "B_mod", 0.0);
      m.theta_B = cfg.real_or("truth", "theta_B", 0.0);
    }
    m.t = read_time(cfg, "truth").value_or(1.0 / 5.83e-21);
    truth = {m.fringe(Branch::plus), m.fringe(Branch::minus)};
  }
  const std::vector<double> grid = read_grid(cfg, "synth");
  const double exposure = cfg.real_or("synth", "exposure", 1.0);
  const auto seed = rc.seed.value_or(static_cast<std::uint64_t>(cfg.integer("synth", "seed").value_or(1)));

  std::ostringstream csv;
  write_fringe_csv(csv, synthesize_counts(truth, grid, exposure, seed));
  emit(rc, out, csv.str());
  return kOk;
}

// fit ---------------------------------------------------------------------

int run_fit(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const KeyValueConfig cfg = load_config(rc);
  const auto samples = load_samples(rc);
  const FitConfig fc = read_fit_config(cfg, rc);
  const FitResult fit = fit_pattern(samples, fc);
  json j{{"command", "fit"}, {"seed", quantity(static_cast<double>(fc.seed), "dimensionless")}};
  j.update(report::to_json(fit));
  emit(rc, out, dump(j));
  if (!fit.converged) {
    err << "fit did not converge: " << fit.message << "\n";
    return kFitNotConverged;
  }
  return kOk;
}

// extract -----------------------------------------------------------------

int run_extract(const RunConfig& rc, std::ostream& out, std::ostream&) {
  const KeyValueConfig cfg = load_config(rc);
  const double inv_t = read_inv_t(cfg);
  const DampingInversion inversion = read_inversion(cfg);

  json j{{"command", "extract"},
         {"inv_t", quantity(inv_t, "GeV")},
         {"damping_inversion", inversion == DampingInversion::linearized ? "linearized" : "logarithm"}};

  std::optional<ABEstimate> best;
  std::string best_name;
  for (Branch b : kBranches) {
    const std::string s = std::string("_") + branch_name(b);
    const auto P = read_measured(cfg, "extract", "P" + s);
    const auto Q = read_measured(cfg, "extract", "Q" + s);
    const auto C = read_measured(cfg, "extract", "contrast" + s);
    if (!P || !Q || !C) continue;
    const ABEstimate ab = extract_AB(*P, *Q, *C, inv_t, inversion);
    j[branch_name(b)] = {{"P", quantity(*P, "dimensionless")},
                         {"Q", quantity(*Q, "dimensionless")},
                         {"contrast", quantity(*C, "dimensionless")},
                         {"extraction", report::to_json(ab)}};
    if (!best || ab.A.sigma < best->A.sigma) {
      best = ab;
      best_name = branch_name(b);
    }
  }
  if (best) {
    j["best_beam"] = best_name;
    j["a_alpha"] = report::to_json(extract_a_alpha(best->A, best->ReB, best->cov_A_ReB));
  }

  const auto n0p = read_measured(cfg, "extract", "n0_plus");
  const auto n0m = read_measured(cfg, "extract", "n0_minus");
  const auto cp = read_measured(cfg, "extract", "contrast_plus");
  const auto cm = read_measured(cfg, "extract", "contrast_minus");
  if (n0p && n0m && cp && cm) {
    j["conservation"] = report::to_json(conservation_residual(*n0p, *cp, *n0m, *cm));
  }

  if (rc.simplified) {
    auto beam = [&](Branch b) {
      const std::string s = std::string("_") + branch_name(b);
      const auto P = read_measured(cfg, "extract", "P" + s);
      const auto Q = read_measured(cfg, "extract", "Q" + s);
      if (!P || !Q) {
        throw ConfigError(cfg.source() + ": --simplified needs P" + s + " and Q" + s);
      }
      return BeamFit{*P, *Q, read_measured(cfg, "extract", "theta" + s).value_or(Measured{}), 0.0};
    };
    j["simplified"] = report::to_json(combined_alpha_simplified(beam(Branch::plus), beam(Branch::minus), inv_t));
  }
  if (!best && !rc.simplified) {
    throw ConfigError(cfg.source() + ": [extract] needs P_<beam>, Q_<beam> and contrast_<beam> for at least one beam");
  }
  emit(rc, out, dump(j));
  return kOk;
}

// report ------------------------------------------------------------------

int run_fit_extract(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const KeyValueConfig cfg = load_config(rc);
  const auto samples = load_samples(rc);

  AnalysisOptions opt;
  opt.fit = read_fit_config(cfg, rc);
  opt.inv_t = read_inv_t(cfg);
  opt.contrast_plus = read_measured(cfg, "extract", "contrast_plus");
  opt.contrast_minus = read_measured(cfg, "extract", "contrast_minus");
  opt.inversion = read_inversion(cfg);
  opt.simplified = rc.simplified;

  const AnalysisReport r = analyze(samples, opt);
  json j{{"command", "report"},
         {"seed", quantity(static_cast<double>(opt.fit.seed), "dimensionless")},
         {"samples", quantity(static_cast<double>(samples.size()), "dimensionless")}};
  j.update(report::to_json(r, opt));
  emit(rc, out, dump(j));
  if (!r.fit.converged) {
    err << "fit did not converge: " << r.fit.message << "\n";
    return kFitNotConverged;
  }
  for (Branch b : kBranches) {
    const auto& ab = (b == Branch::plus ? r.plus : r.minus).ab;
    if (ab.unidentifiable_A) {
      err << "note: A is unidentifiable from the " << branch_name(b) << " beam (P not above 2 sigma)\n";
    }
  }
  return kOk;
}

// entry point -------------------------------------------------------------

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Completely positive two-beam interferometer simulation and fringe analysis"};
  app.require_subcommand(1);

  RunConfig rc;
  std::function<int(const RunConfig&, std::ostream&, std::ostream&)> action;

  auto add = [&](const char* name, const char* help, auto fn, bool needs_config, bool needs_data) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* cfg_opt = sub->add_option("-c,--config", rc.config, "parameter/config file")
                        ->check(CLI::ExistingFile);
    if (needs_config) cfg_opt->required();
    if (needs_data) {
      sub->add_option("-d,--data", rc.data, "fringe CSV (phi,n_plus,sigma_plus,n_minus,sigma_minus)")
          ->check(CLI::ExistingFile)
          ->required();
    }
    sub->add_option("-o,--out", rc.out, "write the result here instead of stdout");
    sub->add_option("--seed", rc.seed, "random seed");
    sub->callback([&, name, fn] {
      rc.command = name;
      action = fn;
    });
    return sub;
  };

  add("validate-cp", "check the complete-positivity inequalities", run_validate_cp, true, false);
  add("simulate", "emit ideal / exact fringe tables", run_simulate, true, false)
      ->add_flag("--exact-only", rc.exact_only, "only the exact propagator");
  add("synth", "draw synthetic Poisson fringe counts", run_synth, true, false);
  add("fit", "fit the count model to fringe data", run_fit, false, true);
  add("extract", "extract A, Re(B), a, alpha from fitted values", run_extract, true, false)
      ->add_flag("--simplified", rc.simplified, "also run the a = 0 analysis");
  add("report", "fit and extract in one pass", run_fit_extract, false, true)
      ->add_flag("--simplified", rc.simplified, "also run the a = 0 analysis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }

  try {
    return action(rc, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
}

}  // namespace cpi::cli
