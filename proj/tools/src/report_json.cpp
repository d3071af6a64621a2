#include "cpi/report_json.hpp"

#include <cmath>

namespace cpi::report {

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const char* residual_unit(const std::string& id) {
  if (id.rfind("RST", 0) == 0) return "GeV^3";
  if (id.find('^') != std::string::npos) return "GeV^2";
  return "GeV";
}

}  // namespace

json quantity(double value, const char* unit) {
  return json{{"value", number(value)}, {"unit", unit}};
}

json quantity(Measured m, const char* unit) {
  return json{{"value", number(m.value)}, {"sigma", number(m.sigma)}, {"unit", unit}};
}

json to_json(const CpVerdict& v, const DissipationParams& d) {
  json violated = json::array();
  for (const auto& c : v.violated) {
    violated.push_back({{"constraint", c.id}, {"residual", quantity(c.residual, residual_unit(c.id))}});
  }
  return json{
      {"is_cp", v.is_cp},
      {"parameters",
       {{"a", quantity(d.a, "GeV")},
        {"b", quantity(d.b, "GeV")},
        {"c", quantity(d.c, "GeV")},
        {"alpha", quantity(d.alpha, "GeV")},
        {"beta", quantity(d.beta, "GeV")},
        {"gamma", quantity(d.gamma, "GeV")}}},
      {"R", quantity(v.R, "GeV")},
      {"S", quantity(v.S, "GeV")},
      {"T", quantity(v.T, "GeV")},
      {"kossakowski_min_eigenvalue", quantity(kossakowski_min_eigenvalue(d), "GeV")},
      {"violated", violated},
  };
}

json to_json(const FitResult& fit) {
  json estimates = json::object();
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    estimates[fit.names[i]] =
        quantity(Measured{fit.values(static_cast<Eigen::Index>(i)), fit.sigma(fit.names[i])},
                 fit.units[i].c_str());
  }
  json rows = json::array();
  for (Eigen::Index i = 0; i < fit.covariance.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < fit.covariance.cols(); ++j) row.push_back(number(fit.covariance(i, j)));
    rows.push_back(row);
  }
  json out{
      {"estimates", estimates},
      {"covariance",
       {{"parameters", fit.names}, {"units", fit.units}, {"unit", "row_unit*column_unit"},
        {"matrix", rows}}},
      {"chi2", quantity(fit.chi2, "dimensionless")},
      {"dof", quantity(fit.dof, "dimensionless")},
      {"converged", fit.converged},
      {"iterations", quantity(fit.iterations, "dimensionless")},
      {"degenerate", fit.degenerate},
      {"message", fit.message},
  };
  if (fit.degenerate) {
    json dir = json::array();
    for (Eigen::Index i = 0; i < fit.null_direction.size(); ++i) dir.push_back(number(fit.null_direction(i)));
    out["null_direction"] = {{"parameters", fit.names}, {"unit", "dimensionless"}, {"vector", dir}};
  }
  return out;
}

json to_json(const ABEstimate& ab) {
  return json{
      {"A", quantity(ab.A, "GeV")},
      {"ReB", quantity(ab.ReB, "GeV")},
      {"cov_A_ReB", quantity(ab.cov_A_ReB, "GeV^2")},
      {"negative_A", ab.negative_A},
      {"unidentifiable_A", ab.unidentifiable_A},
  };
}

json to_json(const AAlphaEstimate& aa) {
  return json{{"a", quantity(aa.a, "GeV")}, {"alpha", quantity(aa.alpha, "GeV")}};
}

json to_json(const SimplifiedAlpha& s) {
  auto beam = [](const SimplifiedBeam& b) {
    return json{
        {"contrast", quantity(b.contrast, "dimensionless")},
        {"alpha_t_from_damping", quantity(b.alpha_t_damping, "dimensionless")},
        {"alpha_t_from_offset", quantity(b.alpha_t_offset, "dimensionless")},
        {"alpha", quantity(b.alpha, "GeV")},
    };
  };
  return json{{"plus", beam(s.plus)}, {"minus", beam(s.minus)},
              {"alpha_combined", quantity(s.alpha, "GeV")}};
}

json to_json(const ConservationResidual& c) {
  return json{{"residual", quantity(Measured{c.value, c.sigma}, "counts")},
              {"significance", quantity(c.significance(), "dimensionless")}};
}

json to_json(const AnalysisReport& r, const AnalysisOptions& options) {
  auto beam = [](const BeamExtraction& b) {
    return json{{"contrast", quantity(b.contrast, "dimensionless")},
                {"contrast_source", b.contrast_from_curve ? "fitted_curve_extrema" : "calibration"},
                {"extraction", to_json(b.ab)}};
  };
  json out{
      {"inv_t", quantity(options.inv_t, "GeV")},
      {"damping_inversion",
       options.inversion == DampingInversion::linearized ? "linearized" : "logarithm"},
      {"fit", to_json(r.fit)},
      {"plus", beam(r.plus)},
      {"minus", beam(r.minus)},
      {"best_beam", branch_name(r.best)},
      {"a_alpha", to_json(r.a_alpha)},
      {"conservation", to_json(r.conservation)},
  };
  if (r.simplified) out["simplified"] = to_json(*r.simplified);
  return out;
}

}  // namespace cpi::report
