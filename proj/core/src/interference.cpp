#include "cpi/interference.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cpi/evolution.hpp"

namespace cpi {

Matrix2c projector_matrix(const ExitProjector& p) {
  const double th = p.branch == Branch::plus ? p.theta : p.theta + std::numbers::pi;
  Matrix2c m;
  m << 0.5, 0.5 * std::polar(1.0, th), 0.5 * std::polar(1.0, -th), 0.5;
  return m;
}

double intensity(const DensityMatrix& rho, const ExitProjector& p) {
  return (projector_matrix(p) * rho.matrix()).trace().real();
}

double ideal_pattern(double theta, double omega, double t, const DissipationParams& d,
                     Branch branch, DampingForm form) {
  const DerivedCombos k = derived_combos(d);
  const double damping =
      form == DampingForm::linearized ? 1.0 - k.A * t : std::exp(-k.A * t);
  const double fringe = damping * std::cos(theta + 2.0 * omega * t) +
                        k.B_mod * sin_over(2.0 * omega, t) * std::cos(theta - k.theta_B);
  // The larger intensity is computed directly and the smaller as its
  // complement; the subtraction is then exact, so the two sum to exactly 1.
  const double plus = 0.5 * (1.0 + fringe);
  const double minus = 0.5 * (1.0 - fringe);
  if (plus >= minus) return branch == Branch::plus ? plus : 1.0 - plus;
  return branch == Branch::plus ? 1.0 - minus : minus;
}

double sinc(double phi) {
  if (std::abs(phi) < 1e-8) return 1.0 - phi * phi / 6.0;
  return std::sin(phi) / phi;
}

double fringe_counts(const FringeParams& f, double phi, Branch branch) {
  return f.n0 *
         (1.0 + branch_sign(branch) * (f.P * std::cos(f.theta + phi) + f.Q * sinc(phi)));
}

double CountModel::P(Branch b) const { return contrast(b) * std::exp(-A * t); }

double CountModel::Q(Branch b) const {
  return contrast(b) * B_mod * t * std::cos(theta - theta_B);
}

FringeParams CountModel::fringe(Branch b) const { return {n0(b), P(b), Q(b), theta}; }

double count_pattern(const CountModel& m, double phi, Branch branch) {
  return fringe_counts(m.fringe(branch), phi, branch);
}

double contrast_from_extrema(double n_max, double n_min) {
  if (!(n_max > 0.0) || n_min < 0.0 || n_min > n_max) {
    throw std::invalid_argument("contrast_from_extrema: need n_max >= n_min >= 0 and n_max > 0");
  }
  return (n_max - n_min) / (n_max + n_min);
}

double curve_contrast(const FringeParams& f, Branch branch, double phi_min, double phi_max,
                      int samples) {
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (double phi : phase_grid(phi_min, phi_max, samples)) {
    const double n = fringe_counts(f, phi, branch);
    hi = std::max(hi, n);
    lo = std::min(lo, n);
  }
  return contrast_from_extrema(hi, std::max(lo, 0.0));
}

double ConservationResidual::significance() const {
  if (sigma > 0.0) return std::abs(value) / sigma;
  return value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

ConservationResidual conservation_residual(const CountModel& m) {
  return conservation_residual({m.n0_plus, 0.0}, {m.contrast_plus, 0.0}, {m.n0_minus, 0.0},
                               {m.contrast_minus, 0.0});
}

ConservationResidual conservation_residual(Measured n0_plus, Measured contrast_plus,
                                           Measured n0_minus, Measured contrast_minus) {
  const double plus = n0_plus.value * contrast_plus.value;
  const double minus = n0_minus.value * contrast_minus.value;
  const double var_plus = std::pow(contrast_plus.value * n0_plus.sigma, 2) +
                          std::pow(n0_plus.value * contrast_plus.sigma, 2);
  const double var_minus = std::pow(contrast_minus.value * n0_minus.sigma, 2) +
                           std::pow(n0_minus.value * contrast_minus.sigma, 2);
  return {plus - minus, std::sqrt(var_plus + var_minus)};
}

double simplified_contrast(double P, double Q, double theta) {
  const double c = std::cos(theta);
  if (std::abs(c) < 1e-6) {
    throw std::invalid_argument("simplified_contrast: cos(theta) too close to zero");
  }
  return P + Q / c;
}

double poisson_sigma(long counts) {
  return std::sqrt(static_cast<double>(std::max(counts, 1L)));
}

std::vector<double> phase_grid(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("phase_grid: need at least one point");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
  out.back() = hi;
  return out;
}

// CSV ---------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

[[noreturn]] void csv_error(std::size_t line, const std::string& what) {
  throw std::runtime_error("fringe csv line " + std::to_string(line) + ": " + what);
}

double parse_real(const std::string& cell, std::size_t line, const char* column) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    csv_error(line, std::string("bad number '") + cell + "' in column " + column);
  }
  return v;
}

long parse_count(const std::string& cell, std::size_t line, const char* column) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || v < 0) {
    csv_error(line, std::string("counts must be a non-negative integer, got '") + cell +
                        "' in column " + column);
  }
  return v;
}

}  // namespace

std::vector<FringeSample> read_fringe_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty() && trim(line)[0] != '#') {
      header = split_csv(line);
      break;
    }
  }
  if (header.empty()) throw std::runtime_error("fringe csv: missing header");

  auto column = [&](const char* name, bool required) -> std::optional<std::size_t> {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      if (required) csv_error(lineno, std::string("header lacks column '") + name + "'");
      return std::nullopt;
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto c_phi = *column("phi", true);
  const auto c_np = *column("n_plus", true);
  const auto c_nm = *column("n_minus", true);
  const auto c_sp = column("sigma_plus", false);
  const auto c_sm = column("sigma_minus", false);

  std::vector<FringeSample> out;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      csv_error(lineno, "expected " + std::to_string(header.size()) + " cells, got " +
                            std::to_string(cells.size()));
    }
    FringeSample s;
    s.phi = parse_real(cells[c_phi], lineno, "phi");
    s.counts_plus = parse_count(cells[c_np], lineno, "n_plus");
    s.counts_minus = parse_count(cells[c_nm], lineno, "n_minus");
    auto sigma = [&](std::optional<std::size_t> col, long counts, const char* name) {
      if (!col || cells[*col].empty()) return poisson_sigma(counts);
      const double v = parse_real(cells[*col], lineno, name);
      if (!(v > 0.0)) csv_error(lineno, std::string(name) + " must be > 0");
      return v;
    };
    s.sigma_plus = sigma(c_sp, s.counts_plus, "sigma_plus");
    s.sigma_minus = sigma(c_sm, s.counts_minus, "sigma_minus");
    out.push_back(s);
  }
  return out;
}

void write_fringe_csv(std::ostream& out, const std::vector<FringeSample>& samples) {
  out << "phi,n_plus,sigma_plus,n_minus,sigma_minus\n";
  char buf[64];
  auto real = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  for (const auto& s : samples) {
    out << real(s.phi) << ',' << s.counts_plus << ',' << real(s.sigma_plus) << ','
        << s.counts_minus << ',' << real(s.sigma_minus) << '\n';
  }
}

}  // namespace cpi
