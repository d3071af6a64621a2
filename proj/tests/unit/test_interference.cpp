#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"

#include "cpi/evolution.hpp"
#include "cpi/interference.hpp"
#include "support/oracles.hpp"

using namespace cpi;
namespace ct = cpi::testing;
using std::numbers::pi;

namespace {

constexpr double kRefT = 1.0 / 5.83e-21;

CountModel published_model() {
  CountModel m;
  m.n0_plus = 942;
  m.n0_minus = 366;
  m.contrast_plus = 0.19;
  m.contrast_minus = 0.54;
  m.theta = 0.03;
  m.A = 0.84e-21;
  m.B_mod = 0.65e-21;
  m.theta_B = 0.0;
  m.t = kRefT;
  return m;
}

}  // namespace

TEST_CASE("projector examples") {
  const Matrix2c plus = projector_matrix({0.0, Branch::plus});
  const Matrix2c minus = projector_matrix({0.0, Branch::minus});
  CHECK((plus - 2.0 * entrance_state_plus().matrix() / 2.0).norm() < 1e-15);
  CHECK((minus - entrance_state_minus().matrix()).norm() < 1e-15);
}

TEST_CASE("projector algebra for random phases") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double th = u(rng);
    const Matrix2c p = projector_matrix({th, Branch::plus});
    const Matrix2c m = projector_matrix({th, Branch::minus});
    CHECK((p + m - Matrix2c::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((m * m - m).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(p.trace() - 1.0) < 1e-15);
    const auto [hi, lo] = ct::quadratic_eigenvalues(p);
    CHECK(hi == doctest::Approx(1.0));
    CHECK(std::abs(lo) < 1e-14);
  }
}

TEST_CASE("intensity examples") {
  const DensityMatrix r1 = entrance_state_plus();
  CHECK(intensity(r1, {0.0, Branch::plus}) == doctest::Approx(1.0));
  CHECK(std::abs(intensity(r1, {0.0, Branch::minus})) < 1e-15);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    const double th = u(rng);
    CHECK(intensity(maximally_mixed(), {th, Branch::plus}) == doctest::Approx(0.5));
    const DensityMatrix rho = ct::random_state(rng);
    const double ip = intensity(rho, {th, Branch::plus});
    const double im = intensity(rho, {th, Branch::minus});
    CHECK(ip + im == doctest::Approx(rho.trace()).epsilon(1e-15));
    CHECK(ip >= -1e-10);
    CHECK(ip <= 1.0 + 1e-10);
  }
}

TEST_CASE("ideal pattern without dissipation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double th = u(rng), w = 1e-20 * u(rng), t = kRefT;
    CHECK(ideal_pattern(th, w, t, {}, Branch::plus) ==
          doctest::Approx(0.5 * (1.0 + std::cos(th + 2.0 * w * t))));
  }
  const double w = pi / (2.0 * kRefT);
  CHECK(std::abs(ideal_pattern(0.0, w, kRefT, {}, Branch::plus)) < 1e-15);
  CHECK(ideal_pattern(0.0, w, kRefT, {}, Branch::minus) == doctest::Approx(1.0));
}

TEST_CASE("ideal pattern is the trace of the first-order state") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    DissipationParams d = i % 2 ? ct::random_cp_params(rng) : ct::random_perturbed_params(rng);
    d.a = std::abs(d.a), d.alpha = std::abs(d.alpha), d.gamma = std::abs(d.gamma);
    // first-order regime: every dissipative constant times t below 0.2
    const double t = u(rng) * 0.2 / std::max(d.a + d.alpha, d.max_abs());
    const double w = (u(rng) - 0.5) * 20.0 / t;
    const double th = (u(rng) - 0.5) * 4.0 * pi;
    const DensityMatrix rho = propagate_perturbative({entrance_state_plus(), {0.0, w}, d, t}).rho;
    for (Branch b : {Branch::plus, Branch::minus}) {
      CHECK(std::abs(ideal_pattern(th, w, t, d, b) - intensity(rho, {th, b})) <= 1e-12);
    }
    CHECK(ideal_pattern(th, w, t, d, Branch::plus) + ideal_pattern(th, w, t, d, Branch::minus) ==
          1.0);
  }
}

TEST_CASE("resummed damping differs from the linearized form at second order") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const DissipationParams d = ct::random_cp_params(rng);
    const double At = 0.2 * u(rng);
    const double t = At / (d.a + d.alpha);
    const double w = 3.0 / t, th = u(rng);
    const double lin = ideal_pattern(th, w, t, d, Branch::plus, DampingForm::linearized);
    const double res = ideal_pattern(th, w, t, d, Branch::plus, DampingForm::exponential);
    CHECK(std::abs(lin - res) <= At * At / 4.0 + 1e-15);
  }
}

TEST_CASE("count pattern examples") {
  CountModel flat;
  flat.n0_plus = flat.n0_minus = 500;
  flat.contrast_plus = flat.contrast_minus = 0.0;
  for (double phi : {-7.0, 0.0, 1.3}) {
    CHECK(count_pattern(flat, phi, Branch::plus) == 500.0);
    CHECK(count_pattern(flat, phi, Branch::minus) == 500.0);
  }

  const FringeParams f{300.0, 0.4, 0.05, 0.0};
  CHECK(fringe_counts(f, 0.0, Branch::plus) == doctest::Approx(300.0 * 1.45));
  CHECK(fringe_counts(f, 0.0, Branch::minus) == doctest::Approx(300.0 * 0.55));

  const CountModel m = published_model();
  CHECK(m.P(Branch::minus) == doctest::Approx(0.46).epsilon(0.01 / 0.46));
  CHECK(m.Q(Branch::minus) == doctest::Approx(0.06).epsilon(0.01 / 0.06));
  CHECK(count_pattern(m, 0.0, Branch::minus) ==
        doctest::Approx(366.0 * (1.0 - m.P(Branch::minus) * std::cos(0.03) - m.Q(Branch::minus))));
}

TEST_CASE("count pattern matches the ideal pattern under phi = 2 omega t") {
  const CountModel m = [] {
    CountModel c = published_model();
    c.contrast_plus = c.contrast_minus = 1.0;
    c.n0_plus = c.n0_minus = 1.0;
    c.theta = 0.4;
    return c;
  }();
  const DissipationParams d{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  for (double phi : {-5.0, -1.0, 0.5, 2.0}) {
    CountModel z = m;
    z.A = z.B_mod = 0.0;
    const double w = phi / (2.0 * kRefT);
    CHECK(0.5 * count_pattern(z, phi, Branch::plus) ==
          doctest::Approx(ideal_pattern(z.theta, w, kRefT, d, Branch::plus)));
  }
}

TEST_CASE("the P term is 2 pi periodic") {
  const FringeParams f{400.0, 0.3, 0.0, 0.7};
  for (double phi : {-6.0, -0.2, 1.1, 4.0}) {
    CHECK(fringe_counts(f, phi, Branch::plus) ==
          doctest::Approx(fringe_counts(f, phi + 2.0 * pi, Branch::plus)).epsilon(1e-13));
  }
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(1e-9) == doctest::Approx(1.0));
  CHECK(sinc(pi) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("contrast from extrema") {
  CHECK(contrast_from_extrema(100, 100) == 0.0);
  CHECK(contrast_from_extrema(200, 0) == 1.0);
  CHECK_THROWS_AS(contrast_from_extrema(10, 20), std::invalid_argument);
  CHECK_THROWS_AS(contrast_from_extrema(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(contrast_from_extrema(10, -1), std::invalid_argument);

  for (double c : {0.19, 0.54, 0.9}) {
    const FringeParams f{500.0, c, 0.0, 0.3};
    CHECK(curve_contrast(f, Branch::plus, -3 * pi, 3 * pi, 20001) ==
          doctest::Approx(c).epsilon(1e-6));
    CHECK(curve_contrast(f, Branch::minus, -3 * pi, 3 * pi, 20001) ==
          doctest::Approx(c).epsilon(1e-6));
  }
}

TEST_CASE("extrema contrast systematic at published scale is below the statistical error") {
  // The extrema of a dissipative curve see P and the sinc term rather than
  // the calibration contrast itself.
  const CountModel m = published_model();
  const double sigma_stat[] = {0.02, 0.03};  // published contrast errors, plus / minus
  for (Branch b : {Branch::plus, Branch::minus}) {
    const double c = curve_contrast(m.fringe(b), b, -3 * pi, 3 * pi);
    const double systematic = c - m.contrast(b);
    MESSAGE((b == Branch::plus ? "plus" : "minus") << ": extrema contrast " << c << ", calibration " << m.contrast(b));
    CHECK(systematic < 0.0);
    CHECK(std::abs(systematic) < sigma_stat[b == Branch::plus ? 0 : 1]);
  }
  // vanishes with the dissipation
  CountModel z = m;
  z.A = z.B_mod = 0.0;
  CHECK(curve_contrast(z.fringe(Branch::minus), Branch::minus, -3 * pi, 3 * pi) ==
        doctest::Approx(0.54).epsilon(1e-6));
}

TEST_CASE("conservation residual") {
  CountModel sym;
  sym.n0_plus = sym.n0_minus = 400;
  sym.contrast_plus = sym.contrast_minus = 0.3;
  CHECK(conservation_residual(sym).value == 0.0);
  CHECK(conservation_residual(sym).significance() == 0.0);

  const ConservationResidual r =
      conservation_residual({942, 0}, {0.19, 0.02}, {366, 0}, {0.54, 0.03});
  CHECK(r.value == doctest::Approx(942 * 0.19 - 366 * 0.54));
  CHECK(r.sigma == doctest::Approx(std::hypot(942 * 0.02, 366 * 0.03)));
  CHECK(r.significance() <= 1.5);

  const ConservationResidual r2 =
      conservation_residual({942, 0}, {0.20, 0.02}, {366, 0}, {0.54, 0.03});
  CHECK(r2.value == doctest::Approx(-9.24));

  const ConservationResidual inf{1.0, 0.0};
  CHECK(std::isinf(inf.significance()));
}

TEST_CASE("simplified contrast") {
  CHECK(simplified_contrast(0.46, 0.06, 0.03) == doctest::Approx(0.52).epsilon(0.001 / 0.52));
  const double cp = simplified_contrast(0.17, 0.02, 0.09);
  CHECK(cp >= 0.19);
  CHECK(cp <= 0.20);
  CHECK(simplified_contrast(0.33, 0.0, 1.0) == 0.33);
  CHECK_THROWS_AS(simplified_contrast(0.4, 0.1, pi / 2), std::invalid_argument);
}

TEST_CASE("phase grid") {
  const auto g = phase_grid(-3 * pi, 3 * pi, 32);
  REQUIRE(g.size() == 32);
  CHECK(g.front() == -3 * pi);
  CHECK(g.back() == 3 * pi);
  CHECK(phase_grid(1.0, 2.0, 1) == std::vector<double>{1.0});
  CHECK_THROWS(phase_grid(0, 1, 0));
}

TEST_CASE("fringe csv round trip and defaults") {
  std::vector<FringeSample> s{{-1.5, 120, 80, 10.954451150103322, 8.94427190999916},
                              {0.25, 0, 7, 1.0, 2.5}};
  std::stringstream buf;
  write_fringe_csv(buf, s);
  const auto back = read_fringe_csv(buf);
  REQUIRE(back.size() == 2);
  CHECK(back[0].phi == s[0].phi);
  CHECK(back[0].sigma_plus == s[0].sigma_plus);
  CHECK(back[1].counts_minus == 7);
  CHECK(back[1].sigma_minus == 2.5);

  std::istringstream reordered(
      "# comment\nn_minus,phi,n_plus\n9,0.5,16\n\n0,1.0,4\n");
  const auto r = read_fringe_csv(reordered);
  REQUIRE(r.size() == 2);
  CHECK(r[0].phi == 0.5);
  CHECK(r[0].counts_plus == 16);
  CHECK(r[0].sigma_plus == 4.0);
  CHECK(r[0].sigma_minus == 3.0);
  CHECK(r[1].sigma_minus == 1.0);

  std::istringstream empty_sigma("phi,n_plus,sigma_plus,n_minus,sigma_minus\n0,25,,36,\n");
  const auto e = read_fringe_csv(empty_sigma);
  CHECK(e[0].sigma_plus == 5.0);
  CHECK(e[0].sigma_minus == 6.0);
}

TEST_CASE("fringe csv errors carry line numbers") {
  auto message = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_fringe_csv(in);
    } catch (const std::runtime_error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("").find("missing header") != std::string::npos);
  CHECK(message("phi,n_plus\n0,1\n").find("n_minus") != std::string::npos);
  CHECK(message("phi,n_plus,n_minus\n0,1,2\n0,x,2\n").find("line 3") != std::string::npos);
  CHECK(message("phi,n_plus,n_minus\n0,-1,2\n").find("non-negative") != std::string::npos);
  CHECK(message("phi,n_plus,n_minus\n0,1\n").find("line 2") != std::string::npos);
  CHECK(message("phi,n_plus,sigma_plus,n_minus\n0,1,0,2\n").find("sigma_plus") !=
        std::string::npos);
}
