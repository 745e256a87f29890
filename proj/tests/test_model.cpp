#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rheokin/model.hpp"
#include "rheokin/quadrature.hpp"

using namespace rheokin;

namespace {

// Independent occupation-time oracle: dense scan for sign changes of
// |sigma - gamma(t) + gamma(u)| - sigma_c, bisection of each crossing, then
// assembly of the measure of {u : chi = 1}. Uses only gamma evaluations.
double occupation_oracle(const ShearProfile& profile, double t, double sigma, double sigma_c) {
  auto level = [&](double u) {
    return std::abs(sigma - profile.accumulated(t) + profile.accumulated(u)) - sigma_c;
  };
  const int n = 20000;
  const double du = t / n;
  double total = 0.0;
  double u_prev = 0.0, f_prev = level(0.0);
  double open_start = f_prev > 0.0 ? 0.0 : -1.0;
  for (int i = 1; i <= n; ++i) {
    const double u = du * i;
    const double f = level(u);
    if ((f > 0.0) != (f_prev > 0.0)) {
      double a = u_prev, b = u;
      for (int k = 0; k < 60; ++k) {
        const double m = 0.5 * (a + b);
        if ((level(m) > 0.0) == (f_prev > 0.0))
          a = m;
        else
          b = m;
      }
      const double cross = 0.5 * (a + b);
      if (f > 0.0) {
        open_start = cross;
      } else {
        total += cross - open_start;
        open_start = -1.0;
      }
    }
    u_prev = u;
    f_prev = f;
  }
  if (open_start >= 0.0) total += t - open_start;
  return total;
}

// Bisection inverse of the accumulation, independent of the closed forms.
double inverse_oracle(const ShearProfile& profile, double y, double t_hi) {
  double a = 0.0, b = t_hi;
  for (int k = 0; k < 200; ++k) {
    const double m = 0.5 * (a + b);
    if (profile.accumulated(m) < y)
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("indicator on and off the threshold") {
  CHECK(indicator(0.0, 2.0) == 0);
  CHECK(indicator(2.0, 2.0) == 0);   // closed interval contains its endpoint
  CHECK(indicator(-2.0, 2.0) == 0);
  CHECK(indicator(-5.0, 2.0) == 1);
  CHECK(indicator(2.0000001, 2.0) == 1);
}

TEST_CASE("indicator is even and monotone in |sigma|") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-8.0, 8.0);
  for (int i = 0; i < 200; ++i) {
    const double s = uni(rng);
    CHECK(indicator(s, 2.0) == indicator(-s, 2.0));
    if (indicator(s, 2.0) == 1) CHECK(indicator(1.5 * s, 2.0) == 1);
  }
}

TEST_CASE("stationary density branches") {
  CHECK(stationary_density(-0.5, 1.0, 2.0) == 0.0);
  CHECK(stationary_density(1.0, 1.0, 2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(stationary_density(3.0, 1.0, 2.0) ==
        doctest::Approx(std::exp(-1.0) / 3.0).epsilon(1e-15));
  CHECK(stationary_density(3.0, 1.0, 2.0) == doctest::Approx(0.122626).epsilon(1e-5));
  // mirror argument for negative rates
  CHECK(stationary_density(-3.0, -1.0, 2.0) == stationary_density(3.0, 1.0, 2.0));
  CHECK_THROWS_AS(stationary_density(1.0, 0.0, 2.0), DegenerateShearError);
}

TEST_CASE("stationary density integrates to one") {
  for (double g : {0.1, 0.5, 1.0, 2.0}) {
    const double sc = 2.0;
    const double m = sc + 20.0 * g;
    auto f = [&](double s) { return stationary_density(s, g, sc); };
    const double body = quadrature::integrate(f, -m, m, {0.0, sc}, 1e-12);
    const double tail = g / (sc + g) * std::exp(-(m - sc) / g);  // analytic remainder
    CHECK(body + tail == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("stationary density is a pointwise fixed point off the kinks") {
  const double g = 0.7, sc = 2.0;
  for (double s : {0.4, 1.1, 2.7, 4.2}) {
    auto residual = [&](double h) {
      const double dp = (stationary_density(s + h, g, sc) - stationary_density(s - h, g, sc)) /
                        (2.0 * h);
      return std::abs(g * dp + indicator(s, sc) * stationary_density(s, g, sc));
    };
    const double r1 = residual(1e-3), r2 = residual(5e-4);
    CHECK(r1 <= 1e-3);
    CHECK(r2 <= r1 + 1e-12);
  }
}

TEST_CASE("steady observables at reference points") {
  const SteadyObservables so = steady_observables(1.0, 2.0);
  CHECK(so.f_inf == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(so.tau_inf == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK(so.beta_inf == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(so.kappa == doctest::Approx(1.8).epsilon(1e-15));
  CHECK(steady_observables(2.0, 2.0).kappa == doctest::Approx(1.6).epsilon(1e-15));
  CHECK(kappa_closure(1e-9, 2.0) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(kappa_closure(0.0, 2.0) == 2.0);
  CHECK_THROWS_AS(steady_observables(0.0, 2.0), DegenerateShearError);
  CHECK_THROWS_AS(steady_observables(-1.0, 2.0), DegenerateShearError);
}

TEST_CASE("closure identity kappa f tau = gdot over a log grid") {
  for (int i = 0; i <= 24; ++i) {
    const double g = std::pow(10.0, -3.0 + 6.0 * i / 24.0);
    const SteadyObservables so = steady_observables(g, 2.0);
    CHECK(std::abs(so.kappa * so.f_inf * so.tau_inf - g) <= 1e-12 * g);
  }
}

TEST_CASE("accumulated shear closed forms") {
  CHECK(gamma_accum(ShearProfile::constant(0.5), 4.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(gamma_accum(ShearProfile::affine(0.3, 2.0), 0.0) == 0.0);
  const double eps = 0.01;
  const ShearProfile ts = ShearProfile::time_scaled(ShearProfile::ramp(1.0), eps);
  for (double t : {0.5, 2.0, 7.0})
    CHECK(gamma_accum(ts, t) == doctest::Approx(eps * t * t / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_accum(ShearProfile::constant(1.0), -0.1), OutOfRangeError);
}

TEST_CASE("profile construction rejects degenerate rates") {
  CHECK_THROWS_AS(ShearProfile::constant(0.0), DegenerateShearError);
  CHECK_THROWS_AS(ShearProfile::constant(-1.0), DegenerateShearError);
  CHECK_THROWS_AS(ShearProfile::ramp(-0.5), DegenerateShearError);
  CHECK_THROWS_AS(ShearProfile::affine(-0.1, 1.0), DegenerateShearError);
}

TEST_CASE("inverse accumulation") {
  CHECK(gamma_inverse(ShearProfile::constant(0.5), 2.0, 10.0) ==
        doctest::Approx(4.0).epsilon(1e-14));

  const ShearProfile aff = ShearProfile::affine(0.1, 1.0);
  const double expected = -0.1 + std::sqrt(0.01 + 2.0);
  CHECK(gamma_inverse(aff, 1.0, 10.0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(gamma_inverse(aff, 1.0, 10.0) ==
        doctest::Approx(inverse_oracle(aff, 1.0, 10.0)).epsilon(1e-11));

  // round trip on random times
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(0.0, 9.0);
  const ShearProfile ts = ShearProfile::time_scaled(aff, 0.25);
  for (int i = 0; i < 100; ++i) {
    const double t = uni(rng);
    for (const ShearProfile* p : {&aff, &ts}) {
      const double y = gamma_accum(*p, t);
      CHECK(std::abs(gamma_inverse(*p, y, 10.0) - t) <= 1e-10 * (1.0 + t));
    }
  }

  CHECK_THROWS_AS(gamma_inverse(ShearProfile::constant(1.0), 100.0, 10.0), OutOfRangeError);
  CHECK_THROWS_AS(gamma_inverse(ShearProfile::ramp(1.0), 1.0, 10.0), DegenerateShearError);
}

TEST_CASE("inverse accumulation is Lipschitz with constant 1/m") {
  const ShearProfile aff = ShearProfile::affine(0.4, 0.7);
  const double m = aff.lower_bound();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(0.0, gamma_accum(aff, 8.0));
  for (int i = 0; i < 100; ++i) {
    const double y1 = uni(rng), y2 = uni(rng);
    const double d = std::abs(gamma_inverse(aff, y1, 8.0) - gamma_inverse(aff, y2, 8.0));
    CHECK(d <= std::abs(y1 - y2) / m + 1e-12);
  }
}

TEST_CASE("occupation time matches the proof's case table") {
  const ShearProfile one = ShearProfile::constant(1.0);
  CHECK(occupation_time(one, 5.0, -3.0, 2.0) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(occupation_time(one, 5.0, 0.0, 2.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(occupation_time(one, 5.0, 6.0, 2.0) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("occupation time agrees with the quadrature oracle") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ut(0.3, 9.0), us(-6.0, 12.0);
  const ShearProfile profiles[] = {ShearProfile::constant(0.8), ShearProfile::affine(0.2, 0.5),
                                   ShearProfile::time_scaled(ShearProfile::affine(0.5, 1.0), 0.7)};
  for (const ShearProfile& p : profiles) {
    for (int i = 0; i < 100; ++i) {
      const double t = ut(rng), s = us(rng);
      const double z = occupation_time(p, t, s, 2.0);
      CHECK(std::abs(z - occupation_oracle(p, t, s, 2.0)) <= 1e-8 * (1.0 + t));
    }
  }
}

TEST_CASE("occupation time lower bound for long times") {
  const double sc = 2.0;
  for (const ShearProfile& p : {ShearProfile::constant(0.6), ShearProfile::affine(0.5, 0.3)}) {
    const double m = p.lower_bound();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ut(2.0 * sc / m + 0.5, 2.0 * sc / m + 20.0),
        us(-5.0, 25.0);
    for (int i = 0; i < 50; ++i) {
      const double t = ut(rng);
      CHECK(occupation_time(p, t, us(rng), sc) >= t - 2.0 * sc / m - 1e-10);
    }
  }
}

TEST_CASE("model params validation") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  p.sigma_c = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = ModelParams{};
  p.n_cells = 4;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = ModelParams{};
  p.m_sigma = 1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}
