#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "demon/quadrature.hpp"
#include "oracles.hpp"

using namespace demon;
using cd = std::complex<double>;

TEST_CASE("polynomials and exponentials are integrated to machine precision") {
  quad::Options opts;
  opts.abs_tol = 1e-13;

  const auto poly = [](double x) { return cd(std::pow(x, 7) - 3.0 * x * x); };
  const auto r = quad::integrate(poly, {-1.0, 0.5, 2.0}, opts);
  // int_{-1}^{2} x^7 - 3 x^2 = (2^8 - 1)/8 - (8 + 1) = 255/8 - 9
  CHECK(r.value.real() == doctest::Approx(255.0 / 8.0 - 9.0).epsilon(1e-14));
  CHECK(std::abs(r.value.imag()) < 1e-15);

  const auto decay = [](double x) { return cd(std::exp(-x)); };
  const auto r2 = quad::integrate(decay, {0.0, 1.0, 80.0}, opts);
  CHECK(r2.value.real() == doctest::Approx(1.0 - std::exp(-80.0)).epsilon(1e-13));
}

TEST_CASE("complex phase integral matches the closed form") {
  quad::Options opts;
  opts.abs_tol = 1e-12;
  const double k = 17.0, a = -2.0, b = 3.0;
  const auto f = [k](double x) { return std::exp(cd(0.0, k * x)); };
  std::vector<double> pts{a};
  for (int i = 1; i < 40; ++i) pts.push_back(a + (b - a) * i / 40.0);
  pts.push_back(b);
  const auto r = quad::integrate(f, pts, opts);
  const cd expected = (std::exp(cd(0.0, k * b)) - std::exp(cd(0.0, k * a))) / cd(0.0, k);
  CHECK(std::abs(r.value - expected) < 1e-12);
}

TEST_CASE("oscillatory sinc^2 integral agrees with the dense-grid oracle") {
  quad::Options opts;
  opts.abs_tol = 1e-11;
  const double t = 50.0;
  const auto f = [t](double w) {
    const double arg = 0.5 * t * (w - 1.0);
    const double s = oracle::sinc_ref(arg);
    return cd(s * s / ((w - 5.0) * (w - 5.0) + 25.0));
  };
  // anchor panels at the kernel zeros
  std::vector<double> pts{0.0};
  const double spacing = 2.0 * M_PI / t;
  for (double z = 1.0 + spacing; z < 20.0; z += spacing) pts.push_back(z);
  for (double z = 1.0 - spacing; z > 0.0; z -= spacing) pts.push_back(z);
  pts.push_back(20.0);
  std::sort(pts.begin(), pts.end());

  const auto r = quad::integrate(f, pts, opts);
  const cd ref = oracle::trapezoid(f, 0.0, 20.0, 2000000);
  CHECK(std::abs(r.value - ref) < 1e-8);
}

TEST_CASE("budget exhaustion raises QuadratureFailure") {
  quad::Options opts;
  opts.abs_tol = 1e-14;
  opts.max_intervals = 8;
  const auto nasty = [](double x) { return cd(std::sin(200.0 * x)); };
  CHECK_THROWS_AS(quad::integrate(nasty, {0.0, 1.0}, opts), QuadratureFailure);
}

TEST_CASE("family evaluation matches independent integration") {
  quad::Options opts;
  opts.abs_tol = 1e-12;
  const auto base = [](double w) {
    return cd(std::exp(-0.5 * w * w));
  };
  const auto shifted = [](double w) {
    return std::exp(-0.5 * w * w) * std::exp(cd(0.0, 0.3 * w));
  };
  const auto weighted = [](double w) { return cd(0.0, w) * std::exp(-0.5 * w * w); };

  const std::vector<double> pts{-10.0, 0.0, 10.0};
  const auto fam = quad::integrate_family({base, shifted, weighted}, pts, opts);
  const auto r1 = quad::integrate(shifted, pts, opts);
  const auto r2 = quad::integrate(weighted, pts, opts);
  CHECK(std::abs(fam.values[1] - r1.value) < 1e-12);
  CHECK(std::abs(fam.values[2] - r2.value) < 1e-12);
  // gaussian moments: int e^{-w^2/2} = sqrt(2 pi), odd weight integrates to 0
  CHECK(fam.values[0].real() == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-12));
  CHECK(std::abs(fam.values[2]) < 1e-12);
}

TEST_CASE("breakpoint clipping dedupes and sorts") {
  const auto pts = quad::clip_breakpoints(0.0, 10.0, {12.0, 5.0, -3.0, 5.0, 2.0});
  REQUIRE(pts.size() == 4);
  CHECK(pts[0] == 0.0);
  CHECK(pts[1] == 2.0);
  CHECK(pts[2] == 5.0);
  CHECK(pts[3] == 10.0);
}
