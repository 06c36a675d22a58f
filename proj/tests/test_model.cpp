#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "demon/model.hpp"
#include "oracles.hpp"

using namespace demon;

TEST_CASE("fermi occupation fixed points") {
  ReservoirSpec res;
  res.beta = 3.7;
  res.mu = -2.5;
  CHECK(fermi_occupation(res.mu, res) == doctest::Approx(0.5).epsilon(1e-15));

  res.beta = 1.0;
  res.mu = 0.0;
  CHECK(fermi_occupation(800.0, res) == 0.0);  // underflow-safe branch
  CHECK(fermi_occupation(-800.0, res) == 1.0);

  // 1/(e^{-1} + 1), pinned by high-precision evaluation
  res.beta = 0.1;
  res.mu = 10.0;
  CHECK(fermi_occupation(0.0, res) ==
        doctest::Approx(0.73105857863000487925).epsilon(1e-15));
}

TEST_CASE("fermi occupation is monotone decreasing and bounded") {
  ReservoirSpec res;
  res.beta = 0.7;
  res.mu = 1.3;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const double fa = fermi_occupation(a, res);
    const double fb = fermi_occupation(b, res);
    CHECK(fa >= fb);
    CHECK(fa >= 0.0);
    CHECK(fa <= 1.0);
  }
}

TEST_CASE("spectral density peak, cutoffs and feedback scaling") {
  FeedbackProtocol fb;
  fb.delta = 0.0;
  ReservoirSpec res;
  res.label = Reservoir::L;
  res.gamma0 = 0.5;
  res.eps_center = 5.0;
  res.delta_width = 5.0;
  res.omega_min = 0.0;
  res.omega_max = 20.0;

  CHECK(spectral_density(res.eps_center, res, Outcome::Empty, fb) ==
        doctest::Approx(res.gamma0).epsilon(1e-15));
  CHECK(spectral_density(-0.5, res, Outcome::Empty, fb) == 0.0);
  CHECK(spectral_density(20.5, res, Outcome::Empty, fb) == 0.0);

  // transport left lead, delta = 1, nu = E, w = 0: 0.5 e 25/50 = e/4
  fb.delta = 1.0;
  CHECK(spectral_density(0.0, res, Outcome::Empty, fb) ==
        doctest::Approx(0.67957045711476131).epsilon(1e-14));
}

TEST_CASE("feedback scaling table") {
  FeedbackProtocol fb;
  fb.delta = 0.8;
  CHECK(coupling_scale(Reservoir::L, Outcome::Empty, fb) ==
        doctest::Approx(std::exp(0.8)));
  CHECK(coupling_scale(Reservoir::L, Outcome::Filled, fb) ==
        doctest::Approx(std::exp(-0.8)));
  CHECK(coupling_scale(Reservoir::R, Outcome::Empty, fb) ==
        doctest::Approx(std::exp(-0.8)));
  CHECK(coupling_scale(Reservoir::R, Outcome::Filled, fb) ==
        doctest::Approx(std::exp(0.8)));
}

TEST_CASE("conditioned couplings multiply back to the bare product") {
  ReservoirSpec res;
  res.label = Reservoir::L;
  res.gamma0 = 0.3;
  res.eps_center = 2.0;
  res.delta_width = 1.5;
  res.omega_min = -10.0;
  res.omega_max = 10.0;

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uw(-12.0, 12.0);
  std::uniform_real_distribution<double> ud(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const double w = uw(rng);
    FeedbackProtocol with{1.0, ud(rng)};
    FeedbackProtocol without{1.0, 0.0};
    const double lhs = spectral_density(w, res, Outcome::Empty, with) *
                       spectral_density(w, res, Outcome::Filled, with);
    const double rhs = spectral_density(w, res, Outcome::Empty, without) *
                       spectral_density(w, res, Outcome::Filled, without);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    CHECK(spectral_density(w, res, Outcome::Empty, with) >= 0.0);
  }
}

TEST_CASE("effective support realizes infinite cutoffs") {
  ReservoirSpec res;
  res.beta = 0.1;
  res.mu = 10.0;
  res.eps_center = -1.0;
  res.delta_width = 5.0;

  SUBCASE("finite cutoffs pass through") {
    res.omega_min = 0.0;
    res.omega_max = 20.0;
    const auto [lo, hi] = effective_support(res);
    CHECK(lo == 0.0);
    CHECK(hi == 20.0);
  }
  SUBCASE("infinite cutoffs widen to Fermi and Lorentzian windows") {
    res.omega_min = -kInf;
    res.omega_max = kInf;
    const auto [lo, hi] = effective_support(res);
    CHECK(lo == doctest::Approx(std::min(10.0 - 400.0, -1.0 - 250.0)));
    CHECK(hi == doctest::Approx(std::max(10.0 + 400.0, -1.0 + 250.0)));
  }
}

TEST_CASE("config validation") {
  SystemConfig cfg = oracle::transport_config();
  CHECK_NOTHROW(cfg.validate());

  SystemConfig bad = cfg;
  bad.left.beta = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = cfg;
  bad.right.omega_min = 5.0;
  bad.right.omega_max = 5.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = cfg;
  bad.feedback.tau = -0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  CHECK(cfg.bias() == doctest::Approx(-10.0));
}
