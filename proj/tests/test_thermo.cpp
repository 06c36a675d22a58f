#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "demon/sweep.hpp"
#include "demon/thermo.hpp"
#include "oracles.hpp"

using namespace demon;

TEST_CASE("entropy of the 2-vector") {
  CHECK(shannon_entropy({0.5, 0.5}) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(shannon_entropy({1.0, 0.0}) == 0.0);
  CHECK(shannon_entropy({0.0, 1.0}) == 0.0);
}

TEST_CASE("power sign conventions") {
  SUBCASE("zero bias gives exactly zero power") {
    SystemConfig cfg = oracle::transport_config(1.0);
    cfg.right.mu = cfg.left.mu;
    const ThermoReport rep = thermo_report(0.5, cfg);
    CHECK(rep.power == 0.0);
  }
  SUBCASE("no feedback wastes power") {
    const SystemConfig cfg = oracle::transport_config(0.0);
    CHECK(electric_power(0.5, cfg) < 0.0);
  }
  SUBCASE("the demon generates power against the bias") {
    const SystemConfig cfg = oracle::transport_config(1.0);
    CHECK(electric_power(0.5, cfg) > 0.0);
  }
}

TEST_CASE("gain definition") {
  SUBCASE("arithmetic: P tau = 2, dE_fb = 0.05 gives G = 40") {
    SystemConfig cfg = oracle::transport_config(1.0);
    cfg.left.mu = 0.0;
    cfg.right.mu = -2.0;  // V = +2
    const double tau = 1.0;

    MomentBundle bundle;
    bundle.stationary.tau = tau;
    bundle.stationary.sigma = {0.5, 0.5};
    bundle.total.dn = {1.0, -1.0};   // P = -dn_R V / tau = 2
    bundle.total.dE = {0.03, 0.02};  // dE_fb = 0.05
    for (int vi = 0; vi < 2; ++vi) {
      bundle.branch[vi].p_branch = 0.5;
      bundle.branch[vi].dn = bundle.total.dn;
      bundle.branch[vi].dE = bundle.total.dE;
      bundle.branch_final[vi] = {0.5, 0.5};
    }
    const ThermoReport rep = thermo_report_from(bundle, tau, cfg);
    CHECK(rep.power == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(rep.feedback_energy == doctest::Approx(0.05).epsilon(1e-14));
    REQUIRE(rep.gain.has_value());
    CHECK(*rep.gain == doctest::Approx(40.0).epsilon(1e-12));
  }

  SUBCASE("not defined when power or feedback energy is nonpositive") {
    const SystemConfig cfg = oracle::transport_config(0.0);  // P < 0
    CHECK(!gain(0.5, cfg).has_value());
  }
}

TEST_CASE("heat bookkeeping") {
  SUBCASE("zero chemical potentials make heat equal energy") {
    SystemConfig cfg = oracle::transport_config(1.0);
    cfg.left.mu = 0.0;
    cfg.right.mu = 0.0;
    const ThermoReport rep = thermo_report(0.5, cfg);
    CHECK(rep.heat[0] == doctest::Approx(rep.dE[0]).epsilon(1e-14));
    CHECK(rep.heat[1] == doctest::Approx(rep.dE[1]).epsilon(1e-14));
  }

  SUBCASE("first-law identity holds to machine precision") {
    const SystemConfig cfg = oracle::transport_config(1.0);
    for (double tau : {0.1, 0.5, 2.0}) {
      const ThermoReport rep = thermo_report(tau, cfg);
      const double rhs = rep.heat[0] + cfg.left.mu * rep.dn[0] + rep.heat[1] +
                         cfg.right.mu * rep.dn[1];
      CHECK(std::abs(rep.feedback_energy - rhs) < 1e-12);
      CHECK(rep.heat_total == doctest::Approx(rep.heat[0] + rep.heat[1]));
    }
  }
}

TEST_CASE("entropy balance") {
  const SystemConfig cfg = oracle::transport_config(1.0);

  SUBCASE("Zeno freezing: entropies vanish as tau -> 0") {
    const EntropyBalance e = entropy_balance(1e-3, cfg);
    CHECK(e.entropy_sys >= 0.0);
    CHECK(e.entropy_sys < 1e-3);
    CHECK(std::abs(e.information) < 1e-3);
  }

  SUBCASE("Landauer bound and branch second law at assorted points") {
    for (double tau : {0.05, 0.2, 0.8, 3.0}) {
      const ThermoReport rep = thermo_report(tau, cfg);
      CHECK(rep.entropy_sys >= 0.0);
      CHECK(rep.entropy_sys <= std::log(2.0) + 1e-12);
      CHECK(rep.information <= 0.0);
      for (int vi = 0; vi < 2; ++vi)
        CHECK(rep.branch[vi].dS + rep.branch[vi].dSe >= -1e-9);
      if (rep.efficiency) CHECK(*rep.efficiency <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("power map structure on a coarse grid") {
  // Most power at large negative bias and intermediate feedback times, and
  // power generation goes with a net heat loss in the reservoirs.
  const SystemConfig base = oracle::transport_config(1.0);
  const double mean_mu = 0.5 * (base.left.mu + base.right.mu);
  double best_p = -1e300, best_v = 0.0, best_tau = 0.0;
  int n_pos = 0, n_pos_qneg = 0;
  for (double tau : logspace(0.05, 3.0, 9)) {
    for (double v : linspace(-20.0, 20.0, 9)) {
      SystemConfig cfg = base;
      cfg.left.mu = mean_mu + 0.5 * v;
      cfg.right.mu = mean_mu - 0.5 * v;
      const ThermoReport rep = thermo_report(tau, cfg);
      if (rep.power > best_p) {
        best_p = rep.power;
        best_v = v;
        best_tau = tau;
      }
      if (rep.power > 0.0) {
        ++n_pos;
        if (rep.heat_total < 0.0) ++n_pos_qneg;
      }
    }
  }
  CHECK(best_v <= -10.0);
  CHECK(best_tau >= 0.2);
  CHECK(best_tau <= 1.2);
  // frozen regression value for this 9x9 grid
  CHECK(best_p == doctest::Approx(0.64165913709593114).epsilon(1e-8));
  REQUIRE(n_pos > 0);
  CHECK(static_cast<double>(n_pos_qneg) / n_pos >= 0.9);
}

TEST_CASE("per-reservoir heat asymmetry follows the bias sign") {
  // Where the total reservoir heat is positive, the lead on the low-potential
  // side of the bias takes up most of it: Q_R dominates for V < 0, Q_L for
  // V > 0. Bias applied symmetrically around the configured mean potential.
  const SystemConfig base = oracle::transport_config(1.0);
  const double mean_mu = 0.5 * (base.left.mu + base.right.mu);
  int hits_neg = 0, right_dominates = 0;
  int hits_pos = 0, left_dominates = 0;
  for (double v : {-18.0, -14.0, 14.0, 18.0}) {
    for (double tau : {1.0, 2.0, 3.0}) {
      SystemConfig cfg = base;
      cfg.left.mu = mean_mu + 0.5 * v;
      cfg.right.mu = mean_mu - 0.5 * v;
      const ThermoReport rep = thermo_report(tau, cfg);
      if (rep.heat_total <= 0.0) continue;
      if (v < 0.0) {
        ++hits_neg;
        if (rep.heat[1] > rep.heat[0]) ++right_dominates;
      } else {
        ++hits_pos;
        if (rep.heat[0] > rep.heat[1]) ++left_dominates;
      }
    }
  }
  REQUIRE(hits_neg > 0);
  REQUIRE(hits_pos > 0);
  CHECK(right_dominates == hits_neg);
  CHECK(left_dominates == hits_pos);
}
