#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "planckbits/distributions.hpp"

using namespace planckbits;
using doctest::Approx;

namespace {

DigitVector from_index(unsigned idx, int n) {
  std::vector<Bit> bits;
  for (int i = n - 1; i >= 0; --i) bits.push_back(to_bit((idx >> i) & 1U));
  return DigitVector::fractional(bits);
}

}  // namespace

TEST_CASE("beta_of") {
  const PhysicalConstants c;
  const double nu = c.k * 300.0 / c.h;
  CHECK(beta_of(nu, 300.0, c) == Approx(1.0).epsilon(1e-15));

  // mpmath at 30 digits with the CODATA constants
  CHECK(beta_of(5.0e14, 300.0, c) == Approx(79.9873845561036874687).epsilon(1e-14));

  CHECK(beta_of(5.0e14, 600.0, c) == beta_of(5.0e14, 300.0, c) / 2.0);

  CHECK_THROWS_AS(beta_of(0.0, 300.0), std::domain_error);
  CHECK_THROWS_AS(beta_of(1e12, -1.0), std::domain_error);
  CHECK_THROWS_AS(beta_of(NAN, 300.0), std::domain_error);
  CHECK_THROWS_AS(beta_of(1e12, INFINITY), std::domain_error);

  SUBCASE("injectable constants reproduce the printed Boltzmann value") {
    PhysicalConstants printed;
    printed.h = 6.626e-27;
    printed.k = 1.831e-16;
    CHECK(beta_of(1e13, 500.0, printed) == Approx(6.626e-14 / (1.831e-16 * 500.0)));
    printed.k = 0.0;
    CHECK_THROWS_AS(beta_of(1e13, 500.0, printed), std::domain_error);
  }

  SUBCASE("ModeParams keeps beta consistent") {
    const ModeParams m(1e13, 500.0);
    CHECK(m.beta() == beta_of(1e13, 500.0));
    CHECK(m.quantum() == c.h * 1e13);
    CHECK_THROWS_AS(ModeParams(1e13, 0.0), std::domain_error);
  }
}

TEST_CASE("eta_pdf and eta_cdf") {
  CHECK(eta_pdf(0.0, 1.0) == 1.0);
  CHECK(eta_pdf(1.0, 1.0) == Approx(0.36787944117144233).epsilon(1e-15));
  CHECK(eta_pdf(-0.5, 1.0) == 0.0);
  CHECK(oracle::integrate([](double y) { return eta_pdf(y, 0.37); }, 0.0, INFINITY) ==
        Approx(1.0).epsilon(1e-10));

  CHECK(eta_cdf(0.0, 3.0) == 0.0);
  CHECK(eta_cdf(-1.0, 3.0) == 0.0);
  CHECK(eta_cdf(std::log(2.0), 1.0) == Approx(0.5).epsilon(1e-15));
  CHECK(eta_cdf(1e6, 1.0) == 1.0);
  for (double y : {0.1, 1.0, 5.0}) {
    const double fd = oracle::derivative([](double v) { return eta_cdf(v, 2.0); }, y);
    CHECK(std::abs(fd - eta_pdf(y, 2.0)) < 1e-6);
  }

  CHECK_THROWS_AS(eta_pdf(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(eta_cdf(1.0, -1.0), std::domain_error);
}

TEST_CASE("zeta_pdf and zeta_cdf") {
  CHECK(zeta_cdf(1.0, 3.0) == 1.0);
  CHECK(zeta_cdf(0.0, 3.0) == 0.0);
  CHECK(zeta_cdf(0.5, 1e-12) == Approx(0.5).epsilon(1e-9));
  CHECK(zeta_cdf(0.5, 0.0) == 0.5);
  CHECK(oracle::integrate([](double z) { return zeta_pdf(z, 7.3); }, 0.0, 1.0) ==
        Approx(1.0).epsilon(1e-12));

  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = zeta_cdf(i / 100.0, 2.5);
    CHECK(v > prev);
    prev = v;
  }
  for (double z : {0.1, 0.5, 0.9}) {
    for (double beta : {0.01, 1.0, 20.0}) {
      const double fd = oracle::derivative([beta](double v) { return zeta_cdf(v, beta); }, z);
      CHECK(std::abs(fd - zeta_pdf(z, beta)) < 1e-6);
    }
  }

  CHECK_THROWS_AS(zeta_pdf(1.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(zeta_cdf(-0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(zeta_cdf(0.5, -1.0), std::domain_error);
}

TEST_CASE("normalization of every density over a range of parameters") {
  for (double p : {0.01, 0.1, 1.0, 5.0, 20.0}) {
    CHECK(oracle::integrate([p](double y) { return eta_pdf(y, p); }, 0.0, INFINITY) ==
          Approx(1.0).epsilon(1e-9));
    CHECK(oracle::integrate([p](double z) { return zeta_pdf(z, p); }, 0.0, 1.0) ==
          Approx(1.0).epsilon(1e-9));
    for (double a : {-p, p}) {
      CHECK(oracle::integrate([a](double x) { return f_a(x, a); }, 0.0, 1.0) ==
            Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("zeta_mean") {
  CHECK(zeta_mean(0.0) == 0.5);
  // mpmath quadrature of z * f_zeta(z) at beta = 1
  CHECK(zeta_mean(1.0) == Approx(0.418023293130673575615).epsilon(1e-15));
  CHECK(oracle::integrate([](double z) { return z * zeta_pdf(z, 1.0); }, 0.0, 1.0) ==
        Approx(zeta_mean(1.0)).epsilon(1e-13));
  // 1/2 - beta/12 + O(beta^3)
  CHECK(std::abs(zeta_mean(1e-8) - (0.5 - 1e-8 / 12.0)) < 1e-15);
  CHECK(std::abs(zeta_mean(1e-8) - 0.5) < 1e-6);

  SUBCASE("continuous across the series cutoff") {
    const double below = zeta_mean(std::nextafter(1.0, 0.0));
    const double above = zeta_mean(1.0);
    CHECK(std::abs(below - above) < 1e-15);
  }

  SUBCASE("Planck-factor split holds") {
    for (double beta : {1e-4, 1e-3, 0.05, 1.0, 7.0, 50.0}) {
      CHECK(oracle::rel_err(zeta_mean(beta) + mean_occupation(beta), 1.0 / beta) < 1e-14);
    }
  }

  CHECK_THROWS_AS(zeta_mean(-1e-3), std::domain_error);
}

TEST_CASE("mean_occupation") {
  CHECK(mean_occupation(std::log(2.0)) == Approx(1.0).epsilon(1e-15));
  double truncated = 0.0;
  for (int n = 1; n <= 200; ++n) truncated += n * oracle::geometric_pmf(n, 1.0);
  CHECK(mean_occupation(1.0) == Approx(truncated).epsilon(1e-14));
  CHECK(mean_occupation(1.0) == Approx(0.581976706869326424385).epsilon(1e-15));
  CHECK(mean_occupation(800.0) == 0.0);
  CHECK(mean_occupation(2.0) < mean_occupation(1.0));
  CHECK_THROWS_AS(mean_occupation(0.0), std::domain_error);
}

TEST_CASE("planck_bose_pmf") {
  CHECK(planck_bose_pmf(0, 1.0) == 0.5);
  CHECK(planck_bose_pmf(1, 1.0) == 0.25);
  double sum = 0.0;
  for (int n = 0; n <= 500; ++n) sum += planck_bose_pmf(n, 3.0);
  CHECK(std::abs(sum - 1.0) < 1e-12);

  for (double beta : {0.3, 1.0, 3.0}) {
    const double nbar = mean_occupation(beta);
    for (int n : {0, 1, 7, 40}) {
      CHECK(oracle::rel_err(planck_bose_pmf(n, nbar), oracle::geometric_pmf(n, beta)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(planck_bose_pmf(-1, 1.0), std::domain_error);
  CHECK_THROWS_AS(planck_bose_pmf(0, 0.0), std::domain_error);
}

TEST_CASE("xi_entropy") {
  CHECK(xi_entropy(1.0) == Approx(2.0 * std::log(2.0)).epsilon(1e-15));
  CHECK(xi_entropy(0.5) == Approx(0.954771252442219227676).epsilon(1e-14));
  CHECK(xi_entropy(1e-12) < 1e-10);
  for (double nbar : {0.1, 1.0, 10.0}) {
    double direct = 0.0;
    for (int n = 0; n < 2000; ++n) {
      const double p = planck_bose_pmf(n, nbar);
      if (p == 0.0) break;
      direct -= p * std::log(p);
    }
    CHECK(std::abs(direct - xi_entropy(nbar)) < 1e-10);
  }
  CHECK_THROWS_AS(xi_entropy(0.0), std::domain_error);
}

TEST_CASE("Planck law and oscillator energy") {
  const PhysicalConstants c;
  const double nu = 1e13;
  const double t = 500.0;
  const double u = spectral_density(nu, t, c);
  const double rhs = mode_density(nu, c) * (oscillator_mean_energy(nu, t, c) - c.h * nu / 2.0);
  CHECK(oracle::rel_err(rhs, u) < 1e-14);

  // independent spelling of the formula
  const double direct = 8.0 * std::numbers::pi * nu * nu / std::pow(c.c, 3) * c.h * nu /
                        std::expm1(c.h * nu / (c.k * t));
  CHECK(oracle::rel_err(u, direct) < 1e-14);

  // zero temperature keeps h nu / 2
  CHECK(oscillator_mean_energy(nu, 1e-3, c) == Approx(c.h * nu / 2.0).epsilon(1e-15));

  // Rayleigh-Jeans
  const double nu_rj = 1e-4 * c.k * t / c.h;
  const double ratio = spectral_density(nu_rj, t, c) / (mode_density(nu_rj, c) * c.k * t);
  CHECK(ratio == Approx(1.0).epsilon(1e-4));

  CHECK_THROWS_AS(spectral_density(-1.0, t), std::domain_error);
  CHECK_THROWS_AS(oscillator_mean_energy(nu, 0.0), std::domain_error);
}

TEST_CASE("binary_photon_prob") {
  const double ln2 = std::log(2.0);
  auto p = binary_photon_prob(0, ln2);
  CHECK(p[1] == Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(p[0] == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(binary_photon_prob(1, ln2)[1] == Approx(0.2).epsilon(1e-15));

  for (int s = 0; s < 12; ++s) {
    const auto q = binary_photon_prob(s, 0.3);
    CHECK(q[0] + q[1] == Approx(1.0).epsilon(1e-15));
    if (s > 0) CHECK(q[1] < binary_photon_prob(s - 1, 0.3)[1]);
  }

  // saturation beyond the exponent range
  const auto sat = binary_photon_prob(2000, 1.0);
  CHECK(sat[0] == 1.0);
  CHECK(sat[1] == 0.0);
  CHECK(binary_photon_prob(20, 1.0)[1] == 0.0);

  CHECK(oracle::rel_err(photon_normalizer_product(10, 0.3), photon_normalizer_closed(10, 0.3)) <
        1e-12);
  CHECK_THROWS_AS(binary_photon_prob(-1, 1.0), std::domain_error);
  CHECK_THROWS_AS(binary_photon_prob(0, 0.0), std::domain_error);
}

TEST_CASE("binary photon product reproduces Planck-Bose") {
  for (double beta : {0.3, 1.0, 3.0}) {
    for (unsigned n = 0; n <= 100; ++n) {
      double prod = 1.0;
      for (int s = 0; s <= 47; ++s) prod *= binary_photon_prob(s, beta)[(static_cast<std::uint64_t>(n) >> s) & 1U];
      CHECK(oracle::rel_err(prod, oracle::geometric_pmf(static_cast<int>(n), beta)) < 1e-10);
    }
  }
}

TEST_CASE("digit_prob") {
  for (int k : {1, 2, 10, 64}) {
    const auto p = digit_prob(k, 0.0);
    CHECK(p[0] == 0.5);
    CHECK(p[1] == 0.5);
  }
  CHECK(digit_prob(1, -2.0 * std::log(2.0))[1] == Approx(1.0 / 3.0).epsilon(1e-15));
  for (int k = 1; k <= 20; ++k) {
    const auto p = digit_prob(k, -0.7);
    CHECK(p[0] + p[1] == Approx(1.0).epsilon(1e-15));
    CHECK(p[1] < 0.5);
  }

  double series = 0.0;
  for (int k = 60; k >= 1; --k) series += std::ldexp(digit_prob(k, -1.7)[1], -k);
  CHECK(std::abs(series - zeta_mean(1.7)) < 1e-12);
  CHECK(zeta_mean(1.7) == Approx(0.364719031532819759297).epsilon(1e-15));

  CHECK_THROWS_AS(digit_prob(0, 1.0), std::domain_error);
  CHECK_THROWS_AS(digit_prob(1, INFINITY), std::domain_error);
}

TEST_CASE("digit joint probability: closed form") {
  const double a = -2.0 * std::log(2.0);
  const auto one = DigitVector::fractional({Bit::one});
  CHECK(digit_joint_closed(one, a) == Approx(digit_prob(1, a)[1]).epsilon(1e-15));
  CHECK(digit_joint_closed(one, a) == Approx(1.0 / 3.0).epsilon(1e-15));

  const auto five = DigitVector::fractional_from_string("10110");
  CHECK(digit_joint_closed(five, 0.0) == 1.0 / 32.0);
  CHECK(digit_joint_integral(five, 0.0) == 1.0 / 32.0);

  const auto d = DigitVector::fractional_from_string("101");
  const double direct = digit_prob(1, -1.3)[1] * digit_prob(2, -1.3)[0] * digit_prob(3, -1.3)[1];
  CHECK(oracle::rel_err(digit_joint_closed(d, -1.3), direct) < 1e-15);
}

TEST_CASE("digit joint probability: interval mass") {
  const auto zero = DigitVector::fractional({Bit::zero});
  const double quad = oracle::integrate([](double x) { return f_a(x, -1.0); }, 0.0, 0.5);
  CHECK(digit_joint_integral(zero, -1.0) == Approx(quad).epsilon(1e-13));
  CHECK(digit_joint_integral(zero, -1.0) == Approx(0.622459331201854564639).epsilon(1e-15));

  SUBCASE("quadrature agrees on deeper prefixes") {
    for (const char* s : {"0110", "1111111", "0000001"}) {
      const auto d = DigitVector::fractional_from_string(s);
      const double lo = std::ldexp(static_cast<double>(d.packed()), -64);
      const double hi = lo + std::ldexp(1.0, -static_cast<int>(d.depth()));
      for (double a : {-4.0, 3.0}) {
        const double q = oracle::integrate([a](double x) { return f_a(x, a); }, lo, hi);
        CHECK(digit_joint_integral(d, a) == Approx(q).epsilon(1e-12));
      }
    }
  }

  SUBCASE("random cross-check against the closed form") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> adist(-10.0, 10.0);
    std::uniform_int_distribution<int> ndist(1, 20);
    for (int trial = 0; trial < 1000; ++trial) {
      const int n = ndist(gen);
      std::vector<Bit> bits;
      for (int i = 0; i < n; ++i) bits.push_back(to_bit(gen() & 1U));
      const auto d = DigitVector::fractional(bits);
      double a = adist(gen);
      if (a == 0.0) a = 0.5;
      CHECK(oracle::rel_err(digit_joint_integral(d, a), digit_joint_closed(d, a)) < 1e-14);
    }
  }

  SUBCASE("exhaustive independence identity") {
    double worst = 0.0;
    for (int n = 1; n <= 10; ++n) {
      for (unsigned idx = 0; idx < (1U << n); ++idx) {
        const auto dv = from_index(idx, n);
        for (double a : {-10.0, -1.0, -0.01, 0.01, 1.0, 10.0}) {
          worst = std::max(worst, oracle::rel_err(digit_joint_integral(dv, a), digit_joint_closed(dv, a)));
        }
      }
    }
    CHECK(worst < 1e-14);
  }

  SUBCASE("probabilities of all prefixes of one depth sum to one") {
    for (double a : {-3.0, 0.0, 2.0}) {
      double total = 0.0;
      for (unsigned idx = 0; idx < 256; ++idx) total += digit_joint_closed(from_index(idx, 8), a);
      CHECK(total == Approx(1.0).epsilon(1e-13));
    }
  }

  CHECK_THROWS_AS(digit_joint_closed(DigitVector::integer({Bit::one}), 1.0), std::domain_error);
}

TEST_CASE("telescoping normalizer") {
  for (int i = 0; i < 100; ++i) {
    const double a = -10.0 + 20.0 * (i + 0.5) / 100.0;
    for (int n = 1; n <= 30; ++n) {
      CHECK(oracle::rel_err(digit_normalizer_product(n, a), digit_normalizer_closed(n, a)) < 1e-12);
    }
  }
  CHECK(digit_normalizer_closed(7, 0.0) == 128.0);
  CHECK(digit_normalizer_product(7, 0.0) == 128.0);
}

TEST_CASE("f_a") {
  CHECK(f_a(0.77, 0.0) == 1.0);
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> zdist(0.0, 1.0);
  std::uniform_real_distribution<double> bdist(0.01, 30.0);
  for (int i = 0; i < 100; ++i) {
    const double z = zdist(gen);
    const double beta = bdist(gen);
    CHECK(oracle::rel_err(f_a(z, -beta), zeta_pdf(z, beta)) < 1e-15);
  }
  CHECK(f_a(0.5, 800.0) > 0.0);  // no overflow for large positive a
  CHECK(std::isfinite(f_a(1.0, 800.0)));
  CHECK_THROWS_AS(f_a(1.01, 1.0), std::domain_error);
  CHECK_THROWS_AS(f_a(0.5, NAN), std::domain_error);
}

TEST_CASE("digit_of and rademacher") {
  CHECK(digit_of(0.25, 1) == Bit::zero);
  CHECK(digit_of(0.25, 2) == Bit::one);
  CHECK(digit_of(0.25, 3) == Bit::zero);
  CHECK(digit_of(0.5, 1) == Bit::one);  // terminating: 0.1000...
  CHECK(digit_of(0.5, 2) == Bit::zero);
  CHECK(rademacher(0.3, 1) == 1);
  CHECK(rademacher(0.75, 2) == -1);

  // 1/3 = 0.010101..._2
  const double third = 1.0 / 3.0;
  double rebuilt = 0.0;
  for (int k = 1; k <= 53; ++k) {
    CHECK(to_int(digit_of(third, k)) == (k % 2 == 0 ? 1 : 0));
    rebuilt += std::ldexp(to_int(digit_of(third, k)), -k);
  }
  CHECK(std::abs(rebuilt - third) <= std::ldexp(1.0, -53));

  SUBCASE("Rademacher functions") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> xdist(0.0, 1.0);
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
      const double x = xdist(gen);
      for (int k = 1; k <= 20; ++k) {
        const double s = std::sin(std::ldexp(1.0, k) * std::numbers::pi * x);
        if (s == 0.0) continue;
        ++checked;
        CHECK(rademacher(x, k) == (s > 0 ? 1 : -1));
      }
    }
    CHECK(checked > 190000);
  }

  CHECK_THROWS_AS(digit_of(1.0, 1), std::domain_error);
  CHECK_THROWS_AS(digit_of(-0.1, 1), std::domain_error);
  CHECK_THROWS_AS(digit_of(0.5, 0), std::domain_error);
}

TEST_CASE("DigitVector") {
  CHECK_THROWS_AS(DigitVector::fractional({}), std::domain_error);
  CHECK_THROWS_AS(DigitVector::fractional(std::vector<Bit>(65, Bit::one)), std::domain_error);
  CHECK_THROWS_AS(DigitVector::fractional_from_string("01a"), std::domain_error);
  const auto d = DigitVector::fractional_from_string("011");
  CHECK(d.depth() == 3);
  CHECK(d.to_string() == "011");
  CHECK(d.packed() == (0b011ULL << 61));
  CHECK(DigitVector::integer({Bit::one, Bit::zero, Bit::one}).packed() == 5);
}
