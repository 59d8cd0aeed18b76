#include "planckbits/distributions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>

namespace planckbits {
namespace {

// Largest x for which exp(-x) is still a normal double.
constexpr double kExpUnderflow = 708.0;

// Below this beta the Bernoulli series of 1/beta - 1/(e^beta - 1) is more
// accurate than the two-term difference.
constexpr double kZetaMeanSeriesCutoff = 1.0;
constexpr int kZetaMeanSeriesTerms = 12;  // (1/2pi)^24 is below 1e-19

[[noreturn]] void domain_fail(const std::string& what) { throw std::domain_error(what); }

void require_positive(double v, const char* name) {
  if (!(std::isfinite(v) && v > 0.0)) {
    domain_fail(std::string(name) + " must be finite and positive, got " + std::to_string(v));
  }
}

void require_non_negative(double v, const char* name) {
  if (!(std::isfinite(v) && v >= 0.0)) {
    domain_fail(std::string(name) + " must be finite and non-negative, got " + std::to_string(v));
  }
}

void require_unit_closed(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    domain_fail(std::string(name) + " must lie in [0, 1], got " + std::to_string(x));
  }
}

// e^(a*x) / (e^a - 1), rewritten for a > 0 so neither factor overflows.
double scaled_exp_ratio(double a, double x) {
  if (a > 0.0) return std::exp(a * (x - 1.0)) / -std::expm1(-a);
  return std::exp(a * x) / std::expm1(a);
}

const DigitVector& require_fractional(const DigitVector& d) {
  if (d.kind() != DigitVector::Kind::fractional) {
    domain_fail("expected a fractional digit vector");
  }
  return d;
}

// sum delta_k 2^-k, exact for depth <= 53 and truncated beyond.
double prefix_value(const DigitVector& d) {
  const std::uint64_t w = d.packed();
  return std::ldexp(static_cast<double>(w), -64);
}

}  // namespace

void PhysicalConstants::validate() const {
  require_positive(h, "Planck constant");
  require_positive(k, "Boltzmann constant");
  require_positive(c, "speed of light");
}

ModeParams::ModeParams(double nu, double temperature, PhysicalConstants consts)
    : nu_(nu), temperature_(temperature), consts_(consts),
      beta_(beta_of(nu, temperature, consts)) {}

DigitVector::DigitVector(Kind kind, std::vector<Bit> bits) : kind_(kind), bits_(std::move(bits)) {
  if (bits_.empty() || bits_.size() > max_depth) {
    domain_fail("digit vector depth must be in [1, 64], got " + std::to_string(bits_.size()));
  }
}

DigitVector DigitVector::fractional_from_string(std::string_view s) {
  std::vector<Bit> bits;
  bits.reserve(s.size());
  for (char ch : s) {
    if (ch != '0' && ch != '1') domain_fail("digit string may contain only '0' and '1'");
    bits.push_back(to_bit(ch == '1'));
  }
  return fractional(std::move(bits));
}

std::uint64_t DigitVector::packed() const noexcept {
  std::uint64_t w = 0;
  if (kind_ == Kind::fractional) {
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      w |= static_cast<std::uint64_t>(to_int(bits_[i])) << (63 - i);
    }
  } else {
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      w |= static_cast<std::uint64_t>(to_int(bits_[i])) << i;
    }
  }
  return w;
}

std::string DigitVector::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (Bit b : bits_) s.push_back(b == Bit::one ? '1' : '0');
  return s;
}

double beta_of(double nu, double temperature, const PhysicalConstants& consts) {
  require_positive(nu, "frequency");
  require_positive(temperature, "temperature");
  consts.validate();
  const double beta = (consts.h * nu) / (consts.k * temperature);
  if (!(std::isfinite(beta) && beta > 0.0)) {
    domain_fail("beta = h nu / k T is not a finite positive number");
  }
  return beta;
}

double eta_pdf(double y, double beta) {
  require_positive(beta, "beta");
  if (y < 0.0) return 0.0;
  return beta * std::exp(-beta * y);
}

double eta_cdf(double y, double beta) {
  require_positive(beta, "beta");
  if (y <= 0.0) return 0.0;
  return -std::expm1(-beta * y);
}

double zeta_pdf(double z, double beta) {
  require_non_negative(beta, "beta");
  require_unit_closed(z, "z");
  if (beta == 0.0) return 1.0;
  return beta * std::exp(-beta * z) / -std::expm1(-beta);
}

double zeta_cdf(double z, double beta) {
  require_non_negative(beta, "beta");
  require_unit_closed(z, "z");
  if (beta == 0.0) return z;
  if (z == 1.0) return 1.0;
  return std::expm1(-beta * z) / std::expm1(-beta);
}

double zeta_mean(double beta) {
  require_non_negative(beta, "beta");
  if (beta == 0.0) return 0.5;
  if (beta < kZetaMeanSeriesCutoff) {
    // 1/x - 1/(e^x - 1) = 1/2 - sum_k B_2k x^(2k-1) / (2k)!
    static const auto coeffs = [] {
      std::array<double, kZetaMeanSeriesTerms> c{};
      for (int k = 1; k <= kZetaMeanSeriesTerms; ++k) {
        c[static_cast<std::size_t>(k - 1)] = boost::math::bernoulli_b2n<double>(k) /
                                             boost::math::factorial<double>(static_cast<unsigned>(2 * k));
      }
      return c;
    }();
    const double b2 = beta * beta;
    double sum = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) sum = sum * b2 + *it;
    return 0.5 - beta * sum;
  }
  return 1.0 / beta - mean_occupation(beta);
}

double f_a(double x, double a) {
  if (!std::isfinite(a)) domain_fail("a must be finite");
  require_unit_closed(x, "x");
  if (a == 0.0) return 1.0;
  return a * scaled_exp_ratio(a, x);
}

double mean_occupation(double beta) {
  require_positive(beta, "beta");
  return 1.0 / std::expm1(beta);
}

double planck_bose_pmf(std::int64_t n, double nbar) {
  if (n < 0) domain_fail("occupation number must be non-negative");
  require_positive(nbar, "mean occupation");
  const double ratio = nbar / (1.0 + nbar);
  return std::pow(ratio, static_cast<double>(n)) / (1.0 + nbar);
}

double xi_entropy(double nbar) {
  require_positive(nbar, "mean occupation");
  return (1.0 + nbar) * std::log1p(nbar) - nbar * std::log(nbar);
}

BitProbs binary_photon_prob(int s, double beta) {
  if (s < 0) domain_fail("binary photon level must be non-negative");
  require_positive(beta, "beta");
  const double x = std::ldexp(beta, s);
  if (!(x <= kExpUnderflow)) return {1.0, 0.0};
  const double e = std::exp(-x);
  return {1.0 / (1.0 + e), e / (1.0 + e)};
}

double mode_density(double nu, const PhysicalConstants& consts) {
  require_positive(nu, "frequency");
  consts.validate();
  return 8.0 * std::numbers::pi * nu * nu / (consts.c * consts.c * consts.c);
}

double spectral_density(double nu, double temperature, const PhysicalConstants& consts) {
  const double beta = beta_of(nu, temperature, consts);
  return mode_density(nu, consts) * consts.h * nu * mean_occupation(beta);
}

double oscillator_mean_energy(double nu, double temperature, const PhysicalConstants& consts) {
  const double beta = beta_of(nu, temperature, consts);
  return consts.h * nu * (mean_occupation(beta) + 0.5);
}

Bit digit_of(double x, int k) {
  if (!(x >= 0.0 && x < 1.0)) domain_fail("digit_of needs x in [0, 1), got " + std::to_string(x));
  if (k < 1) domain_fail("digit position must be >= 1");
  // floor(x 2^k) is exact, and its parity is the k-th digit.
  const double scaled = std::floor(std::ldexp(x, k));
  return to_bit(std::fmod(scaled, 2.0) != 0.0);
}

int rademacher(double x, int k) { return 1 - 2 * to_int(digit_of(x, k)); }

BitProbs digit_prob(int k, double a) {
  if (k < 1) domain_fail("digit position must be >= 1");
  if (!std::isfinite(a)) domain_fail("a must be finite");
  if (a == 0.0) return {0.5, 0.5};
  const double t = std::ldexp(a, -k);
  return {1.0 / (1.0 + std::exp(t)), 1.0 / (1.0 + std::exp(-t))};
}

double digit_joint_closed(const DigitVector& delta, double a) {
  require_fractional(delta);
  if (!std::isfinite(a)) domain_fail("a must be finite");
  const int n = static_cast<int>(delta.depth());
  if (a == 0.0) return std::ldexp(1.0, -n);
  const double s = prefix_value(delta);
  return scaled_exp_ratio(a, s) * std::expm1(std::ldexp(a, -n));
}

double digit_joint_integral(const DigitVector& delta, double a) {
  require_fractional(delta);
  if (!std::isfinite(a)) domain_fail("a must be finite");
  const int n = static_cast<int>(delta.depth());
  if (a == 0.0) return std::ldexp(1.0, -n);
  // F(s + h) - F(s) for F(x) = e^(a x)/(e^a - 1), taken about the midpoint
  // m = s + h/2: e^(a m) * 2 sinh(a h / 2) / (e^a - 1).
  const double half_width = std::ldexp(1.0, -n - 1);
  const double mid = prefix_value(delta) + half_width;
  return 2.0 * scaled_exp_ratio(a, mid) * std::sinh(a * half_width);
}

double digit_normalizer_product(int n, double a) {
  if (n < 1) domain_fail("product length must be >= 1");
  if (!std::isfinite(a)) domain_fail("a must be finite");
  double p = 1.0;
  for (int k = 1; k <= n; ++k) p *= 1.0 + std::exp(std::ldexp(a, -k));
  return p;
}

double digit_normalizer_closed(int n, double a) {
  if (n < 1) domain_fail("product length must be >= 1");
  if (!std::isfinite(a)) domain_fail("a must be finite");
  if (a == 0.0) return std::ldexp(1.0, n);
  return std::expm1(a) / std::expm1(std::ldexp(a, -n));
}

double photon_normalizer_product(int max_level, double b) {
  if (max_level < 0) domain_fail("level must be non-negative");
  if (!(b >= 0.0 && b < 1.0)) domain_fail("b must lie in [0, 1)");
  double p = 1.0;
  for (int s = 0; s <= max_level; ++s) p *= 1.0 + std::pow(b, std::ldexp(1.0, s));
  return p;
}

double photon_normalizer_closed(int max_level, double b) {
  if (max_level < 0) domain_fail("level must be non-negative");
  if (!(b >= 0.0 && b < 1.0)) domain_fail("b must lie in [0, 1)");
  const double top = std::pow(b, std::ldexp(1.0, max_level + 1));
  return (1.0 - top) / (1.0 - b);
}

}  // namespace planckbits
