#pragma once

// Closed-form laws of a single black-body mode in the dimensionless
// parameter beta = h*nu / (k*T).
//
// The scaled mode energy eta is exponential with rate beta. Its integer part
// xi = floor(eta) is Planck-Bose (geometric) and decomposes into independent
// "binary photon" bits mu_s of weight 2^s. Its fractional part
// zeta = eta - xi is truncated-exponential on [0, 1) and decomposes into
// independent dyadic digits eps_k of weight 2^-k.
//
// Everything here is a pure function; errors are reported by throwing
// std::domain_error.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace planckbits {

/// Physical constants in CGS units. Defaults are the exact SI-2019 values.
struct PhysicalConstants {
  double h = 6.62607015e-27;  // erg s
  double k = 1.380649e-16;    // erg / K
  double c = 2.99792458e10;   // cm / s

  /// Throws std::domain_error unless all three are finite and positive.
  void validate() const;
};

/// Frequency/temperature pair with its derived beta.
///
/// beta is always recomputed from the stored inputs, so the three fields can
/// never disagree.
class ModeParams {
 public:
  ModeParams(double nu, double temperature, PhysicalConstants consts = {});

  double nu() const noexcept { return nu_; }
  double temperature() const noexcept { return temperature_; }
  const PhysicalConstants& constants() const noexcept { return consts_; }
  double beta() const noexcept { return beta_; }
  /// Quantum energy h*nu in erg.
  double quantum() const noexcept { return consts_.h * nu_; }

 private:
  double nu_;
  double temperature_;
  PhysicalConstants consts_;
  double beta_;
};

enum class Bit : std::uint8_t { zero = 0, one = 1 };

constexpr int to_int(Bit b) noexcept { return static_cast<int>(b); }
constexpr Bit to_bit(bool v) noexcept { return v ? Bit::one : Bit::zero; }

/// A finite prefix of a binary expansion.
///
/// Fractional vectors hold eps_1..eps_n (weights 2^-k); integer vectors hold
/// mu_0..mu_{n-1} (weights 2^s). Depth is limited to 64 so that both kinds
/// fit a machine word.
class DigitVector {
 public:
  enum class Kind { fractional, integer };

  static constexpr std::size_t max_depth = 64;

  DigitVector(Kind kind, std::vector<Bit> bits);

  static DigitVector fractional(std::vector<Bit> bits) {
    return {Kind::fractional, std::move(bits)};
  }
  static DigitVector integer(std::vector<Bit> bits) {
    return {Kind::integer, std::move(bits)};
  }
  /// Builds a fractional vector from the characters '0'/'1'.
  static DigitVector fractional_from_string(std::string_view s);

  Kind kind() const noexcept { return kind_; }
  std::size_t depth() const noexcept { return bits_.size(); }
  std::span<const Bit> bits() const noexcept { return bits_; }
  /// Bit at zero-based storage position i (eps_{i+1} or mu_i).
  Bit operator[](std::size_t i) const { return bits_[i]; }

  /// Fractional: the top `depth` bits of a 64-bit word, eps_1 most
  /// significant. Integer: mu_0 in the least significant bit.
  std::uint64_t packed() const noexcept;

  std::string to_string() const;

 private:
  Kind kind_;
  std::vector<Bit> bits_;
};

// ---------------------------------------------------------------------------
// Parameterization

/// h*nu / (k*T).
double beta_of(double nu, double temperature, const PhysicalConstants& consts = {});

// ---------------------------------------------------------------------------
// Continuous energy and its fractional part

/// Exponential density beta*exp(-beta*y); zero for y < 0.
double eta_pdf(double y, double beta);
/// 1 - exp(-beta*y); zero for y <= 0.
double eta_cdf(double y, double beta);

/// Density of zeta on [0, 1]. beta == 0 is the uniform limit.
double zeta_pdf(double z, double beta);
/// (1 - exp(-beta*z)) / (1 - exp(-beta)) on [0, 1].
double zeta_cdf(double z, double beta);

/// E[zeta] = 1/beta - 1/(exp(beta) - 1); exactly 0.5 at beta == 0.
double zeta_mean(double beta);

/// Exponential family on [0, 1]: 1 for a == 0, a*exp(a*x)/(exp(a) - 1)
/// otherwise. f_a(., -beta) is the density of zeta.
double f_a(double x, double a);

// ---------------------------------------------------------------------------
// Integer part

/// Planck factor 1/(exp(beta) - 1).
double mean_occupation(double beta);

/// nbar^n / (1 + nbar)^(n+1).
double planck_bose_pmf(std::int64_t n, double nbar);

/// (1+nbar) ln(1+nbar) - nbar ln(nbar), in units of k.
double xi_entropy(double nbar);

/// Probabilities of one mode-level bit, indexed {P(0), P(1)}.
using BitProbs = std::array<double, 2>;

/// Fermi-Dirac law of the binary photon at level s:
/// P(mu_s = 1) = b^(2^s) / (1 + b^(2^s)) with b = exp(-beta).
///
/// When 2^s * beta is beyond the range of exp, returns exactly {1, 0}.
BitProbs binary_photon_prob(int s, double beta);

// ---------------------------------------------------------------------------
// Planck's law

/// Spectral energy density (8 pi nu^2 / c^3) * h nu / (exp(h nu / kT) - 1),
/// in erg s / cm^3.
double spectral_density(double nu, double temperature, const PhysicalConstants& consts = {});

/// Mean oscillator energy including the zero-point term: h nu (nbar + 1/2).
double oscillator_mean_energy(double nu, double temperature,
                              const PhysicalConstants& consts = {});

/// Mode density 8 pi nu^2 / c^3.
double mode_density(double nu, const PhysicalConstants& consts = {});

// ---------------------------------------------------------------------------
// Dyadic digits

/// k-th binary digit of x in [0, 1), terminating convention: dyadic
/// rationals expand with trailing zeros.
Bit digit_of(double x, int k);

/// 1 - 2*digit_of(x, k), i.e. the Rademacher function r_k(x).
int rademacher(double x, int k);

/// Marginal law of eps_k under f_a: P(eps_k = 1) = e^(a/2^k) / (1 + e^(a/2^k)).
BitProbs digit_prob(int k, double a);

/// Joint probability of a digit prefix written as the product of its
/// marginals in closed form:
///   exp(a * s) * (exp(a / 2^n) - 1) / (exp(a) - 1),   s = sum delta_k 2^-k.
/// Returns 2^-n for a == 0.
double digit_joint_closed(const DigitVector& delta, double a);

/// The same probability obtained as the mass f_a assigns to the dyadic
/// interval [s, s + 2^-n). Agreement with digit_joint_closed is the
/// statement that the digits are independent under f_a.
double digit_joint_integral(const DigitVector& delta, double a);

// ---------------------------------------------------------------------------
// Product identities behind the normalizers above

/// prod_{k=1}^{n} (1 + e^(a/2^k)), multiplied out term by term.
double digit_normalizer_product(int n, double a);
/// (e^a - 1) / (e^(a/2^n) - 1); 2^n at a == 0.
double digit_normalizer_closed(int n, double a);

/// prod_{s=0}^{S} (1 + b^(2^s)), multiplied out.
double photon_normalizer_product(int max_level, double b);
/// (1 - b^(2^(S+1))) / (1 - b).
double photon_normalizer_closed(int max_level, double b);

}  // namespace planckbits
