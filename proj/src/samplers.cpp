#include "planckbits/samplers.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace planckbits {
namespace {

void require_positive_beta(double beta) {
  if (!(std::isfinite(beta) && beta > 0.0)) {
    throw std::domain_error("beta must be finite and positive, got " + std::to_string(beta));
  }
}

void require_non_negative_beta(double beta) {
  if (!(std::isfinite(beta) && beta >= 0.0)) {
    throw std::domain_error("beta must be finite and non-negative, got " + std::to_string(beta));
  }
}

// Probability p as a 64-bit threshold t with P(u64 < t) = t / 2^64.
std::uint64_t threshold_of(double p) {
  if (!(p > 0.0)) return 0;
  const double scaled = std::ldexp(p, 64);
  if (scaled >= 0x1.0p64) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(scaled);
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

std::pair<double, double> RngStream::gaussian_pair() {
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (!(s > 0.0 && s < 1.0));
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  return {u * f, v * f};
}

RngStream RngStream::split(std::uint64_t index) const {
  return RngStream(splitmix64(seed_ ^ splitmix64(~index)));
}

std::string_view to_string(Route r) noexcept {
  switch (r) {
    case Route::amplitude:
      return "amplitude";
    case Route::direct:
      return "direct";
    case Route::digits:
      return "digits";
  }
  return "unknown";
}

std::optional<Route> parse_route(std::string_view name) noexcept {
  if (name == "amplitude") return Route::amplitude;
  if (name == "direct") return Route::direct;
  if (name == "digits") return Route::digits;
  return std::nullopt;
}

EnergySample EnergySample::from_eta(double eta, Route route, std::optional<double> theta) {
  if (!(eta >= 0.0 && eta < 0x1.0p64)) {
    throw std::domain_error("eta outside [0, 2^64): " + std::to_string(eta));
  }
  EnergySample s;
  const double whole = std::floor(eta);
  s.eta = eta;
  s.xi = static_cast<std::uint64_t>(whole);
  s.zeta = eta - whole;  // exact
  s.theta = theta;
  s.route = route;
  return s;
}

EnergySample eta_from_amplitudes(double x, double y, double beta) {
  require_positive_beta(beta);
  const double eta = (x * x + y * y) / (2.0 * beta);
  double theta = std::atan2(y, x);
  if (theta < 0.0) theta += kTwoPi;
  if (theta >= kTwoPi) theta = 0.0;
  return EnergySample::from_eta(eta, Route::amplitude, theta);
}

EnergySample sample_eta_via_amplitudes(RngStream& rng, double beta) {
  require_positive_beta(beta);
  const auto [x, y] = rng.gaussian_pair();
  return eta_from_amplitudes(x, y, beta);
}

double eta_from_uniform(double u, double beta) {
  require_positive_beta(beta);
  if (!(u > 0.0 && u <= 1.0)) throw std::domain_error("inverse transform needs U in (0, 1]");
  return -std::log(u) / beta;
}

EnergySample sample_eta_direct(RngStream& rng, double beta) {
  return EnergySample::from_eta(eta_from_uniform(rng.uniform_pos(), beta), Route::direct);
}

std::uint64_t sample_xi_geometric(RngStream& rng, double beta) {
  const double eta = eta_from_uniform(rng.uniform_pos(), beta);
  if (!(eta < 0x1.0p64)) throw std::overflow_error("geometric draw exceeds 64 bits");
  return static_cast<std::uint64_t>(std::floor(eta));
}

double zeta_from_uniform(double u, double beta) {
  require_non_negative_beta(beta);
  if (!(u >= 0.0 && u < 1.0)) throw std::domain_error("inverse CDF needs U in [0, 1)");
  if (beta == 0.0) return u;
  // 1 - U (1 - e^-beta) = 1 + U expm1(-beta)
  const double z = -std::log1p(u * std::expm1(-beta)) / beta;
  return z < 1.0 ? z : std::nextafter(1.0, 0.0);
}

double sample_zeta_truncexp(RngStream& rng, double beta) {
  return zeta_from_uniform(rng.uniform(), beta);
}

DigitSampler::DigitSampler(double beta, int depth) : beta_(beta) {
  require_non_negative_beta(beta);
  if (depth < 1 || depth > static_cast<int>(DigitVector::max_depth)) {
    throw std::domain_error("digit depth must be in [1, 64], got " + std::to_string(depth));
  }
  thresholds_.reserve(static_cast<std::size_t>(depth));
  for (int k = 1; k <= depth; ++k) {
    thresholds_.push_back(threshold_of(digit_prob(k, -beta)[1]));
  }
}

std::uint64_t DigitSampler::draw_packed(RngStream& rng) const {
  std::uint64_t w = 0;
  int shift = 63;
  for (std::uint64_t t : thresholds_) {
    w |= static_cast<std::uint64_t>(rng.next_u64() < t) << shift;
    --shift;
  }
  return w;
}

double DigitSampler::draw(RngStream& rng) const { return zeta_from_packed(draw_packed(rng)); }

std::pair<double, DigitVector> DigitSampler::draw_with_digits(RngStream& rng) const {
  const std::uint64_t w = draw_packed(rng);
  std::vector<Bit> bits(thresholds_.size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = to_bit((w >> (63 - i)) & 1U);
  return {zeta_from_packed(w), DigitVector::fractional(std::move(bits))};
}

BinaryPhotonSampler::BinaryPhotonSampler(double beta, int max_level) {
  require_positive_beta(beta);
  if (max_level < 0 || max_level > 62) {
    throw std::domain_error("binary photon level must be in [0, 62], got " +
                            std::to_string(max_level));
  }
  thresholds_.reserve(static_cast<std::size_t>(max_level) + 1);
  for (int s = 0; s <= max_level; ++s) {
    thresholds_.push_back(threshold_of(binary_photon_prob(s, beta)[1]));
  }
}

std::uint64_t BinaryPhotonSampler::draw(RngStream& rng) const {
  std::uint64_t n = 0;
  for (std::size_t s = 0; s < thresholds_.size(); ++s) {
    // Thresholds decrease in s; once one resolves to zero the rest do too.
    if (thresholds_[s] == 0) break;
    n |= static_cast<std::uint64_t>(rng.next_u64() < thresholds_[s]) << s;
  }
  return n;
}

std::pair<std::uint64_t, DigitVector> BinaryPhotonSampler::draw_with_bits(RngStream& rng) const {
  const std::uint64_t n = draw(rng);
  std::vector<Bit> bits(thresholds_.size());
  for (std::size_t s = 0; s < bits.size(); ++s) bits[s] = to_bit((n >> s) & 1U);
  return {n, DigitVector::integer(std::move(bits))};
}

std::pair<double, DigitVector> sample_zeta_via_digits(RngStream& rng, double beta, int depth) {
  return DigitSampler(beta, depth).draw_with_digits(rng);
}

std::pair<std::uint64_t, DigitVector> sample_xi_via_binary_photons(RngStream& rng, double beta,
                                                                   int max_level) {
  return BinaryPhotonSampler(beta, max_level).draw_with_bits(rng);
}

EnergySample sample_eta_via_digits(RngStream& rng, const BinaryPhotonSampler& photons,
                                   const DigitSampler& digits) {
  const std::uint64_t xi = photons.draw(rng);
  const double zeta = digits.draw(rng);
  return EnergySample::from_eta(static_cast<double>(xi) + zeta, Route::digits);
}

double zeta_from_packed(std::uint64_t packed) noexcept {
  if (packed == 0) return 0.0;
  const int excess = std::bit_width(packed) - std::numeric_limits<double>::digits;
  if (excess > 0) packed = (packed >> excess) << excess;
  return std::ldexp(static_cast<double>(packed), -64);
}

double reconstruct_zeta(const DigitVector& bits) {
  if (bits.kind() != DigitVector::Kind::fractional) {
    throw std::domain_error("reconstruct_zeta needs a fractional digit vector");
  }
  return zeta_from_packed(bits.packed());
}

std::uint64_t reconstruct_xi(const DigitVector& bits) {
  if (bits.kind() != DigitVector::Kind::integer) {
    throw std::domain_error("reconstruct_xi needs an integer digit vector");
  }
  return bits.packed();
}

double reconstruct_eta(const DigitVector& int_bits, const DigitVector& frac_bits) {
  return static_cast<double>(reconstruct_xi(int_bits)) + reconstruct_zeta(frac_bits);
}

DigitVector extract_digits(double x, int depth) {
  if (depth < 1 || depth > static_cast<int>(DigitVector::max_depth)) {
    throw std::domain_error("digit depth must be in [1, 64]");
  }
  std::vector<Bit> bits;
  bits.reserve(static_cast<std::size_t>(depth));
  for (int k = 1; k <= depth; ++k) bits.push_back(digit_of(x, k));
  return DigitVector::fractional(std::move(bits));
}

std::vector<Bit> zero_point_bits(RngStream& rng, std::size_t count) {
  if (count == 0) throw std::domain_error("bit count must be >= 1");
  std::vector<Bit> bits;
  bits.reserve(count);
  while (bits.size() < count) {
    std::uint64_t w = rng.next_u64();
    for (int i = 0; i < 64 && bits.size() < count; ++i, w >>= 1) bits.push_back(to_bit(w & 1U));
  }
  return bits;
}

double zero_point_uniform(RngStream& rng) {
  // eps_1 is the top bit of the 53 kept.
  return zeta_from_packed((rng.next_u64() >> 11) << 11);
}

}  // namespace planckbits
