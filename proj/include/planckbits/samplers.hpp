#pragma once

// Seeded realizations of eta, xi and zeta along independent routes, and the
// dyadic reconstruction operators that tie digit vectors back to energies.

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "planckbits/distributions.hpp"

namespace planckbits {

/// Deterministic random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard; seeds and child streams pass through SplitMix64. Uniform and
/// Gaussian variates are built here rather than with the std:: distributions
/// so that samples are bit-identical across standard libraries.
///
/// A stream has a single owner. Use split() to hand independent streams to
/// parallel workers.
class RngStream {
 public:
  static constexpr std::string_view algorithm_id = "mt19937_64/splitmix64/polar";

  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  /// Number of 64-bit words drawn so far.
  std::uint64_t position() const noexcept { return position_; }

  std::uint64_t next_u64() {
    ++position_;
    return engine_();
  }

  /// 53-bit uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  /// 53-bit uniform on (0, 1].
  double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  /// Two independent standard normals (Marsaglia polar method).
  std::pair<double, double> gaussian_pair();

  /// Child stream number `index`; children with different indices, and the
  /// parent, do not overlap in any practical sense.
  RngStream split(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer, used for seed derivation.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

enum class Route { amplitude, direct, digits };

std::string_view to_string(Route r) noexcept;
std::optional<Route> parse_route(std::string_view name) noexcept;

/// One realization of the scaled mode energy.
///
/// Constructed only through from_eta(), which guarantees xi == floor(eta),
/// zeta == eta - xi and eta == xi + zeta in floating point.
struct EnergySample {
  double eta = 0.0;
  std::uint64_t xi = 0;
  double zeta = 0.0;
  std::optional<double> theta;  // phase, amplitude route only
  Route route = Route::direct;

  static EnergySample from_eta(double eta, Route route, std::optional<double> theta = {});
};

/// eta = (X^2 + Y^2) / (2 beta) from a Gaussian amplitude pair (X, Y), with
/// theta = arg(X + iY) in [0, 2 pi).
EnergySample sample_eta_via_amplitudes(RngStream& rng, double beta);
/// Same law from the amplitudes themselves; exposed for the degenerate case.
EnergySample eta_from_amplitudes(double x, double y, double beta);

/// Inverse transform eta = -ln(U) / beta, U uniform on (0, 1].
EnergySample sample_eta_direct(RngStream& rng, double beta);
double eta_from_uniform(double u, double beta);

/// floor(-ln(U) / beta): Planck-Bose distributed.
std::uint64_t sample_xi_geometric(RngStream& rng, double beta);

/// Inverse-CDF draw from the truncated exponential on [0, 1).
double sample_zeta_truncexp(RngStream& rng, double beta);
/// -ln(1 - U (1 - e^-beta)) / beta; U itself when beta == 0.
double zeta_from_uniform(double u, double beta);

/// Draws eps_1..eps_n independently with P(eps_k = 1) = digit_prob(k, -beta).
///
/// Holds the per-position thresholds so that repeated draws at one beta do
/// no transcendental work.
class DigitSampler {
 public:
  static constexpr int default_depth = 53;

  DigitSampler(double beta, int depth = default_depth);

  double beta() const noexcept { return beta_; }
  int depth() const noexcept { return static_cast<int>(thresholds_.size()); }

  /// Digits packed eps_1-first into the top of a 64-bit word.
  std::uint64_t draw_packed(RngStream& rng) const;
  /// Value sum eps_k 2^-k, truncated to double precision.
  double draw(RngStream& rng) const;
  std::pair<double, DigitVector> draw_with_digits(RngStream& rng) const;

 private:
  double beta_;
  std::vector<std::uint64_t> thresholds_;  // draw < threshold  <=>  eps_k = 1
};

/// Draws binary photons mu_0..mu_S independently with
/// P(mu_s = 1) = binary_photon_prob(s, beta)[1].
class BinaryPhotonSampler {
 public:
  static constexpr int default_max_level = 62;

  BinaryPhotonSampler(double beta, int max_level = default_max_level);

  int max_level() const noexcept { return static_cast<int>(thresholds_.size()) - 1; }

  /// mu_s in bit s.
  std::uint64_t draw(RngStream& rng) const;
  std::pair<std::uint64_t, DigitVector> draw_with_bits(RngStream& rng) const;

 private:
  std::vector<std::uint64_t> thresholds_;
};

std::pair<double, DigitVector> sample_zeta_via_digits(RngStream& rng, double beta,
                                                      int depth = DigitSampler::default_depth);

std::pair<std::uint64_t, DigitVector> sample_xi_via_binary_photons(
    RngStream& rng, double beta, int max_level = BinaryPhotonSampler::default_max_level);

/// Energy sample along the digit route: xi from binary photons, zeta from
/// dyadic digits.
EnergySample sample_eta_via_digits(RngStream& rng, const BinaryPhotonSampler& photons,
                                   const DigitSampler& digits);

// ---------------------------------------------------------------------------
// Reconstruction

/// sum eps_k 2^-k. Exact up to depth 53; deeper vectors are truncated toward
/// zero to the nearest double, so the result always lies in [0, 1).
double reconstruct_zeta(const DigitVector& bits);
/// Same, from digits packed eps_1-first into the top of a word.
double zeta_from_packed(std::uint64_t packed) noexcept;
/// sum mu_s 2^s.
std::uint64_t reconstruct_xi(const DigitVector& bits);
/// reconstruct_xi + reconstruct_zeta.
double reconstruct_eta(const DigitVector& int_bits, const DigitVector& frac_bits);

/// First `depth` digits of x in [0, 1) under the terminating convention.
DigitVector extract_digits(double x, int depth = DigitSampler::default_depth);

// ---------------------------------------------------------------------------
// Zero-point generator: the a = 0 member of the digit family, i.e. fair
// independent bits and the uniform variate they assemble.

std::vector<Bit> zero_point_bits(RngStream& rng, std::size_t count);
/// 53 fair bits read as a dyadic fraction.
double zero_point_uniform(RngStream& rng);

}  // namespace planckbits
