#pragma once

// The checks behind `planckbits verify`: a deterministic suite of exact
// algebraic identities evaluated at machine precision, and a seeded Monte
// Carlo suite comparing every sampling route with its closed-form law.

#include <cstdint>
#include <vector>

#include "planckbits/stats.hpp"

namespace planckbits {

struct VerifyConfig {
  std::vector<double> betas{0.2, 1.0, 5.0};
  std::uint64_t seed = 1234567;
  std::size_t count = 100000;
  int depth = 53;
  double alpha = 0.01;
};

/// Identities that hold analytically: digit independence, the telescoping
/// normalizers, the Planck-factor split of E[zeta], binary photons vs
/// Planck-Bose, Planck's law with the zero-point term, the entropy closed
/// form, the Rademacher relation and digit reconstruction. Each report's
/// statistic is the worst error found and its threshold the tolerance.
std::vector<TestReport> exact_identity_suite();

/// Goodness-of-fit and independence checks for each beta in the config,
/// followed by the zero-point generator checks. Throws std::invalid_argument
/// when count < 1e4 or alpha is unsupported.
std::vector<TestReport> monte_carlo_suite(const VerifyConfig& config);

}  // namespace planckbits
