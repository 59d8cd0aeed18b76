#include "planckbits/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "planckbits/distributions.hpp"
#include "planckbits/samplers.hpp"

namespace planckbits {
namespace {

double rel_err(double got, double want) {
  if (got == want) return 0.0;
  return std::abs(got - want) / std::max(std::abs(want), std::numeric_limits<double>::min());
}

std::string beta_tag(double beta) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "[beta=" << beta << "]";
  return os.str();
}

TestReport tolerance_report(std::string name, double worst, double tol, std::size_t checked) {
  TestReport r;
  r.name = std::move(name);
  r.statistic = worst;
  r.threshold = tol;
  r.sample_size = checked;
  return r.decide();
}

DigitVector digits_of_index(std::uint32_t index, int depth) {
  std::vector<Bit> bits(static_cast<std::size_t>(depth));
  for (int i = 0; i < depth; ++i) bits[static_cast<std::size_t>(i)] = to_bit((index >> (depth - 1 - i)) & 1U);
  return DigitVector::fractional(std::move(bits));
}

// --- exact identities ------------------------------------------------------

const std::vector<double> kIdentityAs{-10.0, -1.0, -0.01, 0.01, 1.0, 10.0};

TestReport independence_identity() {
  double worst = 0.0;
  std::size_t checked = 0;
  for (int n = 1; n <= 10; ++n) {
    for (std::uint32_t idx = 0; idx < (1U << n); ++idx) {
      const DigitVector d = digits_of_index(idx, n);
      for (double a : kIdentityAs) {
        worst = std::max(worst, rel_err(digit_joint_integral(d, a), digit_joint_closed(d, a)));
        ++checked;
      }
    }
  }
  return tolerance_report("independence_closed_vs_integral", worst, 1e-14, checked);
}

TestReport joint_vs_marginal_product() {
  double worst = 0.0;
  std::size_t checked = 0;
  for (int n = 1; n <= 10; ++n) {
    for (std::uint32_t idx = 0; idx < (1U << n); ++idx) {
      const DigitVector d = digits_of_index(idx, n);
      for (double a : kIdentityAs) {
        double product = 1.0;
        for (int k = 1; k <= n; ++k) {
          product *= digit_prob(k, a)[static_cast<std::size_t>(to_int(d[static_cast<std::size_t>(k - 1)]))];
        }
        worst = std::max(worst, rel_err(digit_joint_closed(d, a), product));
        ++checked;
      }
    }
  }
  return tolerance_report("independence_closed_vs_marginal_product", worst, 1e-13, checked);
}

TestReport digit_telescoping() {
  double worst = 0.0;
  std::size_t checked = 0;
  for (int i = 0; i < 100; ++i) {
    const double a = -10.0 + 20.0 * (i + 0.5) / 100.0;
    for (int n = 1; n <= 30; ++n) {
      worst = std::max(worst, rel_err(digit_normalizer_product(n, a), digit_normalizer_closed(n, a)));
      ++checked;
    }
  }
  return tolerance_report("digit_telescoping_product", worst, 1e-12, checked);
}

TestReport photon_telescoping() {
  double worst = 0.0;
  std::size_t checked = 0;
  for (double b : {0.05, 0.3, 0.5, 0.9}) {
    for (int s = 0; s <= 20; ++s) {
      worst = std::max(worst, rel_err(photon_normalizer_product(s, b), photon_normalizer_closed(s, b)));
      ++checked;
    }
  }
  return tolerance_report("photon_telescoping_product", worst, 1e-12, checked);
}

TestReport planck_factor_split() {
  double worst = zeta_mean(0.0) == 0.5 ? 0.0 : std::numeric_limits<double>::infinity();
  const int count = 1000;
  for (int i = 0; i < count; ++i) {
    const double beta = 1e-4 * std::pow(50.0 / 1e-4, static_cast<double>(i) / (count - 1));
    worst = std::max(worst, rel_err(zeta_mean(beta) + mean_occupation(beta), 1.0 / beta));
  }
  return tolerance_report("planck_factor_split", worst, 1e-13, count + 1);
}

TestReport binary_photons_vs_planck_bose() {
  double worst = 0.0;
  std::size_t checked = 0;
  for (double beta : {0.3, 1.0, 3.0}) {
    const double nbar = mean_occupation(beta);
    for (std::uint64_t n = 0; n <= 100; ++n) {
      const int top = static_cast<int>(std::ceil(std::log2(static_cast<double>(n) + 1.0))) + 40;
      double product = 1.0;
      for (int s = 0; s <= top; ++s) {
        const std::size_t bit = s < 64 ? static_cast<std::size_t>((n >> s) & 1U) : 0;
        product *= binary_photon_prob(s, beta)[bit];
      }
      worst = std::max(worst, rel_err(product, planck_bose_pmf(static_cast<std::int64_t>(n), nbar)));
      ++checked;
    }
  }
  return tolerance_report("binary_photons_vs_planck_bose", worst, 1e-10, checked);
}

TestReport marginal_mean_identity() {
  double worst = 0.0;
  const std::vector<double> betas{0.2, 1.0, 1.7, 5.0};
  for (double beta : betas) {
    double sum = 0.0;
    for (int k = 60; k >= 1; --k) sum += std::ldexp(digit_prob(k, -beta)[1], -k);
    worst = std::max(worst, std::abs(sum - zeta_mean(beta)));
  }
  return tolerance_report("digit_marginal_mean", worst, 1e-12, betas.size());
}

TestReport planck_law_identity() {
  const PhysicalConstants consts;
  double worst = 0.0;
  std::size_t checked = 0;
  for (int i = 0; i < 10; ++i) {
    const double nu = 1e11 * std::pow(100.0, i / 9.0);
    for (int j = 0; j < 10; ++j) {
      const double t = 300.0 * std::pow(5000.0 / 300.0, j / 9.0);
      const double lhs = spectral_density(nu, t, consts);
      const double rhs =
          mode_density(nu, consts) * (oscillator_mean_energy(nu, t, consts) - 0.5 * consts.h * nu);
      worst = std::max(worst, rel_err(rhs, lhs));
      ++checked;
    }
  }
  return tolerance_report("planck_law_zero_point_identity", worst, 1e-14, checked);
}

TestReport rayleigh_jeans_limit() {
  const PhysicalConstants consts;
  const double t = 300.0;
  const double nu = 0.01 * consts.k * t / consts.h;
  const double ratio = spectral_density(nu, t, consts) / (mode_density(nu, consts) * consts.k * t);
  // ratio must lie in [0.995, 1]
  TestReport r = tolerance_report("rayleigh_jeans_limit", std::abs(ratio - 0.9975), 0.0025, 1);
  r.note("ratio", ratio).note("beta", beta_of(nu, t, consts));
  return r;
}

TestReport entropy_closed_form() {
  double worst = 0.0;
  for (double nbar : {0.1, 1.0, 10.0}) {
    double direct = 0.0;
    for (std::int64_t n = 0;; ++n) {
      const double p = planck_bose_pmf(n, nbar);
      direct -= p * std::log(p);
      // remaining mass is (1 + nbar) times the current term
      if (p * (1.0 + nbar) < 1e-17) break;
    }
    worst = std::max(worst, std::abs(direct - xi_entropy(nbar)));
  }
  return tolerance_report("entropy_closed_form", worst, 1e-10, 3);
}

TestReport rademacher_relation() {
  RngStream rng(0x5EEDULL);
  std::size_t mismatches = 0;
  std::size_t checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform();
    for (int k = 1; k <= 20; ++k) {
      const double s = std::sin(std::numbers::pi * std::ldexp(x, k));
      if (s == 0.0) continue;
      ++checked;
      if (rademacher(x, k) != (s > 0.0 ? 1 : -1)) ++mismatches;
    }
  }
  return tolerance_report("rademacher_relation", static_cast<double>(mismatches), 1.0, checked);
}

TestReport reconstruction_round_trip() {
  std::size_t mismatches = 0;
  const int depth = 10;
  for (std::uint32_t idx = 0; idx < (1U << depth); ++idx) {
    const DigitVector d = digits_of_index(idx, depth);
    const double z = reconstruct_zeta(d);
    for (int k = 1; k <= depth; ++k) {
      if (digit_of(z, k) != d[static_cast<std::size_t>(k - 1)]) ++mismatches;
    }
  }
  return tolerance_report("reconstruction_round_trip", static_cast<double>(mismatches), 1.0,
                          1U << depth);
}

TestReport zero_point_case() {
  std::size_t violations = 0;
  for (int k = 1; k <= 64; ++k) {
    const BitProbs p = digit_prob(k, 0.0);
    if (p[0] != 0.5 || p[1] != 0.5) ++violations;
  }
  for (double x : {0.0, 0.25, 0.77, 1.0}) {
    if (f_a(x, 0.0) != 1.0) ++violations;
  }
  if (zeta_mean(0.0) != 0.5) ++violations;
  return tolerance_report("zero_point_case", static_cast<double>(violations), 1.0, 69);
}

// --- Monte Carlo -------------------------------------------------------------

std::vector<double> draw_n(std::size_t n, auto&& draw) {
  std::vector<double> v(n);
  for (auto& x : v) x = draw();
  return v;
}

TestReport planck_bose_gof(const std::vector<std::uint64_t>& xi, double beta, double alpha,
                           std::string name) {
  const double nbar = mean_occupation(beta);
  const std::uint64_t top = std::min<std::uint64_t>(*std::max_element(xi.begin(), xi.end()), 200);
  std::vector<std::uint64_t> counts(top + 2, 0);
  for (std::uint64_t n : xi) ++counts[std::min(n, top + 1)];
  std::vector<double> probs(top + 2);
  double head = 0.0;
  for (std::uint64_t n = 0; n <= top; ++n) {
    probs[n] = planck_bose_pmf(static_cast<std::int64_t>(n), nbar);
    head += probs[n];
  }
  probs[top + 1] = std::max(0.0, 1.0 - head);
  merge_tail_bins(counts, probs);
  return chi_square_gof(counts, probs, alpha, std::move(name));
}

}  // namespace

std::vector<TestReport> exact_identity_suite() {
  return {independence_identity(),
          joint_vs_marginal_product(),
          digit_telescoping(),
          photon_telescoping(),
          planck_factor_split(),
          binary_photons_vs_planck_bose(),
          marginal_mean_identity(),
          planck_law_identity(),
          rayleigh_jeans_limit(),
          entropy_closed_form(),
          rademacher_relation(),
          reconstruction_round_trip(),
          zero_point_case()};
}

std::vector<TestReport> monte_carlo_suite(const VerifyConfig& config) {
  require_supported_alpha(config.alpha);
  if (config.count < 10000) {
    throw std::invalid_argument("Monte Carlo suite needs count >= 10000");
  }
  const std::size_t n = config.count;
  const double alpha = config.alpha;
  const RngStream root(config.seed);
  std::vector<TestReport> out;

  for (std::size_t bi = 0; bi < config.betas.size(); ++bi) {
    const double beta = config.betas[bi];
    const std::string tag = beta_tag(beta);
    const RngStream base = root.split(bi);
    const auto add = [&](TestReport r) {
      r.name += tag;
      r.note("beta", beta).note("seed", std::to_string(config.seed));
      out.push_back(std::move(r));
    };

    RngStream r_direct = base.split(0);
    RngStream r_trunc = base.split(1);
    RngStream r_digits = base.split(2);
    RngStream r_amp = base.split(3);
    RngStream r_geo = base.split(4);
    RngStream r_photon = base.split(5);

    const DigitSampler digit_sampler(beta, config.depth);
    const BinaryPhotonSampler photon_sampler(beta);

    std::vector<EnergySample> direct(n);
    for (auto& s : direct) s = sample_eta_direct(r_direct, beta);
    std::vector<EnergySample> amp(n);
    for (auto& s : amp) s = sample_eta_via_amplitudes(r_amp, beta);

    std::vector<double> zeta_direct(n);
    std::vector<double> zeta_amp(n);
    std::vector<double> theta(n);
    for (std::size_t i = 0; i < n; ++i) {
      zeta_direct[i] = direct[i].zeta;
      zeta_amp[i] = amp[i].zeta;
      theta[i] = *amp[i].theta / (2.0 * std::numbers::pi);
    }
    const auto zeta_trunc = draw_n(n, [&] { return sample_zeta_truncexp(r_trunc, beta); });
    const auto zeta_digits = draw_n(n, [&] { return digit_sampler.draw(r_digits); });

    const auto cdf = [beta](double z) { return zeta_cdf(z, beta); };
    add(ks_test(zeta_direct, cdf, alpha, "ks_zeta_direct"));
    add(ks_test(zeta_trunc, cdf, alpha, "ks_zeta_truncexp"));
    add(ks_test(zeta_digits, cdf, alpha, "ks_zeta_digits").note("depth", std::to_string(config.depth)));
    add(ks_two_sample(zeta_amp, zeta_direct, alpha, "ks2_zeta_amplitude_vs_direct"));
    add(ks_two_sample(zeta_direct, zeta_digits, alpha, "ks2_zeta_direct_vs_digits"));
    add(ks_two_sample(zeta_amp, zeta_digits, alpha, "ks2_zeta_amplitude_vs_digits"));
    add(ks_test(theta, [](double u) { return std::clamp(u, 0.0, 1.0); }, alpha,
                "ks_phase_uniform"));

    std::vector<std::uint64_t> xi_geo(n);
    for (auto& x : xi_geo) x = sample_xi_geometric(r_geo, beta);
    std::vector<std::uint64_t> xi_photon(n);
    for (auto& x : xi_photon) x = photon_sampler.draw(r_photon);
    add(planck_bose_gof(xi_geo, beta, alpha, "chi2_xi_geometric"));
    add(planck_bose_gof(xi_photon, beta, alpha, "chi2_xi_binary_photons"));

    add(mean_test(zeta_trunc, zeta_mean(beta), 3.0, "mean_zeta"));
    std::vector<double> xi_as_double(xi_geo.begin(), xi_geo.end());
    add(mean_test(xi_as_double, mean_occupation(beta), 3.0, "mean_xi"));

    {
      const double median = zeta_from_uniform(0.5, beta);
      std::uint64_t t[2][2] = {{0, 0}, {0, 0}};
      for (const auto& s : direct) ++t[s.xi == 0 ? 0 : 1][s.zeta < median ? 0 : 1];
      TestReport r;
      r.name = "chi2_xi_zeta_independence";
      r.sample_size = n;
      r.statistic = chi_square_2x2(t[0][0], t[0][1], t[1][0], t[1][1]);
      r.threshold = chi_square_critical(1.0, alpha);
      r.note("alpha", alpha);
      add(r.decide());
    }

    {
      DigitMatrix m(n, 10);
      for (std::size_t i = 0; i < n; ++i) m.set_digits_of(i, zeta_trunc[i]);
      add(digit_independence_test(m, alpha).family);
    }

    {
      const int positions = std::min(12, config.depth);
      const double crit = normal_critical(alpha / positions);
      double worst = 0.0;
      for (int k = 1; k <= positions; ++k) {
        std::size_t ones = 0;
        for (double z : zeta_digits) ones += static_cast<std::size_t>(to_int(digit_of(z, k)));
        const double p = digit_prob(k, -beta)[1];
        const double freq = static_cast<double>(ones) / static_cast<double>(n);
        worst = std::max(worst, std::abs(freq - p) / std::sqrt(p * (1.0 - p) / static_cast<double>(n)));
      }
      TestReport r;
      r.name = "digit_marginals";
      r.sample_size = n;
      r.statistic = worst;
      r.threshold = crit;
      r.note("alpha", alpha).note("positions", std::to_string(positions)).note("correction", "bonferroni");
      add(r.decide());
    }
  }

  RngStream zp = root.split(config.betas.size());
  RngStream zp_bits = zp.split(0);
  RngStream zp_uniform = zp.split(1);
  const auto bits = zero_point_bits(zp_bits, n);
  const auto seed_note = std::to_string(config.seed);
  out.push_back(monobit_test(bits, alpha).note("seed", seed_note));
  out.back().name = "zero_point_monobit";
  out.push_back(runs_test(bits, alpha).note("seed", seed_note));
  out.back().name = "zero_point_runs";
  const auto uniforms = draw_n(n, [&] { return zero_point_uniform(zp_uniform); });
  out.push_back(mean_test(uniforms, 0.5, 3.0, "zero_point_mean").note("seed", seed_note));
  return out;
}

}  // namespace planckbits
