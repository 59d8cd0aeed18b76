#include "planckbits/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace planckbits {
namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << v;
  return os.str();
}

void require_min_size(std::size_t n, std::size_t min, const char* what) {
  if (n < min) {
    throw std::invalid_argument(std::string(what) + " needs at least " + std::to_string(min) +
                                " samples, got " + std::to_string(n));
  }
}

}  // namespace

TestReport& TestReport::note(std::string key, double value) {
  return note(std::move(key), format_double(value));
}

bool is_supported_alpha(double alpha) noexcept {
  return alpha == 0.05 || alpha == 0.01 || alpha == 0.001;
}

void require_supported_alpha(double alpha) {
  if (!is_supported_alpha(alpha)) {
    throw std::invalid_argument("alpha must be one of 0.05, 0.01, 0.001; got " +
                                format_double(alpha));
  }
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw std::invalid_argument("empirical CDF of an empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

EmpiricalCdf ecdf(std::vector<double> samples) { return EmpiricalCdf(std::move(samples)); }

double ks_coefficient(double alpha) {
  require_supported_alpha(alpha);
  return std::sqrt(-0.5 * std::log(alpha / 2.0));
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, hi - f, f - lo});
  }
  return d;
}

double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    // Step past every copy of the smaller value in both samples so ties
    // never open a spurious gap.
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

TestReport ks_test(std::vector<double> samples, const std::function<double(double)>& cdf,
                   double alpha, std::string name) {
  require_supported_alpha(alpha);
  require_min_size(samples.size(), 30, "KS test");
  TestReport r;
  r.name = std::move(name);
  r.sample_size = samples.size();
  r.threshold = ks_coefficient(alpha) / std::sqrt(static_cast<double>(samples.size()));
  r.statistic = ks_statistic(std::move(samples), cdf);
  r.note("alpha", alpha);
  return r.decide();
}

TestReport ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha,
                         std::string name) {
  require_supported_alpha(alpha);
  require_min_size(a.size(), 30, "two-sample KS test");
  require_min_size(b.size(), 30, "two-sample KS test");
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  TestReport r;
  r.name = std::move(name);
  r.sample_size = a.size() + b.size();
  r.threshold = ks_coefficient(alpha) * std::sqrt((n + m) / (n * m));
  r.statistic = ks_two_sample_statistic(std::move(a), std::move(b));
  r.note("alpha", alpha);
  return r.decide();
}

double chi_square_critical(double dof, double alpha) {
  if (!(dof > 0.0)) throw std::invalid_argument("chi-square needs positive degrees of freedom");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  return boost::math::quantile(boost::math::complement(boost::math::chi_squared(dof), alpha));
}

double normal_critical(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  return boost::math::quantile(boost::math::complement(boost::math::normal(), alpha / 2.0));
}

TestReport chi_square_gof(std::span<const std::uint64_t> counts, std::span<const double> probs,
                          double alpha, std::string name) {
  require_supported_alpha(alpha);
  if (counts.size() != probs.size() || counts.size() < 2) {
    throw std::invalid_argument("chi-square needs matching counts and probabilities, >= 2 bins");
  }
  const double total_p = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(total_p - 1.0) > 1e-9) {
    throw std::invalid_argument("bin probabilities must sum to 1, got " + format_double(total_p));
  }
  const std::uint64_t n = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  const double nd = static_cast<double>(n);
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = nd * probs[i];
    if (expected < 5.0) {
      throw std::invalid_argument("expected count " + format_double(expected) + " in bin " +
                                  std::to_string(i) +
                                  " is below 5; merge the tail bins before testing");
    }
    const double diff = static_cast<double>(counts[i]) - expected;
    stat += diff * diff / expected;
  }
  TestReport r;
  r.name = std::move(name);
  r.sample_size = n;
  r.statistic = stat;
  r.threshold = chi_square_critical(static_cast<double>(counts.size() - 1), alpha);
  r.note("alpha", alpha).note("bins", std::to_string(counts.size()));
  return r.decide();
}

void merge_tail_bins(std::vector<std::uint64_t>& counts, std::vector<double>& probs,
                     double min_expected) {
  if (counts.size() != probs.size()) throw std::invalid_argument("size mismatch");
  const double n =
      static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
  // first bin whose expected count is too small; everything from there on
  // becomes one tail bin
  std::size_t cut = 0;
  while (cut < probs.size() && n * probs[cut] >= min_expected) ++cut;
  if (cut + 1 >= probs.size()) return;
  for (std::size_t i = cut + 1; i < probs.size(); ++i) {
    counts[cut] += counts[i];
    probs[cut] += probs[i];
  }
  counts.resize(cut + 1);
  probs.resize(cut + 1);
  if (counts.size() > 2 && n * probs.back() < min_expected) {
    counts[cut - 1] += counts[cut];
    probs[cut - 1] += probs[cut];
    counts.pop_back();
    probs.pop_back();
  }
}

double chi_square_2x2(std::uint64_t n00, std::uint64_t n01, std::uint64_t n10,
                      std::uint64_t n11) {
  const double a = static_cast<double>(n00);
  const double b = static_cast<double>(n01);
  const double c = static_cast<double>(n10);
  const double d = static_cast<double>(n11);
  const double n = a + b + c + d;
  const double denom = (a + b) * (c + d) * (a + c) * (b + d);
  if (denom == 0.0) return 0.0;
  const double cross = a * d - b * c;
  return n * cross * cross / denom;
}

DigitMatrix::DigitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

void DigitMatrix::set_digits_of(std::size_t r, double x) {
  for (std::size_t c = 0; c < cols_; ++c) {
    (*this)(r, c) = static_cast<std::uint8_t>(to_int(digit_of(x, static_cast<int>(c) + 1)));
  }
}

IndependenceResult digit_independence_test(const DigitMatrix& digits, double alpha) {
  require_supported_alpha(alpha);
  require_min_size(digits.rows(), 10000, "digit independence test");
  const std::size_t k = digits.cols();
  if (k < 2 || k > 16) throw std::invalid_argument("digit independence needs 2..16 positions");

  std::vector<std::uint64_t> ones(k, 0);
  for (std::size_t r = 0; r < digits.rows(); ++r) {
    for (std::size_t c = 0; c < k; ++c) ones[c] += digits(r, c);
  }
  const auto constant = [&](std::size_t c) { return ones[c] == 0 || ones[c] == digits.rows(); };

  const std::size_t family_size = k * (k - 1) / 2;
  const double pair_alpha = alpha / static_cast<double>(family_size);
  const double threshold = chi_square_critical(1.0, pair_alpha);

  IndependenceResult out;
  std::string skipped;
  double worst = 0.0;
  bool all_pass = true;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (constant(i) || constant(j)) {
        if (!skipped.empty()) skipped += ' ';
        skipped += "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
        continue;
      }
      std::uint64_t n[2][2] = {{0, 0}, {0, 0}};
      for (std::size_t r = 0; r < digits.rows(); ++r) ++n[digits(r, i)][digits(r, j)];
      TestReport pr;
      pr.name = "digit_pair_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
      pr.sample_size = digits.rows();
      pr.statistic = chi_square_2x2(n[0][0], n[0][1], n[1][0], n[1][1]);
      pr.threshold = threshold;
      pr.note("alpha_per_pair", pair_alpha);
      pr.decide();
      worst = std::max(worst, pr.statistic);
      all_pass = all_pass && pr.passed;
      out.pairs.push_back(std::move(pr));
    }
  }

  TestReport& fam = out.family;
  fam.name = "digit_independence";
  fam.sample_size = digits.rows();
  fam.statistic = worst;
  fam.threshold = threshold;
  fam.passed = all_pass;
  fam.note("alpha", alpha)
      .note("positions", std::to_string(k))
      .note("pairs_tested", std::to_string(out.pairs.size()))
      .note("correction", "bonferroni");
  if (!skipped.empty()) fam.note("skipped_constant_pairs", skipped);
  return out;
}

TestReport monobit_test(std::span<const Bit> bits, double alpha) {
  require_min_size(bits.size(), 10000, "monobit test");
  const double crit = normal_critical(alpha);
  std::uint64_t ones = 0;
  for (Bit b : bits) ones += static_cast<std::uint64_t>(to_int(b));
  const double n = static_cast<double>(bits.size());
  const double z = (2.0 * static_cast<double>(ones) - n) / std::sqrt(n);
  TestReport r;
  r.name = "monobit";
  r.sample_size = bits.size();
  r.statistic = std::abs(z);
  r.threshold = crit;
  r.note("alpha", alpha).note("z", z).note("ones", std::to_string(ones));
  return r.decide();
}

TestReport runs_test(std::span<const Bit> bits, double alpha) {
  require_min_size(bits.size(), 10000, "runs test");
  const double crit = normal_critical(alpha);
  std::uint64_t ones = 0;
  std::uint64_t runs = 1;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    ones += static_cast<std::uint64_t>(to_int(bits[i]));
    if (i > 0 && bits[i] != bits[i - 1]) ++runs;
  }
  const double n = static_cast<double>(bits.size());
  const double n1 = static_cast<double>(ones);
  const double n0 = n - n1;
  const double mu = 2.0 * n1 * n0 / n + 1.0;
  const double var = (mu - 1.0) * (mu - 2.0) / (n - 1.0);
  const double z = var > 0.0 ? (static_cast<double>(runs) - mu) / std::sqrt(var)
                             : std::numeric_limits<double>::infinity();
  TestReport r;
  r.name = "runs";
  r.sample_size = bits.size();
  r.statistic = std::abs(z);
  r.threshold = crit;
  r.note("alpha", alpha).note("z", z).note("runs", std::to_string(runs));
  return r.decide();
}

Moments moment_report(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("moments need at least 2 samples");
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  Moments m;
  m.count = samples.size();
  m.mean = mean;
  m.variance = ss / (n - 1.0);
  m.standard_error = std::sqrt(m.variance / n);
  return m;
}

TestReport mean_test(std::span<const double> samples, double expected, double sigmas,
                     std::string name) {
  const Moments m = moment_report(samples);
  TestReport r;
  r.name = std::move(name);
  r.sample_size = m.count;
  r.statistic = m.standard_error > 0.0 ? std::abs(m.mean - expected) / m.standard_error
                                       : (m.mean == expected ? 0.0 : INFINITY);
  r.threshold = sigmas;
  r.note("mean", m.mean).note("expected", expected).note("standard_error", m.standard_error);
  return r.decide();
}

}  // namespace planckbits
