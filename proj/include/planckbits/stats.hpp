#pragma once

// Goodness-of-fit, independence and bit-stream tests. Each returns a
// TestReport whose verdict is `statistic < threshold`.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "planckbits/distributions.hpp"

namespace planckbits {

struct TestReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  std::size_t sample_size = 0;
  bool passed = false;
  /// Ordered key/value notes (seed, beta, depth, ...).
  std::vector<std::pair<std::string, std::string>> metadata;

  /// Sets `passed` from statistic and threshold.
  TestReport& decide() {
    passed = statistic < threshold;
    return *this;
  }
  TestReport& note(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  TestReport& note(std::string key, double value);
};

/// Significance levels with tabulated asymptotic critical values.
bool is_supported_alpha(double alpha) noexcept;
/// Throws std::invalid_argument for anything other than 0.05, 0.01, 0.001.
void require_supported_alpha(double alpha);

/// Right-continuous empirical CDF.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);

  double operator()(double x) const;
  std::size_t size() const noexcept { return sorted_.size(); }
  std::span<const double> sorted() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

EmpiricalCdf ecdf(std::vector<double> samples);

/// Asymptotic Kolmogorov coefficient c(alpha) = sqrt(-ln(alpha/2) / 2).
double ks_coefficient(double alpha);

/// sup |F_n - F| for the given samples.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
/// sup |F_n - G_m| between two sample sets.
double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b);

/// One-sample KS test; threshold c(alpha) / sqrt(N). Requires N >= 30.
TestReport ks_test(std::vector<double> samples, const std::function<double(double)>& cdf,
                   double alpha, std::string name = "ks");
/// Two-sample KS test; threshold c(alpha) sqrt((n + m) / (n m)).
TestReport ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha,
                         std::string name = "ks_two_sample");

/// Upper-alpha quantile of chi-square with `dof` degrees of freedom.
double chi_square_critical(double dof, double alpha);
/// Two-sided standard normal critical value z_{1 - alpha/2}.
double normal_critical(double alpha);

/// Pearson goodness-of-fit. `probs` must sum to 1 and every expected count
/// N p_i must be at least 5; otherwise std::invalid_argument asks for the
/// tail to be merged (see merge_tail_bins).
TestReport chi_square_gof(std::span<const std::uint64_t> counts, std::span<const double> probs,
                          double alpha, std::string name = "chi_square_gof");

/// Merges every bin from the first one with expected count below
/// min_expected onward into a single tail bin, folding that tail into its
/// neighbour if it is still too small. Meant for tails of unimodal laws.
void merge_tail_bins(std::vector<std::uint64_t>& counts, std::vector<double>& probs,
                     double min_expected = 5.0);

/// Pearson statistic of a 2x2 table {{n00, n01}, {n10, n11}}; 1 dof.
double chi_square_2x2(std::uint64_t n00, std::uint64_t n01, std::uint64_t n10,
                      std::uint64_t n11);

/// N samples x K digit positions, row-major, entries 0/1.
class DigitMatrix {
 public:
  DigitMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint8_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::uint8_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  /// Row r receives the first `cols` digits of x.
  void set_digits_of(std::size_t r, double x);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint8_t> data_;
};

struct IndependenceResult {
  /// One 2x2 chi-square report per evaluated pair (k, l), k < l.
  std::vector<TestReport> pairs;
  /// Bonferroni family verdict: statistic is the largest pair statistic,
  /// threshold the chi-square critical value at alpha / (K (K - 1) / 2).
  TestReport family;
};

/// Pairwise independence of digit columns. Requires N >= 1e4 and
/// 2 <= K <= 16. Pairs involving a constant column are skipped and listed in
/// the family metadata.
IndependenceResult digit_independence_test(const DigitMatrix& digits, double alpha);

/// |z| of the bit sum against N/2. Requires >= 1e4 bits.
TestReport monobit_test(std::span<const Bit> bits, double alpha);
/// |z| of the number of runs against its Wald-Wolfowitz null. Requires >= 1e4
/// bits; a constant stream has no null variance and fails with an infinite
/// statistic.
TestReport runs_test(std::span<const Bit> bits, double alpha);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double standard_error = 0.0;
  std::size_t count = 0;
};

Moments moment_report(std::span<const double> samples);

/// |mean - expected| / SE against `sigmas`.
TestReport mean_test(std::span<const double> samples, double expected, double sigmas,
                     std::string name = "mean");

}  // namespace planckbits
