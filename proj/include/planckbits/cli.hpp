#pragma once

// Command-line front end: spectrum, sample, digits, rng and verify.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or configuration
// error.

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "planckbits/distributions.hpp"
#include "planckbits/samplers.hpp"

namespace planckbits::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

inline constexpr std::uint64_t kDefaultSeed = 1234567;
inline constexpr const char* kSeedEnvVar = "PLANCKBITS_SEED";
inline constexpr const char* kVersion = "0.1.0";

/// Raised for any invalid combination of flags; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Command { spectrum, sample, digits, rng, verify };
enum class Format { csv, json };
enum class DigitSource { sampled, extracted };
enum class RngKind { bits, uniform };

struct RunConfig {
  Command command = Command::verify;

  // Parameterization: either betas (one, or a list for verify) or nu + T.
  std::vector<double> betas;
  std::optional<double> nu;
  std::optional<double> temperature;

  // spectrum grid
  std::optional<double> nu_min;
  std::optional<double> nu_max;
  std::optional<std::size_t> steps;

  std::uint64_t seed = kDefaultSeed;
  std::size_t count = 0;
  int depth = DigitSampler::default_depth;
  Route route = Route::direct;
  DigitSource source = DigitSource::sampled;
  RngKind kind = RngKind::bits;
  Format format = Format::csv;
  std::string output;  // empty: standard output
  double alpha = 0.01;
  bool exact_only = false;

  PhysicalConstants constants;

  /// The single beta this run samples at; throws UsageError if ambiguous.
  double single_beta() const;
};

/// Parses arguments (without the program name). `seed_env` is the value of
/// the seed environment variable, if set. Throws UsageError.
RunConfig parse_args(const std::vector<std::string>& args,
                     std::optional<std::string> seed_env = std::nullopt);

/// Checks the cross-flag invariants; throws UsageError.
void validate(RunConfig& config);

int cmd_spectrum(const RunConfig& config, std::ostream& out);
int cmd_sample(const RunConfig& config, std::ostream& out);
int cmd_digits(const RunConfig& config, std::ostream& out);
int cmd_rng(const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out);

/// Dispatches on config.command, honoring config.output.
int execute(const RunConfig& config, std::ostream& out);

/// Full entry point: parse, validate, execute. Usage errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 17-significant-digit rendering, independent of the global locale.
std::string format_g17(double v);

}  // namespace planckbits::cli
