#include "planckbits/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <cmath>
#include <fstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "planckbits/stats.hpp"
#include "planckbits/verify.hpp"

namespace planckbits::cli {
namespace {

using Json = nlohmann::ordered_json;

struct HelpRequested {
  std::string text;
};

std::string_view to_string(Command c) {
  switch (c) {
    case Command::spectrum:
      return "spectrum";
    case Command::sample:
      return "sample";
    case Command::digits:
      return "digits";
    case Command::rng:
      return "rng";
    case Command::verify:
      return "verify";
  }
  return "unknown";
}

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = to_string(c.command);
  if (!c.betas.empty()) j["beta"] = c.betas;
  if (c.nu) j["nu"] = *c.nu;
  if (c.temperature) j["temperature"] = *c.temperature;
  if (c.nu_min) j["nu_min"] = *c.nu_min;
  if (c.nu_max) j["nu_max"] = *c.nu_max;
  if (c.steps) j["steps"] = *c.steps;
  j["seed"] = c.seed;
  j["count"] = c.count;
  j["depth"] = c.depth;
  j["route"] = planckbits::to_string(c.route);
  j["source"] = c.source == DigitSource::sampled ? "sampled" : "extracted";
  j["alpha"] = c.alpha;
  j["exact_only"] = c.exact_only;
  j["format"] = c.format == Format::csv ? "csv" : "json";
  j["constants"] = {{"h", c.constants.h}, {"k", c.constants.k}, {"c", c.constants.c}};
  return j;
}

Json report_json(const TestReport& r) {
  Json j;
  j["name"] = r.name;
  j["statistic"] = r.statistic;  // non-finite values serialize as null
  j["threshold"] = r.threshold;
  j["sample_size"] = r.sample_size;
  j["passed"] = r.passed;
  Json meta = Json::object();
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  j["metadata"] = std::move(meta);
  return j;
}

std::uint64_t parse_seed(const std::string& text, const char* origin) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw UsageError(std::string("invalid seed from ") + origin + ": '" + text + "'");
  }
  return v;
}

}  // namespace

std::string format_g17(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double RunConfig::single_beta() const {
  if (!betas.empty()) {
    if (betas.size() != 1) throw UsageError("this command takes a single --beta");
    return betas.front();
  }
  if (nu && temperature) {
    try {
      return beta_of(*nu, *temperature, constants);
    } catch (const std::domain_error& e) {
      throw UsageError(e.what());
    }
  }
  throw UsageError("supply either --beta or both --nu and --temperature");
}

RunConfig parse_args(const std::vector<std::string>& args, std::optional<std::string> seed_env) {
  RunConfig cfg;
  CLI::App app{"Black-body mode energy: closed forms, samplers and verification", "planckbits"};
  app.require_subcommand(1);

  std::optional<std::string> seed_flag;
  std::optional<long long> count;
  std::string route = "direct";
  std::string source = "sampled";
  std::string format = "csv";
  std::string kind = "bits";

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed_flag, "64-bit seed (default from $PLANCKBITS_SEED or built-in)");
    sub->add_option("--output", cfg.output, "Write to PATH instead of standard output");
  };
  const auto add_param = [&](CLI::App* sub, bool many) {
    auto* b = sub->add_option("--beta", cfg.betas, "Dimensionless h nu / k T");
    if (many) b->delimiter(','); else b->expected(1);
    sub->add_option("--nu", cfg.nu, "Frequency in Hz");
    sub->add_option("--temperature", cfg.temperature, "Temperature in K");
  };

  auto* spectrum = app.add_subcommand("spectrum", "Tabulate Planck's law on a frequency grid");
  spectrum->add_option("--nu", cfg.nu, "Single frequency in Hz");
  spectrum->add_option("--nu-min", cfg.nu_min, "Lowest grid frequency in Hz");
  spectrum->add_option("--nu-max", cfg.nu_max, "Highest grid frequency in Hz");
  spectrum->add_option("--steps", cfg.steps, "Number of grid points");
  spectrum->add_option("--temperature", cfg.temperature, "Temperature in K");
  spectrum->add_option("--format", format, "csv or json");
  add_common(spectrum);

  auto* sample = app.add_subcommand("sample", "Draw energy samples (eta, xi, zeta)");
  add_param(sample, false);
  sample->add_option("--count", count, "Number of samples");
  sample->add_option("--route", route, "amplitude, direct or digits");
  sample->add_option("--depth", cfg.depth, "Digit depth for the digits route");
  sample->add_option("--format", format, "csv or json");
  add_common(sample);

  auto* digits = app.add_subcommand("digits", "Emit dyadic digit strings of zeta");
  add_param(digits, false);
  digits->add_option("--count", count, "Number of rows");
  digits->add_option("--depth", cfg.depth, "Digits per row (1..64)");
  digits->add_option("--source", source, "sampled (digit route) or extracted (from trunc-exp draws)");
  digits->add_option("--format", format, "csv or json");
  add_common(digits);

  auto* rng = app.add_subcommand("rng", "Zero-point ideal bit generator");
  rng->add_option("--count", count, "Number of bits or uniforms");
  rng->add_option("--kind", kind, "bits or uniform");
  add_common(rng);

  auto* verify = app.add_subcommand("verify", "Run the exact-identity and Monte Carlo suites");
  add_param(verify, true);
  verify->add_option("--count", count, "Monte Carlo sample size per check");
  verify->add_option("--depth", cfg.depth, "Digit depth for the digit route");
  verify->add_option("--alpha", cfg.alpha, "Significance level: 0.05, 0.01 or 0.001");
  verify->add_flag("--exact-only", cfg.exact_only, "Skip the Monte Carlo suite");
  add_common(verify);

  std::vector<const char*> argv{"planckbits"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (spectrum->parsed()) cfg.command = Command::spectrum;
  if (sample->parsed()) cfg.command = Command::sample;
  if (digits->parsed()) cfg.command = Command::digits;
  if (rng->parsed()) cfg.command = Command::rng;
  if (verify->parsed()) cfg.command = Command::verify;

  if (seed_flag) {
    cfg.seed = parse_seed(*seed_flag, "--seed");
  } else if (seed_env && !seed_env->empty()) {
    cfg.seed = parse_seed(*seed_env, kSeedEnvVar);
  }

  if (count) {
    if (*count < 1) throw UsageError("--count must be >= 1");
    cfg.count = static_cast<std::size_t>(*count);
  } else {
    switch (cfg.command) {
      case Command::verify:
        cfg.count = 100000;
        break;
      case Command::rng:
        cfg.count = 64;
        break;
      default:
        cfg.count = 10;
    }
  }

  const auto r = parse_route(route);
  if (!r) throw UsageError("unknown route '" + route + "'; valid routes: amplitude, direct, digits");
  cfg.route = *r;

  if (source == "sampled") {
    cfg.source = DigitSource::sampled;
  } else if (source == "extracted") {
    cfg.source = DigitSource::extracted;
  } else {
    throw UsageError("unknown source '" + source + "'; valid sources: sampled, extracted");
  }

  if (format == "csv") {
    cfg.format = Format::csv;
  } else if (format == "json") {
    cfg.format = Format::json;
  } else {
    throw UsageError("unknown format '" + format + "'; valid formats: csv, json");
  }

  if (kind == "bits") {
    cfg.kind = RngKind::bits;
  } else if (kind == "uniform") {
    cfg.kind = RngKind::uniform;
  } else {
    throw UsageError("unknown kind '" + kind + "'; valid kinds: bits, uniform");
  }
  return cfg;
}

void validate(RunConfig& c) {
  if (c.depth < 1 || c.depth > 64) {
    throw UsageError("--depth must be in [1, 64], got " + std::to_string(c.depth));
  }
  if (!is_supported_alpha(c.alpha)) {
    throw UsageError("--alpha must be one of 0.05, 0.01, 0.001; got " + format_g17(c.alpha));
  }
  if (c.count < 1) throw UsageError("--count must be >= 1");

  const bool has_beta = !c.betas.empty();
  const bool has_nu_t = c.nu.has_value() || c.temperature.has_value();
  for (double b : c.betas) {
    if (!std::isfinite(b) || b < 0.0) throw UsageError("--beta must be finite and >= 0");
  }

  switch (c.command) {
    case Command::spectrum: {
      if (!c.temperature) throw UsageError("spectrum needs --temperature");
      const bool grid = c.nu_min || c.nu_max || c.steps;
      if (c.nu && grid) throw UsageError("give either --nu or --nu-min/--nu-max/--steps");
      if (!c.nu && !grid) throw UsageError("spectrum needs --nu or a frequency grid");
      if (grid) {
        if (!(c.nu_min && c.nu_max && c.steps)) {
          throw UsageError("a grid needs all of --nu-min, --nu-max and --steps");
        }
        if (*c.steps == 0) throw UsageError("--steps must be >= 1");
        if (!(*c.nu_min > 0.0 && *c.nu_min <= *c.nu_max && std::isfinite(*c.nu_max))) {
          throw UsageError("grid needs 0 < --nu-min <= --nu-max");
        }
        if (*c.steps == 1 && *c.nu_min != *c.nu_max) {
          throw UsageError("a one-point grid needs --nu-min == --nu-max");
        }
      }
      break;
    }
    case Command::sample:
    case Command::digits: {
      if (has_beta && has_nu_t) throw UsageError("give either --beta or --nu/--temperature, not both");
      const double beta = c.single_beta();
      if (c.command == Command::sample && !(beta > 0.0)) {
        throw UsageError("sampling eta needs beta > 0");
      }
      if (!has_beta) c.betas = {beta};
      break;
    }
    case Command::rng:
      break;
    case Command::verify: {
      if (has_beta && has_nu_t) throw UsageError("give either --beta or --nu/--temperature, not both");
      if (has_nu_t) {
        c.betas = {c.single_beta()};
      } else if (!has_beta) {
        c.betas = {0.2, 1.0, 5.0};
      }
      for (double b : c.betas) {
        if (!(b > 0.0)) throw UsageError("verify needs every beta > 0");
      }
      if (!c.exact_only && c.count < 10000) {
        throw UsageError("the Monte Carlo suite needs --count >= 10000");
      }
      break;
    }
  }
}

int cmd_spectrum(const RunConfig& c, std::ostream& out) {
  std::vector<double> grid;
  if (c.nu) {
    grid.push_back(*c.nu);
  } else {
    const std::size_t steps = *c.steps;
    for (std::size_t i = 0; i < steps; ++i) {
      grid.push_back(steps == 1 ? *c.nu_min
                                : *c.nu_min + (*c.nu_max - *c.nu_min) * static_cast<double>(i) /
                                                  static_cast<double>(steps - 1));
    }
  }

  struct Row {
    double nu, t, u, energy, nbar, beta;
  };
  std::vector<Row> rows;
  rows.reserve(grid.size());
  try {
    for (double nu : grid) {
      const ModeParams mode(nu, *c.temperature, c.constants);
      rows.push_back({nu, *c.temperature, spectral_density(nu, *c.temperature, c.constants),
                      oscillator_mean_energy(nu, *c.temperature, c.constants),
                      mean_occupation(mode.beta()), mode.beta()});
    }
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }

  if (c.format == Format::csv) {
    out << "nu,temperature,spectral_density,oscillator_energy,mean_occupation,beta\n";
    for (const auto& r : rows) {
      out << format_g17(r.nu) << ',' << format_g17(r.t) << ',' << format_g17(r.u) << ','
          << format_g17(r.energy) << ',' << format_g17(r.nbar) << ',' << format_g17(r.beta) << '\n';
    }
  } else {
    Json j;
    j["config"] = config_json(c);
    Json arr = Json::array();
    for (const auto& r : rows) {
      arr.push_back({{"nu", r.nu},
                     {"temperature", r.t},
                     {"spectral_density", r.u},
                     {"oscillator_energy", r.energy},
                     {"mean_occupation", r.nbar},
                     {"beta", r.beta}});
    }
    j["rows"] = std::move(arr);
    out << j.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_sample(const RunConfig& c, std::ostream& out) {
  const double beta = c.single_beta();
  RngStream rng(c.seed);
  std::optional<DigitSampler> digit_sampler;
  std::optional<BinaryPhotonSampler> photon_sampler;
  if (c.route == Route::digits) {
    digit_sampler.emplace(beta, c.depth);
    photon_sampler.emplace(beta);
  }
  const auto draw = [&]() -> EnergySample {
    switch (c.route) {
      case Route::amplitude:
        return sample_eta_via_amplitudes(rng, beta);
      case Route::direct:
        return sample_eta_direct(rng, beta);
      case Route::digits:
        return sample_eta_via_digits(rng, *photon_sampler, *digit_sampler);
    }
    return {};
  };

  if (c.format == Format::csv) {
    out << "index,eta,xi,zeta,route\n";
    for (std::size_t i = 0; i < c.count; ++i) {
      const EnergySample s = draw();
      out << i << ',' << format_g17(s.eta) << ',' << s.xi << ',' << format_g17(s.zeta) << ','
          << planckbits::to_string(s.route) << '\n';
    }
  } else {
    Json j;
    j["config"] = config_json(c);
    j["algorithm"] = RngStream::algorithm_id;
    Json arr = Json::array();
    for (std::size_t i = 0; i < c.count; ++i) {
      const EnergySample s = draw();
      arr.push_back({{"index", i},
                     {"eta", s.eta},
                     {"xi", s.xi},
                     {"zeta", s.zeta},
                     {"route", planckbits::to_string(s.route)}});
    }
    j["samples"] = std::move(arr);
    out << j.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_digits(const RunConfig& c, std::ostream& out) {
  const double beta = c.single_beta();
  RngStream rng(c.seed);
  const DigitSampler sampler(beta, c.depth);
  const auto draw = [&]() -> DigitVector {
    if (c.source == DigitSource::sampled) return sampler.draw_with_digits(rng).second;
    return extract_digits(sample_zeta_truncexp(rng, beta), c.depth);
  };

  if (c.format == Format::csv) {
    out << "index,bits,zeta\n";
    for (std::size_t i = 0; i < c.count; ++i) {
      const DigitVector d = draw();
      out << i << ',' << d.to_string() << ',' << format_g17(reconstruct_zeta(d)) << '\n';
    }
  } else {
    Json j;
    j["config"] = config_json(c);
    j["algorithm"] = RngStream::algorithm_id;
    Json arr = Json::array();
    for (std::size_t i = 0; i < c.count; ++i) {
      const DigitVector d = draw();
      arr.push_back({{"index", i}, {"bits", d.to_string()}, {"zeta", reconstruct_zeta(d)}});
    }
    j["rows"] = std::move(arr);
    out << j.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_rng(const RunConfig& c, std::ostream& out) {
  RngStream rng(c.seed);
  if (c.kind == RngKind::bits) {
    const auto bits = zero_point_bits(rng, c.count);
    std::string line;
    line.reserve(64);
    for (Bit b : bits) {
      line.push_back(b == Bit::one ? '1' : '0');
      if (line.size() == 64) {
        out << line << '\n';
        line.clear();
      }
    }
    if (!line.empty()) out << line << '\n';
  } else {
    for (std::size_t i = 0; i < c.count; ++i) out << format_g17(zero_point_uniform(rng)) << '\n';
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  std::vector<TestReport> reports = exact_identity_suite();
  for (auto& r : reports) r.note("suite", "exact");
  if (!c.exact_only) {
    VerifyConfig vc;
    vc.betas = c.betas;
    vc.seed = c.seed;
    vc.count = c.count;
    vc.depth = c.depth;
    vc.alpha = c.alpha;
    for (auto& r : monte_carlo_suite(vc)) {
      r.note("suite", "monte_carlo");
      reports.push_back(std::move(r));
    }
  }

  std::size_t passed = 0;
  for (const auto& r : reports) passed += r.passed ? 1 : 0;

  Json j;
  j["summary"] = {{"total", reports.size()},
                  {"passed", passed},
                  {"failed", reports.size() - passed},
                  {"seed", c.seed},
                  {"versions",
                   {{"planckbits", kVersion}, {"rng", std::string(RngStream::algorithm_id)}}}};
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(report_json(r));
  j["reports"] = std::move(arr);
  j["config"] = config_json(c);
  out << j.dump(2) << '\n';
  return passed == reports.size() ? kExitOk : kExitVerifyFailed;
}

int execute(const RunConfig& config, std::ostream& out) {
  std::ofstream file;
  std::ostream* dest = &out;
  if (!config.output.empty()) {
    file.open(config.output);
    if (!file) throw UsageError("cannot open output file '" + config.output + "'");
    dest = &file;
  }
  switch (config.command) {
    case Command::spectrum:
      return cmd_spectrum(config, *dest);
    case Command::sample:
      return cmd_sample(config, *dest);
    case Command::digits:
      return cmd_digits(config, *dest);
    case Command::rng:
      return cmd_rng(config, *dest);
    case Command::verify:
      return cmd_verify(config, *dest);
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    std::optional<std::string> env;
    if (const char* v = std::getenv(kSeedEnvVar)) env = v;
    RunConfig cfg = parse_args(args, env);
    validate(cfg);
    return execute(cfg, out);
  } catch (const HelpRequested& h) {
    out << h.text;
    return kExitOk;
  } catch (const UsageError& e) {
    err << "planckbits: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "planckbits: error: " << e.what() << '\n';
    return kExitVerifyFailed;
  }
}

}  // namespace planckbits::cli
