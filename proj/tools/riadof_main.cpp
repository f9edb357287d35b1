// riadof: achievable-DoF catalog, scheme-parameter optimizer and Monte Carlo
// verifier for the two-phase retrospective alignment scheme on the 3-user
// MIMO interference channel with delayed CSIT.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "ria/dof_catalog.hpp"
#include "ria/optimizer.hpp"
#include "ria/scheme.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RIA_DOF_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError("RIA_DOF_SEED is not a valid unsigned integer");
    }
  }
  return 42;
}

// Accepts "3", "3/5" and terminating decimals like "0.75".
ria::Rational parse_rational(const std::string& text) {
  try {
    if (const auto slash = text.find('/'); slash != std::string::npos) {
      return ria::Rational(std::stoll(text.substr(0, slash)),
                           std::stoll(text.substr(slash + 1)));
    }
    if (const auto dot = text.find('.'); dot != std::string::npos) {
      const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      std::int64_t den = 1;
      for (std::size_t k = dot + 1; k < text.size(); ++k) den *= 10;
      return ria::Rational(std::stoll(digits), den);
    }
    return ria::Rational(std::stoll(text));
  } catch (const std::exception&) {
    throw UsageError("cannot parse '" + text + "' as a rational number");
  }
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + out_path);
  out << text;
}

nlohmann::json rational_json(const ria::Rational& r) {
  return {{"num", r.num()}, {"den", r.den()}, {"value", r.to_double()}};
}

std::string rational_cell(const ria::Rational& r) {
  return r.str() + " (" + ria::format_decimal(r.to_double()) + ")";
}

// ---- dof ------------------------------------------------------------------

int cmd_dof(int m, int n, const std::string& format, const std::string& out_path) {
  const ria::AntennaConfig cfg(m, n);
  const ria::Region region = ria::classify(cfg);
  const ria::DofValue inner = ria::inner_bound(cfg);
  const ria::Rational outer = ria::outer_bound_normalized(cfg.rho());

  std::ostringstream text;
  if (format == "json") {
    nlohmann::json j = {
        {"schema", 1},
        {"command", "dof"},
        {"M", m},
        {"N", n},
        {"rho", rational_json(cfg.rho())},
        {"region", ria::region_label(region)},
        {"inner", rational_json(inner.value)},
        {"inner_normalized", rational_json(inner.normalized)},
        {"achieved_by", inner.strategy},
        {"outer_normalized", rational_json(outer)},
        {"outer_interpolated", ria::outer_bound_interpolated(cfg.rho())},
    };
    nlohmann::json strategies;
    for (ria::Strategy s : ria::kAllStrategies) {
      const auto v = ria::strategy_dof(cfg, s);
      strategies[ria::strategy_label(s)] =
          v ? rational_json(v->value) : nlohmann::json();
    }
    j["strategies"] = strategies;
    text << j.dump(2) << '\n';
  } else if (format == "csv") {
    text << "M,N,rho_num,rho_den,rho,region,inner,inner_normalized,outer_normalized";
    for (ria::Strategy s : ria::kAllStrategies) text << ',' << ria::strategy_label(s);
    text << '\n'
         << m << ',' << n << ',' << cfg.rho().num() << ',' << cfg.rho().den() << ','
         << ria::format_decimal(cfg.rho().to_double()) << ','
         << ria::region_label(region) << ','
         << ria::format_decimal(inner.value.to_double()) << ','
         << ria::format_decimal(inner.normalized.to_double()) << ','
         << ria::format_decimal(outer.to_double());
    for (ria::Strategy s : ria::kAllStrategies) {
      const auto v = ria::strategy_dof(cfg, s);
      text << ',';
      if (v) text << ria::format_decimal(v->value.to_double());
    }
    text << '\n';
  } else {
    text << "configuration      M = " << m << ", N = " << n
         << ", rho = " << cfg.rho().str() << "\n"
         << "region             " << ria::region_label(region) << "\n"
         << "DoF per user       " << rational_cell(inner.value) << "  via "
         << inner.strategy << "\n"
         << "normalized d/N     " << rational_cell(inner.normalized) << "\n"
         << "outer bound d/N    " << rational_cell(outer)
         << (ria::outer_bound_interpolated(cfg.rho()) ? "  [interpolated]" : "")
         << "\n"
         << "strategies:\n";
    for (ria::Strategy s : ria::kAllStrategies) {
      const auto v = ria::strategy_dof(cfg, s);
      text << "  " << ria::strategy_label(s) << ": "
           << (v ? rational_cell(v->value) : std::string("n/a")) << "\n";
    }
  }
  write_output(text.str(), out_path);
  return kExitOk;
}

// ---- optimize ---------------------------------------------------------------

void print_constraints(std::ostream& out, const ria::ConstraintReport& r) {
  out << "constraints        u-filter(16)=" << (r.c16_u_filter ? "ok" : "FAIL")
      << " intersection(17)=" << (r.c17_intersection ? "ok" : "FAIL")
      << " rank(18)=" << (r.c18_rank ? "ok" : "FAIL")
      << " space(19)=" << (r.c19_space ? "ok" : "FAIL") << "\n";
}

int cmd_optimize(int m, int n, bool oracle, std::int64_t max_w1, std::int64_t max_w2,
                 const std::string& format, const std::string& out_path) {
  const ria::AntennaConfig cfg(m, n);
  std::optional<ria::SchemeParams> closed;
  std::string region_error;
  try {
    closed = ria::closed_form(cfg);
  } catch (const std::domain_error& e) {
    region_error = e.what();
  }
  if (!closed && !oracle) {
    std::cerr << "error: " << region_error << "\n"
              << "hint: pass --oracle to search this configuration exhaustively\n";
    return kExitUsage;
  }

  ria::SearchBounds bounds = ria::default_bounds(cfg);
  if (max_w1 > 0) bounds.w1_max = max_w1;
  if (max_w2 > 0) bounds.w2_max = max_w2;
  std::optional<ria::SchemeParams> searched;
  if (oracle) searched = ria::brute_force(cfg, bounds);

  bool agree = true;
  if (closed && searched) agree = closed->dof() == searched->dof();

  std::ostringstream text;
  if (format == "json") {
    nlohmann::json j = {{"schema", 1}, {"command", "optimize"}, {"M", m}, {"N", n}};
    if (closed) {
      j["closed_form"] = {{"b", closed->symbols},
                          {"W1", closed->w1},
                          {"W2", closed->w2},
                          {"dof", rational_json(closed->dof())}};
      const auto cr = ria::check_constraints(closed->symbols, closed->w1, closed->w2, cfg);
      j["closed_form"]["feasible"] = cr.feasible();
    } else {
      j["closed_form"] = nullptr;
      j["region_error"] = region_error;
    }
    if (searched) {
      j["brute_force"] = {{"b", searched->symbols},
                          {"W1", searched->w1},
                          {"W2", searched->w2},
                          {"dof", rational_json(searched->dof())}};
    } else if (oracle) {
      j["brute_force"] = nullptr;
    }
    if (closed && searched) j["agree"] = agree;
    text << j.dump(2) << '\n';
  } else {
    text << "configuration      M = " << m << ", N = " << n
         << ", rho = " << cfg.rho().str() << "\n";
    if (closed) {
      text << "closed form        b = " << closed->symbols << ", W1 = " << closed->w1
           << ", W2 = " << closed->w2 << ", DoF = " << rational_cell(closed->dof())
           << "\n";
      print_constraints(text, ria::check_constraints(closed->symbols, closed->w1,
                                                     closed->w2, cfg));
    } else {
      text << "closed form        n/a (" << region_error << ")\n";
    }
    if (searched) {
      text << "brute force        b = " << searched->symbols
           << ", W1 = " << searched->w1 << ", W2 = " << searched->w2
           << ", DoF = " << rational_cell(searched->dof()) << "\n";
    } else if (oracle) {
      text << "brute force        no feasible triple within bounds\n";
    }
    if (closed && searched)
      text << "agreement          " << (agree ? "dof values agree" : "DOF MISMATCH")
           << "\n";
  }
  write_output(text.str(), out_path);
  if (oracle && !searched) return kExitVerificationFailure;
  return agree ? kExitOk : kExitVerificationFailure;
}

// ---- regions ----------------------------------------------------------------

int cmd_regions(const std::string& rho_min, const std::string& rho_max, int steps,
                const std::string& format, const std::string& out_path) {
  const auto rows =
      ria::sweep_rho(parse_rational(rho_min), parse_rational(rho_max), steps);
  std::ostringstream text;
  if (format == "json") {
    text << ria::sweep_to_json(rows).dump(2) << '\n';
  } else if (format == "text") {
    text << "rho            region  inner d/N     outer d/N\n";
    for (const auto& row : rows) {
      std::string rho = row.rho.str();
      rho.resize(14, ' ');
      text << rho << " " << ria::region_label(row.region) << "\t"
           << ria::format_decimal(row.inner.to_double()) << "\t"
           << ria::format_decimal(row.outer.to_double())
           << (row.outer_interpolated ? " [interp]" : "") << "\n";
    }
  } else {
    text << ria::sweep_to_csv(rows);
  }
  write_output(text.str(), out_path);
  return kExitOk;
}

// ---- simulate ----------------------------------------------------------------

int cmd_simulate(int m, int n, int trials, std::uint64_t seed, double tol,
                 std::int64_t b, std::int64_t w1, std::int64_t w2,
                 const std::string& format, const std::string& out_path) {
  const ria::AntennaConfig cfg(m, n);
  const int overrides = (b > 0) + (w1 > 0) + (w2 > 0);
  ria::SchemeParams params;
  if (overrides == 3) {
    params = ria::SchemeParams{b, w1, w2};
  } else if (overrides == 0) {
    try {
      params = ria::closed_form(cfg);
    } catch (const std::domain_error& e) {
      throw UsageError(std::string(e.what()) +
                       "; pass explicit --b/--W1/--W2 for this configuration");
    }
  } else {
    throw UsageError("--b, --W1, --W2 must be given together");
  }

  const auto constraints = ria::check_constraints(params.symbols, params.w1,
                                                  params.w2, cfg);
  if (!constraints.feasible()) {
    std::ostringstream text;
    text << "infeasible parameters b = " << params.symbols << ", W1 = " << params.w1
         << ", W2 = " << params.w2 << " for M = " << m << ", N = " << n << "\n";
    print_constraints(text, constraints);
    write_output(text.str(), out_path);
    return kExitVerificationFailure;
  }

  ria::TrialOptions options;
  options.tol = tol;
  const auto aggregate = ria::run_trials(cfg, params, trials, seed, options);

  std::ostringstream text;
  if (format == "json") {
    text << ria::trials_to_json_lines(aggregate);
  } else {
    double worst_residual = 0.0;
    double worst_leakage = 0.0;
    double mean_residual = 0.0;
    double mean_leakage = 0.0;
    int counted = 0;
    for (const auto& t : aggregate.trials) {
      if (t.degenerate) continue;
      ++counted;
      worst_residual = std::max(worst_residual, t.max_alignment_residual);
      mean_residual += t.max_alignment_residual;
      for (const auto& r : t.receivers) {
        worst_leakage = std::max(worst_leakage, r.zf_leakage);
        mean_leakage += r.zf_leakage / 3.0;
      }
    }
    if (counted > 0) {
      mean_residual /= counted;
      mean_leakage /= counted;
    }
    const auto* sample = aggregate.trials.empty() ? nullptr : &aggregate.trials.front();
    text << "configuration      M = " << m << ", N = " << n << ", b = "
         << params.symbols << ", W1 = " << params.w1 << ", W2 = " << params.w2
         << ", seed = " << seed << "\n"
         << "target DoF         " << rational_cell(params.dof()) << "\n"
         << "trials             " << aggregate.trials.size() << " total, "
         << aggregate.pass_count << " pass, " << aggregate.fail_count << " fail, "
         << aggregate.degenerate_count << " degenerate\n";
    if (sample && !sample->degenerate) {
      text << "dim(S_i) measured  " << sample->s_dims[0] << ", expected "
           << sample->s_dim_expected << "\n"
           << "interference rank  " << sample->receivers[0].interference_rank
           << ", expected " << sample->receivers[0].interference_rank_expected << "\n";
    }
    text << "alignment residual mean " << ria::format_decimal(mean_residual)
         << ", worst " << ria::format_decimal(worst_residual) << "\n"
         << "ZF leakage         mean " << ria::format_decimal(mean_leakage)
         << ", worst " << ria::format_decimal(worst_leakage) << "\n"
         << "verdict            "
         << (aggregate.fail_count == 0 ? "all non-degenerate trials pass" : "FAILURES")
         << "\n";
  }
  write_output(text.str(), out_path);
  return aggregate.fail_count == 0 ? kExitOk : kExitVerificationFailure;
}

// ---- slope --------------------------------------------------------------------

int cmd_slope(int m, int n, const std::string& snr_db, int trials, std::uint64_t seed,
              const std::string& format, const std::string& out_path) {
  const ria::AntennaConfig cfg(m, n);
  const auto comma = snr_db.find(',');
  if (comma == std::string::npos)
    throw UsageError("--snr-db expects two comma-separated values, e.g. 40,60");
  double lo = 0.0;
  double hi = 0.0;
  try {
    lo = std::stod(snr_db.substr(0, comma));
    hi = std::stod(snr_db.substr(comma + 1));
  } catch (const std::exception&) {
    throw UsageError("--snr-db expects two comma-separated numbers");
  }

  ria::SchemeParams params;
  try {
    params = ria::closed_form(cfg);
  } catch (const std::domain_error& e) {
    throw UsageError(std::string(e.what()) + "; slope is defined for case-B configs");
  }
  ria::SlopeEstimate est;
  try {
    est = ria::estimate_dof_slope(cfg, params, lo, hi, trials, seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (est.excluded > 0)
    std::cerr << "warning: " << est.excluded << " non-decodable trials excluded\n";

  const double relative_error = std::abs(est.slope - est.d_hat) / est.d_hat;
  const bool pass = relative_error <= 0.10;

  std::ostringstream text;
  if (format == "json") {
    nlohmann::json j = {
        {"schema", 1},        {"command", "slope"},
        {"M", m},             {"N", n},
        {"snr_db", {lo, hi}}, {"trials_used", est.trials_used},
        {"excluded", est.excluded}, {"slope", est.slope},
        {"d_hat", est.d_hat}, {"relative_error", relative_error},
        {"pass", pass},
    };
    text << j.dump(2) << '\n';
  } else {
    text << "configuration      M = " << m << ", N = " << n << ", b = "
         << params.symbols << ", W1 = " << params.w1 << ", W2 = " << params.w2 << "\n"
         << "SNR points         " << lo << " dB, " << hi << " dB over "
         << est.trials_used << " trials\n"
         << "estimated slope    " << ria::format_decimal(est.slope) << "\n"
         << "theoretical d      " << ria::format_decimal(est.d_hat) << " ("
         << params.dof().str() << ")\n"
         << "relative error     " << ria::format_decimal(relative_error) << "\n"
         << "verdict            " << (pass ? "within 10%" : "OUTSIDE 10%") << "\n";
  }
  write_output(text.str(), out_path);
  return pass ? kExitOk : kExitVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DoF catalog, optimizer and Monte Carlo verifier for two-phase "
               "retrospective interference alignment on the 3-user MIMO IC"};
  app.require_subcommand(1);

  std::string format = "text";
  std::string out_path;
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", out_path, "Write output to a file instead of stdout");

  int m = 0;
  int n = 0;
  auto add_antennas = [&](CLI::App* cmd) {
    cmd->add_option("--M", m, "Transmit antennas per user")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--N", n, "Receive antennas per user")
        ->required()
        ->check(CLI::PositiveNumber);
  };

  CLI::App* dof = app.add_subcommand("dof", "Region, achievable DoF and bounds");
  add_antennas(dof);

  CLI::App* optimize =
      app.add_subcommand("optimize", "Optimal (b, W1, W2) for the two-phase scheme");
  add_antennas(optimize);
  bool oracle = false;
  std::int64_t max_w1 = 0;
  std::int64_t max_w2 = 0;
  optimize->add_flag("--oracle", oracle, "Run the exhaustive search as well");
  optimize->add_option("--max-w1", max_w1, "Search bound on W1 (default 3N+5)");
  optimize->add_option("--max-w2", max_w2, "Search bound on W2 (default 3M+5)");

  CLI::App* regions = app.add_subcommand("regions", "Sweep of inner/outer bounds over rho");
  std::string rho_min = "0";
  std::string rho_max = "7/2";
  int steps = 141;
  regions->add_option("--rho-min", rho_min, "Left end of the sweep")->capture_default_str();
  regions->add_option("--rho-max", rho_max, "Right end of the sweep")->capture_default_str();
  regions->add_option("--steps", steps, "Grid points before breakpoint augmentation")
      ->capture_default_str();

  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo verification of the scheme");
  add_antennas(simulate);
  int trials = 100;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double tol = ria::kDefaultSchemeTol;
  std::int64_t opt_b = 0;
  std::int64_t opt_w1 = 0;
  std::int64_t opt_w2 = 0;
  simulate->add_option("--trials", trials, "Number of Monte Carlo trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* seed_opt = simulate->add_option("--seed", seed, "Root seed (default: RIA_DOF_SEED or 42)");
  simulate->add_option("--tol", tol, "Residual tolerance")->capture_default_str();
  simulate->add_option("--b", opt_b, "Override: symbols per user");
  simulate->add_option("--W1", opt_w1, "Override: sensing-phase slots");
  simulate->add_option("--W2", opt_w2, "Override: alignment-phase slots");

  CLI::App* slope = app.add_subcommand("slope", "Finite-SNR rate-slope sanity check");
  add_antennas(slope);
  std::string snr_db;
  int slope_trials = 200;
  slope->add_option("--snr-db", snr_db, "Two SNR points in dB, e.g. 40,60")->required();
  slope->add_option("--trials", slope_trials, "Number of Monte Carlo trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* slope_seed_opt = slope->add_option("--seed", seed, "Root seed");

  // Global flags (--format, --out) may appear after the subcommand name.
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    seed_given = seed_opt->count() > 0 || slope_seed_opt->count() > 0;
    if (!seed_given) seed = default_seed();
    if (dof->parsed()) return cmd_dof(m, n, format, out_path);
    if (optimize->parsed())
      return cmd_optimize(m, n, oracle, max_w1, max_w2, format, out_path);
    if (regions->parsed()) return cmd_regions(rho_min, rho_max, steps, format, out_path);
    if (simulate->parsed())
      return cmd_simulate(m, n, trials, seed, tol, opt_b, opt_w1, opt_w2, format,
                          out_path);
    if (slope->parsed())
      return cmd_slope(m, n, snr_db, slope_trials, seed, format, out_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerificationFailure;
  }
  return kExitUsage;
}
