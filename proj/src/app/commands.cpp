#include "strandcc/app/commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>
#include <random>

#include "strandcc/app/report.hpp"
#include "strandcc/error.hpp"
#include "strandcc/losses.hpp"
#include "strandcc/solver.hpp"

namespace strandcc::app {

using nlohmann::json;

namespace {

LossOptions loss_options(const AnalysisOptions& a) { return {a.abs_tol, a.rel_tol, a.equality_tol}; }

SolvedBundle solve_or_fail(const SimulationConfig& config, const BundleNetwork& net, const Waveform& drive) {
  try {
    return solve_drive(net, drive);
  } catch (const Error& e) {
    throw Error(ErrorCode::SolveFailed, config.source.string() + ": " + e.what(), e.harmonic_order());
  }
}

/// Sharing functions, or an all-masked grid when the drive is identically 0.
SharingFunctions shares_or_masked(const SolvedBundle& sol, const AnalysisOptions& a) {
  try {
    return sharing_functions(sol, a.grid_size, a.zero_threshold);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::AllPointsMasked) throw;
  }
  SharingFunctions s;
  s.fingerprint = sol.fingerprint;
  s.alpha = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(sol.strand_count()), a.grid_size,
                                      std::numeric_limits<double>::quiet_NaN());
  s.masked.assign(static_cast<std::size_t>(a.grid_size), true);
  for (int k = 0; k < a.grid_size; ++k) s.times.push_back(sol.drive.period() * k / a.grid_size);
  return s;
}

double max_alpha_imbalance(const SharingFunctions& shares) {
  const double even = 1.0 / static_cast<double>(shares.strand_count());
  double worst = 0.0;
  for (std::size_t k = 0; k < shares.masked.size(); ++k) {
    if (shares.masked[k]) continue;
    const auto col = shares.alpha.col(static_cast<Eigen::Index>(k));
    worst = std::max(worst, (col.array() - even).abs().maxCoeff());
  }
  return worst;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::ConfigParse, path.string() + ": cannot write output file");
  out << text;
}

std::filesystem::path prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::ConfigParse, dir.string() + ": cannot create output directory");
  return dir;
}

std::string ratio_cell(const LossReport& r) { return r.loss_ratio ? format_number(*r.loss_ratio) : "undefined"; }

}  // namespace

int run_solve(const SimulationConfig& config, const std::filesystem::path& out_dir, std::ostream& log) {
  const BundleNetwork net = build_network(config);
  const ValidationReport validation = validate_network(net);
  const SolvedBundle sol = solve_or_fail(config, net, config.drive);
  const LossReport report = compute_losses(sol, loss_options(config.analysis));
  const SharingFunctions shares = shares_or_masked(sol, config.analysis);
  const CauchySchwarzWitness witness = cauchy_schwarz_witness(shares);

  OracleCheck oracle;
  if (config.analysis.oracle) {
    try {
      const auto samples = transient_oracle(net, config.drive, config.analysis.oracle_steps_per_period,
                                            config.analysis.oracle_settle_periods);
      oracle = compare_with_oracle(sol, samples, config.analysis.oracle_tolerance);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ReducedMatrixSingular) {
        throw Error(ErrorCode::SolveFailed, config.source.string() + ": oracle: " + e.what());
      }
      oracle.skipped_reason = e.what();
    }
  }

  json doc;
  doc["name"] = config.name;
  doc["report"] = loss_report_json(report, sol);
  doc["validation"] = {{"min_eigenvalue_H", validation.min_eigenvalue},
                       {"max_eigenvalue_H", validation.max_eigenvalue},
                       {"positive_semidefinite", validation.positive_semidefinite},
                       {"warnings", validation.warnings}};
  doc["sharing"] = {{"grid_size", config.analysis.grid_size},
                    {"unmasked_points", witness.points.size()},
                    {"all_identities_hold", witness.all_pass},
                    {"max_sum_error", witness.max_sum_error},
                    {"min_cauchy_schwarz_gap", witness.min_gap},
                    {"max_imbalance_time_s", witness.max_imbalance_time},
                    {"max_sum_alpha_sq", witness.max_sum_alpha_sq}};
  if (config.analysis.oracle) {
    doc["oracle"] = {{"ran", oracle.ran},
                     {"skipped_reason", oracle.skipped_reason},
                     {"resistive_fallback", oracle.resistive_fallback},
                     {"max_relative_rms_error", oracle.max_relative_rms_error},
                     {"worst_strand", oracle.worst_strand + 1},
                     {"tolerance", config.analysis.oracle_tolerance}};
  }
  doc["echo"] = echo_config(config, net);

  prepare_dir(out_dir);
  write_file(out_dir / "report.json", doc.dump(2) + "\n");
  write_file(out_dir / "currents.csv", currents_csv(sol, config.analysis.grid_size));
  write_file(out_dir / "sharing.csv", sharing_csv(sol, shares));

  log << "case: " << config.name << " (" << net.size() << " strands)\n";
  log << "P_CC = " << format_number(report.total_cc_losses) << " W, P_CC=0 = "
      << format_number(report.total_baseline_losses) << " W, loss_ratio = " << ratio_cell(report) << "\n";
  log << "circulating currents: " << (report.detection.occurred ? "yes" : "no")
      << " (max deviation " << format_number(report.detection.max_deviation) << " A)\n";
  log << "property: " << to_string(report.property.status) << " - " << report.property.detail << "\n";
  for (const auto& w : validation.warnings) log << "warning: " << w << "\n";
  if (!witness.all_pass) log << "sharing-function identities FAILED\n";
  if (config.analysis.oracle) {
    if (oracle.ran) {
      log << "oracle: max relative RMS error " << format_number(oracle.max_relative_rms_error)
          << (oracle.agrees() ? " (agrees)" : " (DISAGREES)") << "\n";
    } else {
      log << "oracle: skipped (" << oracle.skipped_reason << ")\n";
    }
  }

  const bool internal_failure =
      report.property.status == PropertyStatus::Violated || !witness.all_pass || !oracle.agrees();
  return internal_failure ? kExitPropertyViolated : kExitOk;
}

int run_sweep(const SimulationConfig& config, const std::filesystem::path& out_dir, std::ostream& log) {
  const auto& freqs = config.sweep_frequencies;
  if (freqs.empty()) {
    throw Error(ErrorCode::ConfigParse, config.source.string() + ": /sweep/frequencies: list is empty");
  }
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    if (!(freqs[k] >= 0.0) || (k > 0 && !(freqs[k] > freqs[k - 1]))) {
      throw Error(ErrorCode::ConfigParse,
                  config.source.string() + ": /sweep/frequencies: must be >= 0 and strictly ascending");
    }
  }
  const BundleNetwork net = build_network(config);
  const double drive_rms = rms_parseval(config.drive);

  struct Row {
    LossReport report;
    double imbalance;
  };
  auto evaluate = [&](double f) {
    // At 0 Hz every component splits by the same conductance divider, so a DC
    // drive of equal RMS gives the same losses.
    const Waveform drive = f > 0.0 ? Waveform::from_harmonics(1.0 / f, config.drive.dc(), config.drive.harmonics())
                                   : Waveform::from_harmonics(config.drive.period(), drive_rms, {});
    const SolvedBundle sol = solve_or_fail(config, net, drive);
    return Row{compute_losses(sol, loss_options(config.analysis)),
               max_alpha_imbalance(shares_or_masked(sol, config.analysis))};
  };
  std::vector<std::future<Row>> pending;
  for (double f : freqs) pending.push_back(std::async(std::launch::async, evaluate, f));

  std::string csv = "frequency_Hz,P_CC_W,P_CC0_W,loss_ratio,max_alpha_imbalance\n";
  bool violated = false;
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    const Row row = pending[k].get();
    violated = violated || row.report.property.status == PropertyStatus::Violated;
    csv += format_number(freqs[k]) + "," + format_number(row.report.total_cc_losses) + "," +
           format_number(row.report.total_baseline_losses) + "," + ratio_cell(row.report) + "," +
           format_number(row.imbalance) + "\n";
  }
  prepare_dir(out_dir);
  write_file(out_dir / "sweep.csv", csv);
  log << "sweep: " << freqs.size() << " frequencies written to " << (out_dir / "sweep.csv").string() << "\n";
  if (violated) log << "property violated at one or more frequencies\n";
  return violated ? kExitPropertyViolated : kExitOk;
}

int run_transposition_compare(const SimulationConfig& config, const std::filesystem::path& out_dir,
                              std::ostream& log) {
  if (config.schedules.size() < 2) {
    throw Error(ErrorCode::ConfigParse,
                config.source.string() + ": /schedules: transpose-compare needs at least 2 schedules");
  }
  if (!config.layout) {
    throw Error(ErrorCode::NetworkInvalid, config.source.string() + ": transpose-compare requires a 'layout'");
  }
  std::vector<NamedSchedule> rows;
  rows.push_back({"untransposed", TranspositionSchedule::identity(config.layout->resistances.size())});
  rows.insert(rows.end(), config.schedules.begin(), config.schedules.end());

  auto evaluate = [&](const NamedSchedule& s) {
    const BundleNetwork net = build_network(config, s.schedule);
    return compute_losses(solve_or_fail(config, net, config.drive), loss_options(config.analysis));
  };
  std::vector<std::future<LossReport>> pending;
  for (const auto& s : rows) pending.push_back(std::async(std::launch::async, evaluate, std::cref(s)));

  std::string csv = "schedule,segments,P_CC_W,P_CC0_W,loss_ratio,circulating,property\n";
  bool violated = false;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const LossReport r = pending[k].get();
    violated = violated || r.property.status == PropertyStatus::Violated;
    csv += rows[k].name + "," + std::to_string(rows[k].schedule.segments.size()) + "," +
           format_number(r.total_cc_losses) + "," + format_number(r.total_baseline_losses) + "," + ratio_cell(r) +
           "," + (r.detection.occurred ? "1" : "0") + "," + std::string(to_string(r.property.status)) + "\n";
    log << rows[k].name << ": loss_ratio = " << ratio_cell(r) << "\n";
  }
  prepare_dir(out_dir);
  write_file(out_dir / "transposition.csv", csv);
  return violated ? kExitPropertyViolated : kExitOk;
}

int run_validate(const SimulationConfig& config, std::optional<unsigned> seed, std::ostream& log) {
  const BundleNetwork net = build_network(config);
  const ValidationReport v = validate_network(net);
  log << "network valid: " << v.strand_count << " strands, inductance eigenvalues in ["
      << format_number(v.min_eigenvalue) << ", " << format_number(v.max_eigenvalue) << "] H\n";
  for (const auto& w : v.warnings) log << "warning: " << w << "\n";
  if (!seed) return kExitOk;

  std::mt19937_64 rng(*seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr int kTrials = 100;
  int holds = 0;
  int violated = 0;
  int not_applicable = 0;
  for (int trial = 0; trial < kTrials; ++trial) {
    std::vector<Harmonic> hs;
    const int count = 1 + static_cast<int>(unit(rng) * 8);
    for (int k = 0; k < count; ++k) {
      hs.push_back({1 + 2 * k + static_cast<int>(unit(rng) * 2), 10.0 * unit(rng),
                    std::numbers::pi * (2.0 * unit(rng) - 1.0)});
    }
    const double dc = unit(rng) < 0.5 ? 0.0 : 5.0 * (2.0 * unit(rng) - 1.0);
    const Waveform drive = Waveform::from_harmonics(config.drive.period(), dc, std::move(hs));
    const LossReport r = compute_losses(solve_or_fail(config, net, drive), loss_options(config.analysis));
    switch (r.property.status) {
      case PropertyStatus::Holds: ++holds; break;
      case PropertyStatus::Violated: ++violated; break;
      case PropertyStatus::NotApplicable: ++not_applicable; break;
    }
  }
  log << "randomized drives (seed " << *seed << "): " << holds << " hold, " << violated << " violated, "
      << not_applicable << " not applicable\n";
  return violated > 0 ? kExitPropertyViolated : kExitOk;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Circulating-current analysis for parallel winding strands"};
  app.require_subcommand(1);

  struct Flags {
    std::string config;
    std::string out_dir;
    int grid_size = 0;
    bool oracle = false;
    std::optional<unsigned> seed;
  } flags;

  auto add_flags = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "simulation config (JSON)")->required();
    sub->add_option("--out-dir", flags.out_dir, "output directory");
    sub->add_option("--grid-size", flags.grid_size, "time grid points per period")->check(CLI::Range(64, 1 << 22));
    sub->add_flag("--oracle", flags.oracle, "cross-check with the transient integrator");
    sub->add_option("--seed", flags.seed, "seed for randomized checks");
  };
  CLI::App* solve = app.add_subcommand("solve", "solve one drive and report losses");
  CLI::App* sweep = app.add_subcommand("sweep", "loss ratio versus fundamental frequency");
  CLI::App* compare = app.add_subcommand("transpose-compare", "compare transposition schedules");
  CLI::App* validate = app.add_subcommand("validate", "check the network description");
  for (CLI::App* sub : {solve, sweep, compare, validate}) add_flags(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    SimulationConfig config = load_config(flags.config);
    if (flags.grid_size > 0) config.analysis.grid_size = flags.grid_size;
    if (flags.oracle) config.analysis.oracle = true;
    const std::filesystem::path out_dir = flags.out_dir.empty() ? config.out_dir : std::filesystem::path(flags.out_dir);
    if (config.analysis.grid_size < 64) {
      throw Error(ErrorCode::ConfigParse, config.source.string() + ": /analysis/grid_size: must be >= 64");
    }
    if (solve->parsed()) return run_solve(config, out_dir, out);
    if (sweep->parsed()) return run_sweep(config, out_dir, out);
    if (compare->parsed()) return run_transposition_compare(config, out_dir, out);
    return run_validate(config, flags.seed, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace strandcc::app
