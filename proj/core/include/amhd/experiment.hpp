#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "amhd/energy_ledger.hpp"
#include "amhd/errors.hpp"
#include "amhd/identities.hpp"
#include "amhd/state.hpp"

namespace amhd {

/// Rejected configuration value; key() is the offending JSON key.
class ConfigError : public ArgumentError {
 public:
  ConfigError(std::string key, const std::string& what)
      : ArgumentError(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ExperimentConfig {
  std::array<int, 3> grid{32, 32, 32};
  double length = 2.0 * std::numbers::pi;
  double dt = 1e-3;
  double t_end = 1.0;
  /// Target ||u0||_{H^3} + ||b0||_{H^3}.
  double epsilon = 1e-3;
  double spectrum_slope = 4.0;
  /// Share of epsilon given to u (the rest goes to b).
  double u_fraction = 0.5;
  std::uint64_t seed = 1;
  DissipationMode mode = DissipationMode::full_aniso;
  std::string output_dir = "amhd_out";
  std::vector<double> sweep;
  int diagnostics_stride = 100;
  /// Ansatz threshold M = monitor_factor * E0(0).
  double monitor_factor = 10.0;
  /// Worker threads for sweeps (0: one per row, capped by the hardware).
  int threads = 0;
  /// Refuse to start when dt exceeds the CFL estimate of the initial state.
  bool check_cfl = true;

  /// Throws ConfigError naming the first bad field.
  void validate() const;
};

/// Parses a JSON object. Unknown keys, wrong types and invalid values throw
/// ConfigError; absent keys keep their defaults.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string to_json(const ExperimentConfig& config);

/// Random solenoidal zero-mean data inside the dealiasing window with
/// Gaussian coefficients of size |k|^{-spectrum_slope}, scaled so that
/// ||u0||_{H^3} = u_fraction * epsilon and ||b0||_{H^3} = the remainder
/// (all of epsilon in u when b is switched off).
MHDState generate_initial_data(const ExperimentConfig& config);

/// Running check of E0(t) + E1(t) against M = factor * E0(0).
struct BootstrapMonitor {
  double factor = 10.0;
  double threshold = 0.0;
  double e0_initial = 0.0;
  /// (E0 + E1) / (E0(0) + E0(0)^{3/2}) at the latest sample, and its maximum.
  double c0_fit = 0.0;
  double c0_fit_max = 0.0;
  double sup_total = 0.0;
  bool breached = false;
  std::optional<double> breach_time;
  std::size_t samples = 0;

  void update(const LedgerRow& row);
};

BootstrapMonitor replay_monitor(const EnergyLedger& ledger, double factor = 10.0);

struct IntegrandDecay {
  double max = 0.0;
  double final = 0.0;
  double factor() const {
    if (final > 0.0) return max / final;
    return max > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
};

/// Peak and final values of ||grad_h u||_{H^3}^2, ||d3 b||_{H^3}^2 and
/// ||d1 b||_{H^2}^2 over the ledger.
std::array<IntegrandDecay, 3> integrand_decay(const EnergyLedger& ledger);

struct ExperimentFiles {
  std::filesystem::path ledger_csv;
  std::filesystem::path diagnostics_csv;
  std::filesystem::path summary_json;
  std::filesystem::path checkpoint;
  std::filesystem::path plot_script;
};

struct ExperimentResult {
  EnergyLedger ledger;
  BootstrapMonitor monitor;
  std::vector<DiagnosticsRecord> diagnostics;
  MHDState final_state;
  bool faulted = false;
  std::string fault_message;
  double wall_seconds = 0.0;
  ExperimentFiles files;
};

/// Generates initial data and integrates to t_end, then writes ledger.csv,
/// diagnostics.csv, summary.json, final.ckpt and ledger.gp into output_dir.
/// A solver fault is recorded in the result (and the summary) with the
/// partial ledger and the last finite state; invalid settings throw.
ExperimentResult run_stability_experiment(const ExperimentConfig& config);

/// Same as above starting from `initial`, appending to `prior` if given.
ExperimentResult run_experiment_from(const ExperimentConfig& config, MHDState initial,
                                     const EnergyLedger* prior = nullptr);

/// Continues from a checkpoint to config.t_end. Grid and mode come from the
/// checkpoint. If ledger.csv sits next to the checkpoint its rows up to the
/// checkpoint time are carried over.
ExperimentResult resume_experiment(const ExperimentConfig& config,
                                   const std::filesystem::path& checkpoint);

struct SweepRow {
  double epsilon = 0.0;
  double sup_energy = 0.0;  // sup_t (E0 + E1)
  double c0_fit = 0.0;
  bool breached = false;
  double wall_seconds = 0.0;
  bool faulted = false;
  std::string error;
  std::string output_dir;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by epsilon

  void write_csv(const std::filesystem::path& path) const;
  std::string to_json() const;
};

/// One experiment per config.sweep value, run on worker threads, each in
/// output_dir/eps_<k>. Fewer than two values throw ArgumentError; a failing
/// row keeps its error message and does not stop the others.
SweepResult sweep_epsilon(const ExperimentConfig& config);

struct PlotFiles {
  std::filesystem::path csv;
  std::filesystem::path script;
};

/// Writes <stem>.csv and a gnuplot script <stem>.gp plotting E0, E1 and the
/// three dissipation integrands against t. The script names the CSV by its
/// file name only. Throws ArgumentError on an empty ledger.
PlotFiles export_plots(const EnergyLedger& ledger, const std::filesystem::path& dir,
                       const std::string& stem = "ledger");

}  // namespace amhd
