#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "amhd/checkpoint.hpp"
#include "amhd/experiment.hpp"
#include "amhd/identities.hpp"
#include "amhd/inequality_lab.hpp"
#include "amhd/norms.hpp"
#include "amhd/solver.hpp"

namespace amhd::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
  std::optional<double> epsilon;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<std::string> mode;
  std::optional<std::string> out;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--grid", o.grid, "points per axis (cubic grid)");
  sub->add_option("--epsilon", o.epsilon, "initial ||u0||_H3 + ||b0||_H3");
  sub->add_option("--dt", o.dt, "time step");
  sub->add_option("--t-end", o.t_end, "final time");
  sub->add_option("--mode", o.mode, "mhd | ns_horizontal | inviscid");
  sub->add_option("--out", o.out, "output directory");
}

ExperimentConfig build_config(const Overrides& o) {
  ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.grid) c.grid = {*o.grid, *o.grid, *o.grid};
  if (o.epsilon) c.epsilon = *o.epsilon;
  if (o.dt) c.dt = *o.dt;
  if (o.t_end) c.t_end = *o.t_end;
  if (o.mode) {
    try {
      c.mode = parse_dissipation_mode(*o.mode);
    } catch (const ArgumentError& e) {
      throw ConfigError("mode", e.what());
    }
  }
  if (o.out) c.output_dir = *o.out;
  c.validate();
  return c;
}

json summary_line(const ExperimentResult& r) {
  return {{"t_final", r.final_state.t},
          {"samples", r.ledger.size()},
          {"E0", r.ledger.e0()},
          {"E1", r.ledger.e1()},
          {"threshold_M", r.monitor.threshold},
          {"C0_fit", r.monitor.c0_fit},
          {"breached", r.monitor.breached},
          {"faulted", r.faulted},
          {"summary", r.files.summary_json.string()}};
}

int report_run(const ExperimentResult& r, std::ostream& out, std::ostream& err) {
  out << summary_line(r).dump() << '\n';
  if (r.faulted) {
    err << "solver fault: " << r.fault_message << '\n';
    return kExitSolverFault;
  }
  return kExitOk;
}

int do_run(const Overrides& o, std::ostream& out, std::ostream& err) {
  return report_run(run_stability_experiment(build_config(o)), out, err);
}

int do_resume(const Overrides& o, const std::string& checkpoint, std::ostream& out, std::ostream& err) {
  ExperimentConfig c = build_config(o);
  if (!o.out && o.config.empty()) c.output_dir = (fs::path(checkpoint).parent_path() / "resumed").string();
  return report_run(resume_experiment(c, checkpoint), out, err);
}

int do_sweep(const Overrides& o, const std::vector<double>& eps, int threads, std::ostream& out,
             std::ostream& err) {
  ExperimentConfig c = build_config(o);
  if (!eps.empty()) c.sweep = eps;
  if (threads > 0) c.threads = threads;
  const auto res = sweep_epsilon(c);
  out << res.to_json() << '\n';
  bool fault = false;
  for (const auto& r : res.rows) {
    if (r.faulted) {
      err << "row epsilon=" << r.epsilon << " failed: " << r.error << '\n';
      fault = true;
    }
  }
  return fault ? kExitSolverFault : kExitOk;
}

int do_verify(const Overrides& o, int budget, int random_count, int bump_count, std::ostream& out,
              std::ostream& err) {
  if (budget < 1) throw ConfigError("budget", "must be >= 1");
  if (random_count < 0 || bump_count < 0) throw ConfigError("corpus", "counts must be >= 0");
  const std::uint64_t seed = o.seed.value_or(1);
  const Grid grid(o.grid.value_or(48));

  json reports = json::array();
  json summary = json::object();
  bool ok = true;
  auto note = [&](const InequalityReport& r) {
    const std::string id(to_string(r.id));
    const double bound = inequality_bound(r.id);
    auto& s = summary[id];
    const double prev = s.contains("max_ratio") ? s["max_ratio"].get<double>() : 0.0;
    s["max_ratio"] = std::max(prev, r.ratio);
    s["bound"] = bound;
    s["count"] = s.value("count", 0) + 1;
    if (!(r.ratio <= bound)) ok = false;
    s["pass"] = s.value("pass", true) && r.ratio <= bound;
    reports.push_back(json::parse(to_json(r)));
  };

  for (const auto& r : verify_lemma12(trial_corpus(seed, random_count, bump_count, grid.length()), grid)) {
    note(r);
  }
  for (auto id : {InequalityId::L1a, InequalityId::L1b, InequalityId::L1c, InequalityId::L1d,
                  InequalityId::agmon_1d}) {
    const auto est = estimate_constant(id, budget, seed, grid);
    note(est.best);
    summary[std::string(to_string(id))]["estimate"] = est.value;
    summary[std::string(to_string(id))]["estimate_evaluations"] = est.evaluations;
  }
  std::vector<double> x(8001);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = -40.0 + 0.01 * static_cast<double>(i);
  for (std::uint64_t s = 0; s < 20; ++s) note(agmon_1d(random_decaying_profile(x, seed * 1000 + s), 0.01));

  if (o.out) {
    fs::create_directories(*o.out);
    std::ofstream os(fs::path(*o.out) / "inequalities.json");
    if (!os) throw IoError("cannot write inequalities.json in " + *o.out);
    os << json{{"summary", summary}, {"reports", reports}}.dump(2) << '\n';
  }
  out << summary.dump(2) << '\n';
  if (!ok) err << "some ratios exceed their bounds\n";
  return ok ? kExitOk : kExitCheckFailed;
}

int do_check_identities(const Overrides& o, std::ostream& out, std::ostream& err) {
  ExperimentConfig c = build_config(o);
  if (!o.t_end && o.config.empty()) c.t_end = 0.1;
  MHDState s0 = generate_initial_data(c);
  SolverConfig sc;
  sc.dt = c.dt;
  sc.t_end = c.t_end;
  sc.dissipation_mode = c.mode;
  sc.diagnostics_stride = c.diagnostics_stride;
  sc.allow_cfl_violation = !c.check_cfl;

  auto h4_scale = [](const MHDState& s) {
    return norm(s.u, NormSpec::h(4)) * norm(s.b, NormSpec::h(4));
  };
  const double energy0 = norm_squared(s0.u, NormSpec::l2()) + norm_squared(s0.b, NormSpec::l2());
  double scale = h4_scale(s0);
  std::vector<DiagnosticsRecord> recs;
  MHDState s1 = s0;
  try {
    s1 = run(s0, sc, nullptr, [&](const DiagnosticsRecord& d) { recs.push_back(d); });
  } catch (const SolverFault& f) {
    err << "solver fault: " << f.what() << '\n';
    return kExitSolverFault;
  }
  scale = std::max(scale, h4_scale(s1));

  double i1 = 0.0, div = 0.0, subst = 0.0;
  for (const auto& d : recs) {
    i1 = std::max(i1, std::abs(d.i1));
    div = std::max({div, d.divergence_max_u, d.divergence_max_b});
    subst = std::max(subst, d.substitution_residual);
  }
  const double balance = recs.empty() ? 0.0 : std::abs(recs.back().l2_balance_residual);
  const bool i1_ok = i1 <= 1e-10 * scale;
  const bool div_ok = div <= 1e-10;
  const bool bal_ok = balance <= 1e-6 * energy0;
  json j{{"records", recs.size()},
         {"max_abs_i1", i1},
         {"i1_scale_h4", scale},
         {"i1_pass", i1_ok},
         {"max_divergence", div},
         {"divergence_pass", div_ok},
         {"l2_balance_residual", balance},
         {"initial_energy", energy0},
         {"l2_balance_pass", bal_ok},
         {"max_substitution_residual", subst}};
  out << j.dump(2) << '\n';
  return i1_ok && div_ok && bal_ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Anisotropic MHD stability simulator and inequality checks", "amhd"};
  app.require_subcommand(1);

  Overrides o;
  auto* run = app.add_subcommand("run", "integrate one stability experiment");
  add_common(run, o);

  auto* sweep = app.add_subcommand("sweep", "run one experiment per epsilon value");
  add_common(sweep, o);
  std::vector<double> eps;
  int threads = 0;
  sweep->add_option("--epsilons", eps, "epsilon values (overrides the config sweep list)");
  sweep->add_option("--threads", threads, "worker threads");

  auto* verify = app.add_subcommand("verify-inequalities", "check the anisotropic inequalities");
  add_common(verify, o);
  int budget = 200, random_count = 20, bump_count = 5;
  verify->add_option("--budget", budget, "evaluations per constant estimate")->capture_default_str();
  verify->add_option("--random", random_count, "random band-limited trial sets")->capture_default_str();
  verify->add_option("--bumps", bump_count, "bump trial sets")->capture_default_str();

  auto* ident = app.add_subcommand("check-identities", "I1, L2 balance and substitution residual on a short run");
  add_common(ident, o);

  auto* resume = app.add_subcommand("resume", "continue a run from a checkpoint");
  add_common(resume, o);
  std::string checkpoint;
  resume->add_option("--checkpoint", checkpoint, "checkpoint file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*run) return do_run(o, out, err);
    if (*sweep) return do_sweep(o, eps, threads, out, err);
    if (*verify) return do_verify(o, budget, random_count, bump_count, out, err);
    if (*ident) return do_check_identities(o, out, err);
    if (*resume) return do_resume(o, checkpoint, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ContractViolation& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SolverFault& e) {
    err << "solver fault: " << e.what() << '\n';
    return kExitSolverFault;
  }
  return kExitUsage;
}

}  // namespace amhd::cli
