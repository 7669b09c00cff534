#include "amhd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "amhd/checkpoint.hpp"
#include "amhd/norms.hpp"
#include "amhd/solver.hpp"
#include "amhd/spectral_ops.hpp"

namespace amhd {

namespace fs = std::filesystem;
using nlohmann::json;

void ExperimentConfig::validate() const {
  for (int n : grid) {
    if (n < 4 || n % 2 != 0) throw ConfigError("grid", "each extent must be even and >= 4");
  }
  if (!(length > 0.0) || !std::isfinite(length)) throw ConfigError("length", "must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end", "must be positive");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon", "must be >= 0");
  if (!std::isfinite(spectrum_slope)) throw ConfigError("spectrum_slope", "must be finite");
  if (!(u_fraction >= 0.0 && u_fraction <= 1.0)) throw ConfigError("u_fraction", "must lie in [0, 1]");
  if (output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
  for (double e : sweep) {
    if (!(e >= 0.0) || !std::isfinite(e)) throw ConfigError("sweep", "values must be >= 0");
  }
  if (diagnostics_stride < 1) throw ConfigError("diagnostics_stride", "must be >= 1");
  if (!(monitor_factor > 0.0)) throw ConfigError("monitor_factor", "must be positive");
  if (threads < 0) throw ConfigError("threads", "must be >= 0");
}

namespace {

template <class T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key, "wrong type (" + std::string(j.type_name()) + ")");
  }
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key, "expected a number, got " + std::string(j.type_name()));
  return j.get<double>();
}

long long get_integer(const json& j, const std::string& key) {
  if (!j.is_number_integer()) {
    throw ConfigError(key, "expected an integer, got " + std::string(j.type_name()));
  }
  return j.get<long long>();
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("<document>", "top level must be an object");

  ExperimentConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "grid") {
      if (v.is_number_integer()) {
        const int n = static_cast<int>(get_integer(v, key));
        c.grid = {n, n, n};
      } else if (v.is_array() && v.size() == 3) {
        for (int a = 0; a < 3; ++a) c.grid[a] = static_cast<int>(get_integer(v[a], key));
      } else {
        throw ConfigError(key, "expected an integer or an array of three integers");
      }
    } else if (key == "length") {
      c.length = get_number(v, key);
    } else if (key == "dt") {
      c.dt = get_number(v, key);
    } else if (key == "t_end") {
      c.t_end = get_number(v, key);
    } else if (key == "epsilon") {
      c.epsilon = get_number(v, key);
    } else if (key == "spectrum_slope") {
      c.spectrum_slope = get_number(v, key);
    } else if (key == "u_fraction") {
      c.u_fraction = get_number(v, key);
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError(key, "expected a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (key == "mode") {
      const auto s = get_as<std::string>(v, key);
      if (s == "mhd" || s == "full_aniso" || s == "inviscid" || s == "ns_horizontal") {
        c.mode = parse_dissipation_mode(s);
      } else {
        throw ConfigError(key, "unknown mode '" + s + "'");
      }
    } else if (key == "output_dir") {
      c.output_dir = get_as<std::string>(v, key);
    } else if (key == "sweep") {
      if (!v.is_array()) throw ConfigError(key, "expected an array of numbers");
      c.sweep.clear();
      for (const auto& e : v) c.sweep.push_back(get_number(e, key));
    } else if (key == "diagnostics_stride") {
      c.diagnostics_stride = static_cast<int>(get_integer(v, key));
    } else if (key == "monitor_factor") {
      c.monitor_factor = get_number(v, key);
    } else if (key == "threads") {
      c.threads = static_cast<int>(get_integer(v, key));
    } else if (key == "check_cfl") {
      if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
      c.check_cfl = v.get<bool>();
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

namespace {

json config_json(const ExperimentConfig& c) {
  json j;
  j["grid"] = c.grid;
  j["length"] = c.length;
  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["epsilon"] = c.epsilon;
  j["spectrum_slope"] = c.spectrum_slope;
  j["u_fraction"] = c.u_fraction;
  j["seed"] = c.seed;
  j["mode"] = c.mode == DissipationMode::full_aniso ? std::string("mhd") : std::string(to_string(c.mode));
  j["output_dir"] = c.output_dir;
  j["sweep"] = c.sweep;
  j["diagnostics_stride"] = c.diagnostics_stride;
  j["monitor_factor"] = c.monitor_factor;
  j["threads"] = c.threads;
  j["check_cfl"] = c.check_cfl;
  return j;
}

void fill_random(VectorField& v, std::mt19937_64& rng, double slope) {
  const Grid& g = v.grid();
  const auto [n1, n2, n3] = g.dims();
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double unit = g.wavenumber_unit();
  for (int i1 = 0; i1 < n1; ++i1) {
    for (int i2 = 0; i2 < n2; ++i2) {
      for (int i3 = 0; i3 <= n3 / 2; ++i3) {
        if (g.is_nyquist(Axis::x1, i1) || g.is_nyquist(Axis::x2, i2) || g.is_nyquist(Axis::x3, i3)) continue;
        if (g.is_dealiased_out(Axis::x1, i1) || g.is_dealiased_out(Axis::x2, i2) ||
            g.is_dealiased_out(Axis::x3, i3)) {
          continue;
        }
        const int m1 = g.mode(Axis::x1, i1), m2 = g.mode(Axis::x2, i2), m3 = i3;
        if (m1 == 0 && m2 == 0 && m3 == 0) continue;
        // one representative per conjugate pair in the m3 = 0 plane
        if (m3 == 0 && (m1 < 0 || (m1 == 0 && m2 < 0))) continue;
        const double k = unit * std::sqrt(double(m1) * m1 + double(m2) * m2 + double(m3) * m3);
        const double amp = std::pow(k, -slope);
        for (int c = 0; c < 3; ++c) {
          const double re = gauss(rng), im = gauss(rng);
          v[c].set_mode(m1, m2, m3, amp * std::complex<double>(re, im));
        }
      }
    }
  }
}

VectorField random_solenoidal(const Grid& g, std::uint64_t seed, std::uint64_t stream, double slope,
                              double h3_target) {
  VectorField v(g, Space::spectral);
  if (h3_target == 0.0) return v;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::mt19937_64 rng(seq);
  fill_random(v, rng, slope);
  v = leray_project(v);
  for (auto& c : v) c.set_mode(0, 0, 0, 0.0);
  const double n = norm(v, NormSpec::h(3));
  v *= h3_target / n;
  return v;
}

}  // namespace

std::string to_json(const ExperimentConfig& config) { return config_json(config).dump(2); }

MHDState generate_initial_data(const ExperimentConfig& config) {
  config.validate();
  const Grid g(config.grid[0], config.grid[1], config.grid[2], config.length);
  const bool with_b = config.mode != DissipationMode::ns_horizontal;
  const double eu = with_b ? config.u_fraction * config.epsilon : config.epsilon;
  const double eb = with_b ? config.epsilon - eu : 0.0;
  return MHDState(random_solenoidal(g, config.seed, 1, config.spectrum_slope, eu),
                  random_solenoidal(g, config.seed, 2, config.spectrum_slope, eb), 0.0);
}

void BootstrapMonitor::update(const LedgerRow& row) {
  if (samples == 0) {
    e0_initial = row.e0;
    threshold = factor * e0_initial;
  }
  ++samples;
  const double total = row.e0 + row.e1;
  const double denom = e0_initial + std::pow(e0_initial, 1.5);
  c0_fit = denom > 0.0 ? total / denom : 0.0;
  c0_fit_max = std::max(c0_fit_max, c0_fit);
  sup_total = std::max(sup_total, total);
  if (total > threshold && !breached) {
    breached = true;
    breach_time = row.sample.t;
  }
}

BootstrapMonitor replay_monitor(const EnergyLedger& ledger, double factor) {
  BootstrapMonitor m;
  m.factor = factor;
  for (const auto& r : ledger.rows()) m.update(r);
  return m;
}

std::array<IntegrandDecay, 3> integrand_decay(const EnergyLedger& ledger) {
  std::array<IntegrandDecay, 3> d{};
  for (const auto& r : ledger.rows()) {
    const double v[3] = {r.sample.diss_u, r.sample.diss_b, r.sample.d1b_h2_sq};
    for (int i = 0; i < 3; ++i) {
      d[i].max = std::max(d[i].max, v[i]);
      d[i].final = v[i];
    }
  }
  return d;
}

namespace {

json num(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

void write_diagnostics(const std::vector<DiagnosticsRecord>& recs, const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << "t,l2_balance_residual,i1,substitution_residual,divergence_max_u,divergence_max_b\n";
  char buf[256];
  for (const auto& r : recs) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.l2_balance_residual,
                  r.i1, r.substitution_residual, r.divergence_max_u, r.divergence_max_b);
    os << buf;
  }
}

void write_summary(const ExperimentConfig& cfg, const ExperimentResult& r) {
  json j;
  j["config"] = config_json(cfg);
  j["t_final"] = r.final_state.t;
  j["samples"] = r.ledger.size();
  j["E0_initial"] = num(r.monitor.e0_initial);
  j["threshold_M"] = num(r.monitor.threshold);
  j["E0_final"] = num(r.ledger.e0());
  j["E1_final"] = num(r.ledger.e1());
  j["sup_E0_plus_E1"] = num(r.monitor.sup_total);
  j["C0_fit"] = num(r.monitor.c0_fit);
  j["C0_fit_max"] = num(r.monitor.c0_fit_max);
  j["breached"] = r.monitor.breached;
  j["breach_time"] = r.monitor.breach_time ? json(*r.monitor.breach_time) : json(nullptr);
  const auto dec = integrand_decay(r.ledger);
  const char* names[3] = {"grad_h_u_H3_sq", "d3_b_H3_sq", "d1_b_H2_sq"};
  for (int i = 0; i < 3; ++i) {
    j["integrands"][names[i]] = {{"max", num(dec[i].max)}, {"final", num(dec[i].final)}};
  }
  double div = 0.0, i1 = 0.0, bal = 0.0;
  for (const auto& d : r.diagnostics) {
    div = std::max({div, d.divergence_max_u, d.divergence_max_b});
    i1 = std::max(i1, std::abs(d.i1));
    bal = std::max(bal, std::abs(d.l2_balance_residual));
  }
  j["max_divergence"] = num(div);
  j["max_abs_i1"] = num(i1);
  j["max_abs_l2_balance_residual"] = num(bal);
  j["faulted"] = r.faulted;
  j["fault_message"] = r.fault_message;
  j["wall_seconds"] = r.wall_seconds;
  j["files"] = {{"ledger", r.files.ledger_csv.filename().string()},
                {"diagnostics", r.files.diagnostics_csv.filename().string()},
                {"checkpoint", r.files.checkpoint.filename().string()},
                {"plot", r.files.plot_script.filename().string()}};
  std::ofstream os(r.files.summary_json);
  if (!os) throw IoError("cannot open " + r.files.summary_json.string() + " for writing");
  os << j.dump(2) << '\n';
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("output_dir", "cannot create " + dir.string());
}

}  // namespace

ExperimentResult run_experiment_from(const ExperimentConfig& config, MHDState initial,
                                     const EnergyLedger* prior) {
  config.validate();
  const fs::path dir(config.output_dir);
  ensure_dir(dir);

  SolverConfig sc;
  sc.dt = config.dt;
  sc.t_end = config.t_end;
  sc.dissipation_mode = config.mode;
  sc.diagnostics_stride = config.diagnostics_stride;
  sc.allow_cfl_violation = !config.check_cfl;

  ExperimentResult r{prior ? *prior : EnergyLedger{}, {}, {}, initial, false, {}, 0.0, {}};
  r.ledger.set_dissipative(config.mode != DissipationMode::inviscid);
  r.files = {dir / "ledger.csv", dir / "diagnostics.csv", dir / "summary.json", dir / "final.ckpt",
             dir / "ledger.gp"};

  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.final_state = run(std::move(initial), sc, &r.ledger,
                        [&](const DiagnosticsRecord& d) { r.diagnostics.push_back(d); });
  } catch (const SolverFault& f) {
    r.faulted = true;
    r.fault_message = f.what();
    r.final_state = f.last_good_state();
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.monitor = replay_monitor(r.ledger, config.monitor_factor);

  export_plots(r.ledger, dir, "ledger");
  write_diagnostics(r.diagnostics, r.files.diagnostics_csv);
  save_checkpoint(r.files.checkpoint.string(), r.final_state, config.mode);
  write_summary(config, r);
  return r;
}

ExperimentResult run_stability_experiment(const ExperimentConfig& config) {
  return run_experiment_from(config, generate_initial_data(config));
}

ExperimentResult resume_experiment(const ExperimentConfig& config, const fs::path& checkpoint) {
  Checkpoint ck = load_checkpoint(checkpoint.string());
  ExperimentConfig c = config;
  c.grid = ck.state.grid().dims();
  c.length = ck.state.grid().length();
  c.mode = ck.mode;
  if (!(c.t_end > ck.state.t)) {
    throw ConfigError("t_end", "must exceed the checkpoint time " + std::to_string(ck.state.t));
  }

  std::optional<EnergyLedger> prior;
  const fs::path old_csv = checkpoint.parent_path() / "ledger.csv";
  if (fs::exists(old_csv)) {
    // keep rows up to the checkpoint time, then let read_csv rebuild the
    // running sup and integrals
    std::ifstream is(old_csv);
    std::string line;
    std::stringstream kept;
    std::getline(is, line);
    kept << line << '\n';
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      if (std::strtod(line.c_str(), nullptr) > ck.state.t) break;
      kept << line << '\n';
    }
    prior = EnergyLedger::read_csv(kept);
  }
  return run_experiment_from(c, std::move(ck.state), prior ? &*prior : nullptr);
}

void SweepResult::write_csv(const fs::path& path) const {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << "epsilon,sup_E0_plus_E1,C0_fit,breached,wall_seconds,faulted,output_dir\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d,%.3f,%d,", r.epsilon, r.sup_energy, r.c0_fit,
                  r.breached ? 1 : 0, r.wall_seconds, r.faulted ? 1 : 0);
    os << buf << r.output_dir << '\n';
  }
}

std::string SweepResult::to_json() const {
  json j = json::array();
  for (const auto& r : rows) {
    j.push_back({{"epsilon", r.epsilon},
                 {"sup_E0_plus_E1", num(r.sup_energy)},
                 {"C0_fit", num(r.c0_fit)},
                 {"breached", r.breached},
                 {"wall_seconds", r.wall_seconds},
                 {"faulted", r.faulted},
                 {"error", r.error},
                 {"output_dir", r.output_dir}});
  }
  return json{{"rows", j}}.dump(2);
}

SweepResult sweep_epsilon(const ExperimentConfig& config) {
  config.validate();
  if (config.sweep.size() < 2) throw ArgumentError("sweep needs at least two epsilon values");
  const fs::path dir(config.output_dir);
  ensure_dir(dir);

  std::vector<double> eps = config.sweep;
  std::sort(eps.begin(), eps.end());
  SweepResult res;
  res.rows.resize(eps.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < eps.size(); k = next++) {
      SweepRow& row = res.rows[k];
      ExperimentConfig c = config;
      c.sweep.clear();
      c.epsilon = eps[k];
      c.output_dir = (dir / ("eps_" + std::to_string(k))).string();
      row.epsilon = eps[k];
      row.output_dir = c.output_dir;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const auto r = run_stability_experiment(c);
        row.sup_energy = r.monitor.sup_total;
        row.c0_fit = r.monitor.c0_fit;
        row.breached = r.monitor.breached;
        row.faulted = r.faulted;
        row.error = r.fault_message;
      } catch (const std::exception& e) {
        row.faulted = true;
        row.error = e.what();
      }
      row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };

  std::size_t nthreads = config.threads > 0 ? static_cast<std::size_t>(config.threads)
                                            : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min(nthreads, eps.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  res.write_csv(dir / "sweep.csv");
  std::ofstream js(dir / "sweep.json");
  if (!js) throw IoError("cannot write sweep.json in " + dir.string());
  js << res.to_json() << '\n';
  return res;
}

PlotFiles export_plots(const EnergyLedger& ledger, const fs::path& dir, const std::string& stem) {
  if (ledger.empty()) throw ArgumentError("export_plots: empty ledger");
  ensure_dir(dir);
  PlotFiles p{dir / (stem + ".csv"), dir / (stem + ".gp")};
  ledger.write_csv(p.csv.string());

  const std::string csv = p.csv.filename().string();
  std::ofstream os(p.script);
  if (!os) throw IoError("cannot open " + p.script.string() + " for writing");
  os << "# gnuplot script; run from this directory: gnuplot " << p.script.filename().string() << "\n"
     << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel 't'\n"
     << "set logscale y\n"
     << "set terminal pngcairo size 1000,700\n"
     << "set output '" << stem << "_energy.png'\n"
     << "plot '" << csv << "' using 1:7 with linespoints title 'E0', \\\n"
     << "     '" << csv << "' using 1:8 with linespoints title 'E1'\n"
     << "set output '" << stem << "_integrands.png'\n"
     << "plot '" << csv << "' using 1:4 with linespoints title '|grad_h u|_{H^3}^2', \\\n"
     << "     '" << csv << "' using 1:5 with linespoints title '|d_3 b|_{H^3}^2', \\\n"
     << "     '" << csv << "' using 1:6 with linespoints title '|d_1 b|_{H^2}^2'\n";
  return p;
}

}  // namespace amhd
