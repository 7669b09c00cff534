#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "amhd/checkpoint.hpp"
#include "amhd/errors.hpp"
#include "amhd/experiment.hpp"
#include "amhd/spectral_ops.hpp"
#include "oracles.hpp"

using namespace amhd;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "amhd_test_harness" / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Sobolev norm from the full coefficient table, independent of norms.cpp.
double h3_oracle(const VectorField& v) {
  const auto [n1, n2, n3] = v.grid().dims();
  const double vol = std::pow(v.grid().length(), 3);
  double s = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto full = testing::full_spectrum(v[c]);
    for (int i1 = 0; i1 < n1; ++i1)
      for (int i2 = 0; i2 < n2; ++i2)
        for (int i3 = 0; i3 < n3; ++i3) {
          const int m1 = i1 <= n1 / 2 ? i1 : i1 - n1;
          const int m2 = i2 <= n2 / 2 ? i2 : i2 - n2;
          const int m3 = i3 <= n3 / 2 ? i3 : i3 - n3;
          const double k2 = double(m1) * m1 + double(m2) * m2 + double(m3) * m3;
          s += std::pow(1.0 + k2, 3) * std::norm(full[(std::size_t(i1) * n2 + i2) * n3 + i3]);
        }
  }
  return std::sqrt(vol * s);
}

ExperimentConfig small_config(const std::string& dir) {
  ExperimentConfig c;
  c.grid = {16, 16, 16};
  c.dt = 1e-2;
  c.t_end = 0.1;
  c.epsilon = 1e-3;
  c.diagnostics_stride = 5;
  c.output_dir = scratch(dir).string();
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(R"({"grid": [32, 16, 24], "dt": 0.002, "t_end": 3, "epsilon": 0.01,
                                  "seed": 9, "mode": "ns_horizontal", "output_dir": "x",
                                  "sweep": [0.001, 0.002], "spectrum_slope": 3.5})");
  CHECK(c.grid == std::array<int, 3>{32, 16, 24});
  CHECK(c.dt == 0.002);
  CHECK(c.t_end == 3.0);
  CHECK(c.seed == 9);
  CHECK(c.mode == DissipationMode::ns_horizontal);
  CHECK(c.sweep.size() == 2);
  CHECK(c.spectrum_slope == 3.5);
  CHECK(c.u_fraction == 0.5);

  CHECK(parse_config(R"({"grid": 24})").grid == std::array<int, 3>{24, 24, 24});
  CHECK(parse_config(R"({"mode": "mhd"})").mode == DissipationMode::full_aniso);

  const auto back = parse_config(to_json(c));
  CHECK(back.grid == c.grid);
  CHECK(back.dt == c.dt);
  CHECK(back.sweep == c.sweep);
  CHECK(back.mode == c.mode);
  CHECK(back.output_dir == c.output_dir);
}

TEST_CASE("config errors name the offending key") {
  auto key_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<none>");
  };
  CHECK(key_of(R"({"epsilonn": 1})") == "epsilonn");
  CHECK(key_of(R"({"dt": "fast"})") == "dt");
  CHECK(key_of(R"({"dt": -1})") == "dt");
  CHECK(key_of(R"({"t_end": 0})") == "t_end");
  CHECK(key_of(R"({"epsilon": -0.1})") == "epsilon");
  CHECK(key_of(R"({"grid": [32, 31, 32]})") == "grid");
  CHECK(key_of(R"({"grid": [32, 32]})") == "grid");
  CHECK(key_of(R"({"mode": "euler"})") == "mode");
  CHECK(key_of(R"({"seed": -3})") == "seed");
  CHECK(key_of(R"({"sweep": 0.1})") == "sweep");
  CHECK(key_of(R"({"grid": 32,)") == "<document>");
  CHECK(key_of(R"([1, 2])") == "<document>");
  CHECK_THROWS_AS(load_config("/nonexistent/amhd.json"), IoError);
}

TEST_CASE("initial data norm contract over 50 seeds") {
  ExperimentConfig c;
  c.grid = {16, 16, 16};
  c.epsilon = 2e-3;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    c.seed = seed;
    const auto s = generate_initial_data(c);
    const double nu = h3_oracle(s.u), nb = h3_oracle(s.b);
    CHECK(std::abs(nu + nb - c.epsilon) <= 1e-10 * c.epsilon);
    CHECK(std::abs(nu - nb) <= 1e-10 * c.epsilon);
    CHECK(max_divergence(s.u) <= 1e-10);
    CHECK(max_divergence(s.b) <= 1e-10);
    for (int k = 0; k < 3; ++k) {
      CHECK(s.u[k].mode(0, 0, 0) == std::complex<double>(0.0));
      CHECK(s.b[k].mode(0, 0, 0) == std::complex<double>(0.0));
    }
  }
}

TEST_CASE("initial data: band limit, seeds, modes") {
  ExperimentConfig c;
  c.grid = {16, 16, 16};
  c.epsilon = 1e-3;
  const auto a = generate_initial_data(c);
  const auto a2 = generate_initial_data(c);
  c.seed = 2;
  const auto b = generate_initial_data(c);

  bool any_diff = false;
  for (int k = 0; k < 3; ++k) {
    const auto x = a.u[k].coeffs(), y = a2.u[k].coeffs(), z = b.u[k].coeffs();
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(x[i] == y[i]);
      any_diff = any_diff || x[i] != z[i];
    }
  }
  CHECK(any_diff);

  // nothing outside the dealiasing window (|m| <= 5 for n = 16)
  const Grid& g = a.grid();
  double outside = 0.0;
  for (const auto* v : {&a.u, &a.b})
    for (int k = 0; k < 3; ++k)
      for (int i1 = 0; i1 < 16; ++i1)
        for (int i2 = 0; i2 < 16; ++i2)
          for (int i3 = 0; i3 <= 8; ++i3) {
            const int m1 = g.mode(Axis::x1, i1), m2 = g.mode(Axis::x2, i2);
            if (std::abs(m1) > 5 || std::abs(m2) > 5 || i3 > 5) outside += std::abs((*v)[k].mode(m1, m2, i3));
          }
  CHECK(outside == 0.0);

  c.epsilon = 0.0;
  const auto z = generate_initial_data(c);
  CHECK(h3_oracle(z.u) == 0.0);
  CHECK(h3_oracle(z.b) == 0.0);

  c.epsilon = 1e-3;
  c.mode = DissipationMode::ns_horizontal;
  const auto ns = generate_initial_data(c);
  CHECK(h3_oracle(ns.b) == 0.0);
  CHECK(h3_oracle(ns.u) == doctest::Approx(1e-3).epsilon(1e-10));

  c.mode = DissipationMode::full_aniso;
  c.u_fraction = 0.25;
  const auto split = generate_initial_data(c);
  CHECK(h3_oracle(split.u) == doctest::Approx(2.5e-4).epsilon(1e-10));
  CHECK(h3_oracle(split.b) == doctest::Approx(7.5e-4).epsilon(1e-10));
}

TEST_CASE("bootstrap monitor") {
  EnergyLedger l;
  const double e[] = {1.0, 1.5, 12.0, 3.0};
  for (int i = 0; i < 4; ++i) l.push(EnergySample{0.1 * i, e[i], 0.0, 0.0, 0.0, 0.0});
  const auto m = replay_monitor(l, 10.0);
  CHECK(m.e0_initial == 1.0);
  CHECK(m.threshold == 10.0);
  CHECK(m.breached);
  CHECK(m.breach_time.value() == doctest::Approx(0.2));
  CHECK(m.sup_total == 12.0);
  CHECK(m.c0_fit == doctest::Approx(12.0 / 2.0));
  CHECK(m.samples == 4);

  const auto quiet = replay_monitor(l, 20.0);
  CHECK_FALSE(quiet.breached);
  CHECK_FALSE(quiet.breach_time.has_value());

  EnergyLedger zero;
  zero.push(EnergySample{});
  zero.push(EnergySample{1.0});
  const auto mz = replay_monitor(zero);
  CHECK_FALSE(mz.breached);
  CHECK(mz.c0_fit == 0.0);
}

TEST_CASE("zero-amplitude experiment") {
  auto c = small_config("zero");
  c.epsilon = 0.0;
  c.t_end = 0.01;
  c.dt = 1e-3;
  const auto r = run_stability_experiment(c);
  CHECK_FALSE(r.faulted);
  CHECK(r.ledger.size() == 11);
  for (const auto& row : r.ledger.rows()) {
    CHECK(row.e0 == 0.0);
    CHECK(row.e1 == 0.0);
  }
  CHECK_FALSE(r.monitor.breached);
  for (const auto& p : {r.files.ledger_csv, r.files.diagnostics_csv, r.files.summary_json,
                        r.files.checkpoint, r.files.plot_script}) {
    CHECK(fs::exists(p));
  }
  const auto j = nlohmann::json::parse(slurp(r.files.summary_json));
  CHECK(j.at("breached") == false);
  CHECK(j.at("faulted") == false);
  CHECK(j.at("E0_final").get<double>() == 0.0);
  CHECK(j.at("config").at("epsilon").get<double>() == 0.0);
}

TEST_CASE("experiment outputs agree with the in-memory run") {
  const auto c = small_config("small");
  const auto r = run_stability_experiment(c);
  REQUIRE_FALSE(r.faulted);
  CHECK(r.final_state.t == doctest::Approx(0.1));
  CHECK(r.ledger.size() == 11);
  CHECK(r.diagnostics.size() == 3);

  const auto back = EnergyLedger::read_csv_file(r.files.ledger_csv.string());
  REQUIRE(back.size() == r.ledger.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back.rows()[i].e0 == r.ledger.rows()[i].e0);
    CHECK(back.rows()[i].e1 == r.ledger.rows()[i].e1);
  }
  // monitor correctness checked exhaustively against the CSV
  bool any_over = false;
  for (const auto& row : back.rows()) any_over = any_over || row.e0 + row.e1 > r.monitor.threshold;
  CHECK(any_over == r.monitor.breached);
  CHECK(r.monitor.threshold == 10.0 * back.rows().front().e0);

  const auto ck = load_checkpoint(r.files.checkpoint.string());
  CHECK(ck.state.t == r.final_state.t);
  for (const auto& d : r.diagnostics) {
    CHECK(d.divergence_max_u <= 1e-12);
    CHECK(d.divergence_max_b <= 1e-12);
  }
}

TEST_CASE("identical configs give byte-identical ledgers") {
  auto a = small_config("det_a");
  auto b = small_config("det_b");
  a.t_end = b.t_end = 0.05;
  const auto ra = run_stability_experiment(a);
  const auto rb = run_stability_experiment(b);
  CHECK(slurp(ra.files.ledger_csv) == slurp(rb.files.ledger_csv));
  b = small_config("det_c");
  b.t_end = 0.05;
  b.seed = 3;
  CHECK(slurp(ra.files.ledger_csv) != slurp(run_stability_experiment(b).files.ledger_csv));
}

TEST_CASE("resume from checkpoint continues the run") {
  auto full = small_config("full");
  full.t_end = 0.1;
  const auto straight = run_stability_experiment(full);

  auto first = small_config("first");
  first.t_end = 0.05;
  const auto half = run_stability_experiment(first);
  auto rest = first;
  rest.t_end = 0.1;
  rest.output_dir = scratch("rest").string();
  const auto resumed = resume_experiment(rest, half.files.checkpoint);

  REQUIRE(resumed.ledger.size() == straight.ledger.size());
  for (std::size_t i = 0; i < straight.ledger.size(); ++i) {
    const auto& x = straight.ledger.rows()[i];
    const auto& y = resumed.ledger.rows()[i];
    CHECK(std::abs(x.e0 - y.e0) <= 1e-13 * x.e0);
    CHECK(std::abs(x.e1 - y.e1) <= 1e-13 * std::max(x.e1, 1e-300));
  }
  double diff = 0.0, ref = 0.0;
  for (int k = 0; k < 3; ++k) {
    auto du = straight.final_state.u[k] - resumed.final_state.u[k];
    auto db = straight.final_state.b[k] - resumed.final_state.b[k];
    diff += std::pow(max_abs(du), 2) + std::pow(max_abs(db), 2);
    ref += std::pow(max_abs(straight.final_state.u[k]), 2) + std::pow(max_abs(straight.final_state.b[k]), 2);
  }
  CHECK(std::sqrt(diff / ref) <= 1e-13);

  auto early = rest;
  early.t_end = 0.02;
  CHECK_THROWS_AS(resume_experiment(early, half.files.checkpoint), ConfigError);
}

TEST_CASE("inviscid experiment freezes the integral term") {
  auto c = small_config("inviscid");
  c.mode = DissipationMode::inviscid;
  c.epsilon = 1e-4;
  const auto r = run_stability_experiment(c);
  const double s0 = r.ledger.rows().front().sample.u_h3_sq + r.ledger.rows().front().sample.b_h3_sq;
  double drift = 0.0;
  for (const auto& row : r.ledger.rows()) {
    CHECK(row.sample.diss_u == 0.0);
    CHECK(row.sample.diss_b == 0.0);
    CHECK(row.e0 >= s0);
    drift = std::max(drift, std::abs(row.sample.u_h3_sq + row.sample.b_h3_sq - s0) / s0);
  }
  CHECK(r.ledger.e0() - s0 <= 1e-8 * s0);
  CHECK(drift <= 1e-8);
  MESSAGE("inviscid H3 energy drift: " << drift);
}

TEST_CASE("solver fault is recorded with partial output") {
  auto c = small_config("fault");
  c.epsilon = 1e6;
  c.dt = 5e-2;
  c.t_end = 50.0;
  CHECK_THROWS_AS(run_stability_experiment(c), ArgumentError);
  c.check_cfl = false;
  const auto r = run_stability_experiment(c);
  CHECK(r.faulted);
  CHECK_FALSE(r.fault_message.empty());
  CHECK(r.ledger.size() >= 1);
  const auto j = nlohmann::json::parse(slurp(r.files.summary_json));
  CHECK(j.at("faulted") == true);
  CHECK(fs::exists(r.files.checkpoint));
}

TEST_CASE("sweep") {
  auto c = small_config("sweep");
  c.t_end = 0.05;
  c.sweep = {4e-3, 1e-3, 2e-3};
  c.threads = 2;
  const auto s = sweep_epsilon(c);
  REQUIRE(s.rows.size() == 3);
  CHECK(s.rows[0].epsilon == 1e-3);
  CHECK(s.rows[1].epsilon == 2e-3);
  CHECK(s.rows[2].epsilon == 4e-3);
  for (const auto& r : s.rows) {
    CHECK_FALSE(r.faulted);
    CHECK_FALSE(r.breached);
    CHECK(fs::exists(fs::path(r.output_dir) / "ledger.csv"));
  }
  CHECK(s.rows[1].sup_energy / s.rows[0].sup_energy == doctest::Approx(4.0).epsilon(0.05));
  CHECK(fs::exists(fs::path(c.output_dir) / "sweep.csv"));
  const auto j = nlohmann::json::parse(slurp(fs::path(c.output_dir) / "sweep.json"));
  CHECK(j.at("rows").size() == 3);

  // same rows run serially are bitwise identical
  auto serial = c;
  serial.threads = 1;
  serial.output_dir = scratch("sweep_serial").string();
  const auto s1 = sweep_epsilon(serial);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(slurp(fs::path(s.rows[k].output_dir) / "ledger.csv") ==
          slurp(fs::path(s1.rows[k].output_dir) / "ledger.csv"));
  }

  c.sweep = {1e-3};
  CHECK_THROWS_AS(sweep_epsilon(c), ArgumentError);
}

TEST_CASE("sweep isolates a failing row") {
  auto c = small_config("sweep_fault");
  c.t_end = 0.05;
  c.dt = 5e-2;
  c.sweep = {1e-3, 1e6};
  const auto s = sweep_epsilon(c);
  REQUIRE(s.rows.size() == 2);
  CHECK_FALSE(s.rows[0].faulted);
  CHECK(s.rows[1].faulted);
  CHECK_FALSE(s.rows[1].error.empty());
}

TEST_CASE("plot export") {
  EnergyLedger empty;
  CHECK_THROWS_AS(export_plots(empty, scratch("plot_empty")), ArgumentError);

  EnergyLedger one;
  one.push(EnergySample{0.0, 1.0, 2.0, 3.0, 4.0, 5.0});
  const auto dir = scratch("plot_one");
  const auto p = export_plots(one, dir, "single");
  const auto script = slurp(p.script);
  CHECK(script.find("'single.csv'") != std::string::npos);
  CHECK(script.find(dir.string()) == std::string::npos);
  for (const char* col : {"1:7", "1:8", "1:4", "1:5", "1:6"}) CHECK(script.find(col) != std::string::npos);
  const auto back = EnergyLedger::read_csv_file(p.csv.string());
  REQUIRE(back.size() == 1);
  CHECK(back.rows()[0].sample.d1b_h2_sq == 5.0);

  EnergyLedger big;
  for (int i = 0; i < 20000; ++i) {
    const double t = i * 1e-3;
    big.push(EnergySample{t, std::exp(-t) / 3.0, 1.0 / (1.0 + t), 0.1 * std::sin(t) * std::sin(t), 0.7, t / 7.0});
  }
  const auto pb = export_plots(big, scratch("plot_big"));
  CHECK(slurp(pb.script).find("'ledger.csv'") != std::string::npos);
  const auto rb = EnergyLedger::read_csv_file(pb.csv.string());
  REQUIRE(rb.size() == big.size());
  bool exact = true;
  for (std::size_t i = 0; i < big.size(); ++i) {
    const auto& x = big.rows()[i];
    const auto& y = rb.rows()[i];
    exact = exact && x.sample.t == y.sample.t && x.sample.u_h3_sq == y.sample.u_h3_sq &&
            x.sample.diss_u == y.sample.diss_u && x.e0 == y.e0 && x.e1 == y.e1;
  }
  CHECK(exact);
}
