#include "amhd/energy_ledger.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "amhd/errors.hpp"
#include "amhd/norms.hpp"

namespace amhd {

EnergySample measure_energies(const MHDState& state) {
  EnergySample s;
  s.t = state.t;
  s.u_h3_sq = norm_squared(state.u, NormSpec::h(3));
  s.b_h3_sq = norm_squared(state.b, NormSpec::h(3));
  s.diss_u = norm_squared(state.u, NormSpec::h(3, DirectionFilter::horizontal_gradient()));
  s.diss_b = norm_squared(state.b, NormSpec::h(3, DirectionFilter::partial(Axis::x3)));
  s.d1b_h2_sq = norm_squared(state.b, NormSpec::h(2, DirectionFilter::partial(Axis::x1)));
  return s;
}

void EnergyLedger::push(const MHDState& state) {
  EnergySample s = measure_energies(state);
  if (!dissipative_) s.diss_u = s.diss_b = 0.0;
  push(s);
}

void EnergyLedger::push(const EnergySample& s) {
  if (!rows_.empty() && !(s.t > rows_.back().sample.t)) {
    throw ContractViolation("ledger samples must have strictly increasing time");
  }
  if (!rows_.empty()) {
    const EnergySample& p = rows_.back().sample;
    const double dt = s.t - p.t;
    dissipation_integral_ += 0.5 * dt * ((p.diss_u + p.diss_b) + (s.diss_u + s.diss_b));
    e1_integral_ += 0.5 * dt * (p.d1b_h2_sq + s.d1b_h2_sq);
    sup_ = std::max(sup_, s.u_h3_sq + s.b_h3_sq);
  } else {
    sup_ = s.u_h3_sq + s.b_h3_sq;
  }
  rows_.push_back({s, sup_ + 2.0 * dissipation_integral_, e1_integral_});
}

void EnergyLedger::write_csv(std::ostream& os) const {
  os << kCsvHeader << '\n';
  char buf[512];
  for (const auto& r : rows_) {
    const auto& s = r.sample;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t,
                  s.u_h3_sq, s.b_h3_sq, s.diss_u, s.diss_b, s.d1b_h2_sq, r.e0, r.e1);
    os << buf;
  }
}

void EnergyLedger::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_csv(os);
  if (!os) throw IoError("failed writing " + path);
}

EnergyLedger EnergyLedger::read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw IoError("ledger CSV: missing or unexpected header");
  }
  EnergyLedger ledger;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    double v[8];
    std::istringstream ls(line);
    std::string cell;
    int n = 0;
    while (std::getline(ls, cell, ',')) {
      if (n >= 8) break;
      char* end = nullptr;
      v[n] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) break;
      ++n;
    }
    if (n != 8) throw IoError("ledger CSV: malformed row at line " + std::to_string(lineno));
    LedgerRow r{{v[0], v[1], v[2], v[3], v[4], v[5]}, v[6], v[7]};
    ledger.rows_.push_back(r);
    ledger.sup_ = std::max(ledger.sup_, v[1] + v[2]);
  }
  if (!ledger.rows_.empty()) {
    ledger.e1_integral_ = ledger.rows_.back().e1;
    ledger.dissipation_integral_ = 0.5 * (ledger.rows_.back().e0 - ledger.sup_);
  }
  return ledger;
}

EnergyLedger EnergyLedger::read_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  return read_csv(is);
}

}  // namespace amhd
