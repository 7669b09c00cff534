#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "amhd/state.hpp"

namespace amhd {

/// Squared norms entering E0 and E1 at one instant.
struct EnergySample {
  double t = 0.0;
  double u_h3_sq = 0.0;    // ||u||_{H^3}^2
  double b_h3_sq = 0.0;    // ||b||_{H^3}^2
  double diss_u = 0.0;     // ||grad_h u||_{H^3}^2
  double diss_b = 0.0;     // ||d3 b||_{H^3}^2
  double d1b_h2_sq = 0.0;  // ||d1 b||_{H^2}^2
};

struct LedgerRow {
  EnergySample sample;
  double e0 = 0.0;
  double e1 = 0.0;
};

EnergySample measure_energies(const MHDState& state);

/// Time series of the directional Sobolev norms with the running functionals
///
///   E0(t) = sup_{tau <= t} (||u||_{H^3}^2 + ||b||_{H^3}^2)
///           + 2 int_0^t ||grad_h u||_{H^3}^2 + ||d3 b||_{H^3}^2 dtau
///   E1(t) = int_0^t ||d1 b||_{H^2}^2 dtau
///
/// The sup runs over pushed samples only and the integrals use the
/// trapezoidal rule between consecutive samples. For a run without
/// dissipation, set_dissipative(false) records the two dissipation columns
/// as zero so the integral term of E0 stays at 0.
class EnergyLedger {
 public:
  void set_dissipative(bool on) { dissipative_ = on; }
  bool dissipative() const { return dissipative_; }

  void push(const MHDState& state);
  void push(const EnergySample& sample);

  const std::vector<LedgerRow>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }
  std::size_t size() const { return rows_.size(); }

  double e0() const { return rows_.empty() ? 0.0 : rows_.back().e0; }
  double e1() const { return rows_.empty() ? 0.0 : rows_.back().e1; }
  double sup_energy() const { return sup_; }
  double dissipation_integral() const { return dissipation_integral_; }

  /// Column order: t,u_h3_sq,b_h3_sq,diss_u,diss_b,d1b_h2_sq,E0,E1 with 17
  /// significant digits.
  void write_csv(std::ostream& os) const;
  void write_csv(const std::string& path) const;

  /// Parses a CSV written by write_csv. Rows are taken verbatim (E0 and E1
  /// are read, not recomputed).
  static EnergyLedger read_csv(std::istream& is);
  static EnergyLedger read_csv_file(const std::string& path);

  static constexpr const char* kCsvHeader = "t,u_h3_sq,b_h3_sq,diss_u,diss_b,d1b_h2_sq,E0,E1";

 private:
  std::vector<LedgerRow> rows_;
  bool dissipative_ = true;
  double sup_ = 0.0;
  double dissipation_integral_ = 0.0;
  double e1_integral_ = 0.0;
};

}  // namespace amhd
