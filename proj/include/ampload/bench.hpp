#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ampload/noise.hpp"
#include "ampload/pipeline.hpp"

namespace ampload::bench {

enum class Suite { Table3, Table6, Fig4 };

Suite parse_suite(std::string_view s);
std::string_view suite_name(Suite s);

/// Absolute tolerance on fidelity, l2 and filling ratio.
inline constexpr double kTolerance = 5e-4;

/// Reference row. Missing values are NaN. Soft rows (hard = false) are
/// reported but never count as a mismatch.
struct GoldenRow {
  std::string label;
  pipeline::Method method = pipeline::Method::DhwtQsvt;
  int k0_or_chi = 0;
  double filling_ratio = 0.0;
  double l2 = 0.0;
  double fidelity = 0.0;
  bool hard = true;
};

/// Parses "label,method,k0_or_chi,filling_ratio,l2,fidelity,hard" lines;
/// '#' lines and the header are skipped.
std::vector<GoldenRow> parse_golden(std::string_view csv);
/// Reference rows compiled into the library.
std::vector<GoldenRow> golden(Suite s);

/// Polynomial named by a golden label: quartic, P1, P2 or linear (n = 6 grid).
pipeline::PolynomialSpec suite_polynomial(std::string_view label);

struct BenchRow {
  GoldenRow golden;
  pipeline::LoadResult result;      // table suites
  pipeline::LinearNoiseRow noise;   // fig4
  double diff = 0.0;                // max |value - golden| over present columns
  bool within = true;
};

struct BenchReport {
  Suite suite = Suite::Table3;
  std::vector<BenchRow> rows;

  /// Hard rows outside kTolerance, one line each.
  std::vector<std::string> mismatches() const;
  void write_csv(std::ostream& out) const;
};

/// Runs every golden row. `noise` is used by fig4 only.
BenchReport run_suite(Suite s, const sim::NoiseModel& noise = sim::NoiseModel::calibrated());

}  // namespace ampload::bench
