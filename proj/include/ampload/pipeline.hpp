#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ampload/noise.hpp"
#include "ampload/qsvt.hpp"
#include "ampload/statevector.hpp"

namespace ampload::pipeline {

using qsvt::PolynomialSpec;

enum class Method { DhwtQsvt, MpsDirect, MpsLinQsvt, DhwtExactLinear };
enum class QsvtMode { Oracle, Circuit };
/// How the k0-qubit result is spread over n qubits.
/// CoarseGrid: P on x_b = b / (2^k0 - 1), each value repeated 2^{n-k0} times.
/// Stepwise: P on the truncated linear state (alpha floor(j / 2^{n-k0}) + beta),
/// rescaled to the [0, 1] grid.
enum class Padding { CoarseGrid, Stepwise };

std::string_view method_name(Method m);
Method parse_method(std::string_view s);

/// Rational root p / q.
struct Root {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

/// Parses "20/63" or a plain decimal ("0.5" becomes 1/2, exactly when the
/// decimal is short).
Root parse_root(std::string_view s);

/// Monic prod (x - r_i), expanded over the integers before the final division.
PolynomialSpec expand_roots(std::span<const Root> roots);

struct LoadRequest {
  int n = 0;
  Method method = Method::DhwtQsvt;
  int k0 = 0;   // DHWT methods
  int chi = 1;  // MPS methods
  PolynomialSpec polynomial;
  QsvtMode mode = QsvtMode::Oracle;
  Padding padding = Padding::CoarseGrid;
  double gamma = 1e-10;
};

struct Resources {
  std::size_t gate_count = 0;
  std::size_t cx_count = 0;
  int ancillas = 0;
  int aa_rounds = 0;
  int loader_queries = 0;
};

struct LoadResult {
  Method method = Method::DhwtQsvt;
  int n = 0;
  int k0_or_chi = 0;
  sim::Statevector state;
  sim::Statevector target;
  double fidelity = 0.0;
  double l2 = 0.0;
  double filling_ratio = std::numeric_limits<double>::quiet_NaN();  // NaN when not applicable
  double success_prob = std::numeric_limits<double>::quiet_NaN();
  double delta_inf = 0.0;
  double delta_inf_bound = 0.0;  // NaN when the bound does not apply
  bool delta_within_bound = true;
  Resources resources;
};

/// amps_j = P(x_j) / C_P with x_j = j / (2^n - 1).
sim::Statevector exact_target(const PolynomialSpec& p, int n);

/// Fidelity, l2 and delta_inf between two real profiles. l2 and delta_inf
/// take the states as produced, so a global sign flip shows up in both.
struct Comparison {
  double fidelity = 0.0;
  double l2 = 0.0;
  double delta_inf = 0.0;
};
Comparison compare(const sim::Statevector& produced, const sim::Statevector& target);

struct DeltaBound {
  double derivative = 0.0;   // max |P'| (2^{n-k0}-1)/(2^n-1) / M
  double coefficient = 0.0;  // ((d^2-d)/2) (2^{n-k0}-1)/(2^n-1) D / M
};
/// M is max_j |P(x_j)| on the n-qubit grid; max |P'| is taken over [0, 1].
DeltaBound delta_inf_bound(const PolynomialSpec& p, int n, int k0);

LoadResult run(const LoadRequest& req);

enum class SweepAxis { K0, Chi };
/// One result per value in [first, last], in order.
std::vector<LoadResult> sweep(const LoadRequest& tmpl, SweepAxis axis, int first, int last);

/// Ideal and noisy metrics of the truncated linear loader U_{L,k0} padded
/// with H on the remaining qubits, against the exact ramp on n qubits.
struct LinearNoiseRow {
  int k0 = 0;
  std::size_t cx_count = 0;
  double ideal_fidelity = 0.0;
  double ideal_l2 = 0.0;
  double noisy_fidelity = 0.0;
  double noisy_l2 = 0.0;
};
/// The noisy state is read through the readout-corrupted distribution;
/// amplitudes are its square roots. shots > 0 replaces the exact
/// distribution by a histogram sampled with `seed`.
inline constexpr std::uint64_t kDefaultSeed = 20240917;
LinearNoiseRow linear_noise_row(int n, int k0, const sim::NoiseModel& nm, std::size_t shots = 0,
                                std::uint64_t seed = kDefaultSeed);
/// Same for the MPS loader of the ramp with bond dimension chi.
LinearNoiseRow mps_noise_row(int n, int chi, const sim::NoiseModel& nm, std::size_t shots = 0,
                             std::uint64_t seed = kDefaultSeed);

extern const char* const kCsvHeader;
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const LoadResult& r);
/// Fixed 10-significant-digit formatting used for every CSV number.
std::string format_number(double v);

}  // namespace ampload::pipeline
