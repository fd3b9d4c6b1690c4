#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ampload/circuit.hpp"
#include "ampload/statevector.hpp"

namespace ampload::mps {

/// One site tensor A(a_in, j, a_out).
struct Core {
  int chi_in = 1;
  int chi_out = 1;
  std::vector<cplx> data;  // row-major over (a_in, j, a_out)

  Core() = default;
  Core(int chi_in, int chi_out);
  cplx& operator()(int a, int j, int b) { return data[static_cast<std::size_t>((a * 2 + j) * chi_out + b)]; }
  cplx operator()(int a, int j, int b) const { return data[static_cast<std::size_t>((a * 2 + j) * chi_out + b)]; }
  /// (2 chi_in) x chi_out matrix with row a*2 + j.
  Matrix as_matrix() const;
};

/// Site i holds qubit n-1-i, so the first core is the most significant bit.
struct MPS {
  int n = 0;
  std::vector<Core> cores;
  bool left_canonical = false;

  std::vector<int> bond_dimensions() const;  // chi_1 .. chi_{n-1}
  int max_bond() const;
  /// Largest deviation from the left-canonical identities over all but the last core.
  double canonical_error() const;
};

struct TruncationReport {
  std::vector<std::vector<double>> discarded;  // per bond, dropped singular values
  double frobenius_bound = 0.0;                // sum of dropped sigma^2
};

struct Decomposition {
  MPS mps;
  TruncationReport report;
};

/// Left-to-right SVD sweep. Singular values below 1e-12 sigma_max are
/// dropped as numerical zeros (and reported).
Decomposition from_dense(std::span<const cplx> amps, std::optional<int> chi_max = std::nullopt);
Decomposition from_dense(std::span<const double> amps, std::optional<int> chi_max = std::nullopt);
/// Same sweep on an existing MPS.
Decomposition canonicalize(const MPS& m, std::optional<int> chi_max = std::nullopt);

std::vector<cplx> to_dense(const MPS& m);

/// Exact chi = 2 MPS of the normalized ramp j / C_n.
MPS analytic_linear_mps(int n);

/// Scales the last core so the state has unit norm.
MPS normalized(const MPS& m);

/// Staircase of embedded unitaries preparing the normalized state from |0...0>.
sim::Circuit to_circuit(const MPS& m);

enum class FitInit { FromChi1Mps, FromFitFormula };

struct FitOptions {
  double learning_rate = 0.05;
  int max_iters = 2000;
  double tol = 1e-12;
};

struct FitResult {
  std::vector<double> angles;  // Ry angle on each qubit, index = qubit
  double fidelity = 0.0;
  double initial_fidelity = 0.0;
  int iterations = 0;
};

/// Product-state amplitudes prod_q (cos(t_q/2), sin(t_q/2))[bit q].
std::vector<double> product_amplitudes(std::span<const double> angles);
/// Squared L2 loss and its analytic gradient.
double product_loss(std::span<const double> angles, std::span<const double> target, std::vector<double>* grad);
/// Ry angles of a bond-dimension-1 MPS.
std::vector<double> chi1_angles(const MPS& m);
/// exp(exp(-q^0.9 / 1.23) - 0.24) as a half angle, q = 1 the most significant qubit.
std::vector<double> fit_formula_angles(int n);

FitResult variational_product_fit(const sim::Statevector& target, FitInit init, const FitOptions& opt = {});

/// Text format: "ampload-mps 1", "n <n>", "bonds ...", then one
/// "core <i> <chi_in> <chi_out>" line per site followed by its entries as
/// "re,im" lines in row-major (a_in, j, a_out) order.
void write(std::ostream& out, const MPS& m);
MPS read(std::istream& in);

}  // namespace ampload::mps
