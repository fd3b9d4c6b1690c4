#pragma once

#include <span>
#include <vector>

#include "ampload/circuit.hpp"
#include "ampload/statevector.hpp"

namespace ampload::sim {

class DensityMatrix {
 public:
  DensityMatrix() = default;
  /// |0...0><0...0|.
  explicit DensityMatrix(int n);
  static DensityMatrix from_pure(const Statevector& s);

  int num_qubits() const noexcept { return n_; }
  const Matrix& rho() const noexcept { return rho_; }
  Matrix& rho() noexcept { return rho_; }

  cplx trace() const { return rho_.trace(); }
  std::vector<double> diagonal() const;

  /// Trace 1, Hermitian and eigenvalues >= -1e-9, all within `tol`.
  bool is_valid(double tol = 1e-9) const;

 private:
  int n_ = 0;
  Matrix rho_;
};

/// A k-qubit channel given by Kraus operators. Construction checks
/// sum K^dag K = I within 1e-10.
class KrausChannel {
 public:
  KrausChannel(int arity, std::vector<Matrix> ops);
  int arity() const noexcept { return arity_; }
  const std::vector<Matrix>& ops() const noexcept { return ops_; }

 private:
  int arity_;
  std::vector<Matrix> ops_;
};

/// rho <- U rho U^dag for the gate's full (controlled) action.
void apply_unitary(DensityMatrix& rho, const Gate& g);
/// rho <- sum_K K rho K^dag with K acting on `qubits` (qubits[0] least significant).
void apply_channel(DensityMatrix& rho, const KrausChannel& ch, std::span<const int> qubits);

/// <b|rho|b>.
double fidelity(const DensityMatrix& rho, const Statevector& b);

}  // namespace ampload::sim
