#pragma once

#include <span>
#include <vector>

#include "ampload/types.hpp"

namespace ampload::sim {

/// Dense amplitude vector over n qubits. Index j addresses |j_{n-1}...j_0>,
/// qubit 0 is the least significant bit.
class Statevector {
 public:
  Statevector() = default;
  /// |0...0> on n qubits.
  explicit Statevector(int n);
  Statevector(int n, std::vector<cplx> amps);

  static Statevector basis(int n, std::size_t index);
  /// Normalizes `values`; throws Degenerate on a zero vector.
  static Statevector from_real(std::span<const double> values);
  static Statevector from_complex(std::span<const cplx> values);

  int num_qubits() const noexcept { return n_; }
  std::size_t size() const noexcept { return amps_.size(); }
  const std::vector<cplx>& amps() const noexcept { return amps_; }
  std::vector<cplx>& amps() noexcept { return amps_; }
  cplx operator[](std::size_t j) const { return amps_[j]; }

  double norm() const;
  void normalize();
  std::vector<double> real_parts() const;
  std::vector<double> probabilities() const;

  /// this (high qubits) tensor other (low qubits).
  Statevector tensor(const Statevector& low) const;

 private:
  int n_ = 0;
  std::vector<cplx> amps_;
};

cplx inner(const Statevector& a, const Statevector& b);

}  // namespace ampload::sim
