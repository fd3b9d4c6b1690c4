#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace ampload {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

inline std::size_t dim_of(int n) { return std::size_t{1} << n; }

inline bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

/// log2 of a power of two; caller checks is_power_of_two first.
inline int log2_exact(std::size_t v) {
  int k = 0;
  while ((std::size_t{1} << k) < v) ++k;
  return k;
}

/// Simulator size caps. AMPLOAD_MAX_QUBITS overrides the statevector cap and
/// clamps the dense and density caps to it.
struct Limits {
  int max_statevector_qubits = 24;
  int max_dense_qubits = 12;
  int max_density_qubits = 10;

  static Limits current();
};

}  // namespace ampload
