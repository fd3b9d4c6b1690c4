#pragma once

#include <vector>

#include "ampload/circuit.hpp"

namespace ampload::blockenc {

/// Block encoding whose system register is the low `system_qubits` lines;
/// every other line is an ancilla that must start and end in |0>.
struct BlockEncoding {
  sim::Circuit circuit;
  int system_qubits = 0;
  double alpha = 1.0;
  double eps = 0.0;
  std::vector<double> target;  // diagonal of the encoded matrix
  int loader_queries = 0;
  int inverse_loader_queries = 0;

  int ancillas() const { return circuit.num_qubits() - system_qubits; }
};

/// Register layout over 2n+2 lines: k register 0..n-1, flag n,
/// psi register n+1..2n, LCU qubit 2n+1.
struct Layout {
  int n;
  int k(int i) const { return i; }
  int flag() const { return n; }
  int psi(int i) const { return n + 1 + i; }
  int top() const { return 2 * n + 1; }
};

/// n Toffolis: psi_i ^= k_i when the flag is |1>. Acts on 2n+1 lines.
sim::Circuit controlled_copy(int n);

/// H_flag, loader on psi controlled by flag = |0>, controlled copy, H_flag.
sim::Circuit build_W0(const sim::Circuit& loader, int n);

/// W0 (I - 2|0><0|_{psi,flag}) W0^dag Z_flag.
sim::Circuit build_G0(const sim::Circuit& loader, int n);

/// (n+2)-ancilla encoding of diag(psi_j), psi = loader |0>, which must be real.
BlockEncoding build_UA(const sim::Circuit& loader, int n);

/// alpha (<0|_anc (x) I) U (|0>_anc (x) I).
Matrix extract_block(const BlockEncoding& be);

/// Spectral norm of extract_block(be) - diag(target).
double block_error(const BlockEncoding& be);

}  // namespace ampload::blockenc
