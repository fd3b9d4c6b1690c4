#pragma once

#include <span>
#include <vector>

#include "ampload/circuit.hpp"

namespace ampload::sim {

/// Rewrites `c` over {CX, Id, Rz, X, SX}. The unitary is preserved up to a
/// global phase. Multi-controlled rotations become gray-code multiplexors
/// (2^k CX for k controls). Embedded blocks wider than two qubits, or
/// controlled two-qubit blocks, raise Unsupported.
Circuit transpile_native(const Circuit& c);

bool is_native(const Gate& g);
bool is_native(const Circuit& c);

/// Uniformly controlled Ry: angle[x] is applied to `target` when the control
/// register (controls[0] least significant) holds x. Emitted with
/// non-native Ry gates; exactly 2^k CX.
void append_multiplexed_ry(Circuit& out, std::span<const int> controls, int target,
                           std::span<const double> angles);
void append_multiplexed_rz(Circuit& out, std::span<const int> controls, int target,
                           std::span<const double> angles);

/// Euler angles with U = e^{i phase} Rz(a) Ry(b) Rz(c).
struct ZyzAngles {
  double phase = 0.0, a = 0.0, b = 0.0, c = 0.0;
};
ZyzAngles zyz_decompose(const Matrix& u);

}  // namespace ampload::sim
