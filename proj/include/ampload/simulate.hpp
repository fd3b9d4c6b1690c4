#pragma once

#include <span>

#include "ampload/circuit.hpp"
#include "ampload/statevector.hpp"

namespace ampload::sim {

void apply_gate(const Gate& g, int n, std::span<cplx> amps);
void apply_circuit_inplace(const Circuit& c, std::span<cplx> amps);

/// U_c applied to s. Input is left untouched.
Statevector apply_circuit(const Circuit& c, const Statevector& s);

/// Dense 2^n x 2^n unitary; column j is apply_circuit(c, |j>).
Matrix circuit_unitary(const Circuit& c);

/// |<a|b>|^2.
double fidelity(const Statevector& a, const Statevector& b);

/// (2^-n sum |a_i - b_i|^2)^{1/2}. Not the ordinary 2-norm.
double l2_metric(const Statevector& a, const Statevector& b);

/// Max-norm distance to the nearest matrix of the form e^{i phi} b.
double phase_insensitive_distance(const Matrix& a, const Matrix& b);

}  // namespace ampload::sim
