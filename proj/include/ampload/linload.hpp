#pragma once

#include <vector>

#include "ampload/circuit.hpp"
#include "ampload/statevector.hpp"

namespace ampload::linload {

/// Loader for the ramp j = 0..2^n-1 keeping x^(0) and the k0 largest
/// single-bit Walsh terms (k = 2^{n-k0} .. 2^{n-1}). k0 = n is exact.
struct LinearLoadPlan {
  int n = 0;
  int k0 = 0;
  /// angles[k] is the Ry angle on qubit k; only k >= n-k0 are used.
  std::vector<double> angles;
  double norm_exact = 0.0;     // C_n
  double norm_spectral = 0.0;  // C~ of the retained spectrum
  double alpha = 1.0;
  double beta = 0.0;
  double norm_step = 0.0;      // C_n^(k0:n)
};

LinearLoadPlan plan(int n, int k0);

/// Ry on qubit n-1, zero-controlled Ry cascade down to qubit n-k0, then H on
/// every qubit.
sim::Circuit build_circuit(const LinearLoadPlan& p);
/// Only the rotation part, i.e. the circuit preparing the truncated spectrum.
sim::Circuit build_spectral_circuit(const LinearLoadPlan& p);

double exact_norm(int n);
/// Closed-form fidelity between the truncated and exact linear states.
double fidelity_closed_form(int n, int k0);
/// 1 - fidelity_closed_form, evaluated without cancellation.
double infidelity_closed_form(int n, int k0);
/// Inverse of fidelity_closed_form in k0 for infidelity eps (real valued).
double k0_for_infidelity(int n, double eps);
/// Large-n limit 1/2 log2(1/(4 eps)).
double k0_asymptote(double eps);

/// amps_j = (alpha floor(j / 2^{n-k0}) + beta) / C_n^(k0:n).
sim::Statevector stepwise_state(int n, int k0);
/// (j / C_n)_j.
sim::Statevector exact_state(int n);

struct AmplitudeDeviation {
  std::vector<double> delta;  // |stepwise_j - exact_j|
  double bound = 0.0;         // beta / C_n^(k0:n)
  double max_delta = 0.0;
  bool within_bound = true;
};
AmplitudeDeviation amplitude_deviation(int n, int k0);

}  // namespace ampload::linload
