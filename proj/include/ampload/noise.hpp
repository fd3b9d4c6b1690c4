#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "ampload/circuit.hpp"
#include "ampload/density.hpp"

namespace ampload::sim {

/// Gate-level noise parameters. Times in ns (gates) and us (T1/T2).
/// A non-positive t1 or t2 disables thermal relaxation.
struct NoiseModel {
  double sqg_time_ns = 0.0;
  double cx_time_ns = 0.0;
  double r_d = 0.0;         // depolarizing probability per single-qubit gate
  double p_bf = 0.0;        // bit flip after each Rz
  double cnot_error = 0.0;  // depolarizing probability per CX
  double p_meas = 0.0;      // readout flip probability
  double p_th = 0.0;        // excited-state population of the thermal bath
  double t1_us = 0.0;
  double t2_us = 0.0;

  /// Calibration values estimated for ibm_jakarta. p_meas = 0.223 is an
  /// unusually large readout error but is the calibrated value.
  static NoiseModel calibrated();

  /// INI-style key=value text. Keys (case-insensitive): sqg_time, cx_time,
  /// rd, pbf, cnoterror, pmeas, pth, t1, t2. '#' and ';' start comments,
  /// [section] lines are ignored, a decimal comma is accepted.
  static NoiseModel parse(std::string_view text);
  static NoiseModel load(const std::string& path);

  bool relaxation_enabled() const { return t1_us > 0.0 && t2_us > 0.0; }
  bool is_ideal() const;
  /// Throws Config on probabilities outside [0,1], negative times, or t2 > 2 t1.
  void validate() const;
  std::string to_ini() const;
};

KrausChannel depolarizing_channel(int arity, double p);
KrausChannel bit_flip_channel(double p);
/// Generalized amplitude damping towards excited population `p_excited`,
/// followed by pure dephasing so the coherence decays as exp(-t/T2).
KrausChannel thermal_relaxation_channel(double t1_us, double t2_us, double p_excited, double duration_ns);

/// Runs a native circuit (see transpile_native) from |0...0> with noise
/// inserted after every gate. Readout error is not applied here.
DensityMatrix apply_noisy(const Circuit& c, const NoiseModel& nm);

/// Outcome distribution of a computational-basis measurement with
/// independent readout flips of probability p_meas on every bit.
std::vector<double> readout_distribution(const DensityMatrix& rho, double p_meas);

/// Shot histogram keyed by bitstring (qubit n-1 first). Deterministic for a
/// given seed.
std::map<std::string, std::size_t> measure_counts(const DensityMatrix& rho, const NoiseModel& nm,
                                                  std::size_t shots, std::uint64_t seed);

}  // namespace ampload::sim
