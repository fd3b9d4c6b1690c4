#include "ampload/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "ampload/error.hpp"

namespace ampload::sim {

void apply_gate(const Gate& g, int n, std::span<cplx> amps) {
  const std::size_t dim = amps.size();
  std::size_t ctrl_mask = 0, ctrl_value = 0;
  for (const Control& c : g.controls) {
    const std::size_t bit = std::size_t{1} << c.qubit;
    ctrl_mask |= bit;
    if (c.on_one) ctrl_value |= bit;
  }
  const Matrix m = g.local_matrix();
  const std::size_t k = g.targets.size();

  if (k == 0) {
    const cplx f = m(0, 0);
    for (std::size_t i = 0; i < dim; ++i)
      if ((i & ctrl_mask) == ctrl_value) amps[i] *= f;
    return;
  }
  require(static_cast<int>(k) <= n, ErrorCode::Structural, "gate wider than register");

  if (k == 1) {
    const std::size_t bit = std::size_t{1} << g.targets[0];
    const cplx m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
    for (std::size_t i = 0; i < dim; ++i) {
      if ((i & bit) || (i & ctrl_mask) != ctrl_value) continue;
      const cplx a0 = amps[i], a1 = amps[i | bit];
      amps[i] = m00 * a0 + m01 * a1;
      amps[i | bit] = m10 * a0 + m11 * a1;
    }
    return;
  }

  const std::size_t local = std::size_t{1} << k;
  std::vector<std::size_t> offset(local, 0);
  std::size_t tmask = 0;
  for (std::size_t b = 0; b < k; ++b) tmask |= std::size_t{1} << g.targets[b];
  for (std::size_t l = 0; l < local; ++l)
    for (std::size_t b = 0; b < k; ++b)
      if (l >> b & 1U) offset[l] |= std::size_t{1} << g.targets[b];
  std::vector<cplx> in(local), out(local);
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & tmask) || (i & ctrl_mask) != ctrl_value) continue;
    for (std::size_t l = 0; l < local; ++l) in[l] = amps[i | offset[l]];
    for (std::size_t r = 0; r < local; ++r) {
      cplx acc{};
      for (std::size_t c = 0; c < local; ++c) acc += m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
      out[r] = acc;
    }
    for (std::size_t l = 0; l < local; ++l) amps[i | offset[l]] = out[l];
  }
}

void apply_circuit_inplace(const Circuit& c, std::span<cplx> amps) {
  require(amps.size() == dim_of(c.num_qubits()), ErrorCode::Structural,
          "state has " + std::to_string(amps.size()) + " amplitudes, circuit acts on " +
              std::to_string(c.num_qubits()) + " qubits");
  for (const Gate& g : c.gates()) apply_gate(g, c.num_qubits(), amps);
}

Statevector apply_circuit(const Circuit& c, const Statevector& s) {
  require(c.num_qubits() == s.num_qubits(), ErrorCode::Structural,
          "circuit on " + std::to_string(c.num_qubits()) + " qubits applied to a " +
              std::to_string(s.num_qubits()) + "-qubit state");
  c.validate();
  Statevector out = s;
  apply_circuit_inplace(c, out.amps());
  return out;
}

Matrix circuit_unitary(const Circuit& c) {
  const int cap = Limits::current().max_dense_qubits;
  require(c.num_qubits() <= cap, ErrorCode::Resource,
          "dense unitary of " + std::to_string(c.num_qubits()) + " qubits exceeds cap " + std::to_string(cap));
  c.validate();
  const std::size_t dim = dim_of(c.num_qubits());
  Matrix u(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  std::vector<cplx> col(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    std::fill(col.begin(), col.end(), cplx{});
    col[j] = 1.0;
    apply_circuit_inplace(c, col);
    for (std::size_t r = 0; r < dim; ++r) u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = col[r];
  }
  return u;
}

double fidelity(const Statevector& a, const Statevector& b) {
  require(a.num_qubits() == b.num_qubits(), ErrorCode::Structural, "fidelity of states with different qubit counts");
  return std::clamp(std::norm(inner(a, b)), 0.0, 1.0);
}

double l2_metric(const Statevector& a, const Statevector& b) {
  require(a.num_qubits() == b.num_qubits(), ErrorCode::Structural, "l2 metric of states with different qubit counts");
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += std::norm(a[j] - b[j]);
  return std::sqrt(acc / static_cast<double>(a.size()));
}

double phase_insensitive_distance(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::Structural, "matrix shapes differ");
  const cplx overlap = (b.adjoint() * a).trace();
  const cplx ph = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx{1.0};
  return (a - ph * b).cwiseAbs().maxCoeff();
}

}  // namespace ampload::sim
