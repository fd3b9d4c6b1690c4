#include "ampload/statevector.hpp"

#include <cmath>
#include <string>

#include "ampload/error.hpp"

namespace ampload::sim {

namespace {

void check_qubits(int n) {
  require(n >= 0, ErrorCode::InvalidArgument, "negative qubit count");
  const int cap = Limits::current().max_statevector_qubits;
  require(n <= cap, ErrorCode::Resource,
          "statevector of " + std::to_string(n) + " qubits exceeds cap " + std::to_string(cap));
}

int qubits_for_length(std::size_t len) {
  require(is_power_of_two(len), ErrorCode::InvalidArgument,
          "amplitude count " + std::to_string(len) + " is not a power of two");
  return log2_exact(len);
}

}  // namespace

Statevector::Statevector(int n) : n_(n) {
  check_qubits(n);
  amps_.assign(dim_of(n), cplx{});
  amps_[0] = 1.0;
}

Statevector::Statevector(int n, std::vector<cplx> amps) : n_(n), amps_(std::move(amps)) {
  check_qubits(n);
  require(amps_.size() == dim_of(n), ErrorCode::Structural, "amplitude count does not match 2^n");
}

Statevector Statevector::basis(int n, std::size_t index) {
  Statevector s(n);
  require(index < s.size(), ErrorCode::InvalidArgument, "basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

Statevector Statevector::from_real(std::span<const double> values) {
  std::vector<cplx> amps(values.begin(), values.end());
  return from_complex(amps);
}

Statevector Statevector::from_complex(std::span<const cplx> values) {
  Statevector s(qubits_for_length(values.size()),
                std::vector<cplx>(values.begin(), values.end()));
  s.normalize();
  return s;
}

double Statevector::norm() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

void Statevector::normalize() {
  const double nrm = norm();
  require(nrm > 0.0 && std::isfinite(nrm), ErrorCode::Degenerate, "cannot normalize a zero vector");
  for (auto& a : amps_) a /= nrm;
}

std::vector<double> Statevector::real_parts() const {
  std::vector<double> out(amps_.size());
  for (std::size_t j = 0; j < amps_.size(); ++j) out[j] = amps_[j].real();
  return out;
}

std::vector<double> Statevector::probabilities() const {
  std::vector<double> out(amps_.size());
  for (std::size_t j = 0; j < amps_.size(); ++j) out[j] = std::norm(amps_[j]);
  return out;
}

Statevector Statevector::tensor(const Statevector& low) const {
  std::vector<cplx> out(size() * low.size());
  for (std::size_t hi = 0; hi < size(); ++hi)
    for (std::size_t lo = 0; lo < low.size(); ++lo) out[hi * low.size() + lo] = amps_[hi] * low.amps_[lo];
  return Statevector(n_ + low.n_, std::move(out));
}

cplx inner(const Statevector& a, const Statevector& b) {
  require(a.size() == b.size(), ErrorCode::Structural, "inner product of states with different qubit counts");
  cplx acc{};
  for (std::size_t j = 0; j < a.size(); ++j) acc += std::conj(a[j]) * b[j];
  return acc;
}

}  // namespace ampload::sim
