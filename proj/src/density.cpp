#include "ampload/density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ampload/error.hpp"
#include "ampload/simulate.hpp"

namespace ampload::sim {

namespace {

void check_cap(int n) {
  const int cap = Limits::current().max_density_qubits;
  require(n <= cap, ErrorCode::Resource,
          "density matrix of " + std::to_string(n) + " qubits exceeds cap " + std::to_string(cap));
}

// m <- G m, column by column (Eigen storage is column-major).
void left_apply(const Gate& g, int n, Matrix& m) {
  const auto dim = static_cast<std::size_t>(m.rows());
  for (Eigen::Index j = 0; j < m.cols(); ++j) apply_gate(g, n, std::span<cplx>(m.col(j).data(), dim));
}

// rho <- G rho G^dag, relying on rho being Hermitian: G (G rho)^dag.
Matrix conjugate(const Gate& g, int n, const Matrix& rho) {
  Matrix m = rho;
  left_apply(g, n, m);
  Matrix t = m.adjoint();
  left_apply(g, n, t);
  return t;
}

}  // namespace

DensityMatrix::DensityMatrix(int n) : n_(n) {
  require(n >= 1, ErrorCode::InvalidArgument, "density matrix needs at least one qubit");
  check_cap(n);
  const auto dim = static_cast<Eigen::Index>(dim_of(n));
  rho_ = Matrix::Zero(dim, dim);
  rho_(0, 0) = 1.0;
}

DensityMatrix DensityMatrix::from_pure(const Statevector& s) {
  DensityMatrix d(s.num_qubits());
  const auto dim = static_cast<Eigen::Index>(s.size());
  Eigen::Map<const Eigen::VectorXcd> v(s.amps().data(), dim);
  d.rho_ = v * v.adjoint();
  return d;
}

std::vector<double> DensityMatrix::diagonal() const {
  std::vector<double> out(static_cast<std::size_t>(rho_.rows()));
  for (Eigen::Index i = 0; i < rho_.rows(); ++i) out[static_cast<std::size_t>(i)] = rho_(i, i).real();
  return out;
}

bool DensityMatrix::is_valid(double tol) const {
  if (std::abs(trace() - cplx{1.0}) > tol) return false;
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho_ + rho_.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -std::max(tol, 1e-9);
}

KrausChannel::KrausChannel(int arity, std::vector<Matrix> ops) : arity_(arity), ops_(std::move(ops)) {
  require(arity >= 1 && !ops_.empty(), ErrorCode::InvalidArgument, "empty Kraus channel");
  const auto dim = static_cast<Eigen::Index>(dim_of(arity));
  Matrix acc = Matrix::Zero(dim, dim);
  for (const Matrix& k : ops_) {
    require(k.rows() == dim && k.cols() == dim, ErrorCode::Structural, "Kraus operator has the wrong shape");
    acc += k.adjoint() * k;
  }
  require((acc - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-10, ErrorCode::Structural,
          "Kraus operators are not trace preserving");
}

void apply_unitary(DensityMatrix& rho, const Gate& g) {
  rho.rho() = conjugate(g, rho.num_qubits(), rho.rho());
}

void apply_channel(DensityMatrix& rho, const KrausChannel& ch, std::span<const int> qubits) {
  require(static_cast<int>(qubits.size()) == ch.arity(), ErrorCode::Structural, "channel arity mismatch");
  Gate g;
  g.kind = GateKind::Unitary;
  g.targets.assign(qubits.begin(), qubits.end());
  Matrix out = Matrix::Zero(rho.rho().rows(), rho.rho().cols());
  for (const Matrix& k : ch.ops()) {
    g.matrix = k;
    out += conjugate(g, rho.num_qubits(), rho.rho());
  }
  rho.rho() = std::move(out);
}

double fidelity(const DensityMatrix& rho, const Statevector& b) {
  require(rho.num_qubits() == b.num_qubits(), ErrorCode::Structural, "fidelity of states with different qubit counts");
  const auto dim = static_cast<Eigen::Index>(b.size());
  Eigen::Map<const Eigen::VectorXcd> v(b.amps().data(), dim);
  return std::clamp(v.dot(rho.rho() * v).real(), 0.0, 1.0);
}

}  // namespace ampload::sim
