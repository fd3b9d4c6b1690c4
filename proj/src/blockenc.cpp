#include "ampload/blockenc.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "ampload/error.hpp"
#include "ampload/simulate.hpp"

namespace ampload::blockenc {

namespace {

std::vector<double> real_loader_amplitudes(const sim::Circuit& loader, int n) {
  require(loader.num_qubits() == n, ErrorCode::Structural,
          "loader acts on " + std::to_string(loader.num_qubits()) + " qubits, expected " + std::to_string(n));
  const sim::Statevector psi = sim::apply_circuit(loader, sim::Statevector(n));
  double imag = 0.0;
  for (cplx a : psi.amps()) imag = std::max(imag, std::abs(a.imag()));
  require(imag < 1e-10, ErrorCode::Precondition, "loader amplitudes are not real (max imaginary part " +
                                                      std::to_string(imag) + ")");
  return psi.real_parts();
}

}  // namespace

sim::Circuit controlled_copy(int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "controlled_copy needs n >= 1");
  const Layout l{n};
  sim::Circuit c(2 * n + 1);
  for (int i = 0; i < n; ++i) c.mcx({{l.flag(), true}, {l.k(i), true}}, l.psi(i));
  return c;
}

sim::Circuit build_W0(const sim::Circuit& loader, int n) {
  real_loader_amplitudes(loader, n);
  const Layout l{n};
  sim::Circuit c(2 * n + 1);
  std::vector<int> map(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) map[static_cast<std::size_t>(i)] = l.psi(i);
  const sim::Control on_flag_zero{l.flag(), false};
  c.h(l.flag());
  c.append(loader, map, std::span<const sim::Control>(&on_flag_zero, 1), "U");
  c.append(controlled_copy(n));
  c.h(l.flag());
  return c;
}

sim::Circuit build_G0(const sim::Circuit& loader, int n) {
  const Layout l{n};
  const sim::Circuit w0 = build_W0(loader, n);
  sim::Circuit g(2 * n + 1);
  g.z(l.flag());
  g.append(w0.inverse());
  std::vector<sim::Control> all_zero{{l.flag(), false}};
  for (int i = 0; i < n; ++i) all_zero.push_back({l.psi(i), false});
  g.phase(kPi, all_zero);
  g.append(w0);
  return g;
}

BlockEncoding build_UA(const sim::Circuit& loader, int n) {
  const std::vector<double> psi = real_loader_amplitudes(loader, n);
  const Layout l{n};
  const int total = 2 * n + 2;
  require(total <= Limits::current().max_statevector_qubits, ErrorCode::Resource,
          "block encoding needs " + std::to_string(total) + " qubits");
  const sim::Circuit w0 = build_W0(loader, n);
  const sim::Circuit g0 = build_G0(loader, n);

  sim::Circuit c(total);
  c.h(l.top());
  c.append(w0);
  const sim::Control top0{l.top(), false}, top1{l.top(), true};
  c.append(g0, {}, std::span<const sim::Control>(&top0, 1));
  c.append(g0.inverse(), {}, std::span<const sim::Control>(&top1, 1));
  c.h(l.top());
  c.append(w0.inverse());
  c.x(l.top()).z(l.top()).x(l.top());

  BlockEncoding be;
  be.circuit = std::move(c);
  be.system_qubits = n;
  be.target = psi;
  be.loader_queries = static_cast<int>(be.circuit.count_segments("U"));
  be.inverse_loader_queries = static_cast<int>(be.circuit.count_segments("U^-1"));
  return be;
}

Matrix extract_block(const BlockEncoding& be) {
  const int k = be.system_qubits;
  const auto dim = static_cast<Eigen::Index>(dim_of(k));
  Matrix block(dim, dim);
  const int total = be.circuit.num_qubits();
  be.circuit.validate();
  std::vector<cplx> col(dim_of(total));
  for (Eigen::Index j = 0; j < dim; ++j) {
    std::fill(col.begin(), col.end(), cplx{});
    col[static_cast<std::size_t>(j)] = 1.0;
    sim::apply_circuit_inplace(be.circuit, col);
    for (Eigen::Index i = 0; i < dim; ++i) block(i, j) = be.alpha * col[static_cast<std::size_t>(i)];
  }
  return block;
}

double block_error(const BlockEncoding& be) {
  const Matrix block = extract_block(be);
  Matrix diff = block;
  for (Eigen::Index i = 0; i < diff.rows(); ++i) diff(i, i) -= be.target[static_cast<std::size_t>(i)];
  Eigen::JacobiSVD<Matrix> svd(diff);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace ampload::blockenc
