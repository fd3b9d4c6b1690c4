#pragma once

#include <random>

#include "ampload/circuit.hpp"
#include "ampload/simulate.hpp"

namespace testing_helpers {

using ampload::Matrix;
using ampload::sim::Circuit;
using ampload::sim::Control;

inline Matrix random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = {nd(rng), nd(rng)};
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ();
}

// Mix of every gate kind the transpiler accepts, on n qubits.
inline Circuit random_circuit(int n, int gates, std::mt19937_64& rng) {
  Circuit c(n);
  std::uniform_int_distribution<int> kind(0, 10), qubit(0, n - 1);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  std::bernoulli_distribution coin;
  auto distinct = [&](int count) {
    std::vector<int> q(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i)] = i;
    std::shuffle(q.begin(), q.end(), rng);
    q.resize(static_cast<std::size_t>(std::min(count, n)));
    return q;
  };
  for (int g = 0; g < gates; ++g) {
    const int t = qubit(rng);
    switch (kind(rng)) {
      case 0: c.h(t); break;
      case 1: c.x(t); break;
      case 2: c.sx(t); break;
      case 3: c.rz(t, ang(rng)); break;
      case 4: c.ry(t, ang(rng)); break;
      case 5: c.z(t); break;
      case 6:
      case 7: {
        if (n < 2) break;
        auto q = distinct(std::min(n, 1 + std::uniform_int_distribution<int>(1, 3)(rng)));
        std::vector<Control> ctl;
        for (std::size_t i = 1; i < q.size(); ++i) ctl.push_back({q[i], coin(rng)});
        if (coin(rng)) c.cry(ctl, q[0], ang(rng));
        else c.mcx(ctl, q[0]);
        break;
      }
      case 8: {
        if (n < 2) break;
        auto q = distinct(2);
        c.mcz({{q[1], coin(rng)}}, q[0]);
        break;
      }
      case 9: c.unitary({t}, random_unitary(2, rng)); break;
      default: {
        if (n < 2) break;
        auto q = distinct(2);
        c.unitary({q[0], q[1]}, random_unitary(4, rng));
        break;
      }
    }
  }
  return c;
}

}  // namespace testing_helpers
