#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "ampload/blockenc.hpp"
#include "ampload/error.hpp"
#include "ampload/linload.hpp"
#include "ampload/qsvt.hpp"
#include "ampload/simulate.hpp"

using namespace ampload;
using namespace ampload::qsvt;
using Catch::Approx;

namespace {

// Chebyshev T_d in the monomial basis by the three-term recurrence.
PolynomialSpec chebyshev(int d) {
  std::vector<double> t0{1.0}, t1{0.0, 1.0};
  if (d == 0) return PolynomialSpec(t0);
  for (int k = 1; k < d; ++k) {
    std::vector<double> t2(t1.size() + 1, 0.0);
    for (std::size_t i = 0; i < t1.size(); ++i) t2[i + 1] += 2 * t1[i];
    for (std::size_t i = 0; i < t0.size(); ++i) t2[i] -= t0[i];
    t0 = t1;
    t1 = t2;
  }
  return PolynomialSpec(t1);
}

blockenc::BlockEncoding ry_encoding(double a0, double a1) {
  sim::Circuit c(1);
  c.ry(0, 2.0 * std::atan2(a1, a0));
  return blockenc::build_UA(c, 1);
}

PolynomialSpec quartic() {
  const double roots[] = {1.0 / 63, 20.0 / 63, 50.0 / 63, 60.0 / 63};
  return PolynomialSpec::from_roots(roots);
}

}  // namespace

TEST_CASE("polynomial basics", "[qsvt]") {
  PolynomialSpec p({1, -2, 0, 3, 0});
  CHECK(p.degree() == 3);
  CHECK(p(2.0) == Approx(1 - 4 + 24));
  auto shifted = p.composed_affine(0.5, 1.0);
  CHECK(shifted(3.0) == Approx(p(2.5)));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ud(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    const double x = ud(rng);
    CHECK(std::abs(p.even_part()(x) + p.odd_part()(x) - p(x)) < 1e-12);
  }
  CHECK(PolynomialSpec({0, 0, 1}).sup_abs(-1, 1) == Approx(1.0));
  CHECK(PolynomialSpec({0.1, -1, 1}).sup_abs(0, 1) == Approx(0.15));
  CHECK(chebyshev(2)(0.5) == Approx(-0.5));
}

TEST_CASE("phase solver fixed points", "[qsvt]") {
  auto x = solve_phases(PolynomialSpec({0, 1}));
  CHECK(x.achieved_error < 1e-10);
  for (double v : {-0.9, -0.2, 0.4, 0.8}) CHECK(qsp_response(x.phases, v) == Approx(v).margin(1e-10));

  for (int d = 1; d <= 6; ++d) {
    std::vector<double> zeros(static_cast<std::size_t>(d + 1), 0.0);
    for (double v : {-0.7, 0.1, 0.5}) CHECK(qsp_response(zeros, v) == Approx(chebyshev(d)(v)).margin(1e-12));
  }
  std::vector<double> zeros3(3, 0.0);
  CHECK(qsp_response(zeros3, 0.5) == Approx(-0.5));
}

TEST_CASE("phase solver on random polynomials", "[qsvt][property]") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 10; ++trial) {
    for (int d : {5, 6}) {
      std::vector<double> c(static_cast<std::size_t>(d + 1), 0.0);
      for (int i = d % 2; i <= d; i += 2) c[static_cast<std::size_t>(i)] = nd(rng);
      PolynomialSpec p(c);
      p = p.scaled(0.9 / p.sup_abs(-1, 1));
      auto pf = solve_phases(p, 1e-8);
      CHECK(pf.achieved_error <= 1e-8);
      double dense = 0;
      for (int i = 0; i <= 400; ++i) {
        const double xv = -1 + i / 200.0;
        dense = std::max(dense, std::abs(qsp_response(pf.phases, xv) - p(xv)));
      }
      CHECK(dense < 1e-7);
    }
  }
  CHECK_THROWS_AS(solve_phases(PolynomialSpec({0.1, 0.5})), Error);
  CHECK_THROWS_AS(solve_phases(PolynomialSpec({0, 2})), Error);
}

TEST_CASE("phase CSV round trip", "[qsvt]") {
  auto pf = solve_phases(PolynomialSpec({0, -0.3, 0, 0.4}));
  auto back = PhaseFactors::from_csv(pf.to_csv());
  CHECK(back.parity == Parity::Odd);
  REQUIRE(back.phases.size() == pf.phases.size());
  for (std::size_t i = 0; i < pf.phases.size(); ++i) CHECK(back.phases[i] == pf.phases[i]);
  CHECK_THROWS_AS(PhaseFactors::from_csv("x\n"), Error);
}

TEST_CASE("QSVT block on small encodings", "[qsvt]") {
  auto be = ry_encoding(0.6, 0.8);
  auto lin = apply_qsvt(be, PolynomialSpec({0, 0.25}));
  auto b = blockenc::extract_block(lin);
  CHECK(std::abs(b(0, 0) - cplx{0.15}) < 1e-8);
  CHECK(std::abs(b(1, 1) - cplx{0.20}) < 1e-8);
  CHECK(std::abs(b(0, 1)) < 1e-8);
  CHECK(lin.ancillas() == be.ancillas() + 3);

  auto cst = apply_qsvt(be, PolynomialSpec({0.25}));
  auto bc = blockenc::extract_block(cst);
  CHECK((bc - 0.25 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8);

  auto mixed = PolynomialSpec({0.05, -0.1, 0.0, 0.2});
  auto bm = blockenc::extract_block(apply_qsvt(be, mixed));
  CHECK(bm(0, 0).real() == Approx(mixed(0.6)).margin(1e-8));
  CHECK(bm(1, 1).real() == Approx(mixed(0.8)).margin(1e-8));

  CHECK_THROWS_AS(apply_qsvt(be, PolynomialSpec({0, 1})), Error);
}

TEST_CASE("QSVT of the quartic on the linear encoding", "[qsvt]") {
  const int k0 = 3;
  auto be = blockenc::build_UA(linload::build_circuit(linload::plan(k0, k0)), k0);
  const double c = linload::exact_norm(k0);
  // Polynomial in the block variable psi = j / C, evaluated at x = psi C / (2^k0 - 1).
  auto q = quartic().composed_affine(c / 7.0, 0.0);
  q = q.scaled(1.0 / (4.0 * q.sup_abs(-1, 1)));
  auto out = apply_qsvt(be, q);
  CHECK(out.loader_queries == 3 * q.degree());
  auto b = blockenc::extract_block(out);
  for (int j = 0; j < 8; ++j) CHECK(b(j, j).real() == Approx(q(j / c)).margin(1e-7));
  CHECK(blockenc::block_error(out) <= 2e-10 + 1e-9);

  // Post-selected output on |+>^k0 |0> matches the reference transform.
  sim::Circuit prep(out.circuit.num_qubits());
  for (int qb = 0; qb < k0; ++qb) prep.h(qb);
  prep.append(out.circuit);
  auto s = sim::apply_circuit(prep, sim::Statevector(out.circuit.num_qubits()));
  std::vector<cplx> post(8);
  for (int j = 0; j < 8; ++j) post[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j)];
  auto ref = reference_transform(sim::Statevector(k0), quartic(), unit_grid(k0));
  CHECK(sim::fidelity(sim::Statevector::from_complex(post), ref) == Approx(1.0).margin(1e-6));
}

TEST_CASE("reference transform", "[qsvt]") {
  auto lin = linload::exact_state(4);
  auto same = reference_transform(lin, PolynomialSpec({0, 1}));
  for (std::size_t j = 0; j < lin.size(); ++j) CHECK(std::abs(same[j] - lin[j]) < 1e-12);
  auto again = reference_transform(same, PolynomialSpec({0, 1}));
  for (std::size_t j = 0; j < lin.size(); ++j) CHECK(std::abs(again[j] - same[j]) < 1e-12);
  CHECK_THROWS_AS(reference_transform(lin, PolynomialSpec({0.0})), Error);
}

TEST_CASE("filling ratio", "[qsvt]") {
  CHECK(filling_ratio(PolynomialSpec({0.3}), 4) == Approx(1.0));
  CHECK(filling_ratio(quartic(), 6) == Approx(0.6184).margin(5e-5));
  CHECK(filling_ratio(quartic(), 3) == Approx(0.6331).margin(5e-5));
  CHECK(success_probability(1.0) == 0.0625);
  CHECK(aa_rounds_estimate(0.5) == 8);
}

TEST_CASE("success probability from the projector norm", "[qsvt][property]") {
  const int k0 = 2;
  auto be = blockenc::build_UA(linload::build_circuit(linload::plan(k0, k0)), k0);
  const double c = linload::exact_norm(k0);
  // (1 - psi^2) / 4 peaks at psi = 0, a grid point, so the grid and
  // interval maxima coincide.
  auto p = PolynomialSpec({0.25, 0.0, -0.25});
  REQUIRE(p.sup_abs(-1, 1) <= 0.25 + 1e-12);
  auto out = apply_qsvt(be, p);
  sim::Circuit prep(out.circuit.num_qubits());
  for (int qb = 0; qb < k0; ++qb) prep.h(qb);
  prep.append(out.circuit);
  auto s = sim::apply_circuit(prep, sim::Statevector(out.circuit.num_qubits()));
  std::vector<int> anc;
  for (int qb = k0; qb < out.circuit.num_qubits(); ++qb) anc.push_back(qb);
  const double f = filling_ratio(PolynomialSpec({1.0, 0.0, -9.0 / (c * c)}), k0);
  CHECK(good_probability(s, anc) == Approx(success_probability(f)).margin(1e-9));
}

TEST_CASE("amplitude amplification", "[qsvt]") {
  CHECK(optimal_rounds(1.0) == 0);
  CHECK(optimal_rounds(0.25) == 1);

  sim::Circuit prep(2);
  prep.h(0).h(1);  // p0 = 1/4 for "qubit 1 and qubit 0 both zero"
  const int good[] = {0, 1};
  auto r = amplitude_amplify(prep, good);
  CHECK(r.rounds == 1);
  CHECK(r.final_probability == Approx(1.0).margin(1e-12));

  sim::Circuit prep2(3);
  prep2.ry(2, 2.5).h(0).ry(1, 1.1);
  const int anc[] = {2};
  auto before = sim::apply_circuit(prep2, sim::Statevector(3));
  auto amp = amplitude_amplify(prep2, anc);
  CHECK(amp.final_probability > amp.initial_probability);
  // Good-subspace direction unchanged.
  double nb = 0, na = 0;
  for (int j = 0; j < 4; ++j) {
    nb += std::norm(before[static_cast<std::size_t>(j)]);
    na += std::norm(amp.state[static_cast<std::size_t>(j)]);
  }
  for (int j = 0; j < 4; ++j)
    CHECK(std::abs(before[static_cast<std::size_t>(j)] / std::sqrt(nb) -
                   amp.state[static_cast<std::size_t>(j)] / std::sqrt(na)) < 1e-10);

  const double p0 = 0.0625 * 0.6184 * 0.6184;
  const int rounds = optimal_rounds(p0);
  CHECK(std::pow(std::sin((2 * rounds + 1) * std::asin(std::sqrt(p0))), 2) >= 0.9);
}
