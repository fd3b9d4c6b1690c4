#include "catch_amalgamated.hpp"

#include <cmath>
#include <cstdlib>
#include <random>

#include "../common/helpers.hpp"
#include "ampload/density.hpp"
#include "ampload/error.hpp"
#include "ampload/noise.hpp"
#include "ampload/transpile.hpp"

using namespace ampload;
using namespace ampload::sim;
using Catch::Approx;

TEST_CASE("statevector basics", "[simcore]") {
  Statevector s(1);
  Circuit c(1);
  c.h(0);
  auto out = apply_circuit(c, s);
  CHECK(out[0].real() == Approx(1 / std::sqrt(2.0)));
  CHECK(out[1].real() == Approx(1 / std::sqrt(2.0)));

  Circuit x(3);
  x.x(0);
  CHECK(std::abs(apply_circuit(x, Statevector(3))[1] - cplx{1.0}) < 1e-15);

  const std::vector<double> zero(4, 0.0);
  CHECK_THROWS_AS(Statevector::from_real(zero), Error);
}

TEST_CASE("CX convention", "[simcore]") {
  Circuit c(2);
  c.cx(0, 1);
  Matrix u = circuit_unitary(c);
  CHECK(std::abs(u(3, 1) - cplx{1.0}) < 1e-15);
  CHECK(std::abs(u(1, 3) - cplx{1.0}) < 1e-15);
  CHECK(std::abs(u(0, 0) - cplx{1.0}) < 1e-15);
  CHECK(std::abs(u(2, 2) - cplx{1.0}) < 1e-15);
}

TEST_CASE("circuit followed by its inverse is the identity", "[simcore]") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Circuit c = testing_helpers::random_circuit(4, 25, rng);
    Circuit both = c;
    both.append(c.inverse());
    Matrix u = circuit_unitary(both);
    CHECK((u - Matrix::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("random circuits are unitary", "[simcore][property]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    Matrix u = circuit_unitary(testing_helpers::random_circuit(n, 30, rng));
    const auto d = u.rows();
    CHECK((u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("validate rejects malformed circuits", "[simcore]") {
  Circuit bad(2);
  bad.cx(0, 2);
  CHECK_THROWS_AS(bad.validate(), Error);
  Circuit dup(2);
  dup.cx(1, 1);
  CHECK_THROWS_AS(dup.validate(), Error);
  Circuit nonu(1);
  nonu.unitary({0}, Matrix::Ones(2, 2));
  CHECK_THROWS_AS(nonu.validate(), Error);
}

TEST_CASE("fidelity and l2 metric", "[simcore]") {
  const std::vector<double> a{1, 0}, b{0, 1}, p{1, 1};
  auto sa = Statevector::from_real(a), sb = Statevector::from_real(b), sp = Statevector::from_real(p);
  CHECK(fidelity(sa, sa) == Approx(1.0));
  CHECK(fidelity(sa, sb) == Approx(0.0).margin(1e-15));
  CHECK(fidelity(sa, sp) == Approx(0.5));
  CHECK(fidelity(sp, sa) == Approx(fidelity(sa, sp)));
  CHECK(l2_metric(sa, sa) == 0.0);
  CHECK(l2_metric(sa, sb) == Approx(1.0));

  Statevector rotated = sp;
  for (auto& z : rotated.amps()) z *= std::polar(1.0, 0.7);
  CHECK(fidelity(rotated, sa) == Approx(fidelity(sp, sa)));
}

TEST_CASE("transpile: Ry template and controlled Ry", "[simcore][transpile]") {
  Circuit ry(1);
  ry.ry(0, 0.83);
  Circuit t = transpile_native(ry);
  CHECK(is_native(t));
  CHECK(phase_insensitive_distance(circuit_unitary(t), circuit_unitary(ry)) < 1e-10);

  Circuit cry(2);
  cry.cry({{0, true}}, 1, -1.21);
  Circuit tc = transpile_native(cry);
  CHECK(tc.cx_count() == 2);
  CHECK(phase_insensitive_distance(circuit_unitary(tc), circuit_unitary(cry)) < 1e-10);

  Circuit mc(4);
  mc.cry({{1, false}, {2, false}, {3, true}}, 0, 0.4);
  Circuit tm = transpile_native(mc);
  CHECK(tm.cx_count() == 8);
  CHECK(phase_insensitive_distance(circuit_unitary(tm), circuit_unitary(mc)) < 1e-10);
}

TEST_CASE("transpile leaves native circuits alone", "[simcore][transpile]") {
  Circuit c(2);
  c.rz(0, 0.3).sx(1).x(0).cx(0, 1).i(1).rz(1, 0.0);
  CHECK(transpile_native(c).size() == c.size());
}

TEST_CASE("transpile preserves random unitaries", "[simcore][transpile][property]") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    Circuit c = testing_helpers::random_circuit(n, 12, rng);
    Circuit t = transpile_native(c);
    REQUIRE(is_native(t));
    CHECK(phase_insensitive_distance(circuit_unitary(t), circuit_unitary(c)) < 1e-8);
  }
}

TEST_CASE("transpile rejects wide blocks", "[simcore][transpile]") {
  std::mt19937_64 rng(3);
  Circuit c(3);
  c.unitary({0, 1, 2}, testing_helpers::random_unitary(8, rng));
  try {
    transpile_native(c);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unsupported);
  }
}

TEST_CASE("zero noise reproduces pure evolution", "[simcore][noise]") {
  std::mt19937_64 rng(5);
  Circuit c = transpile_native(testing_helpers::random_circuit(3, 15, rng));
  DensityMatrix rho = apply_noisy(c, NoiseModel{});
  Statevector psi = apply_circuit(c, Statevector(3));
  CHECK((rho.rho() - DensityMatrix::from_pure(psi).rho()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("bit flip after Rz", "[simcore][noise]") {
  NoiseModel nm;
  nm.p_bf = 1.0;
  Circuit c(1);
  c.rz(0, 0.4);
  DensityMatrix rho = apply_noisy(c, nm);
  CHECK(std::abs(rho.rho()(1, 1) - cplx{1.0}) < 1e-12);
}

TEST_CASE("channels are trace preserving and keep rho valid", "[simcore][noise][property]") {
  std::mt19937_64 rng(9);
  Circuit c = transpile_native(testing_helpers::random_circuit(3, 20, rng));
  NoiseModel nm = NoiseModel::calibrated();
  DensityMatrix rho = apply_noisy(c, nm);
  CHECK(std::abs(rho.trace() - cplx{1.0}) < 1e-10);
  CHECK(rho.is_valid(1e-9));
  Statevector psi = apply_circuit(c, Statevector(3));
  CHECK(fidelity(rho, psi) < 1.0);

  CHECK_THROWS_AS(KrausChannel(1, {Matrix::Identity(2, 2), Matrix::Identity(2, 2)}), Error);
}

TEST_CASE("thermal relaxation decays towards the bath", "[simcore][noise]") {
  auto ch = thermal_relaxation_channel(10.0, 15.0, 0.2, 1e6);
  DensityMatrix rho(1);
  rho.rho() << 0, 0, 0, 1;
  const int q = 0;
  apply_channel(rho, ch, std::span<const int>(&q, 1));
  CHECK(rho.rho()(1, 1).real() == Approx(0.2).margin(1e-9));

  DensityMatrix plus = DensityMatrix::from_pure(Statevector::from_real(std::vector<double>{1, 1}));
  auto short_ch = thermal_relaxation_channel(100.0, 80.0, 0.0, 10000.0);  // 10 us
  apply_channel(plus, short_ch, std::span<const int>(&q, 1));
  CHECK(std::abs(plus.rho()(0, 1)) == Approx(0.5 * std::exp(-10.0 / 80.0)));
}

TEST_CASE("noise INI parsing", "[simcore][noise]") {
  auto nm = NoiseModel::parse("[device]\nSQG_time = 35\ncx_time=540\nrd = 2,457E-04 ; comment\nPbf=2.457e-4\n"
                              "CNOTerror = 8,328E-03\npmeas = 2,23E-01\npth = 0.01\nT1 = 214.84\nT2 = 214.84\n");
  auto ref = NoiseModel::calibrated();
  CHECK(nm.r_d == Approx(ref.r_d));
  CHECK(nm.cnot_error == Approx(ref.cnot_error));
  CHECK(nm.p_meas == Approx(0.223));
  CHECK(nm.t2_us == Approx(214.84));
  CHECK(NoiseModel::parse(ref.to_ini()).cx_time_ns == ref.cx_time_ns);

  CHECK_THROWS_AS(NoiseModel::parse("t1 = 10\nt2 = 25\n"), Error);
  CHECK_THROWS_AS(NoiseModel::parse("rd = 1.5\n"), Error);
  CHECK_THROWS_AS(NoiseModel::parse("colour = 3\n"), Error);
  CHECK_THROWS_AS(NoiseModel::parse("rd = abc\n"), Error);
}

TEST_CASE("measure_counts readout", "[simcore][noise]") {
  NoiseModel nm;
  DensityMatrix zero(2);
  auto c0 = measure_counts(zero, nm, 100, 1);
  CHECK(c0.size() == 1);
  CHECK(c0["00"] == 100);

  nm.p_meas = 1.0;
  DensityMatrix one(1);
  CHECK(measure_counts(one, nm, 50, 1)["1"] == 50);

  nm.p_meas = 0.223;
  auto counts = measure_counts(one, nm, 100000, 42);
  CHECK(counts["1"] / 1e5 == Approx(0.223).margin(0.01));
  CHECK(measure_counts(one, nm, 1000, 42) == measure_counts(one, nm, 1000, 42));

  auto dist = readout_distribution(one, 0.223);
  CHECK(dist[1] == Approx(0.223));
}

TEST_CASE("qubit cap from the environment", "[simcore]") {
  setenv("AMPLOAD_MAX_QUBITS", "3", 1);
  CHECK_THROWS_AS(Statevector(4), Error);
  setenv("AMPLOAD_MAX_QUBITS", "zero", 1);
  CHECK_THROWS_AS(Limits::current(), Error);
  unsetenv("AMPLOAD_MAX_QUBITS");
  CHECK(Limits::current().max_statevector_qubits == 24);
}
