#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "ampload/error.hpp"
#include "ampload/linload.hpp"
#include "ampload/mps.hpp"
#include "ampload/simulate.hpp"

using namespace ampload;
using namespace ampload::mps;
using Catch::Approx;

namespace {

std::vector<double> poly_samples(int n, const std::vector<double>& roots) {
  const double top = std::ldexp(1.0, n) - 1.0;
  std::vector<double> v(dim_of(n));
  for (std::size_t j = 0; j < v.size(); ++j) {
    double acc = 1.0;
    for (double r : roots) acc *= static_cast<double>(j) / top - r / top;
    v[j] = acc;
  }
  return v;
}

double fid(const std::vector<cplx>& a, const std::vector<double>& b) {
  return sim::fidelity(sim::Statevector::from_complex(a), sim::Statevector::from_real(b));
}

double l2_aligned(const std::vector<cplx>& a, const std::vector<double>& b) {
  auto sa = sim::Statevector::from_complex(a).real_parts();
  auto sb = sim::Statevector::from_real(b).real_parts();
  double dot = 0, acc = 0;
  for (std::size_t j = 0; j < sa.size(); ++j) dot += sa[j] * sb[j];
  const double sign = dot < 0 ? -1.0 : 1.0;
  for (std::size_t j = 0; j < sa.size(); ++j) acc += (sa[j] - sign * sb[j]) * (sa[j] - sign * sb[j]);
  return std::sqrt(acc / static_cast<double>(sa.size()));
}

double frob2(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double acc = 0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += std::norm(a[j] - b[j]);
  return acc;
}

std::vector<cplx> random_smooth(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ud(-1, 1);
  const double a = ud(rng), b = 3 * ud(rng), c = ud(rng), d = 5 * ud(rng);
  std::vector<cplx> v(dim_of(n));
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(v.size());
    v[j] = a + std::sin(b * x + c) + 0.3 * std::cos(d * x * x);
  }
  return v;
}

}  // namespace

TEST_CASE("bond dimensions of simple states", "[mps]") {
  std::vector<double> uniform(64, 1.0 / 8.0);
  auto u = from_dense(uniform);
  for (int b : u.mps.bond_dimensions()) CHECK(b == 1);

  for (int n = 2; n <= 10; ++n) {
    auto lin = from_dense(linload::exact_state(n).real_parts());
    CHECK(lin.mps.max_bond() <= 2);
  }
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ud(0, 1);
  for (int n = 3; n <= 10; ++n)
    for (int d = 1; d <= 4; ++d) {
      std::vector<double> roots;
      for (int k = 0; k < d; ++k) roots.push_back(ud(rng) * (std::ldexp(1.0, n) - 1));
      CHECK(from_dense(poly_samples(n, roots)).mps.max_bond() <= d + 1);
    }
}

TEST_CASE("round trip and canonical form", "[mps][property]") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    if (n < 2) continue;
    std::vector<cplx> v(dim_of(n));
    for (auto& z : v) z = {nd(rng), nd(rng)};
    auto d = from_dense(v);
    CHECK(frob2(to_dense(d.mps), v) < 1e-20 * 1e2 * static_cast<double>(v.size()));
    CHECK(d.mps.canonical_error() < 1e-9);
    auto bonds = d.mps.bond_dimensions();
    for (std::size_t i = 0; i < bonds.size(); ++i)
      CHECK(bonds[i] <= std::min(1 << (i + 1), 1 << (n - 1 - static_cast<int>(i))));
  }
}

TEST_CASE("truncation error respects the singular value bound", "[mps][property]") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6);
    auto v = random_smooth(n, rng);
    for (int chi = 1; chi <= 3; ++chi) {
      auto d = from_dense(v, chi);
      CHECK(frob2(to_dense(d.mps), v) <= d.report.frobenius_bound + 1e-12);
      CHECK(d.mps.canonical_error() < 1e-9);
    }
  }
}

TEST_CASE("single-bond truncation is Eckart-Young optimal", "[mps][property]") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> nd;
  const int n = 6;
  std::vector<cplx> v(dim_of(n));
  for (auto& z : v) z = nd(rng);
  auto exact = from_dense(v).mps;
  for (int bond = 1; bond < n; ++bond) {
    // Truncate one bond only: cap it on a copy canonicalized up to that bond.
    const std::size_t rows = std::size_t{1} << bond;
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(v.size() / rows));
    for (std::size_t j = 0; j < v.size(); ++j)
      m(static_cast<Eigen::Index>(j / m.cols()), static_cast<Eigen::Index>(j % m.cols())) = v[j];
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const int keep = std::max(1, static_cast<int>(svd.singularValues().size()) - 1);
    Matrix approx = svd.matrixU().leftCols(keep) * svd.singularValues().head(keep).asDiagonal() *
                    svd.matrixV().leftCols(keep).adjoint();
    double err = (m - approx).squaredNorm(), tail = 0;
    for (Eigen::Index k = keep; k < svd.singularValues().size(); ++k) tail += std::pow(svd.singularValues()(k), 2);
    CHECK(err == Approx(tail).margin(1e-10));
  }
  CHECK(exact.canonical_error() < 1e-9);
}

TEST_CASE("analytic linear MPS", "[mps]") {
  auto two = to_dense(analytic_linear_mps(2));
  for (int j = 0; j < 4; ++j) CHECK(two[static_cast<std::size_t>(j)].real() == Approx(j / std::sqrt(14.0)).margin(1e-15));
  for (int n = 2; n <= 10; ++n) {
    auto m = analytic_linear_mps(n);
    auto dense = to_dense(m);
    auto ref = linload::exact_state(n);
    double err = 0;
    for (std::size_t j = 0; j < dense.size(); ++j) err = std::max(err, std::abs(dense[j] - ref[j]));
    CHECK(err < 1e-12);
    for (int b : m.bond_dimensions()) CHECK(b == 2);
  }
}

TEST_CASE("circuit extraction", "[mps]") {
  const int n = 6;
  auto check_state = [n](const MPS& m) {
    auto circ = to_circuit(m);
    auto out = sim::apply_circuit(circ, sim::Statevector(n));
    auto ref = sim::Statevector::from_complex(to_dense(m));
    double err = 0;
    for (std::size_t j = 0; j < ref.size(); ++j) err = std::max(err, std::abs(out[j] - ref[j]));
    CHECK(err < 1e-8);
    return circ;
  };
  auto lin = from_dense(linload::exact_state(n).real_parts()).mps;
  auto c2 = check_state(lin);
  CHECK(c2.size() == static_cast<std::size_t>(n - 1));
  for (const auto& g : c2.gates()) CHECK(g.targets.size() == 2);

  auto c1 = check_state(from_dense(linload::exact_state(n).real_parts(), 1).mps);
  CHECK(c1.size() == static_cast<std::size_t>(n));
  for (const auto& g : c1.gates()) CHECK(g.targets.size() == 1);

  auto quartic = from_dense(poly_samples(n, {1, 20, 50, 60}), 4).mps;
  auto c4 = check_state(quartic);
  for (const auto& g : c4.gates()) CHECK(g.targets.size() <= 3);
  CHECK(sim::fidelity(sim::apply_circuit(c4, sim::Statevector(n)),
                      sim::Statevector::from_real(poly_samples(n, {1, 20, 50, 60}))) == Approx(1.0).margin(1e-8));

  std::mt19937_64 rng(21);
  for (int chi = 1; chi <= 5; ++chi) check_state(from_dense(random_smooth(n, rng), chi).mps);
  CHECK_THROWS_AS(to_circuit(analytic_linear_mps(4)), Error);
}

TEST_CASE("direct polynomial MPS reference rows", "[mps]") {
  const std::vector<double> quartic = poly_samples(6, {1, 20, 50, 60});
  const double fids[] = {0.6712, 0.9597, 0.9985, 1.0};
  const double l2s[] = {0.0752, 0.0252, 0.0049, 0.0};
  for (int chi = 1; chi <= 4; ++chi) {
    auto dense = to_dense(from_dense(quartic, chi).mps);
    CHECK(fid(dense, quartic) == Approx(fids[chi - 1]).margin(5e-5));
    CHECK(l2_aligned(dense, quartic) == Approx(l2s[chi - 1]).margin(5e-5));
  }
}

TEST_CASE("product-state fit", "[mps]") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ud(0.1, 3.0);
  std::vector<double> angles(5);
  for (double& a : angles) a = ud(rng);
  auto target = sim::Statevector::from_real(product_amplitudes(angles));
  auto r = variational_product_fit(target, FitInit::FromChi1Mps);
  CHECK(r.fidelity == Approx(1.0).margin(1e-8));

  auto lin = linload::exact_state(6);
  auto fit = variational_product_fit(lin, FitInit::FromChi1Mps);
  CHECK(fit.fidelity >= fit.initial_fidelity);
  auto formula = variational_product_fit(lin, FitInit::FromFitFormula);
  CHECK(formula.fidelity >= formula.initial_fidelity);

  auto chi1 = chi1_angles(from_dense(linload::exact_state(8).real_parts(), 1).mps);
  auto f8 = fit_formula_angles(8);
  for (std::size_t q = 0; q < 8; ++q) CHECK(std::abs(chi1[q] - f8[q]) < 0.05);
}

TEST_CASE("analytic gradient matches finite differences", "[mps][property]") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ud(-3, 3);
  auto t = linload::exact_state(5).real_parts();
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(5), grad;
    for (double& v : a) v = ud(rng);
    product_loss(a, t, &grad);
    for (std::size_t q = 0; q < a.size(); ++q) {
      auto hi = a, lo = a;
      hi[q] += 1e-6;
      lo[q] -= 1e-6;
      const double fd = (product_loss(hi, t, nullptr) - product_loss(lo, t, nullptr)) / 2e-6;
      CHECK(std::abs(grad[q] - fd) <= 1e-5 * std::max(std::abs(fd), 1e-3));
    }
  }
}

TEST_CASE("serialization round trip", "[mps]") {
  auto m = from_dense(poly_samples(5, {3, 17}), 2).mps;
  std::stringstream ss;
  write(ss, m);
  auto back = read(ss);
  CHECK(back.n == m.n);
  CHECK(back.left_canonical);
  auto a = to_dense(m), b = to_dense(back);
  for (std::size_t j = 0; j < a.size(); ++j) CHECK(std::abs(a[j] - b[j]) < 1e-15);
  std::stringstream bad("ampload-mps 2\n");
  CHECK_THROWS_AS(read(bad), Error);
}
