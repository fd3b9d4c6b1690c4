#include "ampload/qsvt.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ampload/error.hpp"
#include "ampload/simulate.hpp"

namespace ampload::qsvt {

namespace {

using Mat2 = std::array<cplx, 4>;  // row-major

Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

std::vector<double> symmetric_phases(const std::vector<double>& reduced, int d) {
  std::vector<double> full(reduced);
  if (d % 2 == 1) full.insert(full.end(), reduced.rbegin(), reduced.rend());
  else full.insert(full.end(), reduced.rbegin() + 1, reduced.rend());
  return full;
}

std::vector<double> chebyshev_nodes(int count, bool positive_half) {
  std::vector<double> x(static_cast<std::size_t>(count));
  const double denom = positive_half ? 4.0 * count : 2.0 * count;
  for (int j = 1; j <= count; ++j) x[static_cast<std::size_t>(j - 1)] = std::cos((2.0 * j - 1.0) * kPi / denom);
  return x;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

PhaseFactors solve_impl(const PolynomialSpec& f, int d, Parity parity, double gamma) {
  require(gamma > 0.0, ErrorCode::InvalidArgument, "gamma must be positive");
  const int m = d % 2 == 1 ? (d + 1) / 2 : d / 2 + 1;
  const std::vector<double> nodes = chebyshev_nodes(m, true);
  Eigen::VectorXd target(m);
  for (int j = 0; j < m; ++j) target(j) = f(nodes[static_cast<std::size_t>(j)]);

  auto residual = [&](const Eigen::VectorXd& red) {
    const std::vector<double> full = symmetric_phases(std::vector<double>(red.data(), red.data() + red.size()), d);
    Eigen::VectorXd r(m);
    for (int j = 0; j < m; ++j) r(j) = qsp_response(full, nodes[static_cast<std::size_t>(j)]) - target(j);
    return r;
  };

  Eigen::VectorXd red = Eigen::VectorXd::Zero(m);
  red(0) = kPi / 4.0;
  Eigen::VectorXd res = residual(red);
  // Targets touching +-1 give double roots where Newton is only linear.
  const int cap = std::max(60, 10 * d * d);
  for (int it = 0; it < cap && max_abs(res) > 1e-15; ++it) {
    Eigen::MatrixXd jac(m, m);
    const double h = 1e-7;
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXd hi = red, lo = red;
      hi(i) += h;
      lo(i) -= h;
      jac.col(i) = (residual(hi) - residual(lo)) / (2.0 * h);
    }
    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(res);
    if (!step.allFinite()) break;
    double t = 1.0;
    bool improved = false;
    for (int back = 0; back < 30; ++back, t *= 0.5) {
      const Eigen::VectorXd cand = red - t * step;
      const Eigen::VectorXd cres = residual(cand);
      if (max_abs(cres) < max_abs(res)) {
        red = cand;
        res = cres;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }

  PhaseFactors pf;
  pf.parity = parity;
  pf.phases = symmetric_phases(std::vector<double>(red.data(), red.data() + red.size()), d);
  for (double x : chebyshev_nodes(std::max(4 * d, 8), false))
    pf.achieved_error = std::max(pf.achieved_error, std::abs(qsp_response(pf.phases, x) - f(x)));
  if (!(pf.achieved_error <= gamma))
    throw SolverError("phase solver reached error " + std::to_string(pf.achieved_error) + " > gamma " +
                          std::to_string(gamma) + " for degree " + std::to_string(d),
                      pf.achieved_error);
  return pf;
}

// Wx phases to the reflection-convention angles used between block calls.
std::vector<double> to_reflection_angles(const std::vector<double>& phi, double sign) {
  std::vector<double> psi(phi.size());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const bool edge = k == 0 || k + 1 == phi.size();
    psi[k] = sign * phi[k] - (edge ? kPi / 4.0 : kPi / 2.0);
  }
  if (phi.size() == 1) psi[0] = sign * phi[0];
  return psi;
}

}  // namespace

PolynomialSpec::PolynomialSpec(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  for (double v : c_) require(std::isfinite(v), ErrorCode::InvalidArgument, "non-finite polynomial coefficient");
  while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
  if (c_.empty()) c_.push_back(0.0);
}

PolynomialSpec PolynomialSpec::from_roots(std::span<const double> roots, double lead) {
  std::vector<double> c{lead};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  return PolynomialSpec(std::move(c));
}

bool PolynomialSpec::is_zero() const { return c_.size() == 1 && c_[0] == 0.0; }

double PolynomialSpec::operator()(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

PolynomialSpec PolynomialSpec::scaled(double s) const {
  std::vector<double> c = c_;
  for (double& v : c) v *= s;
  return PolynomialSpec(std::move(c));
}

PolynomialSpec PolynomialSpec::composed_affine(double a, double b) const {
  // Horner in polynomial arithmetic: acc <- acc * (a x + b) + c_k.
  std::vector<double> acc{0.0};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    std::vector<double> next(acc.size() + 1, 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      next[i + 1] += a * acc[i];
      next[i] += b * acc[i];
    }
    next[0] += *it;
    acc = std::move(next);
  }
  return PolynomialSpec(std::move(acc));
}

PolynomialSpec PolynomialSpec::even_part() const {
  std::vector<double> c = c_;
  for (std::size_t i = 1; i < c.size(); i += 2) c[i] = 0.0;
  return PolynomialSpec(std::move(c));
}

PolynomialSpec PolynomialSpec::odd_part() const {
  std::vector<double> c = c_;
  for (std::size_t i = 0; i < c.size(); i += 2) c[i] = 0.0;
  return PolynomialSpec(std::move(c));
}

PolynomialSpec PolynomialSpec::derivative() const {
  if (c_.size() == 1) return PolynomialSpec({0.0});
  std::vector<double> c(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = static_cast<double>(i) * c_[i];
  return PolynomialSpec(std::move(c));
}

int PolynomialSpec::parity() const {
  bool has_even = false, has_odd = false;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0.0) (i % 2 ? has_odd : has_even) = true;
  if (has_even && has_odd) return 0;
  return has_odd ? -1 : 1;
}

double PolynomialSpec::sup_abs(double lo, double hi) const {
  double best = std::max(std::abs((*this)(lo)), std::abs((*this)(hi)));
  const PolynomialSpec dp = derivative();
  if (dp.degree() >= 1) {
    const int k = dp.degree();
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(k, k);
    for (int i = 1; i < k; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < k; ++i) comp(i, k - 1) = -dp.coeffs()[static_cast<std::size_t>(i)] / dp.coeffs().back();
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const cplx z = es.eigenvalues()(i);
      if (std::abs(z.imag()) > 1e-7 * std::max(1.0, std::abs(z))) continue;
      const double x = z.real();
      if (x >= lo && x <= hi) best = std::max(best, std::abs((*this)(x)));
    }
  }
  // Guard against ill-conditioned roots with a dense scan.
  const int samples = 4096;
  for (int i = 0; i <= samples; ++i) best = std::max(best, std::abs((*this)(lo + (hi - lo) * i / samples)));
  return best;
}

double PolynomialSpec::max_coeff() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

std::string PhaseFactors::to_csv() const {
  std::ostringstream o;
  o << std::setprecision(17);
  o << "parity,d,achieved_error";
  for (int k = 0; k <= degree(); ++k) o << ",phi_" << k;
  o << "\n" << (parity == Parity::Even ? "even" : "odd") << ',' << degree() << ',' << achieved_error;
  for (double p : phases) o << ',' << p;
  o << "\n";
  return o.str();
}

PhaseFactors PhaseFactors::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string header, row;
  require(static_cast<bool>(std::getline(in, header)) && static_cast<bool>(std::getline(in, row)), ErrorCode::Io,
          "phase CSV needs a header and a row");
  std::vector<std::string> cells;
  std::stringstream ss(row);
  for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
  require(cells.size() >= 4, ErrorCode::Io, "phase CSV row is too short");
  PhaseFactors pf;
  require(cells[0] == "even" || cells[0] == "odd", ErrorCode::Io, "phase CSV parity must be even or odd");
  pf.parity = cells[0] == "even" ? Parity::Even : Parity::Odd;
  try {
    const int d = std::stoi(cells[1]);
    pf.achieved_error = std::stod(cells[2]);
    for (std::size_t i = 3; i < cells.size(); ++i) pf.phases.push_back(std::stod(cells[i]));
    require(pf.degree() == d, ErrorCode::Io, "phase CSV angle count does not match d");
  } catch (const std::logic_error&) {
    fail(ErrorCode::Io, "phase CSV has a non-numeric field");
  }
  return pf;
}

double qsp_response(std::span<const double> phases, double x) {
  require(!phases.empty(), ErrorCode::InvalidArgument, "empty phase list");
  const cplx i1{0.0, 1.0};
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  const Mat2 w{x, i1 * s, i1 * s, x};
  auto ez = [&i1](double p) { return Mat2{std::exp(i1 * p), 0.0, 0.0, std::exp(-i1 * p)}; };
  Mat2 u = ez(phases[0]);
  for (std::size_t k = 1; k < phases.size(); ++k) u = mul(mul(u, w), ez(phases[k]));
  return u[0].real();
}

PhaseFactors solve_phases(const PolynomialSpec& target, double gamma) {
  const int par = target.parity();
  require(par != 0, ErrorCode::InvalidArgument, "phase solving needs a polynomial of definite parity");
  require(target.sup_abs(-1.0, 1.0) <= 1.0 + 1e-12, ErrorCode::Normalization,
          "target exceeds 1 in magnitude on [-1, 1]");
  return solve_impl(target, target.degree(), par > 0 ? Parity::Even : Parity::Odd, gamma);
}

blockenc::BlockEncoding apply_qsvt(const blockenc::BlockEncoding& be, const PolynomialSpec& p, double gamma) {
  require(!p.is_zero(), ErrorCode::Degenerate, "zero polynomial");
  require(p.sup_abs(-1.0, 1.0) <= 0.25 + 1e-12, ErrorCode::Normalization,
          "QSVT polynomial must satisfy |p| <= 1/4 on [-1, 1]; scale it by 1/(4M) first");
  const int k = be.system_qubits;
  const int base = be.circuit.num_qubits();
  const int total = base + 3;
  require(total <= Limits::current().max_statevector_qubits, ErrorCode::Resource,
          "QSVT circuit needs " + std::to_string(total) + " qubits");
  const int pq = base, rq = base + 1, sq = base + 2;

  // Parity parts scaled by 2 so the equal-weight parity LCU restores p.
  const PolynomialSpec even = p.even_part().scaled(2.0), odd = p.odd_part().scaled(2.0);
  std::array<PhaseFactors, 2> pf{
      solve_impl(even, even.is_zero() ? 0 : even.degree(), Parity::Even, gamma),
      solve_impl(odd, odd.is_zero() ? 1 : odd.degree(), Parity::Odd, gamma)};
  const std::array<int, 2> deg{pf[0].degree(), pf[1].degree()};
  const int longest = std::max(deg[0], deg[1]);
  const int shared = std::min(deg[0], deg[1]);
  const int longer_parity = deg[1] > deg[0] ? 1 : 0;
  std::array<std::array<std::vector<double>, 2>, 2> psi;  // [parity][sign]
  for (int s = 0; s < 2; ++s) {
    psi[static_cast<std::size_t>(s)][0] = to_reflection_angles(pf[static_cast<std::size_t>(s)].phases, 1.0);
    psi[static_cast<std::size_t>(s)][1] = to_reflection_angles(pf[static_cast<std::size_t>(s)].phases, -1.0);
  }

  std::vector<sim::Control> anc_zero;
  for (int q = k; q < base; ++q) anc_zero.push_back({q, false});
  const sim::Circuit u = be.circuit, udag = be.circuit.inverse();
  std::vector<int> map(static_cast<std::size_t>(base));
  for (int q = 0; q < base; ++q) map[static_cast<std::size_t>(q)] = q;

  sim::Circuit c(total);
  c.h(rq).h(sq);
  for (int t = 0; t <= longest; ++t) {
    c.mcx(anc_zero, pq);
    for (int s = 0; s < 2; ++s) {
      const int d = deg[static_cast<std::size_t>(s)];
      if (t > d) continue;
      for (int r = 0; r < 2; ++r) {
        const double angle = psi[static_cast<std::size_t>(s)][static_cast<std::size_t>(r)][static_cast<std::size_t>(d - t)];
        sim::Gate g{sim::GateKind::Rz, {pq}, {{sq, s == 1}, {rq, r == 1}}, 2.0 * angle, {}};
        c.add(std::move(g));
      }
    }
    c.mcx(anc_zero, pq);
    if (t == longest) break;
    const sim::Circuit& op = t % 2 == 0 ? u : udag;
    const std::string label = t % 2 == 0 ? "A" : "A^-1";
    if (t < shared) {
      c.append(op, map, {}, label);
    } else {
      const sim::Control only{sq, longer_parity == 1};
      c.append(op, map, std::span<const sim::Control>(&only, 1), label);
    }
  }
  for (int s = 0; s < 2; ++s) c.phase(deg[static_cast<std::size_t>(s)] * kPi / 2.0, {{sq, s == 1}});
  c.h(rq).h(sq);

  blockenc::BlockEncoding out;
  out.circuit = std::move(c);
  out.system_qubits = k;
  out.alpha = be.alpha;
  out.target.resize(be.target.size());
  for (std::size_t j = 0; j < be.target.size(); ++j) out.target[j] = p(be.target[j]);
  out.loader_queries = be.loader_queries * longest;
  out.inverse_loader_queries = be.inverse_loader_queries * longest;
  out.eps = 2.0 * gamma;
  return out;
}

sim::Statevector reference_transform(const sim::Statevector& state, const PolynomialSpec& p,
                                     std::span<const double> grid) {
  require(grid.empty() || grid.size() == state.size(), ErrorCode::InvalidArgument, "grid size does not match state");
  std::vector<double> v(state.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = p(grid.empty() ? state[j].real() : grid[j]);
  double nrm = 0.0;
  for (double a : v) nrm += a * a;
  require(nrm > 0.0, ErrorCode::Degenerate, "polynomial vanishes on every grid point");
  return sim::Statevector::from_real(v);
}

std::vector<double> unit_grid(int k0) {
  require(k0 >= 1 && k0 <= 30, ErrorCode::InvalidArgument, "k0 outside 1..30");
  const std::size_t count = dim_of(k0);
  std::vector<double> x(count);
  for (std::size_t j = 0; j < count; ++j) x[j] = static_cast<double>(j) / static_cast<double>(count - 1);
  return x;
}

double filling_ratio(const PolynomialSpec& p, int k0) {
  const std::vector<double> x = unit_grid(k0);
  double sq = 0.0, mx = 0.0;
  for (double xi : x) {
    const double v = p(xi);
    sq += v * v;
    mx = std::max(mx, std::abs(v));
  }
  require(mx > 0.0, ErrorCode::Degenerate, "zero polynomial on the grid");
  return std::sqrt(sq) / (std::sqrt(static_cast<double>(x.size())) * mx);
}

int aa_rounds_estimate(double filling) {
  require(filling > 0.0, ErrorCode::Degenerate, "filling ratio must be positive");
  return static_cast<int>(std::ceil(4.0 / filling - 1e-12));
}

int optimal_rounds(double p0) {
  require(p0 > 0.0 && p0 <= 1.0 + 1e-12, ErrorCode::Degenerate, "good-state probability must lie in (0, 1]");
  return static_cast<int>(std::floor(kPi / (4.0 * std::asin(std::sqrt(std::min(p0, 1.0)))) + 1e-12));
}

double good_probability(const sim::Statevector& s, std::span<const int> good_zero) {
  std::size_t mask = 0;
  for (int q : good_zero) mask |= std::size_t{1} << q;
  double p = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if ((i & mask) == 0) p += std::norm(s[i]);
  return p;
}

AmplifiedState amplitude_amplify(const sim::Circuit& prep, std::span<const int> good_zero, int rounds) {
  std::size_t mask = 0;
  for (int q : good_zero) mask |= std::size_t{1} << q;
  const int n = prep.num_qubits();
  AmplifiedState out;
  out.state = sim::apply_circuit(prep, sim::Statevector(n));
  out.initial_probability = good_probability(out.state, good_zero);
  require(out.initial_probability > 1e-300, ErrorCode::Degenerate, "prepared state has no good component");
  out.rounds = rounds < 0 ? optimal_rounds(out.initial_probability) : rounds;
  const sim::Circuit inv = prep.inverse();
  auto& a = out.state.amps();
  for (int r = 0; r < out.rounds; ++r) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if ((i & mask) == 0) a[i] = -a[i];
    sim::apply_circuit_inplace(inv, a);
    for (std::size_t i = 1; i < a.size(); ++i) a[i] = -a[i];
    sim::apply_circuit_inplace(prep, a);
  }
  out.final_probability = good_probability(out.state, good_zero);
  return out;
}

}  // namespace ampload::qsvt
