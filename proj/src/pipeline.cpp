#include "ampload/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "ampload/blockenc.hpp"
#include "ampload/error.hpp"
#include "ampload/linload.hpp"
#include "ampload/mps.hpp"
#include "ampload/simulate.hpp"
#include "ampload/transpile.hpp"

namespace ampload::pipeline {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> evaluate(const PolynomialSpec& p, std::span<const double> x) {
  std::vector<double> v(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) v[j] = p(x[j]);
  return v;
}

sim::Statevector normalized_or_throw(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  require(s > 0.0, ErrorCode::Degenerate, "polynomial vanishes on every grid point");
  return sim::Statevector::from_real(v);
}

/// Equal superposition on `r` qubits.
sim::Statevector plus_state(int r) {
  const std::vector<double> v(dim_of(r), 1.0);
  return sim::Statevector::from_real(v);
}

struct Transformed {
  sim::Statevector state;  // on the loader's qubits
  Resources res;
};

/// Ancilla-free gate count of the QSVT circuit around `be` when it is too
/// large to build.
std::size_t estimated_qsvt_gates(const blockenc::BlockEncoding& be, int degree, int k) {
  const std::size_t d = static_cast<std::size_t>(std::max(degree, 1));
  return d * be.circuit.size() + 6 * (d + 1) + 6 + static_cast<std::size_t>(k);
}

/// Applies q to the amplitudes psi_j of loader|0>, either by functional
/// calculus or by simulating the QSVT circuit on H^k |0> and post-selecting
/// the ancillas on |0>.
Transformed transform(const sim::Circuit& loader, std::span<const double> psi, const PolynomialSpec& q,
                      QsvtMode mode, double gamma) {
  const int k = loader.num_qubits();
  Transformed out;
  const blockenc::BlockEncoding be = blockenc::build_UA(loader, k);
  const double sup = q.sup_abs(-1.0, 1.0);
  require(sup > 0.0, ErrorCode::Degenerate, "zero polynomial");
  const PolynomialSpec scaled = q.scaled(0.25 / sup);
  const int cap = Limits::current().max_statevector_qubits;
  const bool buildable = be.circuit.num_qubits() + 3 <= cap;
  require(mode == QsvtMode::Oracle || buildable, ErrorCode::Resource,
          "QSVT circuit needs " + std::to_string(be.circuit.num_qubits() + 3) + " qubits");

  out.res.ancillas = be.ancillas() + 3;
  if (buildable) {
    const blockenc::BlockEncoding enc = qsvt::apply_qsvt(be, scaled, gamma);
    out.res.gate_count = enc.circuit.size() + static_cast<std::size_t>(k);
    out.res.cx_count = enc.circuit.cx_count();
    out.res.loader_queries = enc.loader_queries + enc.inverse_loader_queries;
    if (mode == QsvtMode::Circuit) {
      sim::Circuit prep(enc.circuit.num_qubits());
      for (int i = 0; i < k; ++i) prep.h(i);
      prep.append(enc.circuit);
      const sim::Statevector full = sim::apply_circuit(prep, sim::Statevector(prep.num_qubits()));
      std::vector<cplx> post(full.amps().begin(), full.amps().begin() + static_cast<std::ptrdiff_t>(dim_of(k)));
      double s = 0.0;
      for (const cplx& a : post) s += std::norm(a);
      require(s > 1e-300, ErrorCode::Degenerate, "post-selected branch has zero weight");
      out.state = sim::Statevector::from_complex(post);
      return out;
    }
  } else {
    out.res.gate_count = estimated_qsvt_gates(be, q.degree(), k);
    out.res.loader_queries = (be.loader_queries + be.inverse_loader_queries) * std::max(q.degree(), 1);
  }
  out.state = normalized_or_throw(evaluate(q, psi));
  return out;
}

void fill_delta(LoadResult& r, const PolynomialSpec& p, int k0, bool applicable) {
  if (!applicable) {
    r.delta_inf_bound = kNaN;
    r.delta_within_bound = true;
    return;
  }
  r.delta_inf_bound = delta_inf_bound(p, r.n, k0).derivative;
  r.delta_within_bound = r.delta_inf <= r.delta_inf_bound + 1e-9;
}

void check_request(const LoadRequest& req) {
  require(req.n >= 1, ErrorCode::InvalidArgument, "n must be at least 1");
  require(req.n <= Limits::current().max_statevector_qubits, ErrorCode::Resource,
          "n = " + std::to_string(req.n) + " exceeds the statevector cap");
  if (req.method == Method::DhwtQsvt || req.method == Method::DhwtExactLinear)
    require(req.k0 >= 1 && req.k0 <= req.n, ErrorCode::InvalidArgument, "k0 must lie in 1..n");
  if (req.method == Method::MpsDirect || req.method == Method::MpsLinQsvt)
    require(req.chi >= 1, ErrorCode::InvalidArgument, "chi must be at least 1");
  if (req.method == Method::MpsLinQsvt)
    require(req.chi == 1, ErrorCode::InvalidArgument, "mps-lin-qsvt uses a chi = 1 carrier");
  if (req.method != Method::DhwtExactLinear)
    require(!req.polynomial.is_zero(), ErrorCode::Degenerate, "zero polynomial");
}

LoadResult run_dhwt_qsvt(const LoadRequest& req) {
  const int n = req.n, k0 = req.k0, r = n - k0;
  const std::size_t K = dim_of(k0);
  const PolynomialSpec& P = req.polynomial;
  LoadResult out;
  out.filling_ratio = qsvt::filling_ratio(P, k0);
  out.success_prob = qsvt::success_probability(out.filling_ratio);

  const sim::Circuit loader = linload::build_circuit(linload::plan(k0, k0));
  const double ck = linload::exact_norm(k0);
  std::vector<double> psi(K);
  for (std::size_t j = 0; j < K; ++j) psi[j] = static_cast<double>(j) / ck;
  const PolynomialSpec q = P.composed_affine(ck / static_cast<double>(K - 1), 0.0);

  if (req.padding == Padding::CoarseGrid) {
    Transformed t = transform(loader, psi, q, req.mode, req.gamma);
    out.state = r == 0 ? t.state : t.state.tensor(plus_state(r));
    out.resources = t.res;
    out.resources.gate_count += static_cast<std::size_t>(r);
  } else {
    require(req.mode == QsvtMode::Oracle, ErrorCode::Unsupported, "stepwise padding is only available in oracle mode");
    const std::size_t N = dim_of(n), B = dim_of(r);
    std::vector<double> x(N);
    for (std::size_t j = 0; j < N; ++j)
      x[j] = (static_cast<double>((j / B) * B) + 0.5 * static_cast<double>(B - 1)) / static_cast<double>(N - 1);
    out.state = normalized_or_throw(evaluate(P, x));
    out.resources = transform(loader, psi, q, QsvtMode::Oracle, req.gamma).res;
  }
  out.resources.aa_rounds = qsvt::aa_rounds_estimate(out.filling_ratio);
  return out;
}

LoadResult run_mps_lin_qsvt(const LoadRequest& req) {
  const int n = req.n;
  const mps::Decomposition dec = mps::from_dense(linload::exact_state(n).real_parts(), 1);
  const mps::MPS carrier = mps::normalized(dec.mps);
  std::vector<double> a;
  for (const cplx& c : mps::to_dense(carrier)) a.push_back(c.real());
  const double amax = max_abs(a);
  require(amax > 0.0, ErrorCode::Degenerate, "empty carrier");
  const PolynomialSpec q = req.polynomial.composed_affine(1.0 / amax, 0.0);
  const sim::Circuit loader = mps::to_circuit(carrier);
  Transformed t = transform(loader, a, q, req.mode, req.gamma);
  LoadResult out;
  out.state = t.state;
  out.resources = t.res;
  std::vector<double> v = evaluate(q, a);
  double sq = 0.0;
  for (double x : v) sq += x * x;
  out.filling_ratio = std::sqrt(sq) / (std::sqrt(static_cast<double>(v.size())) * max_abs(v));
  out.success_prob = qsvt::success_probability(out.filling_ratio);
  out.resources.aa_rounds = qsvt::aa_rounds_estimate(out.filling_ratio);
  return out;
}

LoadResult run_mps_direct(const LoadRequest& req) {
  const sim::Statevector target = exact_target(req.polynomial, req.n);
  const mps::Decomposition dec = mps::from_dense(target.real_parts(), req.chi);
  const sim::Circuit c = mps::to_circuit(mps::normalized(dec.mps));
  LoadResult out;
  out.state = sim::apply_circuit(c, sim::Statevector(req.n));
  out.resources.gate_count = c.size();
  out.resources.cx_count = c.cx_count();
  return out;
}

LoadResult run_linear(const LoadRequest& req) {
  if (!req.polynomial.is_zero()) {
    const auto& c = req.polynomial.coeffs();
    bool ramp = c.size() >= 2 && c[1] != 0.0 && c[0] == 0.0;
    for (std::size_t i = 2; i < c.size(); ++i) ramp = ramp && c[i] == 0.0;
    require(ramp, ErrorCode::InvalidArgument, "dhwt-linear loads only P(x) = c x");
  }
  const sim::Circuit c = linload::build_circuit(linload::plan(req.n, req.k0));
  LoadResult out;
  out.state = sim::apply_circuit(c, sim::Statevector(req.n));
  out.resources.gate_count = c.size();
  out.resources.cx_count =
      req.n <= Limits::current().max_dense_qubits ? sim::transpile_native(c).cx_count() : c.cx_count();
  return out;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::DhwtQsvt: return "dhwt-qsvt";
    case Method::MpsDirect: return "mps";
    case Method::MpsLinQsvt: return "mps-lin-qsvt";
    case Method::DhwtExactLinear: return "dhwt-linear";
  }
  return "?";
}

Method parse_method(std::string_view s) {
  std::string t(s);
  std::replace(t.begin(), t.end(), '_', '-');
  if (t == "dhwt-qsvt") return Method::DhwtQsvt;
  if (t == "mps" || t == "mps-direct") return Method::MpsDirect;
  if (t == "mps-lin-qsvt") return Method::MpsLinQsvt;
  if (t == "dhwt-linear" || t == "dhwt-exact-linear" || t == "dhwt") return Method::DhwtExactLinear;
  fail(ErrorCode::InvalidArgument, "unknown method '" + std::string(s) + "'");
}

Root parse_root(std::string_view s) {
  auto parse_int = [&](std::string_view t) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    require(ec == std::errc{} && ptr == t.data() + t.size(), ErrorCode::InvalidArgument,
            "malformed root '" + std::string(s) + "'");
    return v;
  };
  require(!s.empty(), ErrorCode::InvalidArgument, "empty root");
  Root r;
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    r.num = parse_int(s.substr(0, slash));
    r.den = parse_int(s.substr(slash + 1));
  } else if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view frac = s.substr(dot + 1);
    require(frac.size() <= 12, ErrorCode::InvalidArgument, "root '" + std::string(s) + "' has too many decimals");
    std::string digits(s.substr(0, dot));
    digits += frac;
    if (digits == "-" || digits == "+" || digits.empty()) digits += "0";
    r.num = parse_int(digits.front() == '+' ? std::string_view(digits).substr(1) : std::string_view(digits));
    r.den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) r.den *= 10;
  } else {
    r.num = parse_int(s.front() == '+' ? s.substr(1) : s);
  }
  require(r.den != 0, ErrorCode::InvalidArgument, "root '" + std::string(s) + "' has zero denominator");
  if (r.den < 0) {
    r.den = -r.den;
    r.num = -r.num;
  }
  const std::int64_t g = std::gcd(r.num, r.den);
  if (g > 1) {
    r.num /= g;
    r.den /= g;
  }
  return r;
}

PolynomialSpec expand_roots(std::span<const Root> roots) {
  // prod (q_i x - p_i) over the integers, then divide by prod q_i.
  std::vector<__int128> c{1};
  long double den = 1.0L;
  constexpr __int128 kLimit = static_cast<__int128>(1) << 110;
  for (const Root& r : roots) {
    require(r.den > 0, ErrorCode::InvalidArgument, "root denominator must be positive");
    std::vector<__int128> next(c.size() + 1, 0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k] * r.den;
      next[k] -= c[k] * r.num;
    }
    for (const __int128 v : next)
      require(v < kLimit && v > -kLimit, ErrorCode::Numeric, "root expansion overflows exact arithmetic");
    c = std::move(next);
    den *= static_cast<long double>(r.den);
  }
  std::vector<double> out(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) out[k] = static_cast<double>(static_cast<long double>(c[k]) / den);
  return PolynomialSpec(std::move(out));
}

sim::Statevector exact_target(const PolynomialSpec& p, int n) {
  require(n >= 1 && n <= Limits::current().max_statevector_qubits, ErrorCode::Resource, "n outside the simulator cap");
  return normalized_or_throw(evaluate(p, qsvt::unit_grid(n)));
}

Comparison compare(const sim::Statevector& produced, const sim::Statevector& target) {
  require(produced.size() == target.size(), ErrorCode::InvalidArgument, "state sizes differ");
  Comparison c;
  c.fidelity = std::min(1.0, sim::fidelity(produced, target));
  c.l2 = sim::l2_metric(produced, target);
  const std::vector<double> ra = produced.real_parts(), rt = target.real_parts();
  const double ma = max_abs(ra), mt = max_abs(rt);
  for (std::size_t j = 0; j < ra.size(); ++j)
    c.delta_inf = std::max(c.delta_inf, std::abs((ma > 0 ? ra[j] / ma : 0.0) - (mt > 0 ? rt[j] / mt : 0.0)));
  return c;
}

DeltaBound delta_inf_bound(const PolynomialSpec& p, int n, int k0) {
  require(k0 >= 1 && k0 <= n, ErrorCode::InvalidArgument, "k0 must lie in 1..n");
  DeltaBound b;
  if (k0 == n) return b;
  const double spacing =
      (std::ldexp(1.0, n - k0) - 1.0) / (std::ldexp(1.0, n) - 1.0);
  const double M = max_abs(evaluate(p, qsvt::unit_grid(n)));
  require(M > 0.0, ErrorCode::Degenerate, "polynomial vanishes on the grid");
  const int d = p.degree();
  b.derivative = p.derivative().sup_abs(0.0, 1.0) * spacing / M;
  b.coefficient = 0.5 * static_cast<double>(d * d - d) * spacing * p.max_coeff() / M;
  return b;
}

LoadResult run(const LoadRequest& req) {
  check_request(req);
  LoadResult out;
  PolynomialSpec target_poly = req.polynomial;
  switch (req.method) {
    case Method::DhwtQsvt: out = run_dhwt_qsvt(req); break;
    case Method::MpsDirect: out = run_mps_direct(req); break;
    case Method::MpsLinQsvt: out = run_mps_lin_qsvt(req); break;
    case Method::DhwtExactLinear:
      out = run_linear(req);
      target_poly = PolynomialSpec({0.0, 1.0});
      break;
  }
  out.method = req.method;
  out.n = req.n;
  const bool by_chi = req.method == Method::MpsDirect || req.method == Method::MpsLinQsvt;
  out.k0_or_chi = by_chi ? req.chi : req.k0;
  out.target = exact_target(target_poly, req.n);
  const Comparison c = compare(out.state, out.target);
  out.fidelity = c.fidelity;
  out.l2 = c.l2;
  out.delta_inf = c.delta_inf;
  const bool padded = req.method == Method::DhwtQsvt && req.padding == Padding::CoarseGrid;
  fill_delta(out, target_poly, req.k0, padded || req.method == Method::DhwtExactLinear);
  return out;
}

std::vector<LoadResult> sweep(const LoadRequest& tmpl, SweepAxis axis, int first, int last) {
  require(first >= 1 && first <= last, ErrorCode::InvalidArgument, "empty or invalid sweep range");
  std::vector<LoadResult> out;
  for (int v = first; v <= last; ++v) {
    LoadRequest r = tmpl;
    (axis == SweepAxis::K0 ? r.k0 : r.chi) = v;
    out.push_back(run(r));
  }
  return out;
}

namespace {

LinearNoiseRow noise_row(const sim::Circuit& c, int n, const sim::NoiseModel& nm, std::size_t shots,
                         std::uint64_t seed) {
  LinearNoiseRow row;
  const sim::Statevector target = linload::exact_state(n);
  const sim::Statevector ideal = sim::apply_circuit(c, sim::Statevector(n));
  const Comparison ci = compare(ideal, target);
  row.ideal_fidelity = ci.fidelity;
  row.ideal_l2 = ci.l2;
  const sim::Circuit native = sim::transpile_native(c);
  row.cx_count = native.cx_count();
  const sim::DensityMatrix rho = sim::apply_noisy(native, nm);
  std::vector<double> dist;
  if (shots == 0) {
    dist = sim::readout_distribution(rho, nm.p_meas);
  } else {
    dist.assign(dim_of(n), 0.0);
    for (const auto& [bits, count] : sim::measure_counts(rho, nm, shots, seed))
      dist[std::stoull(bits, nullptr, 2)] = static_cast<double>(count) / static_cast<double>(shots);
  }
  std::vector<double> amps(dist.size());
  // Probabilities under 1e-15 are simulation roundoff; sqrt would blow them up.
  for (std::size_t j = 0; j < dist.size(); ++j) amps[j] = dist[j] < 1e-15 ? 0.0 : std::sqrt(dist[j]);
  const Comparison cn = compare(sim::Statevector::from_real(amps), target);
  row.noisy_fidelity = cn.fidelity;
  row.noisy_l2 = cn.l2;
  return row;
}

}  // namespace

LinearNoiseRow linear_noise_row(int n, int k0, const sim::NoiseModel& nm, std::size_t shots, std::uint64_t seed) {
  LinearNoiseRow row = noise_row(linload::build_circuit(linload::plan(n, k0)), n, nm, shots, seed);
  row.k0 = k0;
  return row;
}

LinearNoiseRow mps_noise_row(int n, int chi, const sim::NoiseModel& nm, std::size_t shots, std::uint64_t seed) {
  const mps::Decomposition dec = mps::from_dense(linload::exact_state(n).real_parts(), chi);
  LinearNoiseRow row = noise_row(mps::to_circuit(mps::normalized(dec.mps)), n, nm, shots, seed);
  row.k0 = chi;
  return row;
}

const char* const kCsvHeader =
    "method,n,k0_or_chi,fidelity,l2,filling_ratio,success_prob,aa_rounds,delta_inf,delta_inf_bound,gate_count,ancillas";

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& out, const LoadResult& r) {
  out << method_name(r.method) << ',' << r.n << ',' << r.k0_or_chi << ',' << format_number(r.fidelity) << ','
      << format_number(r.l2) << ',' << format_number(r.filling_ratio) << ',' << format_number(r.success_prob) << ','
      << r.resources.aa_rounds << ',' << format_number(r.delta_inf) << ',' << format_number(r.delta_inf_bound) << ','
      << r.resources.gate_count << ',' << r.resources.ancillas << '\n';
}

}  // namespace ampload::pipeline
