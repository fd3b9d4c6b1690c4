#include "ampload/noise.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "ampload/error.hpp"
#include "ampload/transpile.hpp"

namespace ampload::sim {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& key, std::string value) {
  std::replace(value.begin(), value.end(), ',', '.');
  double v = 0.0;
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  require(ec == std::errc{} && ptr == last && std::isfinite(v), ErrorCode::Config,
          "noise key '" + key + "' has a malformed value '" + value + "'");
  return v;
}

Matrix pauli(int which) {
  Matrix m(2, 2);
  const cplx i1{0.0, 1.0};
  switch (which) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i1, i1, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Kronecker product with `a` on the more significant qubits.
Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void check_probability(const char* name, double p) {
  require(p >= 0.0 && p <= 1.0, ErrorCode::Config,
          std::string("noise parameter ") + name + " = " + std::to_string(p) + " is not a probability");
}

}  // namespace

NoiseModel NoiseModel::calibrated() {
  NoiseModel nm;
  nm.sqg_time_ns = 35.0;
  nm.cx_time_ns = 540.0;
  nm.r_d = 2.457e-4;
  nm.p_bf = 2.457e-4;
  nm.cnot_error = 8.328e-3;
  nm.p_meas = 2.23e-1;
  nm.p_th = 0.01;
  nm.t1_us = 214.84;
  nm.t2_us = 214.84;
  return nm;
}

NoiseModel NoiseModel::parse(std::string_view text) {
  NoiseModel nm;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.resize(cut);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::Config,
            "noise file line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    const double v = parse_number(key, value);
    if (key == "sqg_time") nm.sqg_time_ns = v;
    else if (key == "cx_time") nm.cx_time_ns = v;
    else if (key == "rd") nm.r_d = v;
    else if (key == "pbf") nm.p_bf = v;
    else if (key == "cnoterror") nm.cnot_error = v;
    else if (key == "pmeas") nm.p_meas = v;
    else if (key == "pth") nm.p_th = v;
    else if (key == "t1") nm.t1_us = v;
    else if (key == "t2") nm.t2_us = v;
    else fail(ErrorCode::Config, "unknown noise key '" + key + "'");
  }
  nm.validate();
  return nm;
}

NoiseModel NoiseModel::load(const std::string& path) {
  std::ifstream f(path);
  require(static_cast<bool>(f), ErrorCode::Io, "cannot open noise file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

bool NoiseModel::is_ideal() const {
  return r_d == 0.0 && p_bf == 0.0 && cnot_error == 0.0 && p_meas == 0.0 && !relaxation_enabled();
}

void NoiseModel::validate() const {
  check_probability("rd", r_d);
  check_probability("pbf", p_bf);
  check_probability("cnoterror", cnot_error);
  check_probability("pmeas", p_meas);
  check_probability("pth", p_th);
  require(sqg_time_ns >= 0.0 && cx_time_ns >= 0.0, ErrorCode::Config, "gate times must be non-negative");
  require(t1_us >= 0.0 && t2_us >= 0.0, ErrorCode::Config, "t1 and t2 must be non-negative");
  if (relaxation_enabled())
    require(t2_us <= 2.0 * t1_us + 1e-12, ErrorCode::Config,
            "t2 = " + std::to_string(t2_us) + " exceeds 2*t1 = " + std::to_string(2.0 * t1_us));
}

std::string NoiseModel::to_ini() const {
  std::ostringstream o;
  o << std::setprecision(17);
  o << "sqg_time = " << sqg_time_ns << "\ncx_time = " << cx_time_ns << "\nrd = " << r_d << "\npbf = " << p_bf
    << "\ncnoterror = " << cnot_error << "\npmeas = " << p_meas << "\npth = " << p_th << "\nt1 = " << t1_us
    << "\nt2 = " << t2_us << "\n";
  return o.str();
}

KrausChannel depolarizing_channel(int arity, double p) {
  check_probability("depolarizing p", p);
  const std::size_t count = std::size_t{1} << (2 * arity);
  const double w = p / static_cast<double>(count);
  std::vector<Matrix> ops;
  ops.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    Matrix k = Matrix::Identity(1, 1);
    for (int q = arity - 1; q >= 0; --q) k = kron(k, pauli(static_cast<int>(idx >> (2 * q) & 3U)));
    const double weight = idx == 0 ? 1.0 - p + w : w;
    ops.push_back(std::sqrt(weight) * k);
  }
  return KrausChannel(arity, std::move(ops));
}

KrausChannel bit_flip_channel(double p) {
  check_probability("bit flip p", p);
  return KrausChannel(1, {std::sqrt(1.0 - p) * pauli(0), std::sqrt(p) * pauli(1)});
}

KrausChannel thermal_relaxation_channel(double t1_us, double t2_us, double p_excited, double duration_ns) {
  check_probability("pth", p_excited);
  require(t1_us > 0.0 && t2_us > 0.0 && t2_us <= 2.0 * t1_us + 1e-12, ErrorCode::Config,
          "thermal relaxation needs 0 < t2 <= 2 t1");
  require(duration_ns >= 0.0, ErrorCode::Config, "negative gate duration");
  const double t = duration_ns * 1e-3;
  const double gamma = 1.0 - std::exp(-t / t1_us);
  const double decay = std::exp(-t / t2_us + t / (2.0 * t1_us));
  const double pz = std::clamp(0.5 * (1.0 - decay), 0.0, 0.5);
  const double g0 = std::sqrt(1.0 - p_excited), g1 = std::sqrt(p_excited);
  const double sg = std::sqrt(gamma), cg = std::sqrt(1.0 - gamma);
  std::vector<Matrix> gad(4, Matrix::Zero(2, 2));
  gad[0] << g0, 0, 0, g0 * cg;
  gad[1] << 0, g0 * sg, 0, 0;
  gad[2] << g1 * cg, 0, 0, g1;
  gad[3] << 0, 0, g1 * sg, 0;
  std::vector<Matrix> ops;
  for (const Matrix& k : gad) {
    ops.push_back(std::sqrt(1.0 - pz) * k);
    if (pz > 0.0) ops.push_back(std::sqrt(pz) * (pauli(3) * k));
  }
  return KrausChannel(1, std::move(ops));
}

DensityMatrix apply_noisy(const Circuit& c, const NoiseModel& nm) {
  nm.validate();
  require(is_native(c), ErrorCode::Precondition, "apply_noisy needs a native circuit; call transpile_native first");
  c.validate();
  DensityMatrix rho(c.num_qubits());

  const KrausChannel dep1 = depolarizing_channel(1, nm.r_d);
  const KrausChannel dep2 = depolarizing_channel(2, nm.cnot_error);
  const KrausChannel flip = bit_flip_channel(nm.p_bf);
  const bool relax = nm.relaxation_enabled();
  const KrausChannel th1 = relax ? thermal_relaxation_channel(nm.t1_us, nm.t2_us, nm.p_th, nm.sqg_time_ns)
                                 : bit_flip_channel(0.0);
  const KrausChannel th2 = relax ? thermal_relaxation_channel(nm.t1_us, nm.t2_us, nm.p_th, nm.cx_time_ns)
                                 : bit_flip_channel(0.0);

  for (const Gate& g : c.gates()) {
    apply_unitary(rho, g);
    std::vector<int> touched = g.targets;
    for (const Control& ctl : g.controls) touched.push_back(ctl.qubit);
    if (touched.size() == 2) {
      if (nm.cnot_error > 0.0) apply_channel(rho, dep2, touched);
      if (relax)
        for (int q : touched) apply_channel(rho, th2, std::span<const int>(&q, 1));
    } else {
      if (nm.r_d > 0.0) apply_channel(rho, dep1, touched);
      if (g.kind == GateKind::Rz && nm.p_bf > 0.0) apply_channel(rho, flip, touched);
      if (relax) apply_channel(rho, th1, touched);
    }
  }
  return rho;
}

std::vector<double> readout_distribution(const DensityMatrix& rho, double p_meas) {
  check_probability("pmeas", p_meas);
  std::vector<double> p = rho.diagonal();
  for (double& v : p) v = std::max(v, 0.0);
  for (int q = 0; q < rho.num_qubits(); ++q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i & bit) continue;
      const double a = p[i], b = p[i | bit];
      p[i] = (1.0 - p_meas) * a + p_meas * b;
      p[i | bit] = (1.0 - p_meas) * b + p_meas * a;
    }
  }
  return p;
}

std::map<std::string, std::size_t> measure_counts(const DensityMatrix& rho, const NoiseModel& nm,
                                                  std::size_t shots, std::uint64_t seed) {
  require(shots >= 1, ErrorCode::InvalidArgument, "shots must be at least 1");
  check_probability("pmeas", nm.p_meas);
  std::vector<double> cdf = rho.diagonal();
  double total = 0.0;
  for (double& v : cdf) {
    total += std::max(v, 0.0);
    v = total;
  }
  require(total > 0.0, ErrorCode::Degenerate, "density matrix has no weight on the diagonal");

  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const int n = rho.num_qubits();
  std::map<std::string, std::size_t> counts;
  for (std::size_t s = 0; s < shots; ++s) {
    const double u = uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t outcome = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
    for (int q = 0; q < n; ++q)
      if (uniform() < nm.p_meas) outcome ^= std::size_t{1} << q;
    std::string key(static_cast<std::size_t>(n), '0');
    for (int q = 0; q < n; ++q)
      if (outcome >> q & 1U) key[static_cast<std::size_t>(n - 1 - q)] = '1';
    ++counts[key];
  }
  return counts;
}

}  // namespace ampload::sim
