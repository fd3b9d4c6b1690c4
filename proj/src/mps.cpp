#include "ampload/mps.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "ampload/error.hpp"
#include "ampload/linload.hpp"

namespace ampload::mps {

namespace {

// SVD of one unfolding; fills the core and returns S V^dag for the next site.
Matrix split(const Matrix& m, int chi_in, std::optional<int> chi_max, int bond, Core& core,
             std::vector<double>& dropped) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i)
    require(std::isfinite(s(i)), ErrorCode::Numeric, "SVD did not converge at bond " + std::to_string(bond));
  int rank = 0;
  const double cut = s.size() > 0 ? 1e-12 * s(0) : 0.0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  int keep = std::max(rank, 1);
  if (chi_max) keep = std::min(keep, *chi_max);
  for (Eigen::Index i = keep; i < s.size(); ++i) dropped.push_back(s(i));

  Matrix u = svd.matrixU().leftCols(keep);
  Matrix rest = s.head(keep).asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
  // Gauge: largest-magnitude entry of every left vector made nonnegative.
  for (int c = 0; c < keep; ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < u.rows(); ++r)
      if (std::abs(u(r, c)) > best + 1e-14) {
        best = std::abs(u(r, c));
        arg = r;
      }
    if (best <= 0.0) continue;
    const cplx ph = u(arg, c) / best;
    u.col(c) *= std::conj(ph);
    rest.row(c) *= ph;
  }
  core = Core(chi_in, keep);
  for (int a = 0; a < chi_in; ++a)
    for (int j = 0; j < 2; ++j)
      for (int b = 0; b < keep; ++b) core(a, j, b) = u(a * 2 + j, b);
  return rest;
}

// Columns of `m` (orthonormal where set) completed by modified Gram-Schmidt
// over the canonical basis. `filled` marks columns that are already set.
Matrix complete_unitary(Matrix m, std::vector<bool> filled) {
  const Eigen::Index dim = m.rows();
  Eigen::Index next_basis = 0;
  for (Eigen::Index c = 0; c < dim; ++c) {
    if (filled[static_cast<std::size_t>(c)]) continue;
    while (true) {
      require(next_basis < dim, ErrorCode::Numeric, "isometry completion ran out of basis vectors");
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
      v(next_basis++) = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index k = 0; k < dim; ++k)
          if (filled[static_cast<std::size_t>(k)]) v -= m.col(k).dot(v) * m.col(k);
      const double nv = v.norm();
      if (nv > 1e-6) {
        m.col(c) = v / nv;
        filled[static_cast<std::size_t>(c)] = true;
        break;
      }
    }
  }
  return m;
}

int next_pow2_bits(int chi) {
  int w = 0;
  while ((1 << w) < chi) ++w;
  return w;
}

}  // namespace

Core::Core(int ci, int co) : chi_in(ci), chi_out(co), data(static_cast<std::size_t>(ci * 2 * co), cplx{}) {}

Matrix Core::as_matrix() const {
  Matrix m(2 * chi_in, chi_out);
  for (int a = 0; a < chi_in; ++a)
    for (int j = 0; j < 2; ++j)
      for (int b = 0; b < chi_out; ++b) m(a * 2 + j, b) = (*this)(a, j, b);
  return m;
}

std::vector<int> MPS::bond_dimensions() const {
  std::vector<int> out;
  for (std::size_t i = 0; i + 1 < cores.size(); ++i) out.push_back(cores[i].chi_out);
  return out;
}

int MPS::max_bond() const {
  int m = 1;
  for (int c : bond_dimensions()) m = std::max(m, c);
  return m;
}

double MPS::canonical_error() const {
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < cores.size(); ++i) {
    const Matrix a = cores[i].as_matrix();
    err = std::max(err, (a.adjoint() * a - Matrix::Identity(a.cols(), a.cols())).cwiseAbs().maxCoeff());
  }
  return err;
}

Decomposition from_dense(std::span<const cplx> amps, std::optional<int> chi_max) {
  require(is_power_of_two(amps.size()) && amps.size() >= 2, ErrorCode::InvalidArgument,
          "MPS input length " + std::to_string(amps.size()) + " is not a power of two >= 2");
  const int n = log2_exact(amps.size());
  require(chi_max.has_value() || n <= 20, ErrorCode::Resource, "uncapped MPS limited to n <= 20");
  if (chi_max) require(*chi_max >= 1, ErrorCode::InvalidArgument, "bond cap must be at least 1");

  Decomposition d;
  d.mps.n = n;
  d.mps.cores.resize(static_cast<std::size_t>(n));
  d.report.discarded.resize(static_cast<std::size_t>(n - 1));
  Matrix rest(1, static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) rest(0, static_cast<Eigen::Index>(i)) = amps[i];

  int chi_in = 1;
  for (int site = 0; site + 1 < n; ++site) {
    const Eigen::Index half = rest.cols() / 2;
    Matrix m(2 * chi_in, half);
    for (int a = 0; a < chi_in; ++a)
      for (int j = 0; j < 2; ++j) m.row(a * 2 + j) = rest.block(a, j * half, 1, half);
    rest = split(m, chi_in, chi_max, site + 1, d.mps.cores[static_cast<std::size_t>(site)],
                 d.report.discarded[static_cast<std::size_t>(site)]);
    chi_in = static_cast<int>(rest.rows());
  }
  Core& last = d.mps.cores.back();
  last = Core(chi_in, 1);
  for (int a = 0; a < chi_in; ++a)
    for (int j = 0; j < 2; ++j) last(a, j, 0) = rest(a, j);
  for (const auto& bond : d.report.discarded)
    for (double s : bond) d.report.frobenius_bound += s * s;
  d.mps.left_canonical = true;
  return d;
}

Decomposition from_dense(std::span<const double> amps, std::optional<int> chi_max) {
  std::vector<cplx> c(amps.begin(), amps.end());
  return from_dense(std::span<const cplx>(c), chi_max);
}

Decomposition canonicalize(const MPS& m, std::optional<int> chi_max) {
  require(m.n >= 2 && static_cast<int>(m.cores.size()) == m.n, ErrorCode::Structural, "malformed MPS");
  Decomposition d;
  d.mps.n = m.n;
  d.mps.cores.resize(m.cores.size());
  d.report.discarded.resize(m.cores.size() - 1);
  Matrix carry = Matrix::Identity(1, 1);
  for (int site = 0; site + 1 < m.n; ++site) {
    const Core& c = m.cores[static_cast<std::size_t>(site)];
    require(carry.cols() == c.chi_in, ErrorCode::Structural, "bond mismatch at site " + std::to_string(site));
    const int chi_in = static_cast<int>(carry.rows());
    Matrix mm(2 * chi_in, c.chi_out);
    for (int a = 0; a < chi_in; ++a)
      for (int j = 0; j < 2; ++j)
        for (int b = 0; b < c.chi_out; ++b) {
          cplx acc{};
          for (int k = 0; k < c.chi_in; ++k) acc += carry(a, k) * c(k, j, b);
          mm(a * 2 + j, b) = acc;
        }
    carry = split(mm, chi_in, chi_max, site + 1, d.mps.cores[static_cast<std::size_t>(site)],
                  d.report.discarded[static_cast<std::size_t>(site)]);
  }
  const Core& c = m.cores.back();
  require(carry.cols() == c.chi_in && c.chi_out == 1, ErrorCode::Structural, "bond mismatch at the last site");
  Core& last = d.mps.cores.back();
  last = Core(static_cast<int>(carry.rows()), 1);
  for (int a = 0; a < last.chi_in; ++a)
    for (int j = 0; j < 2; ++j) {
      cplx acc{};
      for (int k = 0; k < c.chi_in; ++k) acc += carry(a, k) * c(k, j, 0);
      last(a, j, 0) = acc;
    }
  for (const auto& bond : d.report.discarded)
    for (double s : bond) d.report.frobenius_bound += s * s;
  d.mps.left_canonical = true;
  return d;
}

std::vector<cplx> to_dense(const MPS& m) {
  require(m.n >= 1 && m.n <= 20 && static_cast<int>(m.cores.size()) == m.n, ErrorCode::InvalidArgument,
          "to_dense needs 1 <= n <= 20");
  Matrix cur = Matrix::Identity(1, 1);
  for (const Core& c : m.cores) {
    require(cur.cols() == c.chi_in, ErrorCode::Structural, "bond mismatch in contraction");
    Matrix next(cur.rows() * 2, c.chi_out);
    for (Eigen::Index p = 0; p < cur.rows(); ++p)
      for (int j = 0; j < 2; ++j)
        for (int b = 0; b < c.chi_out; ++b) {
          cplx acc{};
          for (int a = 0; a < c.chi_in; ++a) acc += cur(p, a) * c(a, j, b);
          next(p * 2 + j, b) = acc;
        }
    cur = std::move(next);
  }
  require(cur.cols() == 1, ErrorCode::Structural, "last bond must be 1");
  return {cur.data(), cur.data() + cur.rows()};
}

MPS analytic_linear_mps(int n) {
  require(n >= 2 && n <= 60, ErrorCode::InvalidArgument, "analytic linear MPS needs n >= 2");
  const double c = linload::exact_norm(n);
  MPS m;
  m.n = n;
  for (int site = 0; site < n; ++site) {
    const int q = n - 1 - site;
    const double w = std::ldexp(1.0, q) / c;
    if (site == 0) {
      Core k(1, 2);
      for (int j = 0; j < 2; ++j) {
        k(0, j, 0) = 1.0;
        k(0, j, 1) = w * j;
      }
      m.cores.push_back(k);
    } else if (site == n - 1) {
      Core k(2, 1);
      for (int j = 0; j < 2; ++j) {
        k(0, j, 0) = w * j;
        k(1, j, 0) = 1.0;
      }
      m.cores.push_back(k);
    } else {
      Core k(2, 2);
      for (int j = 0; j < 2; ++j) {
        k(0, j, 0) = 1.0;
        k(0, j, 1) = w * j;
        k(1, j, 1) = 1.0;
      }
      m.cores.push_back(k);
    }
  }
  return m;
}

MPS normalized(const MPS& m) {
  MPS out = m;
  double nrm = 0.0;
  if (m.left_canonical) {
    for (cplx v : m.cores.back().data) nrm += std::norm(v);
  } else {
    for (cplx v : to_dense(m)) nrm += std::norm(v);
  }
  nrm = std::sqrt(nrm);
  require(nrm > 0.0, ErrorCode::Degenerate, "MPS has zero norm");
  for (cplx& v : out.cores.back().data) v /= nrm;
  return out;
}

sim::Circuit to_circuit(const MPS& input) {
  require(input.left_canonical && input.canonical_error() < 1e-9, ErrorCode::Precondition,
          "to_circuit needs a left-canonical MPS");
  const MPS m = normalized(input);
  const int n = m.n;
  sim::Circuit c(n);

  struct SiteGate {
    int low = 0;
    int width = 0;
    Matrix u;
  };
  std::vector<SiteGate> gates(static_cast<std::size_t>(n));
  for (int site = 0; site < n; ++site) {
    const Core& core = m.cores[static_cast<std::size_t>(site)];
    const int w_in = next_pow2_bits(core.chi_in);
    const int w_out = next_pow2_bits(core.chi_out);
    const int width = std::max(w_out, 1 + w_in);
    const int low = n - 1 - site;
    require(low + width <= n, ErrorCode::Structural, "bond register does not fit above site " + std::to_string(site));
    const Eigen::Index dim = Eigen::Index{1} << width;
    Matrix u = Matrix::Zero(dim, dim);
    std::vector<bool> filled(static_cast<std::size_t>(dim), false);
    for (int b = 0; b < core.chi_out; ++b) {
      for (int a = 0; a < core.chi_in; ++a)
        for (int j = 0; j < 2; ++j) u(j + 2 * a, b) = core(a, j, b);
      filled[static_cast<std::size_t>(b)] = true;
    }
    gates[static_cast<std::size_t>(site)] = {low, width, complete_unitary(std::move(u), std::move(filled))};
  }
  // Fold the single-qubit top gate into its neighbour when it lies inside
  // that window.
  bool merged = false;
  if (n >= 2 && gates[1].width >= 2) {
    SiteGate& g1 = gates[1];
    const int offset = (n - 1) - g1.low;
    const Eigen::Index dim = g1.u.rows();
    Matrix top = Matrix::Identity(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
      for (Eigen::Index col = 0; col < dim; ++col) {
        const Eigen::Index mask = Eigen::Index{1} << offset;
        if ((r & ~mask) != (col & ~mask)) {
          top(r, col) = 0.0;
          continue;
        }
        top(r, col) = gates[0].u((r >> offset) & 1, (col >> offset) & 1);
      }
    g1.u = top * g1.u;
    merged = true;
  }
  for (int site = n - 1; site >= (merged ? 1 : 0); --site) {
    const SiteGate& g = gates[static_cast<std::size_t>(site)];
    std::vector<int> targets;
    for (int q = 0; q < g.width; ++q) targets.push_back(g.low + q);
    c.unitary(std::move(targets), g.u);
  }
  return c;
}

std::vector<double> product_amplitudes(std::span<const double> angles) {
  const int n = static_cast<int>(angles.size());
  std::vector<double> out(dim_of(n), 1.0);
  for (int q = 0; q < n; ++q) {
    const double c = std::cos(angles[static_cast<std::size_t>(q)] / 2), s = std::sin(angles[static_cast<std::size_t>(q)] / 2);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] *= (j >> q & 1U) ? s : c;
  }
  return out;
}

double product_loss(std::span<const double> angles, std::span<const double> target, std::vector<double>* grad) {
  const int n = static_cast<int>(angles.size());
  require(target.size() == dim_of(n), ErrorCode::InvalidArgument, "target length does not match angle count");
  const std::vector<double> p = product_amplitudes(angles);
  double loss = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) loss += (p[j] - target[j]) * (p[j] - target[j]);
  if (grad) {
    grad->assign(static_cast<std::size_t>(n), 0.0);
    std::vector<double> cs(static_cast<std::size_t>(n)), sn(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
      cs[static_cast<std::size_t>(q)] = std::cos(angles[static_cast<std::size_t>(q)] / 2);
      sn[static_cast<std::size_t>(q)] = std::sin(angles[static_cast<std::size_t>(q)] / 2);
    }
    for (int q = 0; q < n; ++q) {
      double g = 0.0;
      for (std::size_t j = 0; j < p.size(); ++j) {
        double others = 1.0;
        for (int r = 0; r < n; ++r)
          if (r != q) others *= (j >> r & 1U) ? sn[static_cast<std::size_t>(r)] : cs[static_cast<std::size_t>(r)];
        const double dfac = (j >> q & 1U) ? 0.5 * cs[static_cast<std::size_t>(q)] : -0.5 * sn[static_cast<std::size_t>(q)];
        g += 2.0 * (p[j] - target[j]) * others * dfac;
      }
      (*grad)[static_cast<std::size_t>(q)] = g;
    }
  }
  return loss;
}

std::vector<double> chi1_angles(const MPS& m) {
  require(m.max_bond() == 1, ErrorCode::InvalidArgument, "chi1_angles needs bond dimension 1");
  const MPS nm = normalized(m);
  std::vector<double> angles(static_cast<std::size_t>(m.n));
  for (int site = 0; site < m.n; ++site) {
    const Core& c = nm.cores[static_cast<std::size_t>(site)];
    const double a0 = c(0, 0, 0).real(), a1 = c(0, 1, 0).real();
    angles[static_cast<std::size_t>(m.n - 1 - site)] = 2.0 * std::atan2(a1, a0);
  }
  return angles;
}

std::vector<double> fit_formula_angles(int n) {
  std::vector<double> angles(static_cast<std::size_t>(n));
  for (int q = 1; q <= n; ++q)
    angles[static_cast<std::size_t>(n - q)] = 2.0 * std::exp(std::exp(-std::pow(q, 0.9) / 1.23) - 0.24);
  return angles;
}

FitResult variational_product_fit(const sim::Statevector& target, FitInit init, const FitOptions& opt) {
  const std::vector<double> t = sim::Statevector::from_complex(target.amps()).real_parts();
  const int n = target.num_qubits();
  auto fid = [&t](std::span<const double> angles) {
    const std::vector<double> p = product_amplitudes(angles);
    double ov = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) ov += p[j] * t[j];
    return ov * ov;
  };

  FitResult r;
  r.angles = init == FitInit::FromChi1Mps ? chi1_angles(from_dense(std::span<const double>(t), 1).mps)
                                          : fit_formula_angles(n);
  r.initial_fidelity = r.fidelity = fid(r.angles);

  std::vector<double> theta = r.angles, grad;
  double prev = product_loss(theta, t, &grad);
  for (int it = 0; it < opt.max_iters; ++it) {
    for (std::size_t q = 0; q < theta.size(); ++q) theta[q] -= opt.learning_rate * grad[q];
    const double loss = product_loss(theta, t, &grad);
    r.iterations = it + 1;
    const double f = fid(theta);
    if (f > r.fidelity) {
      r.fidelity = f;
      r.angles = theta;
    }
    if (std::abs(prev - loss) < opt.tol) break;
    prev = loss;
  }
  return r;
}

void write(std::ostream& out, const MPS& m) {
  out << "ampload-mps 1\n";
  out << "n " << m.n << "\n";
  out << "canonical " << (m.left_canonical ? "left" : "none") << "\n";
  out << "bonds";
  for (int b : m.bond_dimensions()) out << ' ' << b;
  out << "\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < m.cores.size(); ++i) {
    const Core& c = m.cores[i];
    out << "core " << i << ' ' << c.chi_in << ' ' << c.chi_out << "\n";
    for (cplx v : c.data) out << v.real() << ',' << v.imag() << "\n";
  }
}

MPS read(std::istream& in) {
  auto expect = [&in](const std::string& word) {
    std::string tok;
    require(static_cast<bool>(in >> tok) && tok == word, ErrorCode::Io, "MPS file: expected '" + word + "'");
  };
  expect("ampload-mps");
  int version = 0;
  require(static_cast<bool>(in >> version) && version == 1, ErrorCode::Io, "MPS file: unsupported version");
  MPS m;
  expect("n");
  require(static_cast<bool>(in >> m.n) && m.n >= 1 && m.n <= 60, ErrorCode::Io, "MPS file: bad n");
  expect("canonical");
  std::string canon;
  in >> canon;
  m.left_canonical = canon == "left";
  expect("bonds");
  std::vector<int> bonds(static_cast<std::size_t>(m.n - 1));
  for (int& b : bonds) require(static_cast<bool>(in >> b) && b >= 1, ErrorCode::Io, "MPS file: bad bond");
  for (int i = 0; i < m.n; ++i) {
    expect("core");
    int idx = 0, ci = 0, co = 0;
    require(static_cast<bool>(in >> idx >> ci >> co) && idx == i && ci >= 1 && co >= 1, ErrorCode::Io,
            "MPS file: bad core header " + std::to_string(i));
    require(ci == (i == 0 ? 1 : bonds[static_cast<std::size_t>(i - 1)]) &&
                co == (i == m.n - 1 ? 1 : bonds[static_cast<std::size_t>(i)]),
            ErrorCode::Io, "MPS file: core " + std::to_string(i) + " disagrees with the bond list");
    Core c(ci, co);
    for (cplx& v : c.data) {
      std::string line;
      require(static_cast<bool>(in >> line), ErrorCode::Io, "MPS file: truncated core data");
      const auto comma = line.find(',');
      require(comma != std::string::npos, ErrorCode::Io, "MPS file: entry '" + line + "' is not re,im");
      try {
        v = {std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))};
      } catch (const std::exception&) {
        fail(ErrorCode::Io, "MPS file: entry '" + line + "' is not numeric");
      }
    }
    m.cores.push_back(std::move(c));
  }
  return m;
}

}  // namespace ampload::mps
