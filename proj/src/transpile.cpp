#include "ampload/transpile.hpp"

#include <cmath>
#include <string>

#include "ampload/error.hpp"

namespace ampload::sim {

namespace {

std::size_t gray(std::size_t i) { return i ^ (i >> 1); }

int popcount(std::size_t v) {
  int c = 0;
  for (; v; v &= v - 1) ++c;
  return c;
}

// Rz(a) Ry(b) Rz(c) over the native set, applied in time order
// Rz(c), SX, Rz(b + pi), SX, Rz(a + pi). Equal up to a global phase.
void emit_zyz(Circuit& out, int q, double a, double b, double c) {
  if (std::abs(b) < 1e-15) {
    if (std::abs(a + c) > 1e-15) out.rz(q, a + c);
    return;
  }
  if (c != 0.0) out.rz(q, c);
  out.sx(q);
  out.rz(q, b + kPi);
  out.sx(q);
  out.rz(q, a + kPi);
}

// Rotation kind: true for Ry, false for Rz.
void emit_rotation(Circuit& out, bool is_y, int q, double angle) {
  if (angle == 0.0) return;
  if (is_y) out.ry(q, angle);
  else out.rz(q, angle);
}

void multiplexed(Circuit& out, bool is_y, std::span<const int> controls, int target,
                 std::span<const double> angles) {
  const std::size_t k = controls.size();
  const std::size_t count = std::size_t{1} << k;
  require(angles.size() == count, ErrorCode::Structural, "multiplexor needs 2^k angles");
  if (k == 0) {
    emit_rotation(out, is_y, target, angles[0]);
    return;
  }
  bool all_zero = true;
  for (double a : angles) all_zero = all_zero && a == 0.0;
  if (all_zero) return;
  // theta_x = sum_i (-1)^{x . g_i} alpha_i, so alpha = M^T theta / 2^k.
  for (std::size_t i = 0; i < count; ++i) {
    double alpha = 0.0;
    for (std::size_t x = 0; x < count; ++x)
      alpha += (popcount(x & gray(i)) & 1 ? -1.0 : 1.0) * angles[x];
    alpha /= static_cast<double>(count);
    emit_rotation(out, is_y, target, alpha);
    const std::size_t changed = gray(i) ^ gray((i + 1) % count);
    out.cx(controls[static_cast<std::size_t>(log2_exact(changed))], target);
  }
}

// Diagonal diag(e^{i phi_x}) on `qubits` (qubits[0] least significant), up to a global phase.
void emit_diagonal(Circuit& out, std::vector<int> qubits, std::vector<double> phi) {
  while (!qubits.empty()) {
    const std::size_t half = phi.size() / 2;
    std::vector<double> lambda(half), rest(half);
    for (std::size_t x = 0; x < half; ++x) {
      lambda[x] = phi[x + half] - phi[x];
      rest[x] = 0.5 * (phi[x] + phi[x + half]);
    }
    const int target = qubits.back();
    qubits.pop_back();
    multiplexed(out, false, qubits, target, lambda);
    phi = std::move(rest);
  }
}

std::vector<double> pattern_angles(const std::vector<Control>& controls, double angle) {
  std::size_t match = 0;
  for (std::size_t b = 0; b < controls.size(); ++b)
    if (controls[b].on_one) match |= std::size_t{1} << b;
  std::vector<double> a(std::size_t{1} << controls.size(), 0.0);
  a[match] = angle;
  return a;
}

std::vector<int> control_qubits(const std::vector<Control>& controls) {
  std::vector<int> q;
  for (const Control& c : controls) q.push_back(c.qubit);
  return q;
}

void lower_non_native_ry_rz(const Circuit& in, Circuit& out) {
  for (const Gate& g : in.gates()) {
    if (g.kind == GateKind::Ry && g.controls.empty()) emit_zyz(out, g.targets[0], 0.0, g.angle, 0.0);
    else out.add(g);
  }
}

// Multiplexed single-qubit unitary: apply blocks[x] to `target` when `control` holds x.
void multiplexed_unitary(Circuit& out, int control, int target, const Matrix& u0, const Matrix& u1) {
  const ZyzAngles z0 = zyz_decompose(u0), z1 = zyz_decompose(u1);
  const int ctl[1] = {control};
  const double c[2] = {z0.c, z1.c}, b[2] = {z0.b, z1.b}, a[2] = {z0.a, z1.a};
  multiplexed(out, false, ctl, target, c);
  multiplexed(out, true, ctl, target, b);
  multiplexed(out, false, ctl, target, a);
  emit_diagonal(out, {control}, {z0.phase, z1.phase});
}

// Cosine-sine split of a 4x4 unitary over (t0 low, t1 high).
void two_qubit_block(Circuit& out, int t0, int t1, const Matrix& u) {
  const Matrix u00 = u.block(0, 0, 2, 2), u01 = u.block(0, 2, 2, 2);
  const Matrix u10 = u.block(2, 0, 2, 2), u11 = u.block(2, 2, 2, 2);
  Eigen::JacobiSVD<Matrix> svd(u00, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix l0 = svd.matrixU();
  const Matrix r0 = svd.matrixV().adjoint();
  Eigen::Vector2d cs = svd.singularValues().cwiseMin(1.0);
  Eigen::Vector2d sn;
  for (int i = 0; i < 2; ++i) sn(i) = std::sqrt(std::max(0.0, 1.0 - cs(i) * cs(i)));

  Matrix t = u10 * r0.adjoint();  // = l1 * S
  Matrix l1 = Matrix::Zero(2, 2);
  std::vector<bool> set(2, false);
  for (int i = 0; i < 2; ++i)
    if (sn(i) > 1e-7) {
      l1.col(i) = t.col(i) / t.col(i).norm();
      set[static_cast<std::size_t>(i)] = true;
    }
  for (int i = 0; i < 2; ++i) {
    if (set[static_cast<std::size_t>(i)]) continue;
    for (int e = 0; e < 2 && !set[static_cast<std::size_t>(i)]; ++e) {
      Eigen::Vector2cd v = Eigen::Vector2cd::Zero();
      v(e) = 1.0;
      for (int j = 0; j < 2; ++j)
        if (set[static_cast<std::size_t>(j)]) v -= l1.col(j).dot(v) * l1.col(j);
      if (v.norm() > 1e-6) {
        l1.col(i) = v / v.norm();
        set[static_cast<std::size_t>(i)] = true;
      }
    }
  }
  const Matrix p11 = l1.adjoint() * u11, p01 = l0.adjoint() * u01;
  Matrix r1(2, 2);
  for (int i = 0; i < 2; ++i)
    r1.row(i) = cs(i) >= sn(i) ? Matrix(p11.row(i) / cs(i)) : Matrix(-p01.row(i) / sn(i));

  multiplexed_unitary(out, t1, t0, r0, r1);
  const int ctl[1] = {t0};
  const double theta[2] = {2.0 * std::atan2(sn(0), cs(0)), 2.0 * std::atan2(sn(1), cs(1))};
  multiplexed(out, true, ctl, t1, theta);
  multiplexed_unitary(out, t1, t0, l0, l1);
}

void lower_gate(Circuit& out, const Gate& g) {
  if (is_native(g)) {
    out.add(g);
    return;
  }
  const std::vector<int> cq = control_qubits(g.controls);
  if (g.kind == GateKind::Phase) {
    if (!g.controls.empty()) emit_diagonal(out, cq, pattern_angles(g.controls, g.angle));
    return;
  }
  if (g.kind == GateKind::Unitary && g.targets.size() == 2) {
    require(g.controls.empty(), ErrorCode::Unsupported, "controlled two-qubit blocks are not supported");
    two_qubit_block(out, g.targets[0], g.targets[1], g.matrix);
    return;
  }
  if (g.targets.size() != 1)
    fail(ErrorCode::Unsupported,
         "cannot lower a " + std::to_string(g.targets.size()) + "-qubit " + std::string(gate_name(g.kind)) + " block");
  const int t = g.targets[0];

  if (g.kind == GateKind::X && g.controls.size() == 1) {
    out.x(g.controls[0].qubit).cx(g.controls[0].qubit, t).x(g.controls[0].qubit);
    return;
  }
  if (g.kind == GateKind::Ry) {
    multiplexed(out, true, cq, t, pattern_angles(g.controls, g.angle));
    return;
  }
  if (g.kind == GateKind::Rz) {
    multiplexed(out, false, cq, t, pattern_angles(g.controls, g.angle));
    return;
  }
  const ZyzAngles z = zyz_decompose(g.local_matrix());
  if (g.controls.empty()) {
    emit_zyz(out, t, z.a, z.b, z.c);
    return;
  }
  multiplexed(out, false, cq, t, pattern_angles(g.controls, z.c));
  multiplexed(out, true, cq, t, pattern_angles(g.controls, z.b));
  multiplexed(out, false, cq, t, pattern_angles(g.controls, z.a));
  emit_diagonal(out, cq, pattern_angles(g.controls, z.phase));
}

}  // namespace

bool is_native(const Gate& g) {
  switch (g.kind) {
    case GateKind::I:
    case GateKind::Rz:
    case GateKind::SX: return g.controls.empty() && g.targets.size() == 1;
    case GateKind::X:
      return g.targets.size() == 1 &&
             (g.controls.empty() || (g.controls.size() == 1 && g.controls[0].on_one));
    default: return false;
  }
}

bool is_native(const Circuit& c) {
  for (const Gate& g : c.gates())
    if (!is_native(g)) return false;
  return true;
}

ZyzAngles zyz_decompose(const Matrix& u) {
  require(u.rows() == 2 && u.cols() == 2, ErrorCode::Structural, "zyz_decompose needs a 2x2 matrix");
  const cplx det = u.determinant();
  ZyzAngles z;
  z.phase = 0.5 * std::arg(det);
  const Matrix v = u * std::exp(cplx{0.0, -z.phase});
  const double c0 = std::abs(v(0, 0)), s0 = std::abs(v(1, 0));
  z.b = 2.0 * std::atan2(s0, c0);
  // v = [[e^{-i(a+c)/2} cos, -e^{-i(a-c)/2} sin], [e^{i(a-c)/2} sin, e^{i(a+c)/2} cos]]
  const double sum = c0 > 1e-12 ? 2.0 * std::arg(v(1, 1)) : 0.0;
  const double diff = s0 > 1e-12 ? 2.0 * std::arg(v(1, 0)) : 0.0;
  z.a = 0.5 * (sum + diff);
  z.c = 0.5 * (sum - diff);
  return z;
}

void append_multiplexed_ry(Circuit& out, std::span<const int> controls, int target,
                           std::span<const double> angles) {
  multiplexed(out, true, controls, target, angles);
}

void append_multiplexed_rz(Circuit& out, std::span<const int> controls, int target,
                           std::span<const double> angles) {
  multiplexed(out, false, controls, target, angles);
}

Circuit transpile_native(const Circuit& c) {
  c.validate();
  Circuit staged(c.num_qubits());
  for (const Gate& g : c.gates()) lower_gate(staged, g);
  Circuit out(c.num_qubits());
  lower_non_native_ry_rz(staged, out);
  return out;
}

}  // namespace ampload::sim
