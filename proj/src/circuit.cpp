#include "ampload/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "ampload/error.hpp"

namespace ampload::sim {

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::I: return "id";
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::Z: return "z";
    case GateKind::SX: return "sx";
    case GateKind::Rz: return "rz";
    case GateKind::Ry: return "ry";
    case GateKind::Phase: return "phase";
    case GateKind::Unitary: return "unitary";
  }
  return "?";
}

Matrix Gate::local_matrix() const {
  const double s2 = 1.0 / std::sqrt(2.0);
  const cplx i1{0.0, 1.0};
  Matrix m(2, 2);
  switch (kind) {
    case GateKind::I: m << 1, 0, 0, 1; return m;
    case GateKind::H: m << s2, s2, s2, -s2; return m;
    case GateKind::X: m << 0, 1, 1, 0; return m;
    case GateKind::Z: m << 1, 0, 0, -1; return m;
    case GateKind::SX:
      m << 0.5 * (1.0 + i1), 0.5 * (1.0 - i1), 0.5 * (1.0 - i1), 0.5 * (1.0 + i1);
      return m;
    case GateKind::Rz:
      m << std::exp(-0.5 * i1 * angle), 0, 0, std::exp(0.5 * i1 * angle);
      return m;
    case GateKind::Ry: {
      const double c = std::cos(angle / 2), s = std::sin(angle / 2);
      m << c, -s, s, c;
      return m;
    }
    case GateKind::Phase: {
      Matrix p(1, 1);
      p(0, 0) = std::exp(i1 * angle);
      return p;
    }
    case GateKind::Unitary: return matrix;
  }
  return m;
}

Gate Gate::inverse() const {
  Gate g = *this;
  switch (kind) {
    case GateKind::I:
    case GateKind::H:
    case GateKind::X:
    case GateKind::Z: break;
    case GateKind::Rz:
    case GateKind::Ry:
    case GateKind::Phase: g.angle = -angle; break;
    case GateKind::SX:
      g.kind = GateKind::Unitary;
      g.matrix = local_matrix().adjoint();
      break;
    case GateKind::Unitary: g.matrix = matrix.adjoint(); break;
  }
  return g;
}

Circuit& Circuit::add(Gate g) {
  gates_.push_back(std::move(g));
  return *this;
}

Circuit& Circuit::i(int q) { return add({GateKind::I, {q}, {}, 0.0, {}}); }
Circuit& Circuit::h(int q) { return add({GateKind::H, {q}, {}, 0.0, {}}); }
Circuit& Circuit::x(int q) { return add({GateKind::X, {q}, {}, 0.0, {}}); }
Circuit& Circuit::z(int q) { return add({GateKind::Z, {q}, {}, 0.0, {}}); }
Circuit& Circuit::sx(int q) { return add({GateKind::SX, {q}, {}, 0.0, {}}); }
Circuit& Circuit::rz(int q, double theta) { return add({GateKind::Rz, {q}, {}, theta, {}}); }
Circuit& Circuit::ry(int q, double theta) { return add({GateKind::Ry, {q}, {}, theta, {}}); }
Circuit& Circuit::cx(int control, int target) {
  return add({GateKind::X, {target}, {Control{control, true}}, 0.0, {}});
}
Circuit& Circuit::cry(std::vector<Control> controls, int target, double theta) {
  return add({GateKind::Ry, {target}, std::move(controls), theta, {}});
}
Circuit& Circuit::mcx(std::vector<Control> controls, int target) {
  return add({GateKind::X, {target}, std::move(controls), 0.0, {}});
}
Circuit& Circuit::mcz(std::vector<Control> controls, int target) {
  return add({GateKind::Z, {target}, std::move(controls), 0.0, {}});
}
Circuit& Circuit::phase(double theta, std::vector<Control> controls) {
  return add({GateKind::Phase, {}, std::move(controls), theta, {}});
}
Circuit& Circuit::unitary(std::vector<int> targets, Matrix m, std::vector<Control> controls) {
  return add({GateKind::Unitary, std::move(targets), std::move(controls), 0.0, std::move(m)});
}

Circuit& Circuit::append(const Circuit& other, std::span<const int> qubit_map,
                         std::span<const Control> extra_controls, std::string label) {
  std::vector<int> identity;
  if (qubit_map.empty()) {
    identity.resize(static_cast<std::size_t>(other.n_));
    std::iota(identity.begin(), identity.end(), 0);
    qubit_map = identity;
  }
  require(static_cast<int>(qubit_map.size()) == other.n_, ErrorCode::Structural,
          "qubit map size does not match appended circuit");
  const std::size_t first = gates_.size();
  for (const Segment& s : other.segments_)
    segments_.push_back({s.label, first + s.first, s.count});
  for (const Gate& g : other.gates_) {
    Gate mapped = g;
    for (int& t : mapped.targets) t = qubit_map[static_cast<std::size_t>(t)];
    for (Control& c : mapped.controls) c.qubit = qubit_map[static_cast<std::size_t>(c.qubit)];
    mapped.controls.insert(mapped.controls.end(), extra_controls.begin(), extra_controls.end());
    gates_.push_back(std::move(mapped));
  }
  if (!label.empty()) segments_.push_back({std::move(label), first, other.gates_.size()});
  return *this;
}

Circuit Circuit::inverse() const {
  Circuit out(n_);
  out.gates_.reserve(gates_.size());
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) out.gates_.push_back(it->inverse());
  const std::size_t total = gates_.size();
  for (const Segment& s : segments_) {
    const bool inverted = s.label.ends_with("^-1");
    std::string label = inverted ? s.label.substr(0, s.label.size() - 3) : s.label + "^-1";
    out.segments_.push_back({std::move(label), total - s.first - s.count, s.count});
  }
  return out;
}

Circuit Circuit::controlled(std::span<const Control> extra_controls) const {
  Circuit out(n_);
  out.append(*this, {}, extra_controls);
  return out;
}

std::size_t Circuit::count(GateKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(gates_.begin(), gates_.end(), [kind](const Gate& g) { return g.kind == kind; }));
}

std::size_t Circuit::cx_count() const {
  return static_cast<std::size_t>(std::count_if(gates_.begin(), gates_.end(), [](const Gate& g) {
    return g.kind == GateKind::X && g.controls.size() == 1;
  }));
}

std::size_t Circuit::count_segments(std::string_view label) const {
  return static_cast<std::size_t>(std::count_if(segments_.begin(), segments_.end(),
                                                [label](const Segment& s) { return s.label == label; }));
}

void Circuit::validate() const {
  for (std::size_t gi = 0; gi < gates_.size(); ++gi) {
    const Gate& g = gates_[gi];
    std::set<int> seen;
    auto check = [&](int q) {
      require(q >= 0 && q < n_, ErrorCode::Structural,
              "gate " + std::to_string(gi) + " references qubit " + std::to_string(q) + " of " +
                  std::to_string(n_));
      require(seen.insert(q).second, ErrorCode::Structural,
              "gate " + std::to_string(gi) + " uses qubit " + std::to_string(q) + " twice");
    };
    for (int t : g.targets) check(t);
    for (const Control& c : g.controls) check(c.qubit);
    if (g.kind == GateKind::Phase) {
      require(g.targets.empty(), ErrorCode::Structural, "phase gate takes no targets");
    } else if (g.kind == GateKind::Unitary) {
      const auto d = dim_of(static_cast<int>(g.targets.size()));
      require(g.matrix.rows() == static_cast<Eigen::Index>(d) && g.matrix.cols() == static_cast<Eigen::Index>(d),
              ErrorCode::Structural, "embedded block has the wrong shape");
      const Matrix defect = g.matrix.adjoint() * g.matrix - Matrix::Identity(g.matrix.rows(), g.matrix.cols());
      require(defect.cwiseAbs().maxCoeff() < 1e-10, ErrorCode::Structural,
              "embedded block " + std::to_string(gi) + " is not unitary");
    } else {
      require(g.targets.size() == 1, ErrorCode::Structural, "single-qubit gate needs exactly one target");
    }
  }
}

}  // namespace ampload::sim
