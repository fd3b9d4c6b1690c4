#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ampload/types.hpp"

namespace ampload::sim {

enum class GateKind {
  I,
  H,
  X,
  Z,
  SX,
  Rz,
  Ry,
  Phase,    // scalar e^{i angle}; no targets, meaningful only with controls
  Unitary,  // embedded k-qubit matrix
};

std::string_view gate_name(GateKind kind);

struct Control {
  int qubit;
  bool on_one = true;  // false: fires on |0>
};

struct Gate {
  GateKind kind = GateKind::I;
  std::vector<int> targets;  // targets[0] is the least significant local bit
  std::vector<Control> controls;
  double angle = 0.0;
  Matrix matrix;  // GateKind::Unitary only

  /// The 2^k x 2^k matrix acting on `targets` (controls excluded).
  Matrix local_matrix() const;
  Gate inverse() const;
  int arity() const { return static_cast<int>(targets.size() + controls.size()); }
};

/// Named contiguous range of gates, used for structural query accounting.
struct Segment {
  std::string label;
  std::size_t first = 0;
  std::size_t count = 0;
};

/// Ordered gate list over n qubits. Gates are applied front to back.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int n) : n_(n) {}

  int num_qubits() const noexcept { return n_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  std::size_t size() const noexcept { return gates_.size(); }
  bool empty() const noexcept { return gates_.empty(); }

  Circuit& add(Gate g);
  Circuit& i(int q);
  Circuit& h(int q);
  Circuit& x(int q);
  Circuit& z(int q);
  Circuit& sx(int q);
  Circuit& rz(int q, double theta);
  Circuit& ry(int q, double theta);
  Circuit& cx(int control, int target);
  Circuit& cry(std::vector<Control> controls, int target, double theta);
  Circuit& mcx(std::vector<Control> controls, int target);
  Circuit& mcz(std::vector<Control> controls, int target);
  Circuit& phase(double theta, std::vector<Control> controls = {});
  Circuit& unitary(std::vector<int> targets, Matrix m, std::vector<Control> controls = {});

  /// Appends `other` with its qubit q mapped to `qubit_map[q]` and every gate
  /// additionally conditioned on `extra_controls`. A non-empty label records
  /// the appended range as a Segment.
  Circuit& append(const Circuit& other, std::span<const int> qubit_map = {},
                  std::span<const Control> extra_controls = {},
                  std::string label = {});

  Circuit inverse() const;
  Circuit controlled(std::span<const Control> extra_controls) const;

  std::size_t count(GateKind kind) const;
  /// X gates with exactly one control, i.e. CNOTs.
  std::size_t cx_count() const;
  std::size_t count_segments(std::string_view label) const;

  /// Throws Structural on an out-of-range or duplicated qubit, or on an
  /// embedded block with ||U^dag U - I||_inf >= 1e-10.
  void validate() const;

 private:
  int n_ = 0;
  std::vector<Gate> gates_;
  std::vector<Segment> segments_;
};

}  // namespace ampload::sim
