#pragma once

#include <span>
#include <string>
#include <vector>

#include "ampload/blockenc.hpp"
#include "ampload/statevector.hpp"

namespace ampload::qsvt {

/// Real polynomial in the monomial basis, c[0] + c[1] x + ...
class PolynomialSpec {
 public:
  PolynomialSpec() = default;
  explicit PolynomialSpec(std::vector<double> coeffs);
  /// prod_i (x - r_i), optionally times `lead`.
  static PolynomialSpec from_roots(std::span<const double> roots, double lead = 1.0);

  const std::vector<double>& coeffs() const noexcept { return c_; }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const;
  double operator()(double x) const;

  PolynomialSpec scaled(double s) const;
  /// p(a x + b).
  PolynomialSpec composed_affine(double a, double b) const;
  PolynomialSpec even_part() const;
  PolynomialSpec odd_part() const;
  PolynomialSpec derivative() const;
  /// +1 even, -1 odd, 0 mixed (zero counts as even).
  int parity() const;

  /// sup |p| on [lo, hi], from endpoints and real critical points.
  double sup_abs(double lo, double hi) const;
  /// max_k |c_k|.
  double max_coeff() const;

 private:
  std::vector<double> c_{0.0};
};

enum class Parity { Even, Odd };

/// Symmetric Wx-convention phases: Re <0| e^{i phi_0 Z} prod_k W(x) e^{i phi_k Z} |0>
/// with W(x) = [[x, i sqrt(1-x^2)], [i sqrt(1-x^2), x]].
struct PhaseFactors {
  Parity parity = Parity::Even;
  std::vector<double> phases;  // phi_0 .. phi_d
  double achieved_error = 0.0;

  int degree() const { return static_cast<int>(phases.size()) - 1; }
  std::string to_csv() const;
  static PhaseFactors from_csv(const std::string& text);
};

/// Re P_Phi(x) for the sequence above.
double qsp_response(std::span<const double> phases, double x);

/// Newton collocation at Chebyshev nodes over the symmetric half of the
/// phases; error is measured on max(4d, 8) Chebyshev nodes.
PhaseFactors solve_phases(const PolynomialSpec& target, double gamma = 1e-10);

/// Block encoding of p(A) using three extra ancillas (phase line, +-Phi
/// LCU line, parity LCU line). Requires |p| <= 1/4 on [-1, 1].
blockenc::BlockEncoding apply_qsvt(const blockenc::BlockEncoding& be, const PolynomialSpec& p,
                                   double gamma = 1e-10);

/// amps_j <- p(x_j), renormalized. An empty grid uses x_j = Re amps_j.
sim::Statevector reference_transform(const sim::Statevector& state, const PolynomialSpec& p,
                                     std::span<const double> grid = {});

/// x_j = j / (2^k0 - 1).
std::vector<double> unit_grid(int k0);

/// ||P||_2 / (sqrt(2^k0) max_j |P(x_j)|) over unit_grid(k0).
double filling_ratio(const PolynomialSpec& p, int k0);
inline double success_probability(double filling) { return 0.0625 * filling * filling; }
int aa_rounds_estimate(double filling);

/// floor(pi / (4 asin sqrt(p0))).
int optimal_rounds(double p0);
/// Probability mass on the lines in `good_zero` all being |0>.
double good_probability(const sim::Statevector& s, std::span<const int> good_zero);

struct AmplifiedState {
  sim::Statevector state;
  double initial_probability = 0.0;
  double final_probability = 0.0;
  int rounds = 0;
};

/// Grover iterations (prep S_0 prep^dag) S_good on prep|0>. rounds < 0 picks optimal_rounds.
AmplifiedState amplitude_amplify(const sim::Circuit& prep, std::span<const int> good_zero, int rounds = -1);

}  // namespace ampload::qsvt
