#include "ampload/linload.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ampload/error.hpp"
#include "ampload/walsh.hpp"

namespace ampload::linload {

namespace {

void check_range(int n, int k0, int max_n) {
  require(n >= 1 && n <= max_n, ErrorCode::InvalidArgument,
          "n = " + std::to_string(n) + " outside 1.." + std::to_string(max_n));
  require(k0 >= 1 && k0 <= n, ErrorCode::InvalidArgument,
          "k0 = " + std::to_string(k0) + " outside 1..n");
}

// sin(theta/2) argument, clamped only when it overshoots by rounding.
double half_angle_arcsin(double s, int k) {
  require(std::abs(s) <= 1.0 + 1e-12, ErrorCode::Numeric,
          "rotation " + std::to_string(k) + " needs |sin| = " + std::to_string(std::abs(s)) + " > 1");
  return 2.0 * std::asin(std::clamp(s, -1.0, 1.0));
}

}  // namespace

double exact_norm(int n) {
  const long double big = std::ldexp(1.0L, n);
  return static_cast<double>(std::sqrt((2.0L * big - 1.0L) * (big - 1.0L) * big / 6.0L));
}

LinearLoadPlan plan(int n, int k0) {
  check_range(n, k0, 20);
  LinearLoadPlan p;
  p.n = n;
  p.k0 = k0;
  p.norm_exact = exact_norm(n);

  const walsh::Lemma1Terms terms = walsh::lemma1_terms(n);
  double sq = terms.x0 * terms.x0;
  for (int k = n - k0; k < n; ++k) sq += terms.single[static_cast<std::size_t>(k)] * terms.single[static_cast<std::size_t>(k)];
  p.norm_spectral = std::sqrt(sq);

  // Highest qubit first: G(k) is the product of cos(theta_i/2) for i > k.
  p.angles.assign(static_cast<std::size_t>(n), 0.0);
  double g = 1.0;
  for (int k = n - 1; k >= n - k0; --k) {
    const double c = terms.single[static_cast<std::size_t>(k)] / p.norm_spectral;
    require(g > 0.0, ErrorCode::Numeric, "loader cascade collapsed");
    const double theta = half_angle_arcsin(c / g, k);
    p.angles[static_cast<std::size_t>(k)] = theta;
    g *= std::cos(theta / 2.0);
  }

  const int r = n - k0;
  const double kk = std::ldexp(1.0, k0);
  p.alpha = std::pow(2.0, 1.5 * r);
  p.beta = std::pow(2.0, 0.5 * r - 1.0) * (std::ldexp(1.0, r) - 1.0);
  p.norm_step = std::pow(2.0, 0.5 * n) *
                std::sqrt(p.alpha * p.alpha * (2.0 * kk - 1.0) * (kk - 1.0) / 6.0 +
                          p.alpha * p.beta * (kk - 1.0) + p.beta * p.beta);
  return p;
}

sim::Circuit build_spectral_circuit(const LinearLoadPlan& p) {
  sim::Circuit c(p.n);
  c.ry(p.n - 1, p.angles[static_cast<std::size_t>(p.n - 1)]);
  for (int k = p.n - 2; k >= p.n - p.k0; --k) {
    std::vector<sim::Control> ctl;
    for (int q = p.n - 1; q > k; --q) ctl.push_back({q, false});
    c.cry(std::move(ctl), k, p.angles[static_cast<std::size_t>(k)]);
  }
  return c;
}

sim::Circuit build_circuit(const LinearLoadPlan& p) {
  sim::Circuit c = build_spectral_circuit(p);
  for (int q = 0; q < p.n; ++q) c.h(q);
  return c;
}

double fidelity_closed_form(int n, int k0) {
  check_range(n, k0, 60);
  const double big = std::ldexp(1.0, n);
  const double base = 0.25 * (big - 1.0) * (big - 1.0);
  const double scale = std::ldexp(1.0, 2 * n - 2) / 3.0;
  return (base + scale * (1.0 - std::ldexp(1.0, -2 * k0))) / (base + scale * (1.0 - std::ldexp(1.0, -2 * n)));
}

double infidelity_closed_form(int n, int k0) {
  check_range(n, k0, 60);
  const double big = std::ldexp(1.0, n);
  const double base = 0.25 * (big - 1.0) * (big - 1.0);
  const double scale = std::ldexp(1.0, 2 * n - 2) / 3.0;
  return scale * (std::ldexp(1.0, -2 * k0) - std::ldexp(1.0, -2 * n)) / (base + scale * (1.0 - std::ldexp(1.0, -2 * n)));
}

double k0_for_infidelity(int n, double eps) {
  require(n >= 1 && n <= 60, ErrorCode::InvalidArgument, "n outside 1..60");
  require(eps > 0.0 && eps < 1.0, ErrorCode::Domain, "infidelity must lie in (0, 1)");
  const double big = std::ldexp(1.0, n);
  const double arg = 1.0 / (big * big) + eps * (4.0 + 2.0 * (1.0 - 3.0 * big) / (big * big));
  require(arg > 0.0, ErrorCode::Domain, "infidelity " + std::to_string(eps) + " is too large for n = " + std::to_string(n));
  return -0.5 * std::log2(arg);
}

double k0_asymptote(double eps) {
  require(eps > 0.0, ErrorCode::Domain, "infidelity must be positive");
  return 0.5 * std::log2(1.0 / (4.0 * eps));
}

sim::Statevector stepwise_state(int n, int k0) {
  const LinearLoadPlan p = plan(n, k0);
  const std::size_t block = std::size_t{1} << (n - k0);
  std::vector<cplx> amps(dim_of(n));
  for (std::size_t j = 0; j < amps.size(); ++j)
    amps[j] = (p.alpha * static_cast<double>(j / block) + p.beta) / p.norm_step;
  return sim::Statevector(n, std::move(amps));
}

sim::Statevector exact_state(int n) {
  require(n >= 1 && n <= 24, ErrorCode::InvalidArgument, "n outside 1..24");
  const double c = exact_norm(n);
  std::vector<cplx> amps(dim_of(n));
  for (std::size_t j = 0; j < amps.size(); ++j) amps[j] = static_cast<double>(j) / c;
  return sim::Statevector(n, std::move(amps));
}

AmplitudeDeviation amplitude_deviation(int n, int k0) {
  const LinearLoadPlan p = plan(n, k0);
  const sim::Statevector step = stepwise_state(n, k0), exact = exact_state(n);
  AmplitudeDeviation out;
  out.delta.resize(step.size());
  for (std::size_t j = 0; j < step.size(); ++j) {
    out.delta[j] = std::abs(step[j].real() - exact[j].real());
    out.max_delta = std::max(out.max_delta, out.delta[j]);
  }
  out.bound = p.beta / p.norm_step;
  out.within_bound = out.max_delta <= out.bound + 1e-12;
  return out;
}

}  // namespace ampload::linload
