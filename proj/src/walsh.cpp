#include "ampload/walsh.hpp"

#include <cmath>
#include <string>

#include "ampload/error.hpp"
#include "ampload/types.hpp"

namespace ampload::walsh {

void dhwt_inplace(std::span<double> z) {
  require(is_power_of_two(z.size()), ErrorCode::InvalidArgument,
          "DHWT length " + std::to_string(z.size()) + " is not a power of two");
  const std::size_t len = z.size();
  for (std::size_t h = 1; h < len; h <<= 1)
    for (std::size_t i = 0; i < len; i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = z[j], b = z[j + h];
        z[j] = a + b;
        z[j + h] = a - b;
      }
  const double s = 1.0 / std::sqrt(static_cast<double>(len));
  for (double& v : z) v *= s;
}

WalshSpectrum dhwt(std::span<const double> z) {
  WalshSpectrum out;
  out.coeffs.assign(z.begin(), z.end());
  dhwt_inplace(out.coeffs);
  out.n = log2_exact(z.size());
  return out;
}

Lemma1Terms lemma1_terms(int n) {
  require(n >= 1 && n <= 24, ErrorCode::InvalidArgument, "lemma1_spectrum needs 1 <= n <= 24");
  Lemma1Terms t;
  t.n = n;
  const double root = std::pow(2.0, 0.5 * n);
  t.x0 = root * (std::ldexp(1.0, n) - 1.0) / 2.0;
  for (int m = 0; m < n; ++m) t.single.push_back(-root * std::ldexp(1.0, m) / 2.0);
  return t;
}

double Lemma1Terms::coefficient(std::uint64_t k) const {
  if (k == 0) return x0;
  if (binary_norm(k) != 1) return 0.0;
  return single[static_cast<std::size_t>(log2_exact(k))];
}

WalshSpectrum Lemma1Terms::expand() const {
  WalshSpectrum s;
  s.n = n;
  s.coeffs.assign(dim_of(n), 0.0);
  s.coeffs[0] = x0;
  for (int m = 0; m < n; ++m) s.coeffs[std::size_t{1} << m] = single[static_cast<std::size_t>(m)];
  return s;
}

WalshSpectrum lemma1_spectrum(int n) { return lemma1_terms(n).expand(); }

int binary_norm(std::uint64_t k) {
  int c = 0;
  for (; k; k &= k - 1) ++c;
  return c;
}

std::uint64_t poly_spectrum_sparsity(int n, int d) {
  require(d >= 0 && n >= 0, ErrorCode::InvalidArgument, "negative degree or size");
  require(d <= n, ErrorCode::InvalidArgument, "degree " + std::to_string(d) + " exceeds n = " + std::to_string(n));
  std::uint64_t binom = 1, total = 1;
  for (int k = 1; k <= d; ++k) {
    binom = binom * static_cast<std::uint64_t>(n - k + 1) / static_cast<std::uint64_t>(k);
    total += binom;
  }
  return total;
}

std::size_t significant_count(const WalshSpectrum& s, double rel_tol) {
  double mx = 0.0;
  for (double v : s.coeffs) mx = std::max(mx, std::abs(v));
  std::size_t c = 0;
  for (double v : s.coeffs)
    if (std::abs(v) > rel_tol * mx) ++c;
  return c;
}

}  // namespace ampload::walsh
