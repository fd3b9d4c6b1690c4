#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ampload::walsh {

/// Hadamard-Walsh coefficients in natural order; coeffs[k] = x^(k).
struct WalshSpectrum {
  int n = 0;
  std::vector<double> coeffs;
};

/// Normalized (1/sqrt N) transform by the in-place butterfly. Involution.
WalshSpectrum dhwt(std::span<const double> z);
void dhwt_inplace(std::span<double> z);

/// Closed-form spectrum of z_j = j, j = 0..2^n-1.
struct Lemma1Terms {
  int n = 0;
  double x0 = 0.0;
  std::vector<double> single;  // single[m] = x^(2^m)
  WalshSpectrum expand() const;
  double coefficient(std::uint64_t k) const;
};

Lemma1Terms lemma1_terms(int n);
WalshSpectrum lemma1_spectrum(int n);

int binary_norm(std::uint64_t k);

/// sum_{k <= d} C(n, k): the most nonzero coefficients a degree-d
/// polynomial sampled on 2^n points can have.
std::uint64_t poly_spectrum_sparsity(int n, int d);

/// Entries with |x^(k)| > rel_tol * max |x|.
std::size_t significant_count(const WalshSpectrum& s, double rel_tol = 1e-9);

}  // namespace ampload::walsh
