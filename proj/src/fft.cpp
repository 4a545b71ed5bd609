#include "ieegdec/fft.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <unsupported/Eigen/FFT>

namespace ieegdec {
namespace {

constexpr Eigen::Index kMaxDirectRadix = 61;

Eigen::Index largest_prime_factor(Eigen::Index n) {
  Eigen::Index largest = 1;
  for (Eigen::Index p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      largest = p;
      n /= p;
    }
  }
  return n > 1 ? n : largest;
}

Eigen::VectorXcd mixed_radix(const Eigen::VectorXcd& x, bool inverse) {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  Eigen::VectorXcd out(x.size());
  if (inverse) {
    fft.inv(out, x);
  } else {
    fft.fwd(out, x);
  }
  return out;
}

// Unscaled transform of arbitrary length via chirp-z convolution.
Eigen::VectorXcd bluestein(const Eigen::VectorXcd& x, bool inverse) {
  const Eigen::Index n = x.size();
  Eigen::Index m = 1;
  while (m < 2 * n - 1) m <<= 1;

  const double sign = inverse ? 1.0 : -1.0;
  Eigen::VectorXcd chirp(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the phase argument small for long inputs.
    const auto k2 = static_cast<long double>((static_cast<unsigned long long>(k) *
                                              static_cast<unsigned long long>(k)) %
                                             (2ULL * static_cast<unsigned long long>(n)));
    const double angle = static_cast<double>(std::numbers::pi_v<long double> * k2 / n);
    chirp[k] = std::polar(1.0, sign * angle);
  }

  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(m);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(m);
  for (Eigen::Index k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (Eigen::Index k = 1; k < n; ++k) {
    b[k] = std::conj(chirp[k]);
    b[m - k] = std::conj(chirp[k]);
  }

  Eigen::VectorXcd fa = mixed_radix(a, false);
  const Eigen::VectorXcd fb = mixed_radix(b, false);
  fa.array() *= fb.array();
  const Eigen::VectorXcd conv = mixed_radix(fa, true) / static_cast<double>(m);

  Eigen::VectorXcd out(n);
  for (Eigen::Index k = 0; k < n; ++k) out[k] = conv[k] * chirp[k];
  return out;
}

Eigen::VectorXcd transform(const Eigen::VectorXcd& x, bool inverse) {
  if (x.size() <= 1) return x;
  if (largest_prime_factor(x.size()) <= kMaxDirectRadix) return mixed_radix(x, inverse);
  return bluestein(x, inverse);
}

}  // namespace

Eigen::VectorXcd dft(const Eigen::VectorXcd& x) { return transform(x, false); }

Eigen::VectorXcd idft(const Eigen::VectorXcd& spectrum) {
  if (spectrum.size() == 0) return spectrum;
  return transform(spectrum, true) / static_cast<double>(spectrum.size());
}

Eigen::VectorXcd dft_real(const Eigen::Ref<const Eigen::VectorXd>& x) {
  return dft(x.cast<std::complex<double>>());
}

}  // namespace ieegdec
