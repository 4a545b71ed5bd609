#pragma once

#include <Eigen/Core>

namespace ieegdec {

// Exact-length discrete Fourier transforms. Lengths with only small prime
// factors go through a mixed-radix FFT; lengths with a large prime factor are
// evaluated with Bluestein's chirp-z identity so any N stays O(N log N).
Eigen::VectorXcd dft(const Eigen::VectorXcd& x);

// Inverse transform, scaled by 1/N.
Eigen::VectorXcd idft(const Eigen::VectorXcd& spectrum);

Eigen::VectorXcd dft_real(const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace ieegdec
