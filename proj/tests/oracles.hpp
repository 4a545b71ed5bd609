#pragma once

// Straight-from-definition reference implementations used by the tests.
// Deliberately naive: plain loops, long double accumulation, O(N^2) DFT.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Core>

namespace oracle {

using Vec = std::vector<double>;

inline Vec to_vec(const Eigen::VectorXd& x) { return Vec(x.data(), x.data() + x.size()); }

inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<long double>> twiddle(n);
  for (std::size_t j = 0; j < n; ++j) {
    const long double angle = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>(j) /
                              static_cast<long double>(n);
    twiddle[j] = {std::cos(angle), std::sin(angle)};
  }
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<long double> acc = 0.0L;
    for (std::size_t t = 0; t < n; ++t) {
      acc += std::complex<long double>(x[t].real(), x[t].imag()) * twiddle[(k * t) % n];
    }
    out[k] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  }
  return out;
}

inline long double mean(const Vec& x) {
  long double s = 0.0L;
  for (double v : x) s += v;
  return s / static_cast<long double>(x.size());
}

inline long double moment(const Vec& x, int order) {
  const long double mu = mean(x);
  long double s = 0.0L;
  for (double v : x) {
    long double d = v - mu, p = 1.0L;
    for (int i = 0; i < order; ++i) p *= d;
    s += p;
  }
  return s / static_cast<long double>(x.size());
}

inline double average(const Vec& x) {
  const long n = static_cast<long>(x.size());
  const long len = std::max(1L, std::lround(0.05 * static_cast<double>(n)));
  const long left = (len - 1) / 2;
  long double total = 0.0L;
  for (long t = 0; t < n; ++t) {
    long double s = 0.0L;
    long count = 0;
    for (long j = t - left; j < t - left + len; ++j) {
      if (j < 0 || j >= n) continue;
      s += x[static_cast<std::size_t>(j)];
      ++count;
    }
    total += s / count;
  }
  return static_cast<double>(total / n);
}

inline double rms(const Vec& x) {
  long double s = 0.0L;
  for (double v : x) s += static_cast<long double>(v) * v;
  return static_cast<double>(std::sqrt(s / x.size()));
}

inline double max_peak(const Vec& x) { return *std::max_element(x.begin(), x.end()); }

inline double variance(const Vec& x) { return static_cast<double>(moment(x, 2)); }

inline double skewness(const Vec& x) {
  const long double m2 = moment(x, 2);
  if (m2 < 1e-12L) return 0.0;
  return static_cast<double>(moment(x, 3) / std::pow(m2, 1.5L));
}

inline double kurtosis(const Vec& x) {
  const long double m2 = moment(x, 2);
  if (m2 < 1e-12L) return 0.0;
  return static_cast<double>(moment(x, 4) / (m2 * m2) - 3.0L);
}

inline double autocorr(const Vec& x) {
  const long double mu = mean(x);
  long double num = 0.0L, den = 0.0L;
  for (std::size_t t = 0; t < x.size(); ++t) {
    den += (x[t] - mu) * (x[t] - mu);
    if (t + 1 < x.size()) num += (x[t] - mu) * (x[t + 1] - mu);
  }
  if (den / x.size() < 1e-12L) return 0.0;
  return static_cast<double>(num / den);
}

inline double nonlinear_energy(const Vec& x) {
  long double s = 0.0L;
  for (std::size_t t = 1; t + 1 < x.size(); ++t) {
    s += static_cast<long double>(x[t]) * x[t] - static_cast<long double>(x[t - 1]) * x[t + 1];
  }
  return static_cast<double>(s / (x.size() - 2));
}

inline double spikes(const Vec& x) {
  const long double sd = std::sqrt(moment(x, 2));
  if (sd < 1e-12L) return 0.0;
  const long double threshold = mean(x) + 2.0L * sd;
  int count = 0;
  for (std::size_t t = 1; t + 1 < x.size(); ++t) {
    if (x[t] > x[t - 1] && x[t] > x[t + 1] && x[t] > threshold) ++count;
  }
  return count;
}

// Higuchi (1988), with 1-based m as in the original formulation.
inline double hfd(const Vec& x, int k_max = 10) {
  const long n = static_cast<long>(x.size());
  long double coast = 0.0L;
  for (long i = 1; i < n; ++i) coast += std::fabs(static_cast<long double>(x[i]) - x[i - 1]);
  if (coast < 1e-12L) return 1.0;
  std::vector<long double> xs, ys;
  for (long k = 1; k <= k_max; ++k) {
    long double lk = 0.0L;
    for (long m = 1; m <= k; ++m) {
      const long steps = (n - m) / k;
      long double s = 0.0L;
      for (long i = 1; i <= steps; ++i) {
        s += std::fabs(static_cast<long double>(x[m - 1 + i * k]) - x[m - 1 + (i - 1) * k]);
      }
      lk += s * (n - 1) / (static_cast<long double>(steps) * k) / k;
    }
    lk /= k;
    xs.push_back(std::log(1.0L / k));
    ys.push_back(std::log(std::max(lk, 1e-12L)));
  }
  // Normal equations for y = a + b x.
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const long double m = static_cast<long double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return static_cast<double>((m * sxy - sx * sy) / (m * sxx - sx * sx));
}

inline Vec histogram(const Vec& x, int bins) {
  const double lo = *std::min_element(x.begin(), x.end());
  const double hi = *std::max_element(x.begin(), x.end());
  if (!(hi - lo > 1e-12)) return {};
  Vec p(static_cast<std::size_t>(bins), 0.0);
  const double width = (hi - lo) / bins;
  for (double v : x) {
    int b = bins - 1;
    for (int i = 0; i < bins; ++i) {
      if (v < lo + (i + 1) * width) {
        b = i;
        break;
      }
    }
    p[static_cast<std::size_t>(b)] += 1.0 / static_cast<double>(x.size());
  }
  return p;
}

inline double shannon(const Vec& x, int bins = 10) {
  long double h = 0.0L;
  for (double p : histogram(x, bins)) {
    if (p > 0) h -= p * std::log2(static_cast<long double>(p));
  }
  return static_cast<double>(h);
}

inline double renyi(const Vec& x, double alpha = 2.0, int bins = 10) {
  const Vec p = histogram(x, bins);
  if (p.empty()) return 0.0;
  long double s = 0.0L;
  for (double q : p) {
    if (q > 0) s += std::pow(static_cast<long double>(q), static_cast<long double>(alpha));
  }
  return static_cast<double>(std::log2(s) / (1.0L - alpha));
}

inline double coastline(const Vec& x) {
  long double s = 0.0L;
  for (std::size_t i = 1; i < x.size(); ++i) s += std::fabs(static_cast<long double>(x[i]) - x[i - 1]);
  return static_cast<double>(s);
}

// |DFT(x - mean)|^2 / N at k = 1 .. N/2.
inline Vec periodogram(const Vec& x) {
  const double mu = static_cast<double>(mean(x));
  std::vector<std::complex<double>> c;
  for (double v : x) c.emplace_back(v - mu, 0.0);
  const auto spectrum = dft(c);
  Vec p;
  for (std::size_t k = 1; k <= x.size() / 2; ++k) p.push_back(std::norm(spectrum[k]) / x.size());
  return p;
}

inline double band_power_of(const Vec& p) {
  long double s = 0.0L;
  for (double v : p) s += v;
  return static_cast<double>(s / p.size());
}

inline double sef90_of(const Vec& p, std::size_t n, double fs) {
  long double total = 0.0L;
  for (double v : p) total += v;
  if (total < 1e-12L) return 0.0;
  long double c = 0.0L;
  for (std::size_t i = 0; i < p.size(); ++i) {
    c += p[i];
    if (c >= 0.9L * total) return static_cast<double>(i + 1) * fs / static_cast<double>(n);
  }
  return static_cast<double>(p.size()) * fs / static_cast<double>(n);
}

inline double band_power(const Vec& x) { return band_power_of(periodogram(x)); }
inline double sef90(const Vec& x, double fs) { return sef90_of(periodogram(x), x.size(), fs); }

inline Vec diff(const Vec& x) {
  Vec d;
  for (std::size_t i = 1; i < x.size(); ++i) d.push_back(x[i] - x[i - 1]);
  return d;
}

inline double mobility(const Vec& x) {
  const long double v = moment(x, 2);
  if (v < 1e-12L) return 0.0;
  return static_cast<double>(std::sqrt(moment(diff(x), 2) / v));
}

inline double complexity(const Vec& x) {
  const double m = mobility(x);
  if (m < 1e-12) return 0.0;
  return mobility(diff(x)) / m;
}

inline double spectral_entropy_of(const Vec& p) {
  long double total = 0.0L;
  for (double v : p) total += v;
  if (total < 1e-12L) return 0.0;
  long double h = 0.0L;
  for (double v : p) {
    const long double q = v / total;
    if (q > 0) h -= q * std::log2(q);
  }
  return static_cast<double>(h / std::log2(static_cast<long double>(p.size())));
}

inline double spectral_entropy(const Vec& x) { return spectral_entropy_of(periodogram(x)); }

inline Vec all_features(const Vec& x, double fs) {
  const Vec p = periodogram(x);
  return {average(x),   rms(x),        max_peak(x),   variance(x),       skewness(x),
          kurtosis(x),  autocorr(x),   nonlinear_energy(x), spikes(x),    hfd(x),
          shannon(x),   renyi(x),      coastline(x),  band_power_of(p), sef90_of(p, x.size(), fs),
          mobility(x),  complexity(x), spectral_entropy_of(p)};
}

inline double relative_error(double got, double want) {
  const double scale = std::max(1.0, std::fabs(want));
  return std::fabs(got - want) / scale;
}

}  // namespace oracle
