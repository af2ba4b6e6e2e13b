#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kerr/time_series.hpp"

namespace kerr {

enum class Taper { Hann, Bartlett, Rectangular };

std::string to_string(Taper t);
Taper taper_from_string(const std::string& name);

/// Blackman-Tukey estimate: the cosine transform of the tapered, mean-removed
/// autocorrelation. freqs run from 0 to the Nyquist frequency 1/(2 dt) in
/// max_lag + 1 steps; power is the two-sided density S(f) >= 0.
struct PowerSpectrum {
  std::vector<double> freqs;
  std::vector<double> power;
  Taper taper = Taper::Hann;
  std::size_t max_lag = 0;
  double dt = 1.0;
  double variance = 0.0;
  bool degenerate = false;  // constant input

  /// Angular frequency 2 pi f in units of g.
  std::vector<double> angular_in_units_of(double g) const;
  /// 2 * integral_0^Nyquist S(f) df by the trapezoid rule; equals the
  /// variance of the input (Parseval).
  double total_power() const;
};

/// Biased (divide by N) autocovariance of the mean-removed series for lags
/// 0..max_lag, computed by FFT.
std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag);

/// Requires max_lag < size / 2.
PowerSpectrum power_spectrum(const TimeSeries& series, std::size_t max_lag,
                             Taper taper = Taper::Hann);

/// Indices of local maxima (excluding f = 0) whose power is within
/// `threshold_db` of the global maximum.
std::vector<std::size_t> find_peaks(const PowerSpectrum& s, double threshold_db = 60.0);

/// Frequency of the highest peak away from f = 0.
double dominant_frequency(const PowerSpectrum& s);

/// Mean period in samples, 1 / (f_dominant dt), rounded up.
std::size_t mean_period_samples(const PowerSpectrum& s);

}  // namespace kerr
