#include "kerr/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>

#include "kerr/error.hpp"
#include "kerr/stats.hpp"

namespace kerr {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
struct PlanDestroy {
  void operator()(fftw_plan p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDestroy>;

template <class T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (!p) throw std::bad_alloc();
  return std::unique_ptr<T[], FftwFree>(p);
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

double taper_weight(Taper t, std::size_t lag, std::size_t max_lag) {
  const double x = static_cast<double>(lag) / static_cast<double>(max_lag);
  switch (t) {
    case Taper::Hann:
      return 0.5 * (1.0 + std::cos(std::numbers::pi * x));
    case Taper::Bartlett:
      return 1.0 - x;
    case Taper::Rectangular:
      return 1.0;
  }
  return 1.0;
}

}  // namespace

std::string to_string(Taper t) {
  switch (t) {
    case Taper::Hann:
      return "hann";
    case Taper::Bartlett:
      return "bartlett";
    case Taper::Rectangular:
      return "rectangular";
  }
  return "unknown";
}

Taper taper_from_string(const std::string& name) {
  if (name == "hann") return Taper::Hann;
  if (name == "bartlett") return Taper::Bartlett;
  if (name == "rectangular" || name == "none") return Taper::Rectangular;
  throw InvalidArgument("unknown taper '" + name + "'");
}

std::vector<double> PowerSpectrum::angular_in_units_of(double g) const {
  if (!(g > 0.0)) throw InvalidArgument("angular_in_units_of: g must be > 0");
  std::vector<double> out(freqs.size());
  for (std::size_t i = 0; i < freqs.size(); ++i) out[i] = 2.0 * std::numbers::pi * freqs[i] / g;
  return out;
}

double PowerSpectrum::total_power() const {
  if (power.size() < 2) return 0.0;
  const double df = freqs[1] - freqs[0];
  double s = 0.5 * (power.front() + power.back());
  for (std::size_t i = 1; i + 1 < power.size(); ++i) s += power[i];
  return 2.0 * s * df;
}

std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  if (max_lag >= n) throw InvalidArgument("autocorrelation: max_lag >= length");
  const double m = mean(x);
  const std::size_t nfft = next_pow2(2 * n);
  auto in = fftw_buffer<double>(nfft);
  auto spec = fftw_buffer<fftw_complex>(nfft / 2 + 1);
  Plan forward, backward;
  {
    std::lock_guard lock(planner_mutex());
    forward.reset(fftw_plan_dft_r2c_1d(static_cast<int>(nfft), in.get(), spec.get(), FFTW_ESTIMATE));
    backward.reset(fftw_plan_dft_c2r_1d(static_cast<int>(nfft), spec.get(), in.get(), FFTW_ESTIMATE));
  }
  std::fill(in.get(), in.get() + nfft, 0.0);
  for (std::size_t i = 0; i < n; ++i) in[i] = x[i] - m;
  fftw_execute(forward.get());
  for (std::size_t i = 0; i < nfft / 2 + 1; ++i) {
    spec[i][0] = spec[i][0] * spec[i][0] + spec[i][1] * spec[i][1];
    spec[i][1] = 0.0;
  }
  fftw_execute(backward.get());
  std::vector<double> r(max_lag + 1);
  const double scale = 1.0 / (static_cast<double>(nfft) * static_cast<double>(n));
  for (std::size_t l = 0; l <= max_lag; ++l) r[l] = in[l] * scale;
  return r;
}

PowerSpectrum power_spectrum(const TimeSeries& series, std::size_t max_lag, Taper taper) {
  series.validate();
  if (max_lag < 2 || 2 * max_lag >= series.size()) {
    throw InvalidArgument("power_spectrum: need 2 <= max_lag < length/2");
  }
  PowerSpectrum out;
  out.taper = taper;
  out.max_lag = max_lag;
  out.dt = series.dt;
  const auto r = autocorrelation(series.view(), max_lag);
  out.variance = r[0];
  out.freqs.resize(max_lag + 1);
  for (std::size_t i = 0; i <= max_lag; ++i) {
    out.freqs[i] = static_cast<double>(i) / (2.0 * static_cast<double>(max_lag) * series.dt);
  }
  if (r[0] <= 0.0) {
    out.degenerate = true;
    out.power.assign(max_lag + 1, 0.0);
    return out;
  }

  // REDFT00: Y_m = x_0 + (-1)^m x_L + 2 sum_{l=1}^{L-1} x_l cos(pi l m / L).
  const std::size_t len = max_lag + 1;
  auto in = fftw_buffer<double>(len);
  auto y = fftw_buffer<double>(len);
  Plan dct;
  {
    std::lock_guard lock(planner_mutex());
    dct.reset(fftw_plan_r2r_1d(static_cast<int>(len), in.get(), y.get(), FFTW_REDFT00,
                               FFTW_ESTIMATE));
  }
  for (std::size_t l = 0; l < len; ++l) in[l] = taper_weight(taper, l, max_lag) * r[l];
  fftw_execute(dct.get());
  out.power.resize(len);
  for (std::size_t i = 0; i < len; ++i) out.power[i] = std::abs(y[i]) * series.dt;
  return out;
}

std::vector<std::size_t> find_peaks(const PowerSpectrum& s, double threshold_db) {
  std::vector<std::size_t> peaks;
  if (s.degenerate || s.power.size() < 3) return peaks;
  const double top = *std::max_element(s.power.begin() + 1, s.power.end());
  if (!(top > 0.0)) return peaks;
  const double floor = top * std::pow(10.0, -threshold_db / 10.0);
  const std::size_t last = s.power.size() - 1;
  for (std::size_t i = 1; i <= last; ++i) {
    const double p = s.power[i];
    if (p < floor) continue;
    const bool left = p > s.power[i - 1];
    const bool right = i == last || p >= s.power[i + 1];
    if (left && right) peaks.push_back(i);
  }
  return peaks;
}

double dominant_frequency(const PowerSpectrum& s) {
  if (s.degenerate) throw DegenerateSeries("dominant_frequency: degenerate spectrum");
  const auto peaks = find_peaks(s, 300.0);
  if (peaks.empty()) throw DegenerateSeries("dominant_frequency: no spectral peak");
  std::size_t best = peaks.front();
  for (auto i : peaks) {
    if (s.power[i] > s.power[best]) best = i;
  }
  return s.freqs[best];
}

std::size_t mean_period_samples(const PowerSpectrum& s) {
  const double f = dominant_frequency(s);
  return static_cast<std::size_t>(std::ceil(1.0 / (f * s.dt)));
}

}  // namespace kerr
