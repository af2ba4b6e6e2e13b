#include "kerr/fixtures.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "kerr/error.hpp"

namespace kerr {

TimeSeries sine_fixture(std::size_t length, double dt, double frequency) {
  TimeSeries s;
  s.dt = dt;
  s.label = "sine";
  s.values.resize(length);
  for (std::size_t j = 0; j < length; ++j) {
    s.values[j] = std::sin(2.0 * std::numbers::pi * frequency * static_cast<double>(j) * dt);
  }
  return s;
}

TimeSeries two_tone_fixture(std::size_t length, double dt, double frequency) {
  TimeSeries s;
  s.dt = dt;
  s.label = "two-tone";
  s.values.resize(length);
  const double w1 = 2.0 * std::numbers::pi * frequency;
  const double w2 = w1 * std::numbers::phi;
  for (std::size_t j = 0; j < length; ++j) {
    const double t = static_cast<double>(j) * dt;
    s.values[j] = std::sin(w1 * t) + 0.5 * std::sin(w2 * t);
  }
  return s;
}

TimeSeries logistic_fixture(std::size_t length, double x0) {
  if (!(x0 > 0.0 && x0 < 1.0)) throw InvalidArgument("logistic seed must lie in (0, 1)");
  TimeSeries s;
  s.dt = 1.0;
  s.label = "logistic";
  s.values.resize(length);
  double x = x0;
  for (std::size_t j = 0; j < length; ++j) {
    s.values[j] = x;
    x = 4.0 * x * (1.0 - x);
  }
  return s;
}

TimeSeries iid_fixture(std::size_t length, std::uint64_t seed) {
  TimeSeries s;
  s.dt = 1.0;
  s.label = "iid";
  s.values.resize(length);
  std::mt19937_64 rng(seed);
  // 53 random mantissa bits; avoids implementation-defined distributions.
  for (auto& v : s.values) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return s;
}

TimeSeries make_fixture(const std::string& kind, std::size_t length, std::uint64_t seed) {
  if (kind == "sine") return sine_fixture(length);
  if (kind == "two-tone") return two_tone_fixture(length);
  if (kind == "logistic") return logistic_fixture(length);
  if (kind == "iid") return iid_fixture(length, seed);
  throw InvalidArgument("unknown fixture '" + kind + "' (sine, two-tone, logistic, iid)");
}

}  // namespace kerr
