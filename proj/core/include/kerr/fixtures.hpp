#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "kerr/time_series.hpp"

namespace kerr {

/// Synthetic test signals.
/// sin(2 pi f t); the default is sin(t), whose period is not a whole number of samples.
TimeSeries sine_fixture(std::size_t length, double dt = 0.1,
                        double frequency = 0.15915494309189535);
/// sin(2 pi f t) + 0.5 sin(2 pi phi f t), phi the golden ratio.
TimeSeries two_tone_fixture(std::size_t length, double dt = 0.1,
                            double frequency = 0.15915494309189535);
/// x_{t+1} = 4 x_t (1 - x_t) with dt = 1.
TimeSeries logistic_fixture(std::size_t length, double x0 = 0.3);
/// iid uniform samples on [0, 1).
TimeSeries iid_fixture(std::size_t length, std::uint64_t seed = 1);

/// Dispatch on "sine", "two-tone", "logistic" or "iid".
TimeSeries make_fixture(const std::string& kind, std::size_t length, std::uint64_t seed = 1);

}  // namespace kerr
