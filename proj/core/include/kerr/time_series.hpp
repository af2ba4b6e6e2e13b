#pragma once

#include <span>
#include <string>
#include <vector>

#include "kerr/fingerprint.hpp"

namespace kerr {

/// Uniformly sampled scalar signal; sample j sits at t = j * dt.
struct TimeSeries {
  double dt = 1.0;
  std::vector<double> values;
  std::string label;
  Fingerprint params_hash{};

  std::size_t size() const { return values.size(); }
  std::span<const double> view() const { return values; }

  /// Throws InvalidArgument unless dt > 0, size >= 2 and all values finite.
  void validate() const;

  /// Copy without the first `count` samples.
  TimeSeries drop_prefix(std::size_t count) const;
};

}  // namespace kerr
