#include "kerr/time_series.hpp"

#include <cmath>

#include "kerr/error.hpp"

namespace kerr {

void TimeSeries::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("TimeSeries: dt must be > 0");
  if (values.size() < 2) throw InvalidArgument("TimeSeries: need at least 2 samples");
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("TimeSeries '" + label + "': non-finite sample");
  }
}

TimeSeries TimeSeries::drop_prefix(std::size_t count) const {
  if (count >= values.size()) throw InvalidArgument("drop_prefix: discards the whole series");
  TimeSeries out{dt, {values.begin() + static_cast<std::ptrdiff_t>(count), values.end()},
                 label, params_hash};
  return out;
}

}  // namespace kerr
