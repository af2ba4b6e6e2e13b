#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "kerr/time_series.hpp"

namespace kerr {

/// Binary layout, all little-endian:
///   12-byte magic "KERRSERIES\0\0", u32 version,
///   f64 dt, u64 length, u32 label byte count + UTF-8 label,
///   32-byte params fingerprint, length x f64 samples.
inline constexpr std::uint32_t kSeriesFormatVersion = 1;

std::string encode_series(const TimeSeries& series);
TimeSeries decode_series(const std::string& bytes);

/// Atomic write (temporary file + rename).
void write_series(const std::filesystem::path& path, const TimeSeries& series);
/// Throws FormatError on any layout violation.
TimeSeries read_series(const std::filesystem::path& path);

/// Lossless CSV: metadata as '#' lines, then "t,value" rows with 17
/// significant digits.
std::string series_to_csv(const TimeSeries& series);
TimeSeries series_from_csv(const std::string& text);

}  // namespace kerr
