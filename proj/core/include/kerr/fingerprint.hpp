#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace kerr {

struct ModelParams;
struct StateSpec;

/// 32-byte SHA-256 digest identifying the parameters a series came from.
using Fingerprint = std::array<std::uint8_t, 32>;

Fingerprint sha256(std::string_view bytes);

/// Digest of a canonical text rendering (17 significant digits) of the
/// model and initial-state parameters.
Fingerprint fingerprint(const ModelParams& model, const StateSpec& state);

std::string to_hex(const Fingerprint& fp);
Fingerprint fingerprint_from_hex(std::string_view hex);

}  // namespace kerr
