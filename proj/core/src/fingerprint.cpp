#include "kerr/fingerprint.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <memory>

#include "kerr/error.hpp"
#include "kerr/model.hpp"
#include "kerr/states.hpp"

namespace kerr {

Fingerprint sha256(std::string_view bytes) {
  Fingerprint out{};
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != out.size()) {
    throw Error("sha256: digest failed");
  }
  return out;
}

Fingerprint fingerprint(const ModelParams& model, const StateSpec& state) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "kerr-model omega=%.17g omega0=%.17g gamma=%.17g g=%.17g; "
                "state kind=%s alpha=(%.17g,%.17g) m=%u",
                model.omega, model.omega0, model.gamma, model.g,
                state.kind == StateKind::Coherent ? "CS" : "PACS",
                state.alpha.real(), state.alpha.imag(), state.m);
  return sha256(buf);
}

std::string to_hex(const Fingerprint& fp) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (auto b : fp) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xF]);
  }
  return s;
}

Fingerprint fingerprint_from_hex(std::string_view hex) {
  if (hex.size() != 64) throw FormatError("fingerprint: expected 64 hex digits");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw FormatError("fingerprint: bad hex digit");
  };
  Fingerprint fp{};
  for (std::size_t i = 0; i < fp.size(); ++i) {
    fp[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return fp;
}

}  // namespace kerr
