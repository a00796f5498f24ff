#include "qsuggest/fingerprint.hpp"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <cstdio>
#include <stdexcept>

namespace qsuggest {

struct Sha256::State {
  EVP_MD_CTX* ctx = nullptr;
};

Sha256::Sha256() : state_(std::make_unique<State>()) {
  state_->ctx = EVP_MD_CTX_new();
  if (state_->ctx == nullptr || EVP_DigestInit_ex(state_->ctx, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: digest initialisation failed");
  }
}

Sha256::~Sha256() {
  if (state_ && state_->ctx) EVP_MD_CTX_free(state_->ctx);
}

Sha256& Sha256::update(std::string_view bytes) {
  EVP_DigestUpdate(state_->ctx, bytes.data(), bytes.size());
  return *this;
}

Sha256& Sha256::field(std::uint64_t value) {
  std::array<char, 8> le{};
  for (std::size_t i = 0; i < le.size(); ++i) le[i] = static_cast<char>((value >> (8 * i)) & 0xffu);
  return update(std::string_view(le.data(), le.size()));
}

Sha256& Sha256::field(std::string_view value) {
  field(static_cast<std::uint64_t>(value.size()));
  return update(value);
}

Sha256& Sha256::field(double value) { return field(std::bit_cast<std::uint64_t>(value)); }

Sha256& Sha256::field(std::span<const double> values) {
  field(static_cast<std::uint64_t>(values.size()));
  for (double v : values) field(v);
  return *this;
}

std::string Sha256::hex_digest() {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(state_->ctx, digest.data(), &len);
  std::string out;
  out.reserve(len * 2);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    out += buf;
  }
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  Sha256 h;
  h.update(bytes);
  return h.hex_digest();
}

}  // namespace qsuggest
