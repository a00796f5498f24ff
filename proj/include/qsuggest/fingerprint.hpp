#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace qsuggest {

// Incremental SHA-256 used for every content fingerprint. The field helpers
// length-prefix their input so that concatenation is unambiguous.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(std::string_view bytes);
  Sha256& field(std::string_view value);
  Sha256& field(std::uint64_t value);
  // Hashes the IEEE-754 bit pattern, so -0.0 and 0.0 differ.
  Sha256& field(double value);
  Sha256& field(std::span<const double> values);

  // Lowercase hex digest. The hasher cannot be reused afterwards.
  std::string hex_digest();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

std::string sha256_hex(std::string_view bytes);

}  // namespace qsuggest
