#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace bpguard {

// FIPS 180-1 SHA-1 over a byte string, returned as 40 lowercase hex chars.
class Sha1 {
 public:
  Sha1() { reset(); }

  void reset() {
    h_ = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};
    length_ = 0;
    buffered_ = 0;
  }

  Sha1& update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      block_[buffered_++] = c;
      if (buffered_ == 64) {
        compress();
        buffered_ = 0;
      }
    }
    length_ += bytes.size();
    return *this;
  }

  std::string hex_digest() {
    const std::uint64_t bit_length = length_ * 8;
    block_[buffered_++] = 0x80;
    if (buffered_ > 56) {
      while (buffered_ < 64) block_[buffered_++] = 0;
      compress();
      buffered_ = 0;
    }
    while (buffered_ < 56) block_[buffered_++] = 0;
    for (int i = 7; i >= 0; --i) block_[buffered_++] = static_cast<unsigned char>(bit_length >> (8 * i));
    compress();

    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(40);
    for (std::uint32_t word : h_)
      for (int shift = 28; shift >= 0; shift -= 4) out.push_back(kHex[(word >> shift) & 0xF]);
    reset();
    return out;
  }

 private:
  static std::uint32_t rotl(std::uint32_t x, int n) { return (x << n) | (x >> (32 - n)); }

  void compress() {
    std::array<std::uint32_t, 80> w{};
    for (int i = 0; i < 16; ++i)
      w[i] = (std::uint32_t{block_[4 * i]} << 24) | (std::uint32_t{block_[4 * i + 1]} << 16) |
             (std::uint32_t{block_[4 * i + 2]} << 8) | std::uint32_t{block_[4 * i + 3]};
    for (int i = 16; i < 80; ++i) w[i] = rotl(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);

    std::uint32_t a = h_[0], b = h_[1], c = h_[2], d = h_[3], e = h_[4];
    for (int i = 0; i < 80; ++i) {
      std::uint32_t f, k;
      if (i < 20) {
        f = (b & c) | (~b & d);
        k = 0x5A827999u;
      } else if (i < 40) {
        f = b ^ c ^ d;
        k = 0x6ED9EBA1u;
      } else if (i < 60) {
        f = (b & c) | (b & d) | (c & d);
        k = 0x8F1BBCDCu;
      } else {
        f = b ^ c ^ d;
        k = 0xCA62C1D6u;
      }
      const std::uint32_t temp = rotl(a, 5) + f + e + k + w[i];
      e = d;
      d = c;
      c = rotl(b, 30);
      b = a;
      a = temp;
    }
    h_[0] += a;
    h_[1] += b;
    h_[2] += c;
    h_[3] += d;
    h_[4] += e;
  }

  std::array<std::uint32_t, 5> h_{};
  std::array<unsigned char, 64> block_{};
  std::uint64_t length_ = 0;
  std::size_t buffered_ = 0;
};

inline std::string sha1_hex(std::string_view bytes) { return Sha1{}.update(bytes).hex_digest(); }

}  // namespace bpguard
