#pragma once

// Fixed-size key for dedup tables: 4 bits per letter (letter + 1, zero marks
// the end), so words of length <= 32 over rank <= 7 fit in 128 bits.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "mls/error.hpp"
#include "mls/words.hpp"

namespace mls {

class PackedWord {
 public:
  static constexpr std::size_t kMaxLength = 32;
  static constexpr int kMaxRank = 7;

  PackedWord() = default;

  static PackedWord pack(std::span<const Letter> letters) {
    if (letters.size() > kMaxLength) {
      throw Error(ErrorKind::BudgetExceeded, "word longer than packed key capacity (32)");
    }
    PackedWord p;
    for (std::size_t i = 0; i < letters.size(); ++i) p.set(i, letters[i]);
    return p;
  }
  static PackedWord pack(const ReducedWord& w) { return pack(w.letters()); }

  std::size_t length() const noexcept {
    std::size_t n = 0;
    while (n < kMaxLength && nibble(n) != 0) ++n;
    return n;
  }

  Letter at(std::size_t i) const noexcept { return static_cast<Letter>(nibble(i) - 1); }

  ReducedWord unpack() const {
    std::vector<Letter> out;
    for (std::size_t i = 0; i < kMaxLength && nibble(i) != 0; ++i) out.push_back(at(i));
    return ReducedWord::from_reduced(std::move(out));
  }

  void set(std::size_t i, Letter l) noexcept {
    const std::size_t w = i / 16;
    const std::size_t shift = 4 * (i % 16);
    bits_[w] = (bits_[w] & ~(std::uint64_t{0xF} << shift)) |
               (std::uint64_t{static_cast<std::uint64_t>(l) + 1} << shift);
  }
  void truncate(std::size_t n) noexcept {
    for (std::size_t i = n; i < kMaxLength; ++i) {
      const std::size_t w = i / 16;
      bits_[w] &= ~(std::uint64_t{0xF} << (4 * (i % 16)));
    }
  }

  std::uint64_t hash() const noexcept {
    std::uint64_t h = bits_[0] * 0x9E3779B97F4A7C15ull;
    h ^= (bits_[1] + 0x632BE59BD9B4E019ull) * 0xC2B2AE3D27D4EB4Full;
    return h ^ (h >> 29);
  }

  friend bool operator==(const PackedWord&, const PackedWord&) = default;

 private:
  unsigned nibble(std::size_t i) const noexcept {
    return static_cast<unsigned>((bits_[i / 16] >> (4 * (i % 16))) & 0xF);
  }
  std::array<std::uint64_t, 2> bits_{0, 0};
};

struct PackedWordHash {
  std::size_t operator()(const PackedWord& p) const noexcept { return static_cast<std::size_t>(p.hash()); }
};

}  // namespace mls
