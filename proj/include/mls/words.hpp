#pragma once

// Free groups F_k: reduced words, conjugacy normal forms, abelianization and
// automorphisms.
//
// Letters are small integers: generator a_i is 2i and its inverse is 2i+1, so
// the total order a_1 < a_1^-1 < a_2 < a_2^-1 < ... is the numeric order and
// inversion is `l ^ 1`. Strings use lowercase for generators and uppercase for
// inverses ("aB" = a b^-1).

#include <compare>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mls {

using Letter = std::uint8_t;

constexpr Letter inverse(Letter l) noexcept { return static_cast<Letter>(l ^ 1u); }
constexpr Letter generator(int i) noexcept { return static_cast<Letter>(2 * i); }
constexpr int generator_index(Letter l) noexcept { return l >> 1; }
constexpr bool is_inverse_letter(Letter l) noexcept { return (l & 1u) != 0; }

/// Rank of the ambient free group. Rank >= 2 keeps the group non-elementary.
class Alphabet {
 public:
  explicit Alphabet(int rank);

  int rank() const noexcept { return rank_; }
  int size() const noexcept { return 2 * rank_; }
  bool contains(Letter l) const noexcept { return l < size(); }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  int rank_;
};

char letter_char(Letter l);
Letter parse_letter(char c);

class ReducedWord {
 public:
  ReducedWord() = default;

  /// Freely reduces an arbitrary letter sequence.
  static ReducedWord reduce(std::span<const Letter> letters);
  /// Adopts a sequence already known to be reduced (checked).
  static ReducedWord from_reduced(std::vector<Letter> letters);

  std::span<const Letter> letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const noexcept { return letters_[i]; }
  Letter front() const noexcept { return letters_.front(); }
  Letter back() const noexcept { return letters_.back(); }

  ReducedWord inverse() const;

  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;
  friend auto operator<=>(const ReducedWord& a, const ReducedWord& b) {
    // Shortlex: shorter words first, then letter order.
    if (auto c = a.length() <=> b.length(); c != 0) return c;
    return a.letters_ <=> b.letters_;
  }

 private:
  explicit ReducedWord(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  std::vector<Letter> letters_;
};

/// Parses a word over {a, A, b, B, ...}; the result is freely reduced.
/// "1" and "" denote the identity.
ReducedWord parse_word(std::string_view text);
ReducedWord parse_word(const Alphabet& alphabet, std::string_view text);
std::string to_string(const ReducedWord& w);

ReducedWord multiply(const ReducedWord& u, const ReducedWord& v);
ReducedWord power(const ReducedWord& w, int n);
ReducedWord conjugate(const ReducedWord& w, const ReducedWord& g);  // g w g^-1

/// Conjugacy class representative: the lexicographically least rotation of a
/// cyclically reduced word. Equality of classes is equality of canonical forms.
class CyclicWord {
 public:
  CyclicWord() = default;

  const ReducedWord& word() const noexcept { return canonical_; }
  std::size_t length() const noexcept { return canonical_.length(); }
  bool is_identity() const noexcept { return canonical_.empty(); }

  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;
  friend auto operator<=>(const CyclicWord&, const CyclicWord&) = default;

 private:
  friend CyclicWord make_cyclic(const ReducedWord& cyclically_reduced);
  explicit CyclicWord(ReducedWord canonical) : canonical_(std::move(canonical)) {}
  ReducedWord canonical_;
};

bool is_cyclically_reduced(const ReducedWord& w) noexcept;

/// Least rotation by Booth's algorithm; input must be cyclically reduced.
ReducedWord canonical(const ReducedWord& cyclically_reduced);
/// Start index of the least rotation (Booth), for any letter sequence.
std::size_t least_rotation(std::span<const Letter> s);

CyclicWord make_cyclic(const ReducedWord& cyclically_reduced);

struct CyclicReduction {
  ReducedWord core;        // cyclically reduced, w = conjugator * core * conjugator^-1
  ReducedWord conjugator;
  CyclicWord cls;          // canonical rotation of core
};

CyclicReduction cyclic_reduce(const ReducedWord& w);
inline CyclicWord conjugacy_class(const ReducedWord& w) { return cyclic_reduce(w).cls; }

std::vector<int> abelianize(const ReducedWord& w, int rank);

/// Automorphism given by generator images together with user-supplied inverse
/// images; construction checks both round trips on every generator.
class Automorphism {
 public:
  Automorphism(std::vector<ReducedWord> images, std::vector<ReducedWord> inverse_images);

  static Automorphism identity(int rank);

  int rank() const noexcept { return static_cast<int>(images_.size()); }
  ReducedWord apply(const ReducedWord& w) const;
  ReducedWord apply_inverse(const ReducedWord& w) const;
  Automorphism inverse() const { return Automorphism(inverse_images_, images_); }

  const std::vector<ReducedWord>& images() const noexcept { return images_; }
  const std::vector<ReducedWord>& inverse_images() const noexcept { return inverse_images_; }

 private:
  std::vector<ReducedWord> images_;
  std::vector<ReducedWord> inverse_images_;
};

ReducedWord apply_automorphism(const Automorphism& phi, const ReducedWord& w);

/// Uniform among reduced words of the given length.
ReducedWord random_reduced_word(std::mt19937_64& rng, int rank, int length);

}  // namespace mls
