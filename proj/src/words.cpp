#include <algorithm>
#include "mls/words.hpp"

#include <cctype>

#include "mls/error.hpp"

namespace mls {

Alphabet::Alphabet(int rank) : rank_(rank) {
  if (rank < 2 || rank > 26) {
    throw Error(ErrorKind::InvalidArgument, "rank must lie in [2, 26], got " + std::to_string(rank));
  }
}

char letter_char(Letter l) {
  const char base = is_inverse_letter(l) ? 'A' : 'a';
  return static_cast<char>(base + generator_index(l));
}

Letter parse_letter(char c) {
  if (c >= 'a' && c <= 'z') return generator(c - 'a');
  if (c >= 'A' && c <= 'Z') return inverse(generator(c - 'A'));
  throw Error(ErrorKind::InvalidArgument, std::string("not a letter: '") + c + "'");
}

ReducedWord ReducedWord::reduce(std::span<const Letter> letters) {
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (Letter l : letters) {
    if (!out.empty() && out.back() == mls::inverse(l)) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return ReducedWord(std::move(out));
}

ReducedWord ReducedWord::from_reduced(std::vector<Letter> letters) {
  for (std::size_t i = 1; i < letters.size(); ++i) {
    if (letters[i] == mls::inverse(letters[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "word is not reduced");
    }
  }
  return ReducedWord(std::move(letters));
}

ReducedWord ReducedWord::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (auto& l : out) l = mls::inverse(l);
  return ReducedWord(std::move(out));
}

ReducedWord parse_word(std::string_view text) {
  std::vector<Letter> letters;
  if (text == "1") return {};
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '.') continue;
    letters.push_back(parse_letter(c));
  }
  return ReducedWord::reduce(letters);
}

ReducedWord parse_word(const Alphabet& alphabet, std::string_view text) {
  ReducedWord w = parse_word(text);
  for (Letter l : w.letters()) {
    if (!alphabet.contains(l)) {
      throw Error(ErrorKind::InvalidArgument,
                  "letter '" + std::string(1, letter_char(l)) + "' outside rank " +
                      std::to_string(alphabet.rank()));
    }
  }
  return w;
}

std::string to_string(const ReducedWord& w) {
  if (w.empty()) return "1";
  std::string s;
  s.reserve(w.length());
  for (Letter l : w.letters()) s.push_back(letter_char(l));
  return s;
}

ReducedWord multiply(const ReducedWord& u, const ReducedWord& v) {
  std::vector<Letter> all(u.letters().begin(), u.letters().end());
  all.insert(all.end(), v.letters().begin(), v.letters().end());
  return ReducedWord::reduce(all);
}

ReducedWord power(const ReducedWord& w, int n) {
  const ReducedWord base = n < 0 ? w.inverse() : w;
  std::vector<Letter> all;
  for (int i = 0; i < (n < 0 ? -n : n); ++i) {
    all.insert(all.end(), base.letters().begin(), base.letters().end());
  }
  return ReducedWord::reduce(all);
}

ReducedWord conjugate(const ReducedWord& w, const ReducedWord& g) {
  return multiply(multiply(g, w), g.inverse());
}

bool is_cyclically_reduced(const ReducedWord& w) noexcept {
  return w.length() < 2 || w.front() != inverse(w.back());
}

std::size_t least_rotation(std::span<const Letter> s) {
  // Booth's algorithm over the doubled string.
  const std::size_t n = s.size();
  if (n == 0) return 0;
  std::vector<long> fail(2 * n, -1);
  std::size_t k = 0;
  auto at = [&](std::size_t i) { return s[i % n]; };
  for (std::size_t j = 1; j < 2 * n; ++j) {
    const Letter sj = at(j);
    long i = fail[j - k - 1];
    while (i != -1 && sj != at(k + static_cast<std::size_t>(i) + 1)) {
      if (sj < at(k + static_cast<std::size_t>(i) + 1)) k = j - static_cast<std::size_t>(i) - 1;
      i = fail[static_cast<std::size_t>(i)];
    }
    if (sj != at(k + static_cast<std::size_t>(i) + 1)) {  // i == -1
      if (sj < at(k)) k = j;
      fail[j - k] = -1;
    } else {
      fail[j - k] = i + 1;
    }
  }
  return k % n;
}

ReducedWord canonical(const ReducedWord& cyclically_reduced) {
  const auto s = cyclically_reduced.letters();
  const std::size_t k = least_rotation(s);
  std::vector<Letter> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back(s[(k + i) % s.size()]);
  return ReducedWord::from_reduced(std::move(out));
}

CyclicWord make_cyclic(const ReducedWord& cyclically_reduced) {
  if (!is_cyclically_reduced(cyclically_reduced)) {
    throw Error(ErrorKind::InvalidArgument, "word is not cyclically reduced");
  }
  return CyclicWord(canonical(cyclically_reduced));
}

CyclicReduction cyclic_reduce(const ReducedWord& w) {
  const auto s = w.letters();
  std::size_t lo = 0;
  std::size_t hi = s.size();
  while (hi - lo >= 2 && s[lo] == inverse(s[hi - 1])) {
    ++lo;
    --hi;
  }
  std::vector<Letter> core(s.begin() + static_cast<long>(lo), s.begin() + static_cast<long>(hi));
  std::vector<Letter> conj(s.begin(), s.begin() + static_cast<long>(lo));
  CyclicReduction out;
  out.core = ReducedWord::from_reduced(std::move(core));
  out.conjugator = ReducedWord::from_reduced(std::move(conj));
  out.cls = make_cyclic(out.core);
  return out;
}

std::vector<int> abelianize(const ReducedWord& w, int rank) {
  std::vector<int> v(static_cast<std::size_t>(rank), 0);
  for (Letter l : w.letters()) {
    const int i = generator_index(l);
    if (i >= rank) throw Error(ErrorKind::InvalidArgument, "letter outside rank");
    v[static_cast<std::size_t>(i)] += is_inverse_letter(l) ? -1 : 1;
  }
  return v;
}

namespace {

ReducedWord substitute(const std::vector<ReducedWord>& images, const ReducedWord& w) {
  std::vector<Letter> all;
  for (Letter l : w.letters()) {
    const auto i = static_cast<std::size_t>(generator_index(l));
    if (i >= images.size()) throw Error(ErrorKind::InvalidArgument, "letter outside rank");
    const ReducedWord img = is_inverse_letter(l) ? images[i].inverse() : images[i];
    all.insert(all.end(), img.letters().begin(), img.letters().end());
  }
  return ReducedWord::reduce(all);
}

}  // namespace

Automorphism::Automorphism(std::vector<ReducedWord> images, std::vector<ReducedWord> inverse_images)
    : images_(std::move(images)), inverse_images_(std::move(inverse_images)) {
  if (images_.size() != inverse_images_.size() || images_.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "automorphism needs one image and one inverse image per generator");
  }
  for (int i = 0; i < rank(); ++i) {
    const ReducedWord g = ReducedWord::from_reduced({generator(i)});
    if (substitute(inverse_images_, substitute(images_, g)) != g ||
        substitute(images_, substitute(inverse_images_, g)) != g) {
      throw Error(ErrorKind::InvalidArgument,
                  "inverse images do not invert the automorphism on generator " +
                      std::string(1, letter_char(g[0])));
    }
  }
}

Automorphism Automorphism::identity(int rank) {
  std::vector<ReducedWord> gens;
  for (int i = 0; i < rank; ++i) gens.push_back(ReducedWord::from_reduced({generator(i)}));
  return Automorphism(gens, gens);
}

ReducedWord Automorphism::apply(const ReducedWord& w) const { return substitute(images_, w); }

ReducedWord Automorphism::apply_inverse(const ReducedWord& w) const {
  return substitute(inverse_images_, w);
}

ReducedWord apply_automorphism(const Automorphism& phi, const ReducedWord& w) { return phi.apply(w); }

ReducedWord random_reduced_word(std::mt19937_64& rng, int rank, int length) {
  std::uniform_int_distribution<int> first(0, 2 * rank - 1);
  std::uniform_int_distribution<int> rest(0, 2 * rank - 2);
  std::vector<Letter> w;
  w.reserve(static_cast<std::size_t>(std::max(length, 0)));
  for (int i = 0; i < length; ++i) {
    if (w.empty()) {
      w.push_back(static_cast<Letter>(first(rng)));
    } else {
      // Skip the inverse of the previous letter.
      int l = rest(rng);
      if (l >= mls::inverse(w.back())) ++l;
      w.push_back(static_cast<Letter>(l));
    }
  }
  return ReducedWord::from_reduced(std::move(w));
}

}  // namespace mls
