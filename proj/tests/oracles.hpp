#pragma once

// Brute-force reference computations that share no code with the library
// beyond word multiplication.

#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "mls/words.hpp"

namespace oracle {

/// Shortlex-ordered words of length exactly n over rank letters pairs.
inline std::vector<mls::ReducedWord> words_of_length(int rank, int n) {
  std::vector<mls::ReducedWord> out{mls::ReducedWord{}};
  for (int i = 0; i < n; ++i) {
    std::vector<mls::ReducedWord> next;
    for (const auto& w : out) {
      for (int l = 0; l < 2 * rank; ++l) {
        const auto letter = static_cast<mls::Letter>(l);
        if (!w.empty() && w.back() == mls::inverse(letter)) continue;
        std::vector<mls::Letter> v(w.letters().begin(), w.letters().end());
        v.push_back(letter);
        next.push_back(mls::ReducedWord::from_reduced(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

/// Cayley-graph BFS: element -> distance for all elements within radius.
inline std::map<mls::ReducedWord, int> cayley_ball(const std::vector<mls::ReducedWord>& gens, int radius) {
  std::set<mls::ReducedWord> S(gens.begin(), gens.end());
  for (const auto& g : gens) S.insert(g.inverse());
  S.erase(mls::ReducedWord{});
  std::map<mls::ReducedWord, int> dist{{mls::ReducedWord{}, 0}};
  std::queue<mls::ReducedWord> q;
  q.push({});
  while (!q.empty()) {
    const auto x = q.front();
    q.pop();
    const int d = dist[x];
    if (d == radius) continue;
    for (const auto& s : S) {
      const auto y = mls::multiply(x, s);
      if (dist.emplace(y, d + 1).second) q.push(y);
    }
  }
  return dist;
}

/// Smallest rotation by direct comparison of all rotations.
inline mls::ReducedWord min_rotation(const mls::ReducedWord& w) {
  std::vector<mls::Letter> best(w.letters().begin(), w.letters().end());
  std::vector<mls::Letter> cur = best;
  for (std::size_t i = 1; i < cur.size(); ++i) {
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
    if (cur < best) best = cur;
  }
  return mls::ReducedWord::from_reduced(best);
}

inline bool cyclically_reduced(const mls::ReducedWord& w) {
  return w.length() < 2 || w.front() != mls::inverse(w.back());
}

}  // namespace oracle
