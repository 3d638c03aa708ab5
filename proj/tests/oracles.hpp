#pragma once

// Brute-force reference computations used by the tests. Nothing here calls
// into the optimized code paths it is compared against.

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "ppmwords/text.hpp"

namespace oracle {

using ppmwords::Symbol;
using ppmwords::Text;
using ppmwords::Word;

inline Text random_text(std::mt19937_64& rng, std::size_t n, int d) {
  std::uniform_int_distribution<int> sym(1, d);
  std::vector<Symbol> v(n);
  for (auto& s : v) s = static_cast<Symbol>(sym(rng));
  return Text(std::move(v), d);
}

/// Text with long repeats: random blocks copied from earlier positions.
inline Text repetitive_text(std::mt19937_64& rng, std::size_t n, int d) {
  std::uniform_int_distribution<int> sym(1, d);
  std::vector<Symbol> v;
  while (v.size() < n) {
    if (v.size() > 4 && rng() % 2 == 0) {
      std::size_t from = rng() % v.size();
      std::size_t len = 1 + rng() % 12;
      for (std::size_t j = 0; j < len && v.size() < n; ++j) v.push_back(v[from + j]);
    } else {
      v.push_back(static_cast<Symbol>(sym(rng)));
    }
  }
  return Text(std::move(v), d);
}

/// All D^n strings of length n, in lexicographic order.
inline std::vector<Text> all_strings(std::size_t n, int d) {
  std::vector<Text> out;
  std::vector<Symbol> v(n, 1);
  while (true) {
    out.emplace_back(v, d);
    std::size_t j = n;
    while (j > 0 && v[j - 1] == static_cast<Symbol>(d)) v[--j] = 1;
    if (j == 0) break;
    ++v[j - 1];
  }
  return out;
}

inline std::size_t count(const std::vector<Symbol>& w, const std::vector<Symbol>& x) {
  std::size_t c = 0;
  if (w.size() > x.size()) return 0;
  for (std::size_t i = 0; i + w.size() <= x.size(); ++i) {
    bool eq = true;
    for (std::size_t j = 0; j < w.size(); ++j) eq = eq && x[i + j] == w[j];
    c += eq;
  }
  return c;
}

inline std::set<Word> distinct(std::size_t m, const Text& x) {
  std::set<Word> out;
  auto s = x.symbols();
  if (m > s.size()) return out;
  for (std::size_t i = 0; i + m <= s.size(); ++i) out.emplace(s.begin() + i, s.begin() + i + m);
  return out;
}

inline std::size_t maximal_repetition(const Text& x) {
  const auto s = x.symbols();
  for (std::size_t k = s.size(); k >= 1; --k) {
    std::set<Word> seen;
    for (std::size_t i = 0; i + k <= s.size(); ++i) {
      if (!seen.emplace(s.begin() + i, s.begin() + i + k).second) return k;
    }
  }
  return 0;
}

/// PPM_k conditional probability straight from the definition.
inline double cond(int k, std::size_t i, const std::vector<Symbol>& x, int d) {
  if (k == -1 || static_cast<long>(i) <= k) return 1.0 / d;
  std::vector<Symbol> ctx(x.begin() + (i - 1 - k), x.begin() + (i - 1));
  std::vector<Symbol> gram(x.begin() + (i - 1 - k), x.begin() + i);
  std::vector<Symbol> before_i(x.begin(), x.begin() + (i - 1));
  double num = static_cast<double>(count(gram, before_i)) + 1.0;
  double den = d;
  if (i >= 2) {
    std::vector<Symbol> before_ctx(x.begin(), x.begin() + (i - 2));
    den += static_cast<double>(count(ctx, before_ctx));
  }
  return num / den;
}

/// -log PPM_k(x) as a direct sum of conditional log-probabilities.
inline double codelength(int k, const Text& t) {
  std::vector<Symbol> x(t.symbols().begin(), t.symbols().end());
  double h = 0;
  for (std::size_t i = 1; i <= x.size(); ++i) h -= std::log(cond(k, i, x, t.alphabet_size()));
  return h;
}

}  // namespace oracle
