#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ppmwords/text.hpp"

namespace ppmwords {

/// Number of (possibly overlapping) occurrences of `w` in `x`. The empty word
/// occurs x.size() + 1 times; a word longer than `x` occurs 0 times.
std::size_t ngram_count(std::span<const Symbol> w, std::span<const Symbol> x);

/// Same, validating `w` against the alphabet of `x`.
std::size_t ngram_count(std::span<const Symbol> w, const Text& x);

/// Occurrences of `w` in the pseudo-prefix x_1^m. m may be negative, in which
/// case the count is 0 (also for the empty word); m is clamped to x.size().
std::size_t ngram_count_in_prefix(std::span<const Symbol> w, const Text& x, std::ptrdiff_t m);

/// Suffix array with LCP array, built by prefix doubling with radix passes
/// (O(n log n)) and Kasai's algorithm.
///
/// lcp()[r] is the length of the longest common prefix of the suffixes with
/// ranks r - 1 and r; lcp()[0] == 0.
class SuffixIndex {
 public:
  explicit SuffixIndex(std::span<const Symbol> s);

  std::size_t size() const noexcept { return sa_.size(); }
  std::span<const std::uint32_t> suffix_array() const noexcept { return sa_; }
  std::span<const std::uint32_t> lcp() const noexcept { return lcp_; }

  /// Number of occurrences of `w`, by binary search over the suffix array.
  std::size_t count(std::span<const Symbol> w) const;

  std::uint32_t max_lcp() const noexcept { return max_lcp_; }

 private:
  int compare_prefix(std::uint32_t suffix, std::span<const Symbol> w) const;

  std::vector<Symbol> text_;
  std::vector<std::uint32_t> sa_;
  std::vector<std::uint32_t> lcp_;
  std::uint32_t max_lcp_ = 0;
};

/// Suffix index of the reversed text. Sorting reversed suffixes groups equal
/// k-grams of the original text by their ending position, which is what the
/// incremental PPM counts need.
///
/// Positions are 1-based ending positions p in 1..n: the gram ending at p is
/// x_{p-k+1}^p.
class EndingIndex {
 public:
  explicit EndingIndex(const Text& x);

  std::size_t size() const noexcept { return ending_.size(); }

  /// Ending positions in sorted order of the reversed suffixes.
  std::span<const std::uint32_t> order() const noexcept { return ending_; }

  /// lcp()[r]: longest common suffix of the prefixes ending at order()[r-1]
  /// and order()[r].
  std::span<const std::uint32_t> lcp() const noexcept { return lcp_; }

  /// previous_repeat()[p] for p in 0..n: length of the longest suffix of
  /// x_1^p that also ends at some earlier position. Entry 0 is 0.
  std::span<const std::uint32_t> previous_repeat() const noexcept { return previous_; }

  /// Maximal repetition of the prefix x_1^p, p in 0..n.
  std::uint32_t maximal_repetition(std::size_t p) const;

  /// Cardinality of V(m | x_1^p): 1 for m == 0, 0 for m > p.
  std::size_t subword_complexity(std::size_t m, std::size_t p) const;

 private:
  std::vector<std::uint32_t> ending_;
  std::vector<std::uint32_t> lcp_;
  std::vector<std::uint32_t> previous_;
  std::vector<std::uint32_t> running_max_;
};

/// V(m | x): distinct length-m substrings in lexicographic order. V(0|x) = {ε}.
std::vector<Word> subword_set(std::size_t m, const Text& x);

/// |V(m | x)|.
std::size_t subword_complexity(std::size_t m, const Text& x);

/// L(x): largest k such that some k-gram occurs at least twice; 0 for n <= 1.
std::size_t maximal_repetition(const Text& x);

}  // namespace ppmwords
