#include "ppmwords/textstats.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "ppmwords/error.hpp"

namespace ppmwords {
namespace {

void check_word(std::span<const Symbol> w, int alphabet_size) {
  for (Symbol s : w) {
    if (s < 1 || s > static_cast<Symbol>(alphabet_size)) {
      fail(ErrorKind::InvalidInput, "query symbol " + std::to_string(s) + " outside 1.." +
                                        std::to_string(alphabet_size));
    }
  }
}

std::vector<std::uint32_t> build_suffix_array(std::span<const Symbol> s) {
  const std::size_t n = s.size();
  std::vector<std::uint32_t> sa(n), rank(n), tmp(n);
  if (n == 0) return sa;

  // Initial ranks: dense ids of the symbols.
  std::vector<Symbol> sorted(s.begin(), s.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (std::size_t i = 0; i < n; ++i) {
    rank[i] = static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), s[i]) -
                                         sorted.begin());
  }
  std::size_t classes = sorted.size();

  std::vector<std::uint32_t> count(std::max(classes, n) + 1);
  for (std::size_t i = 0; i < n; ++i) ++count[rank[i] + 1];
  for (std::size_t c = 1; c < count.size(); ++c) count[c] += count[c - 1];
  for (std::size_t i = 0; i < n; ++i) sa[count[rank[i]]++] = static_cast<std::uint32_t>(i);

  for (std::size_t k = 1; classes < n; k <<= 1) {
    // Order by second key: suffixes without a second half come first.
    std::size_t p = 0;
    for (std::size_t i = n - std::min(k, n); i < n; ++i) tmp[p++] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (sa[j] >= k) tmp[p++] = static_cast<std::uint32_t>(sa[j] - k);
    }
    // Stable counting sort by first key.
    std::fill(count.begin(), count.begin() + static_cast<std::ptrdiff_t>(classes) + 1, 0u);
    for (std::size_t i = 0; i < n; ++i) ++count[rank[i] + 1];
    for (std::size_t c = 1; c <= classes; ++c) count[c] += count[c - 1];
    for (std::size_t i = 0; i < n; ++i) sa[count[rank[tmp[i]]]++] = tmp[i];

    auto second = [&](std::uint32_t i) -> std::int64_t {
      return i + k < n ? static_cast<std::int64_t>(rank[i + k]) : -1;
    };
    tmp[sa[0]] = 0;
    classes = 1;
    for (std::size_t i = 1; i < n; ++i) {
      const std::uint32_t a = sa[i - 1];
      const std::uint32_t b = sa[i];
      if (rank[a] != rank[b] || second(a) != second(b)) ++classes;
      tmp[b] = static_cast<std::uint32_t>(classes - 1);
    }
    rank.swap(tmp);
  }
  return sa;
}

std::vector<std::uint32_t> build_lcp(std::span<const Symbol> s, std::span<const std::uint32_t> sa) {
  const std::size_t n = s.size();
  std::vector<std::uint32_t> lcp(n, 0), rank(n);
  for (std::size_t r = 0; r < n; ++r) rank[sa[r]] = static_cast<std::uint32_t>(r);
  std::size_t h = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (rank[i] == 0) {
      h = 0;
      continue;
    }
    const std::size_t j = sa[rank[i] - 1];
    while (i + h < n && j + h < n && s[i + h] == s[j + h]) ++h;
    lcp[rank[i]] = static_cast<std::uint32_t>(h);
    if (h > 0) --h;
  }
  return lcp;
}

}  // namespace

std::size_t ngram_count(std::span<const Symbol> w, std::span<const Symbol> x) {
  const std::size_t k = w.size();
  const std::size_t n = x.size();
  if (k > n) return 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + k <= n; ++i) {
    if (std::equal(w.begin(), w.end(), x.begin() + static_cast<std::ptrdiff_t>(i))) ++count;
  }
  return count;
}

std::size_t ngram_count(std::span<const Symbol> w, const Text& x) {
  check_word(w, x.alphabet_size());
  return ngram_count(w, x.symbols());
}

std::size_t ngram_count_in_prefix(std::span<const Symbol> w, const Text& x, std::ptrdiff_t m) {
  check_word(w, x.alphabet_size());
  if (m < 0) return 0;
  const auto len = std::min(static_cast<std::size_t>(m), x.size());
  return ngram_count(w, x.symbols().first(len));
}

SuffixIndex::SuffixIndex(std::span<const Symbol> s)
    : text_(s.begin(), s.end()), sa_(build_suffix_array(s)), lcp_(build_lcp(s, sa_)) {
  if (!lcp_.empty()) max_lcp_ = *std::max_element(lcp_.begin(), lcp_.end());
}

int SuffixIndex::compare_prefix(std::uint32_t suffix, std::span<const Symbol> w) const {
  const std::size_t avail = text_.size() - suffix;
  const std::size_t len = std::min(avail, w.size());
  for (std::size_t i = 0; i < len; ++i) {
    if (text_[suffix + i] != w[i]) return text_[suffix + i] < w[i] ? -1 : 1;
  }
  return avail < w.size() ? -1 : 0;
}

std::size_t SuffixIndex::count(std::span<const Symbol> w) const {
  if (w.empty()) return text_.size() + 1;
  auto lo = std::partition_point(sa_.begin(), sa_.end(),
                                 [&](std::uint32_t i) { return compare_prefix(i, w) < 0; });
  auto hi = std::partition_point(lo, sa_.end(),
                                 [&](std::uint32_t i) { return compare_prefix(i, w) == 0; });
  return static_cast<std::size_t>(hi - lo);
}

EndingIndex::EndingIndex(const Text& x) {
  const std::size_t n = x.size();
  std::vector<Symbol> reversed(x.symbols().rbegin(), x.symbols().rend());
  SuffixIndex index(reversed);
  ending_.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    ending_[r] = static_cast<std::uint32_t>(n - index.suffix_array()[r]);
  }
  lcp_.assign(index.lcp().begin(), index.lcp().end());

  // For each rank, the nearest rank on either side with a smaller ending
  // position has the longest common suffix among all earlier positions.
  previous_.assign(n + 1, 0);
  struct Entry {
    std::uint32_t pos;
    std::uint32_t lcp_to_below;
  };
  std::vector<Entry> stack;
  for (int pass = 0; pass < 2; ++pass) {
    stack.clear();
    for (std::size_t step = 0; step < n; ++step) {
      const std::size_t r = pass == 0 ? step : n - 1 - step;
      // LCP between r and the rank visited just before it.
      std::uint32_t cur = 0;
      if (step > 0) cur = pass == 0 ? lcp_[r] : lcp_[r + 1];
      while (!stack.empty() && stack.back().pos > ending_[r]) {
        cur = std::min(cur, stack.back().lcp_to_below);
        stack.pop_back();
      }
      if (stack.empty()) cur = 0;
      previous_[ending_[r]] = std::max(previous_[ending_[r]], cur);
      stack.push_back({ending_[r], cur});
    }
  }

  running_max_.assign(n + 1, 0);
  for (std::size_t p = 1; p <= n; ++p) running_max_[p] = std::max(running_max_[p - 1], previous_[p]);
}

std::uint32_t EndingIndex::maximal_repetition(std::size_t p) const {
  return running_max_[std::min(p, running_max_.size() - 1)];
}

std::size_t EndingIndex::subword_complexity(std::size_t m, std::size_t p) const {
  p = std::min(p, size());
  if (m == 0) return 1;
  if (m > p) return 0;
  std::size_t distinct = 0;
  for (std::size_t e = m; e <= p; ++e) {
    if (previous_[e] < m) ++distinct;
  }
  return distinct;
}

std::vector<Word> subword_set(std::size_t m, const Text& x) {
  if (m == 0) return {Word{}};
  const std::size_t n = x.size();
  if (m > n) return {};
  SuffixIndex index(x.symbols());
  std::vector<Word> out;
  const auto sa = index.suffix_array();
  const auto lcp = index.lcp();
  for (std::size_t r = 0; r < n; ++r) {
    if (n - sa[r] < m) continue;
    if (r > 0 && lcp[r] >= m) continue;
    auto first = x.symbols().begin() + sa[r];
    out.emplace_back(first, first + static_cast<std::ptrdiff_t>(m));
  }
  return out;
}

std::size_t subword_complexity(std::size_t m, const Text& x) {
  if (m == 0) return 1;
  const std::size_t n = x.size();
  if (m > n) return 0;
  SuffixIndex index(x.symbols());
  std::size_t distinct = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (n - index.suffix_array()[r] >= m && (r == 0 || index.lcp()[r] < m)) ++distinct;
  }
  return distinct;
}

std::size_t maximal_repetition(const Text& x) {
  if (x.size() <= 1) return 0;
  return SuffixIndex(x.symbols()).max_lcp();
}

}  // namespace ppmwords
