#include "ppmwords/text.hpp"

#include <algorithm>
#include <string>

#include "ppmwords/error.hpp"

namespace ppmwords {

Alphabet Alphabet::from_tokens(std::span<const std::uint32_t> tokens) {
  Alphabet a;
  a.tokens_.assign(tokens.begin(), tokens.end());
  std::sort(a.tokens_.begin(), a.tokens_.end());
  a.tokens_.erase(std::unique(a.tokens_.begin(), a.tokens_.end()), a.tokens_.end());
  return a;
}

Alphabet Alphabet::identity(int size) {
  if (size < 1) fail(ErrorKind::InvalidParameter, "alphabet size must be positive");
  Alphabet a;
  a.tokens_.resize(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) a.tokens_[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(i + 1);
  return a;
}

std::optional<Symbol> Alphabet::id(std::uint32_t token) const {
  auto it = std::lower_bound(tokens_.begin(), tokens_.end(), token);
  if (it == tokens_.end() || *it != token) return std::nullopt;
  return static_cast<Symbol>(it - tokens_.begin() + 1);
}

std::uint32_t Alphabet::token(Symbol id) const {
  if (id < 1 || id > tokens_.size()) {
    fail(ErrorKind::InvalidInput, "symbol id " + std::to_string(id) + " outside alphabet");
  }
  return tokens_[id - 1];
}

Alphabet Alphabet::merge(const Alphabet& a, const Alphabet& b) {
  std::vector<std::uint32_t> all(a.tokens_);
  all.insert(all.end(), b.tokens_.begin(), b.tokens_.end());
  return from_tokens(all);
}

Text::Text(std::vector<Symbol> symbols, int alphabet_size)
    : symbols_(std::move(symbols)), alphabet_size_(alphabet_size) {
  if (alphabet_size_ < 1) fail(ErrorKind::InvalidInput, "alphabet size must be positive");
  const auto d = static_cast<Symbol>(alphabet_size_);
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] < 1 || symbols_[i] > d) {
      fail(ErrorKind::InvalidInput, "symbol " + std::to_string(symbols_[i]) + " at position " +
                                        std::to_string(i + 1) + " outside 1.." +
                                        std::to_string(alphabet_size_));
    }
  }
}

Text Text::prefix(std::size_t length) const {
  length = std::min(length, symbols_.size());
  Text t;
  t.symbols_.assign(symbols_.begin(), symbols_.begin() + static_cast<std::ptrdiff_t>(length));
  t.alphabet_size_ = alphabet_size_;
  return t;
}

Text operator+(const Text& x, const Text& y) {
  if (x.alphabet_size_ != y.alphabet_size_) {
    fail(ErrorKind::InvalidInput, "cannot concatenate texts over different alphabets");
  }
  Text t;
  t.alphabet_size_ = x.alphabet_size_;
  t.symbols_.reserve(x.size() + y.size());
  t.symbols_.insert(t.symbols_.end(), x.symbols_.begin(), x.symbols_.end());
  t.symbols_.insert(t.symbols_.end(), y.symbols_.begin(), y.symbols_.end());
  return t;
}

Text letters(std::string_view s, int alphabet_size) {
  std::vector<Symbol> v;
  v.reserve(s.size());
  for (char c : s) v.push_back(static_cast<Symbol>(c - 'a' + 1));
  return Text(std::move(v), alphabet_size);
}

}  // namespace ppmwords
