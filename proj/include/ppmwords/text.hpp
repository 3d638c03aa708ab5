#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ppmwords {

/// Symbol identifier; valid values are 1..D for an alphabet of size D.
using Symbol = std::uint32_t;

/// A finite symbol string, e.g. an n-gram or a vocabulary entry.
using Word = std::vector<Symbol>;

/// Injective map from raw tokens (byte values or code points) to ids 1..D.
/// Ids are assigned in increasing token order.
class Alphabet {
 public:
  Alphabet() = default;

  /// Builds the alphabet of the distinct tokens in `tokens`.
  static Alphabet from_tokens(std::span<const std::uint32_t> tokens);

  /// Alphabet {1..size} whose tokens are the ids themselves.
  static Alphabet identity(int size);

  int size() const noexcept { return static_cast<int>(tokens_.size()); }

  std::optional<Symbol> id(std::uint32_t token) const;
  std::uint32_t token(Symbol id) const;

  std::span<const std::uint32_t> tokens() const noexcept { return tokens_; }

  /// Union of two alphabets; ids of the result follow token order again.
  static Alphabet merge(const Alphabet& a, const Alphabet& b);

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::uint32_t> tokens_;  // sorted, distinct
};

/// A finite sequence over {1..D}. The empty text is valid.
class Text {
 public:
  Text() = default;

  /// Throws Error(InvalidInput) when a symbol lies outside 1..alphabet_size.
  Text(std::vector<Symbol> symbols, int alphabet_size);

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  int alphabet_size() const noexcept { return alphabet_size_; }

  std::span<const Symbol> symbols() const noexcept { return symbols_; }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }

  /// The first `length` symbols (clamped to size()).
  Text prefix(std::size_t length) const;

  /// Concatenation; alphabet sizes must match.
  friend Text operator+(const Text& x, const Text& y);

  friend bool operator==(const Text&, const Text&) = default;

 private:
  std::vector<Symbol> symbols_;
  int alphabet_size_ = 1;
};

/// Test and example helper: 'a' -> 1, 'b' -> 2, ... over an alphabet of size D.
Text letters(std::string_view s, int alphabet_size);

}  // namespace ppmwords
