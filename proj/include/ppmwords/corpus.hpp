#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ppmwords/text.hpp"

namespace ppmwords {

/// How raw file bytes become tokens. RawBytes maps every byte to a token.
/// UnicodeFold decodes UTF-8 into code points (malformed bytes become
/// U+FFFD) and optionally lowercases and collapses whitespace runs to a
/// single space. Applying a policy to its own output changes nothing.
struct NormalizationPolicy {
  enum class Mode { RawBytes, UnicodeFold };

  Mode mode = Mode::RawBytes;
  bool lowercase = true;
  bool collapse_whitespace = true;

  static NormalizationPolicy raw() { return {}; }
  static NormalizationPolicy fold(bool lowercase = true, bool collapse_whitespace = true) {
    return {Mode::UnicodeFold, lowercase, collapse_whitespace};
  }

  std::vector<std::uint32_t> apply(std::string_view bytes) const;
  std::string name() const;  // "bytes" or "fold[+lower][+ws]"

  nlohmann::json to_json() const;
};

struct Corpus {
  std::string source;
  Text text;
  Alphabet alphabet;
  std::map<std::uint32_t, std::size_t> histogram;  // token -> occurrences
};

Corpus ingest_bytes(std::string_view bytes, const NormalizationPolicy& policy,
                    std::string source = "<memory>");
Corpus ingest(const std::filesystem::path& path, const NormalizationPolicy& policy);

/// Encodes tokens back to bytes: raw bytes verbatim, code points as UTF-8.
std::string encode_tokens(std::span<const std::uint32_t> tokens, const NormalizationPolicy& policy);

/// Powers of two 1, 2, 4, ... not exceeding n (nor 2^j_max when given).
std::vector<std::size_t> dyadic_prefixes(std::size_t n, std::optional<int> j_max = std::nullopt);

/// One analysis point: statistics of a prefix of length n.
struct AnalysisRecord {
  std::string source;
  std::string label = "text";  // "text", "permuted", or a process name
  std::size_t n = 0;
  int alphabet_size = 0;
  std::size_t max_repetition = 0;
  int ppm_order = -1;
  std::size_t vocabulary_size = 0;
  double codelength_nats = 0;
  double codelength_bits = 0;
  bool exact = true;
  std::string fingerprint;
  std::string timestamp;  // ISO 8601 UTC; empty when suppressed

  friend bool operator==(const AnalysisRecord&, const AnalysisRecord&) = default;
};

inline constexpr int kRecordSchemaVersion = 1;
inline constexpr std::string_view kRecordSchemaName = "ppmwords.analysis-record";

/// Hash of the canonical (key-sorted, compact) serialization of `config`,
/// formatted as "fnv1a64:<16 hex digits>".
std::string fingerprint(const nlohmann::json& config);

std::string utc_timestamp();

/// Header line followed by one JSON object per record, each on its own line.
void write_records(std::ostream& out, const std::vector<AnalysisRecord>& records);
void save_records(const std::filesystem::path& path, const std::vector<AnalysisRecord>& records);

/// Inverse of write_records. Rejects other schema versions, truncated or
/// malformed lines (reporting the line number) and records with G > L.
std::vector<AnalysisRecord> read_records(std::istream& in);
std::vector<AnalysisRecord> load_records(const std::filesystem::path& path);

/// Single JSON line for one record, without the trailing newline.
std::string record_line(const AnalysisRecord& record);

inline constexpr std::string_view kRecordCsvHeader =
    "source,label,n,alphabet_size,max_repetition,ppm_order,vocabulary_size,"
    "codelength_nats,codelength_bits,exact,fingerprint";

void write_records_csv(std::ostream& out, const std::vector<AnalysisRecord>& records);

}  // namespace ppmwords
