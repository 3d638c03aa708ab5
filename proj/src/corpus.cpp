#include "ppmwords/corpus.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>
#include <sstream>

#include "ppmwords/error.hpp"

namespace ppmwords {
namespace {

constexpr std::uint32_t kReplacement = 0xFFFD;

std::vector<std::uint32_t> decode_utf8(std::string_view bytes) {
  std::vector<std::uint32_t> out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  auto byte = [&](std::size_t j) { return static_cast<unsigned char>(bytes[j]); };
  while (i < n) {
    const unsigned char b = byte(i);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    std::uint32_t min = 0;
    if (b < 0x80) {
      out.push_back(b);
      ++i;
      continue;
    } else if ((b & 0xE0) == 0xC0) {
      len = 2, cp = b & 0x1F, min = 0x80;
    } else if ((b & 0xF0) == 0xE0) {
      len = 3, cp = b & 0x0F, min = 0x800;
    } else if ((b & 0xF8) == 0xF0) {
      len = 4, cp = b & 0x07, min = 0x10000;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    bool ok = i + len <= n;
    for (std::size_t j = 1; ok && j < len; ++j) {
      ok = (byte(i + j) & 0xC0) == 0x80;
      if (ok) cp = (cp << 6) | (byte(i + j) & 0x3F);
    }
    if (!ok || cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Simple case folding for Basic Latin, Latin-1, Greek and Cyrillic capitals.
std::uint32_t to_lower(std::uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 32;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 32;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 80;
  return cp;
}

bool is_space(std::uint32_t cp) {
  switch (cp) {
    case ' ': case '\t': case '\n': case '\v': case '\f': case '\r':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::uint32_t> NormalizationPolicy::apply(std::string_view bytes) const {
  if (mode == Mode::RawBytes) {
    std::vector<std::uint32_t> out(bytes.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) out[i] = static_cast<unsigned char>(bytes[i]);
    return out;
  }
  std::vector<std::uint32_t> cps = decode_utf8(bytes);
  std::vector<std::uint32_t> out;
  out.reserve(cps.size());
  for (std::uint32_t cp : cps) {
    if (collapse_whitespace && is_space(cp)) {
      if (out.empty() || out.back() != ' ') out.push_back(' ');
      continue;
    }
    out.push_back(lowercase ? to_lower(cp) : cp);
  }
  return out;
}

std::string NormalizationPolicy::name() const {
  if (mode == Mode::RawBytes) return "bytes";
  std::string s = "fold";
  if (lowercase) s += "+lower";
  if (collapse_whitespace) s += "+ws";
  return s;
}

nlohmann::json NormalizationPolicy::to_json() const {
  return {{"mode", mode == Mode::RawBytes ? "bytes" : "fold"},
          {"lowercase", mode == Mode::UnicodeFold && lowercase},
          {"collapse_whitespace", mode == Mode::UnicodeFold && collapse_whitespace}};
}

Corpus ingest_bytes(std::string_view bytes, const NormalizationPolicy& policy, std::string source) {
  std::vector<std::uint32_t> tokens = policy.apply(bytes);
  if (tokens.empty()) fail(ErrorKind::InvalidInput, "empty corpus after normalization: " + source);
  Corpus c;
  c.source = std::move(source);
  c.alphabet = Alphabet::from_tokens(tokens);
  std::vector<Symbol> symbols(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    symbols[i] = *c.alphabet.id(tokens[i]);
    ++c.histogram[tokens[i]];
  }
  c.text = Text(std::move(symbols), c.alphabet.size());
  return c;
}

Corpus ingest(const std::filesystem::path& path, const NormalizationPolicy& policy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorKind::Io, "error while reading " + path.string());
  return ingest_bytes(bytes, policy, path.string());
}

std::string encode_tokens(std::span<const std::uint32_t> tokens, const NormalizationPolicy& policy) {
  std::string out;
  out.reserve(tokens.size());
  for (std::uint32_t t : tokens) {
    if (policy.mode == NormalizationPolicy::Mode::RawBytes) {
      out.push_back(static_cast<char>(t));
    } else {
      append_utf8(out, t);
    }
  }
  return out;
}

std::vector<std::size_t> dyadic_prefixes(std::size_t n, std::optional<int> j_max) {
  std::vector<std::size_t> out;
  for (int j = 0; j < 63; ++j) {
    const std::size_t len = std::size_t{1} << j;
    if (len > n || (j_max && j > *j_max)) break;
    out.push_back(len);
  }
  return out;
}

std::string fingerprint(const nlohmann::json& config) {
  const std::string canonical = config.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string record_line(const AnalysisRecord& r) {
  nlohmann::ordered_json j;
  j["source"] = r.source;
  j["label"] = r.label;
  j["n"] = r.n;
  j["alphabet_size"] = r.alphabet_size;
  j["max_repetition"] = r.max_repetition;
  j["ppm_order"] = r.ppm_order;
  j["vocabulary_size"] = r.vocabulary_size;
  j["codelength_nats"] = r.codelength_nats;
  j["codelength_bits"] = r.codelength_bits;
  j["exact"] = r.exact;
  j["fingerprint"] = r.fingerprint;
  if (!r.timestamp.empty()) j["timestamp"] = r.timestamp;
  return j.dump();
}

void write_records(std::ostream& out, const std::vector<AnalysisRecord>& records) {
  nlohmann::ordered_json header;
  header["schema"] = kRecordSchemaName;
  header["version"] = kRecordSchemaVersion;
  out << header.dump() << '\n';
  for (const auto& r : records) out << record_line(r) << '\n';
}

void save_records(const std::filesystem::path& path, const std::vector<AnalysisRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  write_records(out, records);
  if (!out) fail(ErrorKind::Io, "error while writing " + path.string());
}

std::vector<AnalysisRecord> read_records(std::istream& in) {
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<AnalysisRecord> records;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool saw_header = false;
  while (start < content.size()) {
    ++line_no;
    const std::size_t end = content.find('\n', start);
    if (end == std::string::npos) {
      fail(ErrorKind::Format, "truncated record file: line " + std::to_string(line_no) +
                                  " has no terminating newline");
    }
    const std::string_view line(content.data() + start, end - start);
    start = end + 1;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::Format, "malformed record at line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      if (!saw_header) {
        if (j.value("schema", std::string()) != kRecordSchemaName) {
          fail(ErrorKind::Format, "line 1 is not a ppmwords record header");
        }
        const int version = j.at("version").get<int>();
        if (version != kRecordSchemaVersion) {
          fail(ErrorKind::Format, "record schema version " + std::to_string(version) +
                                      " is not supported (this build reads version " +
                                      std::to_string(kRecordSchemaVersion) + ")");
        }
        saw_header = true;
        continue;
      }
      AnalysisRecord r;
      r.source = j.at("source").get<std::string>();
      r.label = j.at("label").get<std::string>();
      r.n = j.at("n").get<std::size_t>();
      r.alphabet_size = j.at("alphabet_size").get<int>();
      r.max_repetition = j.at("max_repetition").get<std::size_t>();
      r.ppm_order = j.at("ppm_order").get<int>();
      r.vocabulary_size = j.at("vocabulary_size").get<std::size_t>();
      r.codelength_nats = j.at("codelength_nats").get<double>();
      r.codelength_bits = j.at("codelength_bits").get<double>();
      r.exact = j.at("exact").get<bool>();
      r.fingerprint = j.at("fingerprint").get<std::string>();
      r.timestamp = j.value("timestamp", std::string());
      if (r.ppm_order > static_cast<int>(r.max_repetition)) {
        fail(ErrorKind::Format, "line " + std::to_string(line_no) +
                                    ": PPM order exceeds maximal repetition");
      }
      const double expect_bits = r.codelength_nats / std::log(2.0);
      if (std::abs(r.codelength_bits - expect_bits) > 1e-12 * std::max(1.0, std::abs(expect_bits))) {
        fail(ErrorKind::Format, "line " + std::to_string(line_no) + ": bits and nats disagree");
      }
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::Format, "bad record at line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!saw_header) fail(ErrorKind::Format, "record file has no header line");
  return records;
}

std::vector<AnalysisRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path.string());
  return read_records(in);
}

void write_records_csv(std::ostream& out, const std::vector<AnalysisRecord>& records) {
  out << kRecordCsvHeader << '\n';
  for (const auto& r : records) {
    out << csv_field(r.source) << ',' << csv_field(r.label) << ',' << r.n << ',' << r.alphabet_size
        << ',' << r.max_repetition << ',' << r.ppm_order << ',' << r.vocabulary_size << ','
        << format_double(r.codelength_nats) << ',' << format_double(r.codelength_bits) << ','
        << (r.exact ? 1 : 0) << ',' << csv_field(r.fingerprint) << '\n';
  }
}

}  // namespace ppmwords
