#include "ppmwords/ppm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>

#include "ppmwords/error.hpp"
#include "ppmwords/numeric.hpp"

namespace ppmwords {
namespace {

void require_alphabet(const Text& x) {
  if (x.alphabet_size() < 2) {
    fail(ErrorKind::InvalidInput, "PPM requires an alphabet of at least 2 symbols, got " +
                                      std::to_string(x.alphabet_size()));
  }
}

struct GramHash {
  std::size_t operator()(std::span<const Symbol> g) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (Symbol s : g) {
      h ^= s;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

struct GramEq {
  bool operator()(std::span<const Symbol> a, std::span<const Symbol> b) const noexcept {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }
};

using GramTable = std::unordered_map<std::span<const Symbol>, std::uint64_t, GramHash, GramEq>;

// Earlier-occurrence counts of the k-grams that repeat somewhere in the text.
// `active` holds the ranks (in ending-index order) of those grams' ending
// positions; equal grams form runs with lcp >= k.
class RepeatCounter {
 public:
  explicit RepeatCounter(const EndingIndex& index) : index_(index), earlier_(index.size() + 1, 0) {}

  void assign(std::size_t k, std::span<const std::uint32_t> active) {
    clear();
    const auto order = index_.order();
    const auto lcp = index_.lcp();
    std::vector<std::uint32_t> group;
    auto flush = [&] {
      std::sort(group.begin(), group.end());
      for (std::size_t j = 0; j < group.size(); ++j) {
        earlier_[group[j]] = static_cast<std::uint32_t>(j);
        touched_.push_back(group[j]);
      }
      group.clear();
    };
    for (std::uint32_t r : active) {
      if (!group.empty() && lcp[r] < k) flush();
      group.push_back(order[r]);
    }
    flush();
  }

  void clear() {
    for (std::uint32_t p : touched_) earlier_[p] = 0;
    touched_.clear();
  }

  std::uint32_t earlier(std::size_t p) const { return earlier_[p]; }
  std::span<const std::uint32_t> positions() const { return touched_; }

 private:
  const EndingIndex& index_;
  std::vector<std::uint32_t> earlier_;
  std::vector<std::uint32_t> touched_;
};

std::vector<std::uint32_t> repeated_ranks(const EndingIndex& index, std::size_t k,
                                          std::span<const std::uint32_t> from) {
  const auto lcp = index.lcp();
  const std::size_t n = index.size();
  std::vector<std::uint32_t> out;
  out.reserve(from.size());
  for (std::uint32_t r : from) {
    if (lcp[r] >= k || (r + 1 < n && lcp[r + 1] >= k)) out.push_back(r);
  }
  return out;
}

}  // namespace

std::optional<std::size_t> PpmParams::effective_cap(std::size_t n) const {
  if (order_cap) return order_cap;
  if (exact || n <= kExactLimit) return std::nullopt;
  return kDefaultCap;
}

double CodeLengthProfile::codelength(int k) const {
  if (k < -1) fail(ErrorKind::InvalidParameter, "order must be >= -1");
  if (k <= max_order()) return orders[k + 1];
  return static_cast<double>(n) * std::log(static_cast<double>(alphabet_size));
}

double log_star(std::uint64_t n) {
  if (n == 0) return 0.0;
  const double m = static_cast<double>(n);
  return log_factorial(m) - m * std::log(m) + m;
}

double frak_H(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) return 0.0;
  const double sum = static_cast<double>(total);
  double h = 0.0;
  for (auto c : counts) {
    if (c > 0) h += static_cast<double>(c) * std::log(sum / static_cast<double>(c));
  }
  return h;
}

double frak_K(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  double k = 0.0;
  for (auto c : counts) {
    total += c;
    k += log_star(c);
  }
  return k - log_star(total);
}

double cond_prob(int k, std::size_t i, const Text& x, Symbol a) {
  require_alphabet(x);
  const int d = x.alphabet_size();
  if (k < -1) fail(ErrorKind::InvalidInput, "order must be >= -1");
  if (i < 1 || i > x.size() + 1) {
    fail(ErrorKind::InvalidInput, "position " + std::to_string(i) + " outside 1.." +
                                      std::to_string(x.size() + 1));
  }
  if (a < 1 || a > static_cast<Symbol>(d)) {
    fail(ErrorKind::InvalidInput, "symbol " + std::to_string(a) + " outside alphabet");
  }
  if (k == -1 || i <= static_cast<std::size_t>(k)) return 1.0 / d;

  const auto ku = static_cast<std::size_t>(k);
  const auto prefix = x.symbols();
  // Context x_{i-k}^{i-1} occupies 0-based [i-1-k, i-1).
  Word context(prefix.begin() + static_cast<std::ptrdiff_t>(i - 1 - ku),
               prefix.begin() + static_cast<std::ptrdiff_t>(i - 1));
  Word extended = context;
  extended.push_back(a);
  const auto si = static_cast<std::ptrdiff_t>(i);
  const double num = static_cast<double>(ngram_count_in_prefix(extended, x, si - 1)) + 1.0;
  const double den = static_cast<double>(ngram_count_in_prefix(context, x, si - 2)) + d;
  return num / den;
}

double order_k_codelength(int k, const Text& x) {
  require_alphabet(x);
  if (k < -1) fail(ErrorKind::InvalidInput, "order must be >= -1");
  const std::size_t n = x.size();
  const double d = x.alphabet_size();
  const double log_d = std::log(d);
  if (k == -1) return static_cast<double>(n) * log_d;

  const auto ku = static_cast<std::size_t>(k);
  const auto s = x.symbols();
  GramTable contexts;
  GramTable grams;
  long double h = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i <= ku) {
      h += log_d;
    } else {
      auto context = s.subspan(i - 1 - ku, ku);
      auto gram = s.subspan(i - 1 - ku, ku + 1);
      auto c = contexts.find(context);
      auto g = grams.find(gram);
      const double nc = c == contexts.end() ? 0.0 : static_cast<double>(c->second);
      const double ng = g == grams.end() ? 0.0 : static_cast<double>(g->second);
      h -= std::log((ng + 1.0) / (nc + d));
    }
    // Context ending at i-1 and gram ending at i now count as earlier.
    if (i - 1 >= ku) ++contexts[s.subspan(i - 1 - ku, ku)];
    if (i >= ku + 1) ++grams[s.subspan(i - 1 - ku, ku + 1)];
  }
  return static_cast<double>(h);
}

double mixture_codelength(const Eigen::Ref<const Eigen::VectorXd>& order_codelengths, std::size_t n,
                          int alphabet_size) {
  const double log_weight = std::log(6.0 / (kPi<double> * kPi<double>));
  const auto top = static_cast<long long>(order_codelengths.size()) - 1;  // K
  Eigen::VectorXd terms(order_codelengths.size() + 1);
  for (Eigen::Index k = 0; k < order_codelengths.size(); ++k) {
    terms[k] = log_weight - 2.0 * std::log(static_cast<double>(k) + 2.0) - order_codelengths[k];
  }
  // 1 - (6/pi^2) sum_{k=0}^{K} (k+2)^{-2} = (6/pi^2) (1 + sum_{m >= K+3} m^{-2}).
  const double tail = power_tail(2.0, top + 3);
  terms[terms.size() - 1] = log_weight + std::log1p(tail) -
                            static_cast<double>(n) * std::log(static_cast<double>(alphabet_size));
  return -log_sum_exp(terms);
}

int select_order(const Eigen::Ref<const Eigen::VectorXd>& codelengths, double tolerance) {
  if (codelengths.size() == 0) fail(ErrorKind::InvalidParameter, "no code lengths to compare");
  const double best = codelengths.minCoeff();
  for (Eigen::Index j = 0; j < codelengths.size(); ++j) {
    if (codelengths[j] <= best + tolerance) return static_cast<int>(j) - 1;
  }
  return -1;  // unreachable
}

std::vector<CodeLengthProfile> prefix_profiles(const Text& x, std::span<const std::size_t> lengths,
                                               const PpmParams& params) {
  require_alphabet(x);
  std::vector<std::size_t> snaps(lengths.begin(), lengths.end());
  if (!std::is_sorted(snaps.begin(), snaps.end()) ||
      std::adjacent_find(snaps.begin(), snaps.end()) != snaps.end()) {
    fail(ErrorKind::InvalidParameter, "prefix lengths must be strictly increasing");
  }
  if (!snaps.empty() && snaps.back() > x.size()) {
    fail(ErrorKind::InvalidParameter, "prefix length exceeds the text");
  }
  std::vector<CodeLengthProfile> out;
  if (snaps.empty()) return out;

  const int d = x.alphabet_size();
  const double dd = d;
  const double log_d = std::log(dd);
  const std::size_t last = snaps.back();
  const auto s = x.symbols();

  const EndingIndex index(x);
  const std::size_t repetition = index.maximal_repetition(last);
  std::size_t top = repetition;
  if (auto cap = params.effective_cap(x.size())) top = std::min(top, *cap);

  // buckets(k, j): sum over positions i in (snaps[j-1], snaps[j]] of
  // H-contribution minus log D, for order k = 0..top.
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> buckets =
      Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>::Zero(
          static_cast<Eigen::Index>(top + 1), static_cast<Eigen::Index>(snaps.size()));
  auto bucket_of = [&](std::size_t i) {
    return static_cast<Eigen::Index>(std::lower_bound(snaps.begin(), snaps.end(), i) - snaps.begin());
  };
  auto excess = [&](double earlier_context, double earlier_gram) {
    return std::log((earlier_context + dd) / (dd * (earlier_gram + 1.0)));
  };

  RepeatCounter first(index);
  RepeatCounter second(index);
  RepeatCounter* current = &first;
  RepeatCounter* next = &second;
  std::vector<std::uint32_t> all_ranks(index.size());
  for (std::size_t r = 0; r < all_ranks.size(); ++r) all_ranks[r] = static_cast<std::uint32_t>(r);
  std::vector<std::uint32_t> active = repeated_ranks(index, 1, all_ranks);
  all_ranks = {};
  current->assign(1, active);

  // Order 0: the empty context has occurred i-1 times before position i.
  for (std::size_t i = 1; i <= last; ++i) {
    buckets(0, bucket_of(i)) += excess(static_cast<double>(i - 1), current->earlier(i));
  }

  for (std::size_t k = 1; k <= top; ++k) {
    std::vector<std::uint32_t> longer = repeated_ranks(index, k + 1, active);
    next->assign(k + 1, longer);
    // current holds order-k counts, next order-(k+1) counts. Only positions
    // whose context occurred before differ from 1/D.
    for (std::uint32_t p : current->positions()) {
      const std::uint32_t seen = current->earlier(p);
      const std::size_t i = std::size_t{p} + 1;
      if (seen == 0 || i > last) continue;
      buckets(static_cast<Eigen::Index>(k), bucket_of(i)) += excess(seen, next->earlier(i));
    }
    std::swap(current, next);
    active.swap(longer);
  }

  out.reserve(snaps.size());
  Eigen::Matrix<long double, Eigen::Dynamic, 1> running =
      Eigen::Matrix<long double, Eigen::Dynamic, 1>::Zero(static_cast<Eigen::Index>(top + 1));
  for (std::size_t j = 0; j < snaps.size(); ++j) {
    running += buckets.col(static_cast<Eigen::Index>(j));
    const std::size_t p = snaps[j];
    const std::size_t rep = index.maximal_repetition(p);
    const std::size_t evaluated = std::min(rep, top);

    CodeLengthProfile prof;
    prof.n = p;
    prof.alphabet_size = d;
    prof.max_repetition = rep;
    prof.exact = evaluated == rep;
    prof.orders.resize(static_cast<Eigen::Index>(evaluated + 2));
    const double uniform = static_cast<double>(p) * log_d;
    prof.orders[0] = uniform;
    for (std::size_t k = 0; k <= evaluated; ++k) {
      prof.orders[static_cast<Eigen::Index>(k + 1)] =
          uniform + static_cast<double>(running[static_cast<Eigen::Index>(k)]);
    }
    prof.order = select_order(prof.orders, params.tolerance);
    prof.total = mixture_codelength(prof.orders.tail(prof.orders.size() - 1), p, d);
    prof.vocabulary_size =
        prof.order < 0 ? 0 : index.subword_complexity(static_cast<std::size_t>(prof.order), p);
    out.push_back(std::move(prof));
  }
  return out;
}

CodeLengthProfile profile(const Text& x, const PpmParams& params) {
  const std::size_t n = x.size();
  return prefix_profiles(x, std::span<const std::size_t>(&n, 1), params).front();
}

double total_codelength(const Text& x, const PpmParams& params) { return profile(x, params).total; }

int ppm_order(const Text& x, const PpmParams& params) { return profile(x, params).order; }

std::vector<Word> ppm_vocabulary(const Text& x, const PpmParams& params) {
  const int g = ppm_order(x, params);
  if (g < 0) return {};
  return subword_set(static_cast<std::size_t>(g), x);
}

AlgebraicTerms algebraic_terms(int k, const Text& x) {
  require_alphabet(x);
  if (k < 0) fail(ErrorKind::InvalidParameter, "closed form requires k >= 0");
  const std::size_t n = x.size();
  const auto ku = static_cast<std::size_t>(k);
  const auto d = static_cast<std::size_t>(x.alphabet_size());
  AlgebraicTerms t;
  t.prefix = static_cast<double>(std::min(ku, n)) * std::log(static_cast<double>(d));
  if (n == 0) return t;

  // Successor counts N(ua | x_1^n) for every context u ending at 0-based
  // position j - 1, j = k..n-1 (j = 0 is the empty context before x_1).
  std::map<Word, std::vector<std::uint64_t>> successors;
  const auto s = x.symbols();
  for (std::size_t j = ku; j < n; ++j) {
    Word u(s.begin() + static_cast<std::ptrdiff_t>(j - ku), s.begin() + static_cast<std::ptrdiff_t>(j));
    auto& row = successors[u];
    row.resize(d, 0);
    ++row[s[j] - 1];
  }
  for (const auto& [u, row] : successors) {
    std::uint64_t total = 0;
    for (auto c : row) total += c;
    t.entropy += frak_H(row);
    const std::uint64_t pair[] = {total, d - 1};
    std::vector<std::uint64_t> padded(row);
    padded.push_back(d - 1);
    t.cost += frak_H(pair) - frak_K(padded);
  }
  return t;
}

double algebraic_codelength(int k, const Text& x) { return algebraic_terms(k, x).total(); }

double pointwise_mi(const Text& x, const Text& y, const PpmParams& params) {
  return total_codelength(x, params) + total_codelength(y, params) - total_codelength(x + y, params);
}

double mi_component0(int k, const Text& x, const Text& y) {
  return algebraic_terms(k, x).entropy + algebraic_terms(k, y).entropy -
         algebraic_terms(k, x + y).entropy;
}

}  // namespace ppmwords
