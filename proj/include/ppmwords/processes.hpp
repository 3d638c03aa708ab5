#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ppmwords/text.hpp"

namespace ppmwords {

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the independent stream `stream` derived from `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// 64-bit generator used by every sampler.
using Rng = std::mt19937_64;

/// Uniform double in (0, 1] with 53 random bits.
double uniform_open0(Rng& rng);

/// Unbiased integer in [0, bound) (Lemire's multiply-and-reject).
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Fair fact bits z_1, z_2, ... as a pure function of a seed. Bits are
/// produced in 64-bit blocks, so any z_k is available without state.
class FactBits {
 public:
  explicit FactBits(std::uint64_t seed = 0) : seed_(seed) {}

  bool operator()(std::uint64_t k) const;  // k >= 1
  std::uint64_t seed() const noexcept { return seed_; }

  /// "0101..." for z_1..z_m.
  std::string prefix(std::size_t m) const;

 private:
  std::uint64_t seed_;
};

struct SantaFeSpec {
  double alpha = 2.0;
  std::uint64_t seed = 0;

  SantaFeSpec() = default;
  /// Throws Error(InvalidParameter) for alpha <= 1.
  SantaFeSpec(double alpha, std::uint64_t seed);

  FactBits facts() const;
};

/// Zeta(alpha) distribution P(K = k) = k^-alpha / zeta(alpha), sampled by
/// inversion of the survival function. A table caches P(K > k) for small k;
/// beyond the table the survival function is evaluated analytically, so the
/// map from uniform variate to k does not depend on the table size.
class ZetaSampler {
 public:
  explicit ZetaSampler(double alpha, std::size_t table_size = 4096);

  double alpha() const noexcept { return alpha_; }
  long double pmf(std::uint64_t k) const;
  long double survival(std::uint64_t k) const;  // P(K > k)

  /// Smallest k >= 1 with P(K > k) < u, for u in (0, 1]. Saturates at 2^62.
  std::uint64_t invert(double u) const;
  std::uint64_t operator()(Rng& rng) const { return invert(uniform_open0(rng)); }

 private:
  double alpha_;
  long double zeta_;
  std::vector<long double> survival_;  // survival_[k] = P(K > k)
};

struct SantaFePair {
  std::uint64_t k;
  std::uint8_t bit;
  friend bool operator==(const SantaFePair&, const SantaFePair&) = default;
};

using SantaFeSample = std::vector<SantaFePair>;

/// X_i = (K_i, z_{K_i}) for i = 1..n. Deterministic in (spec.seed, stream);
/// the sample for n is a prefix of the sample for any larger n.
SantaFeSample sample_santa_fe(const SantaFeSpec& spec, std::size_t n, std::uint64_t stream);

/// g(k; x): 0 if all pairs with key k carry 0 (also when k is absent),
/// 1 if all carry 1, 2 if both values occur.
int santa_fe_predictor(std::uint64_t k, const SantaFeSample& x);

struct FactsResult {
  std::size_t count = 0;               // card U
  std::vector<std::uint8_t> verdicts;  // g(1), ..., g(count + 1)
};

using FactSequence = std::function<bool(std::uint64_t)>;

/// Largest l with g(k; x) = z_k for all k <= l.
FactsResult count_facts(const SantaFeSample& x, const FactSequence& z);

void write_santa_fe_pairs(std::ostream& out, const SantaFeSample& x);
SantaFeSample read_santa_fe_pairs(std::istream& in);

/// Mixture Bernoulli process with uniform mixing measure.
std::vector<std::uint8_t> sample_mixture_bernoulli(std::size_t n, std::uint64_t seed);
double mixture_bernoulli_log_prob(std::span<const std::uint8_t> x);
double mixture_bernoulli_prob(std::span<const std::uint8_t> x);

/// IID Bernoulli(theta) bits.
std::vector<std::uint8_t> sample_bernoulli(std::size_t n, double theta, std::uint64_t seed);

/// Bits 0/1 as a Text over {1, 2}.
Text bits_to_text(std::span<const std::uint8_t> bits);

/// Markov chain of order k over 1..D. Contexts are the last k symbols encoded
/// base D with the oldest symbol most significant; row c of `transitions`
/// is p(. | c), and `initial` is a distribution over the D^k contexts.
class MarkovSpec {
 public:
  /// Validates stochastic rows and stationarity of `initial`.
  MarkovSpec(int order, int alphabet_size, Eigen::MatrixXd transitions, Eigen::VectorXd initial);

  /// Same, with the stationary distribution solved for.
  static MarkovSpec stationary(int order, int alphabet_size, Eigen::MatrixXd transitions);

  /// Order-1 chain over D = 4: p(b+1 mod 4 | b) = 0.7, other symbols 0.1.
  static MarkovSpec default_chain();

  /// IID uniform symbols over 1..D.
  static MarkovSpec uniform(int alphabet_size);

  int order() const noexcept { return order_; }
  int alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t contexts() const noexcept { return static_cast<std::size_t>(initial_.size()); }
  const Eigen::MatrixXd& transitions() const noexcept { return transitions_; }
  const Eigen::VectorXd& initial() const noexcept { return initial_; }

 private:
  int order_;
  int alphabet_size_;
  Eigen::MatrixXd transitions_;
  Eigen::VectorXd initial_;
};

/// Stationary distribution over contexts of an order-k chain.
Eigen::VectorXd stationary_distribution(int order, int alphabet_size, const Eigen::MatrixXd& transitions);

Text sample_markov(const MarkovSpec& spec, std::size_t n, std::uint64_t seed);

/// Entropy rate in nats per symbol.
double markov_entropy_rate(const MarkovSpec& spec);

/// Fisher-Yates shuffle of the symbol sequence.
Text permute_text(const Text& x, std::uint64_t seed);

/// 1 iff N(w|x)/(n - |w| + 1) > y. Throws for |w| > n or y outside (0, 1).
int topic_indicator(std::span<const Symbol> w, double y, const Text& x);

/// A synthetic source as read from a key=value configuration.
struct ProcessSpec {
  enum class Kind { SantaFe, MixtureBernoulli, Bernoulli, Markov };

  Kind kind = Kind::SantaFe;
  std::uint64_t seed = 0;
  double alpha = 2.0;   // SantaFe
  double theta = 0.5;   // Bernoulli
  std::optional<MarkovSpec> markov;

  std::string kind_name() const;
};

/// Parses lines "key = value" ('#' starts a comment, "[section]" lines are
/// ignored). Keys: kind (santa-fe | mixture-bernoulli | bernoulli | markov |
/// iid), seed, alpha, theta, alphabet, order, transitions (path of a
/// whitespace-separated D^k x D matrix, relative to `base_dir`).
/// Markov without transitions is the default chain; iid is uniform Markov
/// of order 0.
ProcessSpec parse_process_config(std::istream& in, const std::filesystem::path& base_dir = {});

/// Finite-alphabet sample of a non Santa Fe process, stream `stream`.
Text sample_process(const ProcessSpec& spec, std::size_t n, std::uint64_t stream);

/// Raw symbol file: one byte (symbol - 1) per symbol. Requires D <= 256.
void write_symbols(std::ostream& out, const Text& x);

}  // namespace ppmwords
