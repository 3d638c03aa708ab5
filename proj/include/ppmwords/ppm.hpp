#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ppmwords/text.hpp"
#include "ppmwords/textstats.hpp"

// Prediction by partial matching with add-one (Laplace) conditional
// estimates, the mixture over all context orders, and the quantities derived
// from them. All code lengths are natural-log (nats).

namespace ppmwords {

struct PpmParams {
  /// Inputs longer than this get `default_cap` unless `exact` is set.
  static constexpr std::size_t kExactLimit = std::size_t{1} << 20;
  static constexpr std::size_t kDefaultCap = 64;

  std::optional<std::size_t> order_cap;  // explicit cap overrides the default rule
  bool exact = false;                    // never cap, regardless of input size
  double tolerance = 1e-9;               // ties in the order selection, nats

  /// Highest order evaluated for an input of length n; nullopt means all
  /// orders up to the maximal repetition.
  std::optional<std::size_t> effective_cap(std::size_t n) const;
};

/// Code lengths of one input (or prefix): H_k for k = -1..max_order(), the
/// mixture code length, the PPM order G and the vocabulary size |V(G|x)|.
struct CodeLengthProfile {
  std::size_t n = 0;
  int alphabet_size = 2;
  Eigen::VectorXd orders;  // orders[k + 1] = H_k
  double total = 0;
  int order = -1;
  std::size_t max_repetition = 0;
  std::size_t vocabulary_size = 0;
  bool exact = true;  // false when an order cap hid orders <= max_repetition

  int max_order() const { return static_cast<int>(orders.size()) - 2; }

  /// H_k for any k >= -1; orders above the evaluated range cost n log D.
  double codelength(int k) const;
};

// Notation of the closed-form decomposition.

/// log* n = log n! - n log n + n, with log* 0 = 0.
double log_star(std::uint64_t n);

/// Empirical entropy of a count vector, sum n_i log(N / n_i); 0 if all zero.
double frak_H(std::span<const std::uint64_t> counts);

/// sum log* n_i - log* (sum n_i).
double frak_K(std::span<const std::uint64_t> counts);

/// Conditional probability of order k of symbol `a` at 1-based position i,
/// read off the prefix x_1^{i-1} by direct counting. k = -1 is uniform.
/// Reference implementation: O(i k) per call.
double cond_prob(int k, std::size_t i, const Text& x, Symbol a);

/// H_k(x) via streaming per-order count tables.
double order_k_codelength(int k, const Text& x);

/// The mixture code length from H_0..H_K (indexed 0..K) of a length-n text,
/// with every order above K taken to cost n log D.
double mixture_codelength(const Eigen::Ref<const Eigen::VectorXd>& order_codelengths, std::size_t n,
                          int alphabet_size);

/// Smallest k whose code length is within `tolerance` of the minimum over
/// codelengths = (H_{-1}, H_0, ..., H_K).
int select_order(const Eigen::Ref<const Eigen::VectorXd>& codelengths, double tolerance);

/// Profiles of the prefixes x_1^p for every p in `lengths`, from one
/// left-to-right pass over the text. Lengths must not exceed x.size().
std::vector<CodeLengthProfile> prefix_profiles(const Text& x, std::span<const std::size_t> lengths,
                                               const PpmParams& params = {});

CodeLengthProfile profile(const Text& x, const PpmParams& params = {});

double total_codelength(const Text& x, const PpmParams& params = {});
int ppm_order(const Text& x, const PpmParams& params = {});

/// V(G|x) for G = ppm_order(x): {ε} when G = 0 and empty when G = -1.
std::vector<Word> ppm_vocabulary(const Text& x, const PpmParams& params = {});

/// The three terms of the closed form of H_k, k >= 0:
/// min(k, n) log D, the count-entropy term, and the parameter-cost term.
struct AlgebraicTerms {
  double prefix = 0;
  double entropy = 0;  // H^0_k
  double cost = 0;     // H^1_k
  double total() const { return prefix + entropy + cost; }
};

AlgebraicTerms algebraic_terms(int k, const Text& x);
double algebraic_codelength(int k, const Text& x);

/// H(x) + H(y) - H(xy) for the total PPM code length.
double pointwise_mi(const Text& x, const Text& y, const PpmParams& params = {});

/// Same quantity for the count-entropy term H^0_k.
double mi_component0(int k, const Text& x, const Text& y);

}  // namespace ppmwords
