#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ppmwords/error.hpp"
#include "ppmwords/numeric.hpp"
#include "ppmwords/ppm.hpp"

using namespace ppmwords;
using doctest::Approx;

namespace {

constexpr double kPi2Over6 = std::numbers::pi * std::numbers::pi / 6.0;

// Direct mixture over k = -1..K_max from oracle code lengths; orders at or
// above n are uniform by the definition (i <= k for every i), so the tail is
// exact without invoking the finite-sum theorem.
double oracle_total(const Text& x) {
  const std::size_t n = x.size();
  const double d = x.alphabet_size();
  long double sum = 0;
  long double weight_used = 0;
  for (int k = -1; k <= static_cast<int>(n); ++k) {
    const long double w = 1.0L / ((k + 2.0L) * (k + 2.0L)) / kPi2Over6;
    sum += w * std::exp(-static_cast<long double>(oracle::codelength(k, x)));
    weight_used += w;
  }
  sum += (1.0L - weight_used) * std::pow(static_cast<long double>(d), -static_cast<long double>(n));
  return static_cast<double>(-std::log(sum));
}

}  // namespace

TEST_CASE("notation helpers") {
  CHECK(log_star(0) == 0.0);
  CHECK(log_star(1) == Approx(1.0).epsilon(1e-14));
  CHECK(log_star(5) == Approx(std::log(120.0) - 5 * std::log(5.0) + 5).epsilon(1e-13));
  const std::uint64_t ones[] = {1, 1};
  CHECK(frak_H(ones) == Approx(2 * std::log(2.0)).epsilon(1e-14));
  const std::uint64_t zeros[] = {0, 0, 0};
  CHECK(frak_H(zeros) == 0.0);
  CHECK(frak_K(zeros) == 0.0);
  const std::uint64_t mixed[] = {3, 0, 2};
  CHECK(frak_H(mixed) == Approx(3 * std::log(5.0 / 3) + 2 * std::log(5.0 / 2)));
  CHECK(frak_K(mixed) == Approx(log_star(3) + log_star(2) - log_star(5)));
  CHECK(frak_K(mixed) >= 0.0);
}

TEST_CASE("conditional probability examples") {
  CHECK(cond_prob(0, 1, Text({}, 2), 1) == 0.5);
  CHECK(cond_prob(0, 1, Text({}, 2), 2) == 0.5);
  CHECK(cond_prob(0, 2, letters("a", 2), 1) == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(cond_prob(5, 3, letters("abcd", 4), 3) == 0.25);
  CHECK(cond_prob(-1, 2, letters("ab", 2), 2) == 0.5);
}

TEST_CASE("conditional probability errors") {
  const Text x = letters("abab", 2);
  CHECK_THROWS_AS(cond_prob(0, 0, x, 1), Error);
  CHECK_THROWS_AS(cond_prob(0, 6, x, 1), Error);
  CHECK_THROWS_AS(cond_prob(0, 2, x, 3), Error);
  CHECK_THROWS_AS(cond_prob(-2, 2, x, 1), Error);
  CHECK_THROWS_AS(cond_prob(0, 1, Text({1, 1}, 1), 1), Error);
}

TEST_CASE("conditional probabilities are normalized") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + trial % 4;
    const Text x = oracle::repetitive_text(rng, rng() % 40, d);
    const int k = static_cast<int>(rng() % 5) - 1;
    const std::size_t i = 1 + rng() % (x.size() + 1);
    double sum = 0;
    for (int a = 1; a <= d; ++a) {
      const double p = cond_prob(k, i, x, static_cast<Symbol>(a));
      CHECK(p > 0.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("order-k code lengths of aaaa") {
  const Text x = letters("aaaa", 2);
  CHECK(order_k_codelength(0, x) == Approx(std::log(5.0)).epsilon(1e-14));
  CHECK(order_k_codelength(1, x) == Approx(std::log(8.0)).epsilon(1e-14));
  CHECK(order_k_codelength(2, x) == Approx(std::log(12.0)).epsilon(1e-14));
  CHECK(order_k_codelength(3, x) == Approx(std::log(16.0)).epsilon(1e-14));
  CHECK(order_k_codelength(-1, x) == Approx(4 * std::log(2.0)).epsilon(1e-14));
  CHECK(order_k_codelength(2, Text({}, 3)) == 0.0);
}

TEST_CASE("total code length examples") {
  CHECK(total_codelength(Text({}, 2)) == Approx(0.0).epsilon(1e-15));
  for (int d = 2; d <= 5; ++d) {
    for (Symbol a = 1; a <= static_cast<Symbol>(d); ++a) {
      CHECK(total_codelength(Text({a}, d)) == Approx(std::log(d)).epsilon(1e-13));
    }
  }
  // Rational parts of the finite sum for aaaa: PPM_k = 1/5, 1/8, 1/12, 1/16.
  const long double c = 1.0L / kPi2Over6;
  const long double mixed = 1.0L / 20 + 1.0L / 72 + 1.0L / 192 + 1.0L / 400;
  const long double weights = 1.0L / 4 + 1.0L / 9 + 1.0L / 16 + 1.0L / 25;
  const long double expect = -std::log(c * mixed + (1.0L - c * weights) / 16.0L);
  CHECK(total_codelength(letters("aaaa", 2)) == Approx(static_cast<double>(expect)).epsilon(1e-13));
}

TEST_CASE("PPM order examples") {
  CHECK(ppm_order(letters("aaaa", 2)) == 0);
  CHECK(ppm_order(letters("ab", 2)) == -1);
  CHECK(ppm_order(Text({}, 2)) == -1);
  CHECK(ppm_vocabulary(letters("aaaa", 2)) == std::vector<Word>{Word{}});
  CHECK(ppm_vocabulary(letters("ab", 2)).empty());
  CHECK(profile(letters("ab", 2)).vocabulary_size == 0);
  CHECK(profile(letters("aaaa", 2)).vocabulary_size == 1);
}

TEST_CASE("select_order breaks ties towards the smaller order") {
  Eigen::VectorXd h(4);
  h << 3.0, 2.0, 2.0 + 5e-10, 2.0 - 5e-10;
  CHECK(select_order(h, 1e-9) == 0);
  CHECK(select_order(h, 1e-12) == 2);
}

TEST_CASE("streaming and one-pass code lengths agree with the direct definition") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 120; ++trial) {
    const int d = 2 + trial % 3;
    const std::size_t n = rng() % 48;
    const Text x = trial % 2 ? oracle::random_text(rng, n, d) : oracle::repetitive_text(rng, n, d);
    const std::size_t L = oracle::maximal_repetition(x);

    std::vector<std::size_t> lengths;
    for (std::size_t p = 0; p <= n; ++p) lengths.push_back(p);
    const auto profiles = prefix_profiles(x, lengths);
    for (std::size_t p = 0; p <= n; ++p) {
      const Text pre = x.prefix(p);
      const auto& prof = profiles[p];
      const std::size_t Lp = oracle::maximal_repetition(pre);
      CHECK(prof.max_repetition == Lp);
      CHECK(prof.exact);
      REQUIRE(prof.max_order() == static_cast<int>(Lp));
      Eigen::VectorXd direct(static_cast<Eigen::Index>(Lp + 2));
      for (int k = -1; k <= static_cast<int>(Lp); ++k) {
        direct[k + 1] = oracle::codelength(k, pre);
        CHECK(prof.codelength(k) == Approx(direct[k + 1]).epsilon(1e-12));
      }
      CHECK(prof.order == select_order(direct, 1e-9));
      CHECK(prof.order <= static_cast<int>(Lp));
      CHECK(prof.total == Approx(oracle_total(pre)).epsilon(1e-12));
      const std::size_t vocab =
          prof.order < 0 ? 0 : oracle::distinct(static_cast<std::size_t>(prof.order), pre).size();
      CHECK(prof.vocabulary_size == vocab);
    }
    for (int k = -1; k <= static_cast<int>(L) + 2; ++k) {
      CHECK(order_k_codelength(k, x) == Approx(oracle::codelength(k, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("orders above the maximal repetition collapse to uniform") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 3;
    const Text x = oracle::repetitive_text(rng, 1 + rng() % 60, d);
    const std::size_t L = maximal_repetition(x);
    const double uniform = static_cast<double>(x.size()) * std::log(d);
    for (std::size_t k = L + 1; k <= L + 3; ++k) {
      CHECK(std::abs(order_k_codelength(static_cast<int>(k), x) - uniform) < 1e-9);
    }
  }
}

TEST_CASE("vocabulary of a random binary string matches brute force") {
  std::mt19937_64 rng(64);
  for (int trial = 0; trial < 10; ++trial) {
    const Text x = oracle::random_text(rng, 64, 2);
    const std::size_t L = oracle::maximal_repetition(x);
    Eigen::VectorXd h(static_cast<Eigen::Index>(L + 2));
    for (int k = -1; k <= static_cast<int>(L); ++k) h[k + 1] = oracle::codelength(k, x);
    const int g = select_order(h, 1e-9);
    std::vector<Word> expect;
    if (g >= 0) {
      auto set = oracle::distinct(static_cast<std::size_t>(g), x);
      expect.assign(set.begin(), set.end());
    }
    CHECK(ppm_vocabulary(x) == expect);
  }
}

TEST_CASE("mixture dominates each order up to the weight penalty") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Text x = oracle::repetitive_text(rng, rng() % 200, 2 + trial % 3);
    const auto prof = profile(x);
    for (int k = -1; k <= prof.max_order() + 2; ++k) {
      CHECK(prof.total <= prof.codelength(k) + std::log(kPi2Over6) + 2 * std::log(k + 2.0) + 1e-9);
    }
    const double best = prof.orders.minCoeff();
    CHECK(prof.total <= best + std::log(kPi2Over6) + 2 * std::log(prof.order + 2.0) + 1e-9);
    CHECK(prof.total >= 0.0);
  }
}

TEST_CASE("order cap truncates and marks the result non-exact") {
  std::mt19937_64 rng(4);
  Text x = oracle::repetitive_text(rng, 400, 2);
  const auto full = profile(x);
  REQUIRE(full.max_repetition > 3);
  PpmParams capped;
  capped.order_cap = 2;
  const auto part = profile(x, capped);
  CHECK_FALSE(part.exact);
  CHECK(part.max_order() == 2);
  for (int k = -1; k <= 2; ++k) CHECK(part.codelength(k) == Approx(full.codelength(k)));
  CHECK(part.max_repetition == full.max_repetition);

  CHECK_FALSE(PpmParams{}.effective_cap(PpmParams::kExactLimit).has_value());
  CHECK(PpmParams{}.effective_cap(PpmParams::kExactLimit + 1) == PpmParams::kDefaultCap);
  PpmParams exact;
  exact.exact = true;
  CHECK_FALSE(exact.effective_cap(PpmParams::kExactLimit * 4).has_value());
}

TEST_CASE("closed form matches the incremental code length") {
  const Text x = letters("aaaa", 2);
  CHECK(algebraic_codelength(0, x) == Approx(std::log(5.0)).epsilon(1e-13));
  CHECK(algebraic_codelength(1, x) == Approx(std::log(8.0)).epsilon(1e-13));
  CHECK(algebraic_codelength(7, x) == Approx(4 * std::log(2.0)).epsilon(1e-13));
  CHECK(algebraic_codelength(0, Text({}, 2)) == 0.0);
  CHECK_THROWS_AS(algebraic_codelength(-1, x), Error);

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Text y = oracle::repetitive_text(rng, 1 + rng() % 100, 2 + trial % 3);
    const std::size_t L = maximal_repetition(y);
    for (int k = 0; k <= static_cast<int>(L) + 1; ++k) {
      CHECK(std::abs(algebraic_codelength(k, y) - order_k_codelength(k, y)) < 1e-8);
    }
  }
}

TEST_CASE("pointwise mutual information") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Text x = oracle::random_text(rng, rng() % 50, 2 + trial % 3);
    CHECK(std::abs(pointwise_mi(x, Text({}, x.alphabet_size()))) < 1e-9);
    CHECK(std::abs(pointwise_mi(Text({}, x.alphabet_size()), x)) < 1e-9);
    const Text y = oracle::repetitive_text(rng, rng() % 50, x.alphabet_size());
    for (int k = 0; k <= 3; ++k) CHECK(mi_component0(k, x, y) <= 1e-9);
  }
}

TEST_CASE("frak H is superadditive under column splits") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t rows = 1 + rng() % 5;
    const std::size_t cols = 1 + rng() % 4;
    std::vector<std::uint64_t> total(rows, 0);
    double parts = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<std::uint64_t> col(rows);
      for (std::size_t i = 0; i < rows; ++i) {
        col[i] = rng() % 3 == 0 ? 0 : rng() % 20;
        total[i] += col[i];
      }
      parts += frak_H(col);
    }
    CHECK(frak_H(total) >= parts - 1e-9);
  }
}

TEST_CASE("power tail and zeta") {
  CHECK(zeta(2.0) == Approx(kPi2Over6).epsilon(1e-15));
  CHECK(zeta(4.0) == Approx(std::pow(std::numbers::pi, 4) / 90).epsilon(1e-15));
  // sum_{m >= N} m^-2 against a long direct sum plus its integral bound.
  for (long long first : {1LL, 3LL, 70LL, 1000LL}) {
    long double direct = 0;
    for (long long m = first; m < 2'000'000; ++m) direct += 1.0L / (static_cast<long double>(m) * m);
    direct += 1.0L / 2'000'000.0L;  // integral remainder, error < 1e-13
    CHECK(power_tail(2.0, first) == Approx(static_cast<double>(direct)).epsilon(1e-11));
  }
}
