#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ppmwords/error.hpp"
#include "ppmwords/ppm.hpp"
#include "ppmwords/processes.hpp"

namespace ppmwords {

/// A statistic sampled at n = 2^j for j = j_min..j_max.
struct DyadicSeries {
  std::string label;
  int j_min = 0;
  Eigen::VectorXd values;          // values[j - j_min]
  Eigen::VectorXd standard_error;  // empty or same size as values
  std::vector<std::size_t> trials; // empty or same size as values

  DyadicSeries() = default;
  DyadicSeries(std::string label, int j_min, Eigen::VectorXd values);

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.size()); }
  int j_max() const noexcept { return j_min + static_cast<int>(values.size()) - 1; }
  double at(int j) const;

  /// Values s(2^j) = f(2^j) for j = j_min..j_max.
  static DyadicSeries from_function(std::string label, int j_min, int j_max,
                                    const std::function<double(double)>& f);
};

struct HilbergEstimate {
  double pointwise = 0;     // hilberg_pointwise of the series
  double slope = 0;         // OLS exponent
  double intercept = 0;     // OLS intercept, log s at n = 1
  int window_lo = 0;
  int window_hi = 0;
  double residual_rms = 0;  // of the log-log fit
  std::vector<int> excluded;  // j values in the window with s <= 0
};

/// max over the top W points (j >= 1) of log(s(2^j) + 1) / (j log 2).
double hilberg_pointwise(const DyadicSeries& series, int top_points = 3);

/// Least squares of log s(2^j) on j log 2 over [lo, hi]; points with s <= 0
/// are excluded. Default window: the top half of the available j values.
/// Throws Error(InsufficientData) with fewer than 3 positive points.
HilbergEstimate hilberg_regression(const DyadicSeries& series,
                                   std::optional<std::pair<int, int>> window = std::nullopt,
                                   int top_points = 3);

/// Default regression window of a series.
std::pair<int, int> default_window(const DyadicSeries& series);

/// J(2^j) = 2 H(2^j) - H(2^{j+1}) for j = j_min..j_max-1.
DyadicSeries redundancy_series(const DyadicSeries& codelengths);

/// sum_{k >= 0} J(2^{j+k}) / 2^{k+1} over the available points.
double telescope(const DyadicSeries& redundancy, int j);

enum class Statistic { FactsCount, PpmOrder, Vocabulary, Codelength, MutualInformation };

std::string statistic_name(Statistic s);
Statistic parse_statistic(const std::string& name);

struct SeriesRequest {
  Statistic statistic = Statistic::Vocabulary;
  int j_min = 0;
  int j_max = 10;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  std::size_t threads = 0;  // 0: hardware concurrency
  PpmParams ppm;
};

struct MonteCarloResult {
  DyadicSeries series;        // per-point mean and standard error
  Eigen::MatrixXd per_trial;  // row t: trial t at j_min..j_max
  std::size_t completed = 0;  // trials finished (all of them unless aborted)
};

/// Thrown when a trial fails; carries the mean over the trials that did
/// complete before the batch was stopped.
class BatchAborted : public Error {
 public:
  BatchAborted(ErrorKind kind, const std::string& what, MonteCarloResult partial)
      : Error(kind, what), partial_(std::move(partial)) {}
  const MonteCarloResult& partial() const noexcept { return partial_; }

 private:
  MonteCarloResult partial_;
};

/// Runs `trial(t, seed_t)` for t = 0..trials-1 in parallel, where seed_t =
/// derive_seed(master_seed, t); each call returns the statistic at
/// j_min..j_max. Results do not depend on the number of threads.
MonteCarloResult monte_carlo(const std::string& label, int j_min, int j_max, std::size_t trials,
                             std::uint64_t master_seed, std::size_t threads,
                             const std::function<Eigen::VectorXd(std::size_t, std::uint64_t)>& trial);

/// The statistic of one sample path at every dyadic length.
Eigen::VectorXd path_statistic(const ProcessSpec& process, const SeriesRequest& request, std::uint64_t seed);

/// Mean series of a statistic over independent sample paths of a process.
/// FactsCount needs a Santa Fe process; the PPM statistics need a
/// finite-alphabet one. MutualInformation at n is H(x_1^n) + H(x_{n+1}^{2n})
/// - H(x_1^{2n}).
MonteCarloResult monte_carlo_series(const ProcessSpec& process, const SeriesRequest& request);

/// Statistic of a fixed text at its dyadic prefixes (FactsCount excluded).
Eigen::VectorXd text_statistic(const Text& x, Statistic statistic, int j_min, int j_max,
                               const PpmParams& ppm = {});

struct TailBoundCheck {
  bool holds = true;
  double slack_constant = 4;
  Eigen::VectorXd bound;   // D^{k+1} log(n+1) + 2 log n + slack_constant
  Eigen::VectorXd margin;  // bound - value
};

/// Checks E[I(n)] <= D^{k+1} log(n+1) + 2 log n + c at every point.
TailBoundCheck markov_tail_bound_check(int alphabet_size, int order, const DyadicSeries& mutual_information,
                                       double slack_constant = 4);

/// Columns j,n,value,stderr,trials.
void write_series_csv(std::ostream& out, const DyadicSeries& series);

}  // namespace ppmwords
