#include "ppmwords/scaling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include <Eigen/Dense>

namespace ppmwords {
namespace {

const double kLog2 = std::log(2.0);

MonteCarloResult summarize(const std::string& label, int j_min, Eigen::MatrixXd rows,
                           const std::vector<bool>& done) {
  MonteCarloResult r;
  const auto points = rows.cols();
  std::vector<Eigen::Index> kept;
  for (std::size_t t = 0; t < done.size(); ++t)
    if (done[t]) kept.push_back(static_cast<Eigen::Index>(t));
  r.completed = kept.size();
  r.per_trial = rows(kept, Eigen::all);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(points);
  Eigen::VectorXd se = Eigen::VectorXd::Zero(points);
  if (!kept.empty()) {
    mean = r.per_trial.colwise().mean().transpose();
    if (kept.size() > 1) {
      const Eigen::MatrixXd centered = r.per_trial.rowwise() - mean.transpose();
      const double T = static_cast<double>(kept.size());
      se = (centered.array().square().colwise().sum() / (T - 1) / T).sqrt().transpose();
    }
  }
  r.series = DyadicSeries(label, j_min, mean);
  r.series.standard_error = se;
  r.series.trials.assign(static_cast<std::size_t>(points), kept.size());
  return r;
}

void check_range(int j_min, int j_max) {
  if (j_min < 0 || j_max < j_min || j_max > 40) {
    fail(ErrorKind::InvalidParameter, "dyadic range must satisfy 0 <= jmin <= jmax <= 40");
  }
}

}  // namespace

DyadicSeries::DyadicSeries(std::string label_, int j_min_, Eigen::VectorXd values_)
    : label(std::move(label_)), j_min(j_min_), values(std::move(values_)) {}

double DyadicSeries::at(int j) const {
  if (j < j_min || j > j_max()) fail(ErrorKind::InvalidParameter, "j outside the series");
  return values[j - j_min];
}

DyadicSeries DyadicSeries::from_function(std::string label, int j_min, int j_max,
                                         const std::function<double(double)>& f) {
  Eigen::VectorXd v(std::max(0, j_max - j_min + 1));
  for (int j = j_min; j <= j_max; ++j) v[j - j_min] = f(std::ldexp(1.0, j));
  return DyadicSeries(std::move(label), j_min, std::move(v));
}

double hilberg_pointwise(const DyadicSeries& series, int top_points) {
  if (series.size() == 0) fail(ErrorKind::InsufficientData, "empty series");
  if (top_points < 1) fail(ErrorKind::InvalidParameter, "need at least one top point");
  double best = -std::numeric_limits<double>::infinity();
  int used = 0;
  for (int j = series.j_max(); j >= std::max(series.j_min, 1) && used < top_points; --j, ++used) {
    const double s = std::max(series.at(j), 0.0);
    best = std::max(best, std::log1p(s) / (j * kLog2));
  }
  if (used == 0) fail(ErrorKind::InsufficientData, "pointwise exponent needs a point with j >= 1");
  return best;
}

std::pair<int, int> default_window(const DyadicSeries& series) {
  const int m = static_cast<int>(series.size());
  return {series.j_max() - (m + 1) / 2 + 1, series.j_max()};
}

HilbergEstimate hilberg_regression(const DyadicSeries& series, std::optional<std::pair<int, int>> window,
                                   int top_points) {
  if (series.size() == 0) fail(ErrorKind::InsufficientData, "empty series");
  auto [lo, hi] = window.value_or(default_window(series));
  lo = std::max(lo, series.j_min);
  hi = std::min(hi, series.j_max());
  HilbergEstimate e;
  e.window_lo = lo;
  e.window_hi = hi;
  std::vector<double> xs, ys;
  for (int j = lo; j <= hi; ++j) {
    const double s = series.at(j);
    if (s > 0 && std::isfinite(s)) {
      xs.push_back(j * kLog2);
      ys.push_back(std::log(s));
    } else {
      e.excluded.push_back(j);
    }
  }
  if (xs.size() < 3) {
    fail(ErrorKind::InsufficientData, "regression window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                          "] has " + std::to_string(xs.size()) + " positive points, need 3");
  }
  const auto m = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd X(m, 2);
  X.col(0).setOnes();
  X.col(1) = Eigen::Map<Eigen::VectorXd>(xs.data(), m);
  const Eigen::Map<Eigen::VectorXd> y(ys.data(), m);
  const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(y);
  e.intercept = beta[0];
  e.slope = beta[1];
  e.residual_rms = std::sqrt((X * beta - y).squaredNorm() / static_cast<double>(m));
  e.pointwise = hilberg_pointwise(series, top_points);
  return e;
}

DyadicSeries redundancy_series(const DyadicSeries& H) {
  if (H.size() < 2) fail(ErrorKind::InsufficientData, "redundancy needs two consecutive dyadic points");
  const auto m = H.values.size() - 1;
  Eigen::VectorXd J = 2 * H.values.head(m) - H.values.tail(m);
  return DyadicSeries("J(" + H.label + ")", H.j_min, std::move(J));
}

double telescope(const DyadicSeries& J, int j) {
  double sum = 0;
  for (int k = 0; j + k <= J.j_max(); ++k) sum += std::ldexp(J.at(j + k), -(k + 1));
  return sum;
}

std::string statistic_name(Statistic s) {
  switch (s) {
    case Statistic::FactsCount: return "facts";
    case Statistic::PpmOrder: return "ppm-order";
    case Statistic::Vocabulary: return "vocabulary";
    case Statistic::Codelength: return "codelength";
    case Statistic::MutualInformation: return "mutual-information";
  }
  return "unknown";
}

Statistic parse_statistic(const std::string& name) {
  for (auto s : {Statistic::FactsCount, Statistic::PpmOrder, Statistic::Vocabulary, Statistic::Codelength,
                 Statistic::MutualInformation})
    if (statistic_name(s) == name) return s;
  fail(ErrorKind::InvalidParameter, "unknown statistic " + name);
}

MonteCarloResult monte_carlo(const std::string& label, int j_min, int j_max, std::size_t trials,
                             std::uint64_t master_seed, std::size_t threads,
                             const std::function<Eigen::VectorXd(std::size_t, std::uint64_t)>& trial) {
  check_range(j_min, j_max);
  if (trials < 1) fail(ErrorKind::InvalidParameter, "need at least one trial");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, trials);
  const Eigen::Index points = j_max - j_min + 1;
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(trials), points);
  std::vector<bool> done(trials, false);
  std::vector<std::exception_ptr> errors(trials);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= trials || stop.load()) return;
      try {
        Eigen::VectorXd v = trial(t, derive_seed(master_seed, t));
        if (v.size() != points) fail(ErrorKind::Numeric, "trial returned the wrong number of points");
        std::lock_guard lock(mu);
        rows.row(static_cast<Eigen::Index>(t)) = v.transpose();
        done[t] = true;
      } catch (...) {
        std::lock_guard lock(mu);
        errors[t] = std::current_exception();
        stop = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  MonteCarloResult result = summarize(label, j_min, std::move(rows), done);
  for (std::size_t t = 0; t < trials; ++t) {
    if (!errors[t]) continue;
    ErrorKind kind = ErrorKind::Numeric;
    std::string what = "unknown failure";
    try {
      std::rethrow_exception(errors[t]);
    } catch (const Error& e) {
      kind = e.kind();
      what = e.what();
    } catch (const std::exception& e) {
      what = e.what();
    }
    throw BatchAborted(kind,
                       "trial " + std::to_string(t) + " failed: " + what + " (" +
                           std::to_string(result.completed) + " of " + std::to_string(trials) +
                           " trials completed)",
                       std::move(result));
  }
  return result;
}

Eigen::VectorXd text_statistic(const Text& x, Statistic statistic, int j_min, int j_max, const PpmParams& ppm) {
  check_range(j_min, j_max);
  const auto points = static_cast<Eigen::Index>(j_max - j_min + 1);
  Eigen::VectorXd out(points);
  if (statistic == Statistic::FactsCount) {
    fail(ErrorKind::InvalidParameter, "facts count applies to Santa Fe samples only");
  }
  const std::size_t need = std::size_t{1} << (j_max + (statistic == Statistic::MutualInformation ? 1 : 0));
  if (x.size() < need) {
    fail(ErrorKind::InsufficientData, "text of length " + std::to_string(x.size()) + " is shorter than " +
                                          std::to_string(need));
  }
  if (statistic == Statistic::MutualInformation) {
    std::vector<std::size_t> lengths;
    for (int j = j_min; j <= j_max + 1; ++j) lengths.push_back(std::size_t{1} << j);
    const auto joint = prefix_profiles(x, lengths, ppm);
    for (int j = j_min; j <= j_max; ++j) {
      const std::size_t n = std::size_t{1} << j;
      std::vector<Symbol> second(x.symbols().begin() + static_cast<std::ptrdiff_t>(n),
                                 x.symbols().begin() + static_cast<std::ptrdiff_t>(2 * n));
      const double h2 = total_codelength(Text(std::move(second), x.alphabet_size()), ppm);
      const auto i = static_cast<std::size_t>(j - j_min);
      out[j - j_min] = joint[i].total + h2 - joint[i + 1].total;
    }
    return out;
  }
  std::vector<std::size_t> lengths;
  for (int j = j_min; j <= j_max; ++j) lengths.push_back(std::size_t{1} << j);
  const auto profiles = prefix_profiles(x, lengths, ppm);
  for (Eigen::Index i = 0; i < points; ++i) {
    const auto& p = profiles[static_cast<std::size_t>(i)];
    switch (statistic) {
      case Statistic::PpmOrder: out[i] = p.order; break;
      case Statistic::Vocabulary: out[i] = static_cast<double>(p.vocabulary_size); break;
      case Statistic::Codelength: out[i] = p.total; break;
      default: break;
    }
  }
  return out;
}

Eigen::VectorXd path_statistic(const ProcessSpec& process, const SeriesRequest& request, std::uint64_t seed) {
  check_range(request.j_min, request.j_max);
  const std::size_t n_max = std::size_t{1} << request.j_max;
  if (request.statistic == Statistic::FactsCount) {
    if (process.kind != ProcessSpec::Kind::SantaFe) {
      fail(ErrorKind::InvalidParameter, "facts count needs a Santa Fe process");
    }
    const SantaFeSpec spec(process.alpha, seed);
    const SantaFeSample x = sample_santa_fe(spec, n_max, 0);
    const FactBits z = spec.facts();
    const FactSequence zf = [&](std::uint64_t k) { return z(k); };
    Eigen::VectorXd out(request.j_max - request.j_min + 1);
    for (int j = request.j_min; j <= request.j_max; ++j) {
      const SantaFeSample prefix(x.begin(), x.begin() + (std::ptrdiff_t{1} << j));
      out[j - request.j_min] = static_cast<double>(count_facts(prefix, zf).count);
    }
    return out;
  }
  ProcessSpec p = process;
  p.seed = seed;
  const std::size_t len = request.statistic == Statistic::MutualInformation ? 2 * n_max : n_max;
  return text_statistic(sample_process(p, len, 0), request.statistic, request.j_min, request.j_max, request.ppm);
}

MonteCarloResult monte_carlo_series(const ProcessSpec& process, const SeriesRequest& request) {
  const std::string label = process.kind_name() + ":" + statistic_name(request.statistic);
  return monte_carlo(label, request.j_min, request.j_max, request.trials, request.master_seed, request.threads,
                     [&](std::size_t, std::uint64_t seed) { return path_statistic(process, request, seed); });
}

TailBoundCheck markov_tail_bound_check(int alphabet_size, int order, const DyadicSeries& mi,
                                       double slack_constant) {
  TailBoundCheck c;
  c.slack_constant = slack_constant;
  const double states = std::pow(double(alphabet_size), order + 1);
  c.bound.resize(mi.values.size());
  for (int j = mi.j_min; j <= mi.j_max(); ++j) {
    const double n = std::ldexp(1.0, j);
    c.bound[j - mi.j_min] = states * std::log(n + 1) + 2 * std::log(n) + slack_constant;
  }
  c.margin = c.bound - mi.values;
  c.holds = (c.margin.array() >= 0).all();
  return c;
}

void write_series_csv(std::ostream& out, const DyadicSeries& series) {
  out << "j,n,value,stderr,trials\n";
  char buf[64];
  for (int j = series.j_min; j <= series.j_max(); ++j) {
    const auto i = static_cast<std::size_t>(j - series.j_min);
    out << j << ',' << (std::uint64_t{1} << j) << ',';
    std::snprintf(buf, sizeof buf, "%.17g", series.values[static_cast<Eigen::Index>(i)]);
    out << buf << ',';
    if (series.standard_error.size() > 0) {
      std::snprintf(buf, sizeof buf, "%.17g", series.standard_error[static_cast<Eigen::Index>(i)]);
      out << buf;
    }
    out << ',';
    if (!series.trials.empty()) out << series.trials[i];
    out << '\n';
  }
}

}  // namespace ppmwords
