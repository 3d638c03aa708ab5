#include "ppmwords/processes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <Eigen/Dense>

#include "ppmwords/error.hpp"
#include "ppmwords/numeric.hpp"
#include "ppmwords/textstats.hpp"

namespace ppmwords {
namespace {

constexpr std::uint64_t kFactStream = 0xfac7b175fac7b175ull;
constexpr std::uint64_t kMaxDraw = std::uint64_t{1} << 62;

double uniform_closed0(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t categorical(Rng& rng, const Eigen::Ref<const Eigen::VectorXd>& p) {
  const double u = uniform_closed0(rng);
  double acc = 0;
  std::size_t last = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] <= 0) continue;
    last = static_cast<std::size_t>(i);
    acc += p[i];
    if (u < acc) return last;
  }
  return last;
}

std::size_t power(int base, int exponent) {
  std::size_t r = 1;
  for (int i = 0; i < exponent; ++i) {
    r *= static_cast<std::size_t>(base);
    if (r > (std::size_t{1} << 24)) fail(ErrorKind::InvalidParameter, "Markov context table too large");
  }
  return r;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream ^ 0x6a09e667f3bcc909ull));
}

double uniform_open0(Rng& rng) { return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53; }

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) fail(ErrorKind::InvalidParameter, "empty range");
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

bool FactBits::operator()(std::uint64_t k) const {
  if (k == 0) fail(ErrorKind::InvalidParameter, "fact index starts at 1");
  const std::uint64_t block = (k - 1) >> 6;
  const std::uint64_t word = splitmix64(seed_ + 0x9e3779b97f4a7c15ull * (block + 1));
  return (word >> ((k - 1) & 63)) & 1;
}

std::string FactBits::prefix(std::size_t m) const {
  std::string s(m, '0');
  for (std::size_t k = 1; k <= m; ++k)
    if ((*this)(k)) s[k - 1] = '1';
  return s;
}

SantaFeSpec::SantaFeSpec(double alpha_, std::uint64_t seed_) : alpha(alpha_), seed(seed_) {
  if (!(alpha > 1) || !std::isfinite(alpha)) {
    fail(ErrorKind::InvalidParameter, "Santa Fe exponent must exceed 1 (zeta diverges), got " +
                                          std::to_string(alpha));
  }
}

FactBits SantaFeSpec::facts() const { return FactBits(derive_seed(seed, kFactStream)); }

ZetaSampler::ZetaSampler(double alpha, std::size_t table_size) : alpha_(alpha) {
  if (!(alpha > 1) || !std::isfinite(alpha)) {
    fail(ErrorKind::InvalidParameter, "zeta distribution needs alpha > 1");
  }
  table_size = std::max<std::size_t>(table_size, 1);
  const long double s = alpha;
  zeta_ = zeta<long double>(s);
  survival_.resize(table_size + 1);
  survival_[table_size] = power_tail<long double>(s, static_cast<long long>(table_size) + 1) / zeta_;
  for (std::size_t k = table_size; k >= 1; --k) {
    survival_[k - 1] = survival_[k] + std::pow(static_cast<long double>(k), -s) / zeta_;
  }
}

long double ZetaSampler::pmf(std::uint64_t k) const {
  if (k == 0) return 0;
  return std::pow(static_cast<long double>(k), -static_cast<long double>(alpha_)) / zeta_;
}

long double ZetaSampler::survival(std::uint64_t k) const {
  if (k < survival_.size()) return survival_[k];
  return power_tail<long double>(alpha_, static_cast<long long>(k) + 1) / zeta_;
}

std::uint64_t ZetaSampler::invert(double u) const {
  const long double target = u;
  const std::uint64_t table_end = survival_.size() - 1;
  if (survival_[table_end] < target) {
    auto it = std::partition_point(survival_.begin() + 1, survival_.end(),
                                   [&](long double s) { return s >= target; });
    return static_cast<std::uint64_t>(it - survival_.begin());
  }
  std::uint64_t lo = table_end;  // survival(lo) >= target
  std::uint64_t hi = table_end * 2;
  while (survival(hi) >= target) {
    if (hi >= kMaxDraw) return kMaxDraw;
    lo = hi;
    hi = std::min(hi * 2, kMaxDraw);
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (survival(mid) >= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

SantaFeSample sample_santa_fe(const SantaFeSpec& spec, std::size_t n, std::uint64_t stream) {
  SantaFeSpec checked(spec.alpha, spec.seed);
  ZetaSampler draw(checked.alpha);
  const FactBits z = checked.facts();
  Rng rng(derive_seed(checked.seed, stream));
  SantaFeSample x(n);
  for (auto& p : x) {
    p.k = draw(rng);
    p.bit = z(p.k) ? 1 : 0;
  }
  return x;
}

int santa_fe_predictor(std::uint64_t k, const SantaFeSample& x) {
  bool zero = false, one = false;
  for (const auto& p : x) {
    if (p.k != k) continue;
    (p.bit ? one : zero) = true;
  }
  if (!one) return 0;
  return zero ? 2 : 1;
}

FactsResult count_facts(const SantaFeSample& x, const FactSequence& z) {
  std::unordered_map<std::uint64_t, std::uint8_t> seen;  // bit 0: saw 0, bit 1: saw 1
  std::uint64_t max_key = 0;
  for (const auto& p : x) {
    seen[p.k] |= p.bit ? 2 : 1;
    max_key = std::max(max_key, p.k);
  }
  FactsResult r;
  for (std::uint64_t k = 1;; ++k) {
    if (k > max_key + (std::uint64_t{1} << 20)) {
      fail(ErrorKind::InvalidParameter, "fact sequence is zero for 2^20 indices past the last key");
    }
    auto it = seen.find(k);
    const std::uint8_t mask = it == seen.end() ? 0 : it->second;
    const int g = (mask & 2) == 0 ? 0 : (mask & 1 ? 2 : 1);
    r.verdicts.push_back(static_cast<std::uint8_t>(g));
    if (g != (z(k) ? 1 : 0)) break;
    ++r.count;
  }
  return r;
}

void write_santa_fe_pairs(std::ostream& out, const SantaFeSample& x) {
  for (const auto& p : x) out << p.k << ' ' << int(p.bit) << '\n';
}

SantaFeSample read_santa_fe_pairs(std::istream& in) {
  SantaFeSample x;
  std::string token;
  std::vector<std::string> tokens;
  while (in >> token) tokens.push_back(token);
  if (tokens.size() % 2) fail(ErrorKind::InvalidInput, "odd number of integers in Santa Fe pair file");
  for (std::size_t i = 0; i < tokens.size(); i += 2) {
    std::uint64_t k = 0;
    int b = 0;
    try {
      std::size_t used = 0;
      k = std::stoull(tokens[i], &used);
      if (used != tokens[i].size()) throw std::invalid_argument("k");
      b = std::stoi(tokens[i + 1], &used);
      if (used != tokens[i + 1].size()) throw std::invalid_argument("b");
    } catch (const std::logic_error&) {
      fail(ErrorKind::InvalidInput, "malformed Santa Fe pair " + std::to_string(i / 2 + 1));
    }
    if (k == 0 || (b != 0 && b != 1)) {
      fail(ErrorKind::InvalidInput, "invalid Santa Fe pair " + std::to_string(i / 2 + 1));
    }
    x.push_back({k, static_cast<std::uint8_t>(b)});
  }
  return x;
}

std::vector<std::uint8_t> sample_bernoulli(std::size_t n, double theta, std::uint64_t seed) {
  if (!(theta >= 0 && theta <= 1)) fail(ErrorKind::InvalidParameter, "Bernoulli parameter outside [0,1]");
  Rng rng(seed);
  std::vector<std::uint8_t> x(n);
  for (auto& b : x) b = uniform_closed0(rng) < theta ? 1 : 0;
  return x;
}

std::vector<std::uint8_t> sample_mixture_bernoulli(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const double theta = uniform_closed0(rng);
  return sample_bernoulli(n, theta, rng());
}

double mixture_bernoulli_log_prob(std::span<const std::uint8_t> x) {
  std::size_t ones = 0;
  for (auto b : x) {
    if (b > 1) fail(ErrorKind::InvalidInput, "mixture Bernoulli strings are binary");
    ones += b;
  }
  const double n = static_cast<double>(x.size());
  const double s = static_cast<double>(ones);
  return -std::log(n + 1) - (log_factorial(n) - log_factorial(s) - log_factorial(n - s));
}

double mixture_bernoulli_prob(std::span<const std::uint8_t> x) { return std::exp(mixture_bernoulli_log_prob(x)); }

Text bits_to_text(std::span<const std::uint8_t> bits) {
  std::vector<Symbol> s(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) fail(ErrorKind::InvalidInput, "expected bits");
    s[i] = bits[i] + 1u;
  }
  return Text(std::move(s), 2);
}

Eigen::VectorXd stationary_distribution(int order, int alphabet_size, const Eigen::MatrixXd& transitions) {
  const std::size_t contexts = power(alphabet_size, order);
  if (contexts > 4096) fail(ErrorKind::InvalidParameter, "stationary solve limited to 4096 contexts");
  if (static_cast<std::size_t>(transitions.rows()) != contexts || transitions.cols() != alphabet_size) {
    fail(ErrorKind::InvalidParameter, "transition table must be D^k x D");
  }
  const auto C = static_cast<Eigen::Index>(contexts);
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(C, C);
  for (Eigen::Index c = 0; c < C; ++c)
    for (Eigen::Index a = 0; a < alphabet_size; ++a) Q(c, (c * alphabet_size + a) % C) += transitions(c, a);
  Eigen::MatrixXd A(C + 1, C);
  A.topRows(C) = Q.transpose() - Eigen::MatrixXd::Identity(C, C);
  A.row(C).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(C + 1);
  b[C] = 1;
  Eigen::VectorXd pi = A.colPivHouseholderQr().solve(b);
  pi = pi.cwiseMax(0.0);
  return pi / pi.sum();
}

MarkovSpec::MarkovSpec(int order, int alphabet_size, Eigen::MatrixXd transitions, Eigen::VectorXd initial)
    : order_(order), alphabet_size_(alphabet_size), transitions_(std::move(transitions)), initial_(std::move(initial)) {
  if (order < 0) fail(ErrorKind::InvalidParameter, "Markov order must be nonnegative");
  if (alphabet_size < 1) fail(ErrorKind::InvalidParameter, "alphabet size must be positive");
  const auto C = static_cast<Eigen::Index>(power(alphabet_size, order));
  if (transitions_.rows() != C || transitions_.cols() != alphabet_size) {
    fail(ErrorKind::InvalidParameter, "transition table must be D^k x D");
  }
  if (initial_.size() != C) fail(ErrorKind::InvalidParameter, "initial distribution must have D^k entries");
  if (!transitions_.allFinite() || (transitions_.array() < 0).any()) {
    fail(ErrorKind::InvalidParameter, "transition probabilities must be finite and nonnegative");
  }
  for (Eigen::Index c = 0; c < C; ++c) {
    if (std::abs(transitions_.row(c).sum() - 1) > 1e-12) {
      fail(ErrorKind::InvalidParameter, "transition row " + std::to_string(c) + " does not sum to 1");
    }
  }
  if (!initial_.allFinite() || (initial_.array() < 0).any() || std::abs(initial_.sum() - 1) > 1e-12) {
    fail(ErrorKind::InvalidParameter, "initial distribution is not a probability vector");
  }
  Eigen::VectorXd next = Eigen::VectorXd::Zero(C);
  for (Eigen::Index c = 0; c < C; ++c)
    for (Eigen::Index a = 0; a < alphabet_size; ++a)
      next[(c * alphabet_size + a) % C] += initial_[c] * transitions_(c, a);
  if ((next - initial_).lpNorm<Eigen::Infinity>() > 1e-10) {
    fail(ErrorKind::InvalidParameter, "initial distribution is not stationary for the chain");
  }
}

MarkovSpec MarkovSpec::stationary(int order, int alphabet_size, Eigen::MatrixXd transitions) {
  Eigen::VectorXd pi = stationary_distribution(order, alphabet_size, transitions);
  return MarkovSpec(order, alphabet_size, std::move(transitions), std::move(pi));
}

MarkovSpec MarkovSpec::default_chain() {
  Eigen::MatrixXd p = Eigen::MatrixXd::Constant(4, 4, 0.1);
  for (int b = 0; b < 4; ++b) p(b, (b + 1) % 4) = 0.7;
  return stationary(1, 4, std::move(p));
}

MarkovSpec MarkovSpec::uniform(int alphabet_size) {
  if (alphabet_size < 1) fail(ErrorKind::InvalidParameter, "alphabet size must be positive");
  return MarkovSpec(0, alphabet_size, Eigen::MatrixXd::Constant(1, alphabet_size, 1.0 / alphabet_size),
                    Eigen::VectorXd::Ones(1));
}

Text sample_markov(const MarkovSpec& spec, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t D = static_cast<std::size_t>(spec.alphabet_size());
  const std::size_t C = spec.contexts();
  const std::size_t k = static_cast<std::size_t>(spec.order());
  std::vector<Symbol> out;
  out.reserve(n);
  std::size_t c = categorical(rng, spec.initial());
  std::vector<Symbol> start(k);
  for (std::size_t i = k, v = c; i-- > 0; v /= D) start[i] = static_cast<Symbol>(v % D + 1);
  for (std::size_t i = 0; i < std::min(k, n); ++i) out.push_back(start[i]);
  while (out.size() < n) {
    const std::size_t a = categorical(rng, spec.transitions().row(static_cast<Eigen::Index>(c)).transpose());
    out.push_back(static_cast<Symbol>(a + 1));
    c = (c * D + a) % C;
  }
  return Text(std::move(out), spec.alphabet_size());
}

double markov_entropy_rate(const MarkovSpec& spec) {
  double h = 0;
  const auto& p = spec.transitions();
  for (Eigen::Index c = 0; c < p.rows(); ++c) {
    double row = 0;
    for (Eigen::Index a = 0; a < p.cols(); ++a)
      if (p(c, a) > 0) row -= p(c, a) * std::log(p(c, a));
    h += spec.initial()[c] * row;
  }
  return h;
}

Text permute_text(const Text& x, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Symbol> s(x.symbols().begin(), x.symbols().end());
  for (std::size_t i = s.size(); i > 1; --i) std::swap(s[i - 1], s[uniform_below(rng, i)]);
  return Text(std::move(s), x.alphabet_size());
}

int topic_indicator(std::span<const Symbol> w, double y, const Text& x) {
  if (!(y > 0 && y < 1)) fail(ErrorKind::InvalidParameter, "threshold must lie in (0,1)");
  if (w.size() > x.size()) {
    fail(ErrorKind::InvalidInput, "relative frequency undefined: word longer than text");
  }
  const double freq = static_cast<double>(ngram_count(w, x)) / static_cast<double>(x.size() - w.size() + 1);
  return freq > y ? 1 : 0;
}

std::string ProcessSpec::kind_name() const {
  switch (kind) {
    case Kind::SantaFe: return "santa-fe";
    case Kind::MixtureBernoulli: return "mixture-bernoulli";
    case Kind::Bernoulli: return "bernoulli";
    case Kind::Markov: return "markov";
  }
  return "unknown";
}

ProcessSpec parse_process_config(std::istream& in, const std::filesystem::path& base_dir) {
  ProcessSpec spec;
  std::string kind = "santa-fe";
  int alphabet = 0;
  int order = 1;
  std::string transitions;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::InvalidInput, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "kind") kind = value;
      else if (key == "seed") spec.seed = std::stoull(value);
      else if (key == "alpha") spec.alpha = std::stod(value);
      else if (key == "theta") spec.theta = std::stod(value);
      else if (key == "alphabet") alphabet = std::stoi(value);
      else if (key == "order") order = std::stoi(value);
      else if (key == "transitions") transitions = value;
      else fail(ErrorKind::InvalidParameter, "config line " + std::to_string(line_no) + ": unknown key " + key);
    } catch (const std::logic_error&) {
      fail(ErrorKind::InvalidParameter, "config line " + std::to_string(line_no) + ": bad value for " + key);
    }
  }
  if (kind == "santa-fe") {
    spec.kind = ProcessSpec::Kind::SantaFe;
    SantaFeSpec(spec.alpha, spec.seed);
  } else if (kind == "mixture-bernoulli") {
    spec.kind = ProcessSpec::Kind::MixtureBernoulli;
  } else if (kind == "bernoulli") {
    spec.kind = ProcessSpec::Kind::Bernoulli;
    if (!(spec.theta >= 0 && spec.theta <= 1)) fail(ErrorKind::InvalidParameter, "theta outside [0,1]");
  } else if (kind == "iid") {
    spec.kind = ProcessSpec::Kind::Markov;
    spec.markov = MarkovSpec::uniform(alphabet ? alphabet : 2);
  } else if (kind == "markov") {
    spec.kind = ProcessSpec::Kind::Markov;
    if (transitions.empty()) {
      spec.markov = MarkovSpec::default_chain();
    } else {
      if (alphabet < 1) fail(ErrorKind::InvalidParameter, "markov with a transition file needs alphabet");
      const auto path = base_dir.empty() ? std::filesystem::path(transitions) : base_dir / transitions;
      std::ifstream tf(path);
      if (!tf) fail(ErrorKind::Io, "cannot read transition table " + path.string());
      std::vector<double> values;
      double v;
      while (tf >> v) values.push_back(v);
      if (!tf.eof()) fail(ErrorKind::InvalidInput, "non-numeric entry in " + path.string());
      const std::size_t rows = power(alphabet, order);
      if (values.size() != rows * static_cast<std::size_t>(alphabet)) {
        fail(ErrorKind::InvalidInput, "transition table " + path.string() + " must hold D^k x D numbers");
      }
      Eigen::MatrixXd p(static_cast<Eigen::Index>(rows), alphabet);
      for (std::size_t i = 0; i < values.size(); ++i)
        p(static_cast<Eigen::Index>(i) / alphabet, static_cast<Eigen::Index>(i) % alphabet) = values[i];
      spec.markov = MarkovSpec::stationary(order, alphabet, std::move(p));
    }
  } else {
    fail(ErrorKind::InvalidParameter, "unknown process kind " + kind);
  }
  return spec;
}

Text sample_process(const ProcessSpec& spec, std::size_t n, std::uint64_t stream) {
  const std::uint64_t seed = derive_seed(spec.seed, stream);
  switch (spec.kind) {
    case ProcessSpec::Kind::MixtureBernoulli: return bits_to_text(sample_mixture_bernoulli(n, seed));
    case ProcessSpec::Kind::Bernoulli: return bits_to_text(sample_bernoulli(n, spec.theta, seed));
    case ProcessSpec::Kind::Markov: return sample_markov(*spec.markov, n, seed);
    case ProcessSpec::Kind::SantaFe: break;
  }
  fail(ErrorKind::InvalidParameter, "Santa Fe samples have an infinite alphabet; use sample_santa_fe");
}

void write_symbols(std::ostream& out, const Text& x) {
  if (x.alphabet_size() > 256) fail(ErrorKind::InvalidParameter, "raw symbol files need D <= 256");
  for (Symbol s : x.symbols()) out.put(static_cast<char>(s - 1));
}

}  // namespace ppmwords
