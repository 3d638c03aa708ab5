#include "ppmwords/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ppmwords/corpus.hpp"
#include "ppmwords/ppm.hpp"
#include "ppmwords/processes.hpp"
#include "ppmwords/scaling.hpp"
#include "ppmwords/svg.hpp"

namespace ppmwords::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

struct Options {
  std::string input;
  std::vector<std::string> inputs;
  std::string output_dir = ".";
  std::string output;
  std::uint64_t seed = 1;
  std::optional<std::size_t> trials;
  std::optional<int> jmin;
  std::optional<int> jmax;
  std::optional<double> alpha;
  std::optional<double> theta;
  std::optional<std::size_t> order_cap;
  bool exact = false;
  bool permute = false;
  std::string normalize = "bytes";
  bool no_timestamp = false;
  std::size_t threads = 0;
  std::string kind;
  std::string config;
  std::size_t length = 0;
  std::uint64_t stream = 0;
  std::string statistic = "vocabulary";
};

int exit_for(ErrorKind kind) { return exit_code(kind); }

NormalizationPolicy policy_of(const Options& o) {
  return o.normalize == "fold" ? NormalizationPolicy::fold() : NormalizationPolicy::raw();
}

PpmParams ppm_of(const Options& o) {
  PpmParams p;
  p.order_cap = o.order_cap;
  p.exact = o.exact;
  return p;
}

ojson ppm_json(const Options& o) {
  ojson j;
  j["order_cap"] = o.order_cap ? ojson(*o.order_cap) : ojson(nullptr);
  j["exact"] = o.exact;
  return j;
}

std::string timestamp_of(const Options& o) { return o.no_timestamp ? std::string() : utc_timestamp(); }

std::string digest(const Text& x) {
  std::uint64_t h = 1469598103934665603ull;
  for (Symbol s : x.symbols()) {
    for (int b = 0; b < 4; ++b) {
      h ^= (s >> (8 * b)) & 0xFF;
      h *= 1099511628211ull;
    }
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

fs::path output_dir(const Options& o) {
  fs::path dir(o.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << content;
  if (!out) fail(ErrorKind::Io, "error while writing " + path.string());
}

std::string series_csv(const DyadicSeries& s) {
  std::ostringstream out;
  write_series_csv(out, s);
  return out.str();
}

std::string records_csv(const std::vector<AnalysisRecord>& records) {
  std::ostringstream out;
  write_records_csv(out, records);
  return out.str();
}

std::string fmt(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

AnalysisRecord make_record(const std::string& source, const std::string& label, const CodeLengthProfile& p,
                           const std::string& fp, const std::string& ts) {
  AnalysisRecord r;
  r.source = source;
  r.label = label;
  r.n = p.n;
  r.alphabet_size = p.alphabet_size;
  r.max_repetition = p.max_repetition;
  r.ppm_order = p.order;
  r.vocabulary_size = p.vocabulary_size;
  r.codelength_nats = p.total;
  r.codelength_bits = p.total / std::log(2.0);
  r.exact = p.exact;
  r.fingerprint = fp;
  r.timestamp = ts;
  return r;
}

ojson estimate_json(const HilbergEstimate& e) {
  ojson j;
  j["pointwise"] = e.pointwise;
  j["slope"] = e.slope;
  j["intercept"] = e.intercept;
  j["window"] = {e.window_lo, e.window_hi};
  j["residual_rms"] = e.residual_rms;
  j["excluded_j"] = e.excluded;
  return j;
}

std::optional<HilbergEstimate> try_regression(const DyadicSeries& s) {
  try {
    return hilberg_regression(s);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InsufficientData) throw;
    return std::nullopt;
  }
}

PlotCurve curve_of(const DyadicSeries& s, const std::string& label, const std::optional<HilbergEstimate>& e) {
  PlotCurve c;
  c.label = label;
  for (int j = s.j_min; j <= s.j_max(); ++j) {
    c.x.push_back(std::ldexp(1.0, j));
    c.y.push_back(s.at(j));
  }
  if (e) c.fit = PlotCurve::Fit{e->slope, e->intercept, std::ldexp(1.0, e->window_lo), std::ldexp(1.0, e->window_hi)};
  return c;
}

Corpus load_corpus(const Options& o) {
  Corpus c = ingest(o.input, policy_of(o));
  if (c.text.alphabet_size() < 2) {
    fail(ErrorKind::InvalidInput, "input " + o.input + " uses a single symbol; PPM analysis needs D >= 2");
  }
  return c;
}

std::vector<std::size_t> prefix_lengths(const Options& o, std::size_t n) {
  auto lengths = dyadic_prefixes(n, o.jmax);
  const std::size_t lo = o.jmin ? (std::size_t{1} << *o.jmin) : 1;
  std::erase_if(lengths, [&](std::size_t len) { return len < lo; });
  if (lengths.empty()) fail(ErrorKind::InsufficientData, "no dyadic prefix in the requested range");
  return lengths;
}

// analyze ------------------------------------------------------------------

int analyze(const Options& o, std::ostream& out) {
  const Corpus c = load_corpus(o);
  const auto lengths = prefix_lengths(o, c.text.size());
  ojson config;
  config["command"] = "analyze";
  config["input"] = fs::path(o.input).filename().string();
  config["text_fnv1a64"] = digest(c.text);
  config["normalize"] = policy_of(o).to_json();
  config["ppm"] = ppm_json(o);
  config["jmin"] = o.jmin ? ojson(*o.jmin) : ojson(nullptr);
  config["jmax"] = o.jmax ? ojson(*o.jmax) : ojson(nullptr);
  config["permute"] = o.permute;
  config["seed"] = o.seed;
  const std::string fp = fingerprint(config);
  const std::string ts = timestamp_of(o);
  const std::string source = fs::path(o.input).filename().string();

  std::vector<AnalysisRecord> records;
  for (const auto& p : prefix_profiles(c.text, lengths, ppm_of(o))) records.push_back(make_record(source, "text", p, fp, ts));
  if (o.permute) {
    const Text shuffled = permute_text(c.text, derive_seed(o.seed, 0));
    for (const auto& p : prefix_profiles(shuffled, lengths, ppm_of(o)))
      records.push_back(make_record(source, "permuted", p, fp, ts));
  }
  const fs::path dir = output_dir(o);
  const std::string stem = fs::path(o.input).stem().string();
  save_records(dir / (stem + ".records.jsonl"), records);
  write_file(dir / (stem + ".records.csv"), records_csv(records));

  out << "# " << source << "  D=" << c.text.alphabet_size() << "  n=" << c.text.size()
      << "  normalize=" << policy_of(o).name() << "  fingerprint=" << fp << '\n';
  out << "label       n        L     G   |V_PPM|   H_PPM[bits]   exact\n";
  for (const auto& r : records) {
    char line[160];
    std::snprintf(line, sizeof line, "%-9s %9zu %6zu %4d %8zu %14.2f   %s\n", r.label.c_str(), r.n, r.max_repetition,
                  r.ppm_order, r.vocabulary_size, r.codelength_bits, r.exact ? "yes" : "no");
    out << line;
  }
  out << "wrote " << (dir / (stem + ".records.jsonl")).string() << '\n';
  return kOk;
}

// generate -----------------------------------------------------------------

ProcessSpec process_of(const Options& o) {
  ProcessSpec spec;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) fail(ErrorKind::Io, "cannot read process config " + o.config);
    spec = parse_process_config(in, fs::path(o.config).parent_path());
  } else {
    std::ostringstream cfg;
    cfg << "kind = " << (o.kind.empty() ? "santa-fe" : o.kind) << '\n';
    std::istringstream in(cfg.str());
    spec = parse_process_config(in);
    spec.seed = o.seed;
  }
  if (o.alpha) spec.alpha = *o.alpha;
  if (o.theta) spec.theta = *o.theta;
  if (spec.kind == ProcessSpec::Kind::SantaFe) SantaFeSpec(spec.alpha, spec.seed);
  return spec;
}

int generate(const Options& o, std::ostream& out) {
  const ProcessSpec spec = process_of(o);
  std::ostringstream payload;
  ojson meta;
  meta["kind"] = spec.kind_name();
  meta["seed"] = spec.seed;
  meta["stream"] = o.stream;
  meta["n"] = o.length;
  if (spec.kind == ProcessSpec::Kind::SantaFe) {
    const SantaFeSpec sf(spec.alpha, spec.seed);
    const SantaFeSample x = sample_santa_fe(sf, o.length, o.stream);
    write_santa_fe_pairs(payload, x);
    std::uint64_t max_key = 0;
    for (const auto& p : x) max_key = std::max(max_key, p.k);
    meta["alpha"] = spec.alpha;
    meta["fact_seed"] = sf.facts().seed();
    meta["facts_prefix"] = sf.facts().prefix(static_cast<std::size_t>(std::min<std::uint64_t>(max_key, 1 << 16)));
  } else {
    const Text x = sample_process(spec, o.length, o.stream);
    write_symbols(payload, x);
    meta["alphabet_size"] = x.alphabet_size();
    if (spec.kind == ProcessSpec::Kind::Bernoulli) meta["theta"] = spec.theta;
  }
  if (o.output.empty() || o.output == "-") {
    out << payload.str();
  } else {
    write_file(o.output, payload.str());
    write_file(o.output + ".json", meta.dump(2) + "\n");
  }
  return kOk;
}

// facts --------------------------------------------------------------------

int facts(const Options& o, std::ostream& out) {
  const SantaFeSpec spec(o.alpha.value_or(2.0), o.seed);
  SantaFeSample x;
  if (!o.input.empty()) {
    std::ifstream in(o.input);
    if (!in) fail(ErrorKind::Io, "cannot read " + o.input);
    x = read_santa_fe_pairs(in);
  } else {
    x = sample_santa_fe(spec, o.length, o.stream);
  }
  const FactBits z = spec.facts();
  const auto r = count_facts(x, [&](std::uint64_t k) { return z(k); });
  out << "n=" << x.size() << " facts=" << r.count << '\n';
  out << "verdicts=";
  for (auto v : r.verdicts) out << int(v);
  out << "\nfacts_prefix=" << z.prefix(r.verdicts.size()) << '\n';
  return kOk;
}

// experiment ---------------------------------------------------------------

void write_summary(const fs::path& path, ojson summary, const Options& o) {
  if (!o.no_timestamp) summary["timestamp"] = utc_timestamp();
  write_file(path, summary.dump(2) + "\n");
}

int santa_fe_facts(const Options& o, std::ostream& out) {
  ProcessSpec spec;
  spec.kind = ProcessSpec::Kind::SantaFe;
  spec.alpha = o.alpha.value_or(2.0);
  SantaFeSpec(spec.alpha, 0);
  SeriesRequest req;
  req.statistic = Statistic::FactsCount;
  req.j_min = o.jmin.value_or(6);
  req.j_max = o.jmax.value_or(14);
  req.trials = o.trials.value_or(100);
  req.master_seed = o.seed;
  req.threads = o.threads;
  const auto mc = monte_carlo_series(spec, req);
  const auto est = hilberg_regression(mc.series);
  std::size_t regressed = 0, below = 0;
  for (Eigen::Index t = 0; t < mc.per_trial.rows(); ++t) {
    DyadicSeries path("path", req.j_min, mc.per_trial.row(t).transpose());
    if (auto e = try_regression(path)) {
      ++regressed;
      if (e->slope <= est.slope + 0.05) ++below;
    }
  }
  ojson config;
  config["experiment"] = "santa-fe-facts";
  config["alpha"] = spec.alpha;
  config["jmin"] = req.j_min;
  config["jmax"] = req.j_max;
  config["trials"] = req.trials;
  config["seed"] = o.seed;
  ojson summary;
  summary["experiment"] = "santa-fe-facts";
  summary["fingerprint"] = fingerprint(config);
  summary["config"] = config;
  summary["statistic"] = "facts";
  summary["target_exponent"] = 1 / spec.alpha;
  summary["estimate"] = estimate_json(est);
  summary["per_path"] = {{"regressed", regressed},
                         {"slope_within_mean_plus_0.05", below},
                         {"fraction", regressed ? double(below) / double(regressed) : 0.0}};
  const fs::path dir = output_dir(o);
  write_file(dir / "santa-fe-facts.series.csv", series_csv(mc.series));
  write_summary(dir / "santa-fe-facts.summary.json", summary, o);
  Plot plot;
  plot.title = "Santa Fe facts, alpha = " + fmt(spec.alpha, 2);
  plot.y_label = "mean card U";
  plot.curves.push_back(curve_of(mc.series, "E card U", est));
  if (!o.no_timestamp) plot.notes.push_back(utc_timestamp());
  write_file(dir / "santa-fe-facts.svg", render_loglog_svg(plot));
  out << "santa-fe-facts alpha=" << spec.alpha << " trials=" << req.trials << " j=" << req.j_min << ".." << req.j_max
      << "\n  regression exponent " << fmt(est.slope) << " (target " << fmt(1 / spec.alpha) << ")"
      << "\n  pointwise exponent  " << fmt(est.pointwise) << "\n";
  return kOk;
}

int markov_words(const Options& o, std::ostream& out) {
  ProcessSpec spec;
  if (!o.config.empty()) {
    spec = process_of(o);
  } else {
    spec.kind = ProcessSpec::Kind::Markov;
    spec.markov = MarkovSpec::default_chain();
  }
  if (spec.kind != ProcessSpec::Kind::Markov) fail(ErrorKind::InvalidParameter, "markov-words needs a Markov process");
  SeriesRequest req;
  req.j_min = o.jmin.value_or(4);
  req.j_max = o.jmax.value_or(14);
  req.trials = o.trials.value_or(20);
  req.master_seed = o.seed;
  req.threads = o.threads;
  req.ppm = ppm_of(o);
  const fs::path dir = output_dir(o);

  req.statistic = Statistic::Vocabulary;
  const auto vocab = monte_carlo_series(spec, req);
  req.statistic = Statistic::PpmOrder;
  const auto order = monte_carlo_series(spec, req);
  req.statistic = Statistic::MutualInformation;
  const auto mi = monte_carlo_series(spec, req);
  const auto vocab_est = try_regression(vocab.series);
  const auto check = markov_tail_bound_check(spec.markov->alphabet_size(), spec.markov->order(), mi.series);
  double max_order_late = -1;
  for (int j = std::max(req.j_min, 10); j <= req.j_max; ++j)
    max_order_late = std::max(max_order_late, order.per_trial.col(j - req.j_min).maxCoeff());

  ojson config;
  config["experiment"] = "markov-words";
  config["order"] = spec.markov->order();
  config["alphabet_size"] = spec.markov->alphabet_size();
  config["transitions"] = std::vector<double>(spec.markov->transitions().data(),
                                              spec.markov->transitions().data() + spec.markov->transitions().size());
  config["jmin"] = req.j_min;
  config["jmax"] = req.j_max;
  config["trials"] = req.trials;
  config["seed"] = o.seed;
  config["ppm"] = ppm_json(o);
  ojson summary;
  summary["experiment"] = "markov-words";
  summary["fingerprint"] = fingerprint(config);
  summary["config"] = config;
  summary["entropy_rate_nats"] = markov_entropy_rate(*spec.markov);
  summary["vocabulary_estimate"] = vocab_est ? estimate_json(*vocab_est) : ojson(nullptr);
  summary["max_ppm_order_from_2^10"] = max_order_late;
  summary["tail_bound"] = {{"holds", check.holds},
                           {"slack_constant", check.slack_constant},
                           {"bound", std::vector<double>(check.bound.begin(), check.bound.end())},
                           {"margin", std::vector<double>(check.margin.begin(), check.margin.end())}};
  write_file(dir / "markov-words.vocabulary.csv", series_csv(vocab.series));
  write_file(dir / "markov-words.ppm-order.csv", series_csv(order.series));
  write_file(dir / "markov-words.mutual-information.csv", series_csv(mi.series));
  write_summary(dir / "markov-words.summary.json", summary, o);
  Plot plot;
  plot.title = "Markov chain: PPM vocabulary and mutual information";
  plot.y_label = "mean value";
  plot.curves.push_back(curve_of(vocab.series, "card V_PPM", vocab_est));
  plot.curves.push_back(curve_of(mi.series, "I_PPM", std::nullopt));
  if (!o.no_timestamp) plot.notes.push_back(utc_timestamp());
  write_file(dir / "markov-words.svg", render_loglog_svg(plot));
  out << "markov-words order=" << spec.markov->order() << " D=" << spec.markov->alphabet_size() << " trials=" << req.trials
      << "\n  vocabulary exponent " << (vocab_est ? fmt(vocab_est->slope) : std::string("n/a"))
      << "\n  max PPM order for n >= 2^10: " << max_order_late
      << "\n  mutual-information tail bound " << (check.holds ? "holds" : "VIOLATED") << "\n";
  return kOk;
}

int corpus_words(const Options& o, std::ostream& out) {
  if (o.input.empty()) fail(ErrorKind::InvalidParameter, "corpus-words needs --input");
  const Corpus c = load_corpus(o);
  const int top = static_cast<int>(std::floor(std::log2(static_cast<double>(c.text.size()))));
  const int j_min = o.jmin.value_or(0);
  const int j_max = std::min(o.jmax.value_or(top), top);
  if (j_max < j_min) fail(ErrorKind::InsufficientData, "input too short for the requested range");
  std::vector<std::size_t> lengths;
  for (int j = j_min; j <= j_max; ++j) lengths.push_back(std::size_t{1} << j);
  const PpmParams params = ppm_of(o);
  const std::size_t trials = o.trials.value_or(1);

  ojson config;
  config["experiment"] = "corpus-words";
  config["input"] = fs::path(o.input).filename().string();
  config["text_fnv1a64"] = digest(c.text);
  config["normalize"] = policy_of(o).to_json();
  config["ppm"] = ppm_json(o);
  config["jmin"] = j_min;
  config["jmax"] = j_max;
  config["trials"] = trials;
  config["seed"] = o.seed;
  const std::string fp = fingerprint(config);
  const std::string ts = timestamp_of(o);
  const std::string source = fs::path(o.input).filename().string();

  const auto text_profiles = prefix_profiles(c.text, lengths, params);
  Eigen::VectorXd text_values(static_cast<Eigen::Index>(lengths.size()));
  for (std::size_t i = 0; i < lengths.size(); ++i) text_values[static_cast<Eigen::Index>(i)] = double(text_profiles[i].vocabulary_size);
  DyadicSeries text_series("text", j_min, text_values);

  std::vector<CodeLengthProfile> first_permuted;
  const auto permuted = monte_carlo("permuted", j_min, j_max, trials, o.seed, o.threads,
                                    [&](std::size_t t, std::uint64_t seed) {
                                      auto ps = prefix_profiles(permute_text(c.text, seed), lengths, params);
                                      Eigen::VectorXd v(static_cast<Eigen::Index>(ps.size()));
                                      for (std::size_t i = 0; i < ps.size(); ++i)
                                        v[static_cast<Eigen::Index>(i)] = double(ps[i].vocabulary_size);
                                      if (t == 0) first_permuted = std::move(ps);
                                      return v;
                                    });
  const auto text_est = try_regression(text_series);
  const auto perm_est = try_regression(permuted.series);

  std::vector<AnalysisRecord> records;
  for (const auto& p : text_profiles) records.push_back(make_record(source, "text", p, fp, ts));
  for (const auto& p : first_permuted) records.push_back(make_record(source, "permuted", p, fp, ts));

  ojson summary;
  summary["experiment"] = "corpus-words";
  summary["fingerprint"] = fp;
  summary["config"] = config;
  summary["alphabet_size"] = c.text.alphabet_size();
  summary["n"] = c.text.size();
  summary["text_estimate"] = text_est ? estimate_json(*text_est) : ojson(nullptr);
  summary["permuted_estimate"] = perm_est ? estimate_json(*perm_est) : ojson(nullptr);
  // A flat baseline (fewer than 3 positive points or constant) has exponent 0.
  const double perm_slope = perm_est ? perm_est->slope : 0.0;
  if (text_est) summary["exponent_gap"] = text_est->slope - perm_slope;
  const fs::path dir = output_dir(o);
  write_file(dir / "corpus-words.text.csv", series_csv(text_series));
  write_file(dir / "corpus-words.permuted.csv", series_csv(permuted.series));
  save_records(dir / "corpus-words.records.jsonl", records);
  write_file(dir / "corpus-words.records.csv", records_csv(records));
  write_summary(dir / "corpus-words.summary.json", summary, o);
  Plot plot;
  plot.title = "PPM vocabulary: " + source;
  plot.y_label = "card V_PPM";
  plot.curves.push_back(curve_of(text_series, "text", text_est));
  plot.curves.push_back(curve_of(permuted.series, "permuted", perm_est));
  if (!o.no_timestamp) plot.notes.push_back(utc_timestamp());
  write_file(dir / "corpus-words.svg", render_loglog_svg(plot));
  out << "corpus-words " << source << " D=" << c.text.alphabet_size() << " n=" << c.text.size()
      << "\n  text exponent     " << (text_est ? fmt(text_est->slope) : std::string("n/a"))
      << "\n  permuted exponent " << (perm_est ? fmt(perm_est->slope) : std::string("n/a (flat)")) << "\n";
  return kOk;
}

// report -------------------------------------------------------------------

double record_value(const AnalysisRecord& r, const std::string& statistic) {
  if (statistic == "vocabulary") return double(r.vocabulary_size);
  if (statistic == "ppm-order") return r.ppm_order;
  if (statistic == "max-repetition") return double(r.max_repetition);
  if (statistic == "codelength") return r.codelength_bits;
  fail(ErrorKind::InvalidParameter, "unknown report statistic " + statistic);
}

int report(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<AnalysisRecord> records;
  for (const auto& path : o.inputs) {
    auto part = load_records(path);
    records.insert(records.end(), part.begin(), part.end());
  }
  if (records.empty()) fail(ErrorKind::InsufficientData, "no data: the record files contain no records");
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::map<std::size_t, double>> curves;
  std::set<std::string> fingerprints;
  for (const auto& r : records) {
    const auto key = std::pair{r.source, r.label};
    if (!curves.contains(key)) order.push_back(key);
    curves[key][r.n] = record_value(r, o.statistic);
    fingerprints.insert(r.fingerprint);
  }
  std::vector<std::string> warnings;
  if (fingerprints.size() > 1) {
    warnings.push_back("warning: records come from " + std::to_string(fingerprints.size()) +
                       " different configurations (fingerprints)");
  }
  std::ostringstream csv;
  csv << "source,label,n," << o.statistic << '\n';
  Plot plot;
  plot.title = "Report: " + o.statistic;
  plot.y_label = o.statistic;
  for (const auto& key : order) {
    PlotCurve c;
    c.label = key.first + " [" + key.second + "]";
    for (const auto& [n, v] : curves[key]) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      csv << key.first << ',' << key.second << ',' << n << ',' << buf << '\n';
      c.x.push_back(double(n));
      c.y.push_back(v);
    }
    plot.curves.push_back(std::move(c));
  }
  plot.notes = warnings;
  if (!o.no_timestamp) plot.notes.push_back(utc_timestamp());
  const fs::path dir = output_dir(o);
  write_file(dir / "report.csv", csv.str());
  write_file(dir / "report.svg", render_loglog_svg(plot));
  for (const auto& w : warnings) err << w << '\n';
  out << "report: " << records.size() << " records, " << order.size() << " curves -> "
      << (dir / "report.svg").string() << '\n';
  return kOk;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--output-dir,-o", o.output_dir, "Directory for output files");
  sub->add_option("--seed", o.seed, "Master seed");
  sub->add_flag("--no-timestamp", o.no_timestamp, "Omit timestamps so outputs are byte-reproducible");
  sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

void add_ppm(CLI::App* sub, Options& o) {
  auto* cap = sub->add_option("--order-cap", o.order_cap, "Highest PPM order evaluated");
  auto* exact = sub->add_flag("--exact", o.exact, "Evaluate all orders up to the maximal repetition");
  cap->excludes(exact);
  sub->add_option("--normalize", o.normalize, "Input normalization")->check(CLI::IsMember({"bytes", "fold"}));
}

void add_range(CLI::App* sub, Options& o) {
  sub->add_option("--jmin", o.jmin, "Smallest dyadic exponent")->check(CLI::Range(0, 40));
  sub->add_option("--jmax", o.jmax, "Largest dyadic exponent")->check(CLI::Range(0, 40));
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return kUsage;
    case ErrorKind::InvalidInput:
    case ErrorKind::InsufficientData:
    case ErrorKind::Io:
    case ErrorKind::Format: return kInput;
    case ErrorKind::Numeric: return kNumeric;
  }
  return kNumeric;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"PPM code lengths, PPM words, Santa Fe facts and Hilberg exponents", "ppmwords"};
  app.require_subcommand(1);

  auto* analyze_cmd = app.add_subcommand("analyze", "PPM statistics of the dyadic prefixes of a file");
  analyze_cmd->add_option("--input,-i", o.input, "Input file")->required();
  analyze_cmd->add_flag("--permute", o.permute, "Also analyze a random permutation of the symbols");
  add_common(analyze_cmd, o);
  add_ppm(analyze_cmd, o);
  add_range(analyze_cmd, o);

  auto* generate_cmd = app.add_subcommand("generate", "Sample a synthetic process");
  generate_cmd->add_option("--kind", o.kind, "Process kind")
      ->check(CLI::IsMember({"santa-fe", "mixture-bernoulli", "bernoulli", "markov", "iid"}));
  generate_cmd->add_option("--config", o.config, "Process configuration file (key = value)");
  generate_cmd->add_option("--length,-n", o.length, "Sample length")->required();
  generate_cmd->add_option("--stream", o.stream, "Stream id");
  generate_cmd->add_option("--alpha", o.alpha, "Santa Fe exponent");
  generate_cmd->add_option("--theta", o.theta, "Bernoulli parameter");
  generate_cmd->add_option("--output", o.output, "Output file (default: standard output)");
  add_common(generate_cmd, o);

  auto* facts_cmd = app.add_subcommand("facts", "Count the Santa Fe facts inferrable from a sample");
  facts_cmd->add_option("--input,-i", o.input, "File of 'k bit' pairs (default: sample one)");
  facts_cmd->add_option("--length,-n", o.length, "Sample length when no input is given");
  facts_cmd->add_option("--stream", o.stream, "Stream id");
  facts_cmd->add_option("--alpha", o.alpha, "Santa Fe exponent");
  add_common(facts_cmd, o);

  auto* experiment_cmd = app.add_subcommand("experiment", "Run a Monte Carlo or corpus experiment");
  experiment_cmd->add_option("kind", o.kind, "Experiment")
      ->required()
      ->check(CLI::IsMember({"santa-fe-facts", "markov-words", "corpus-words"}));
  experiment_cmd->add_option("--input,-i", o.input, "Corpus file (corpus-words)");
  experiment_cmd->add_option("--config", o.config, "Process configuration (markov-words)");
  experiment_cmd->add_option("--trials", o.trials, "Number of trials")->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--alpha", o.alpha, "Santa Fe exponent");
  add_common(experiment_cmd, o);
  add_ppm(experiment_cmd, o);
  add_range(experiment_cmd, o);

  auto* report_cmd = app.add_subcommand("report", "Merge record files into a CSV and a log-log SVG");
  report_cmd->add_option("records", o.inputs, "Record files")->required();
  report_cmd->add_option("--statistic", o.statistic, "Plotted field")
      ->check(CLI::IsMember({"vocabulary", "ppm-order", "max-repetition", "codelength"}));
  add_common(report_cmd, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (o.jmin && o.jmax && *o.jmin > *o.jmax) {
    err << "error: --jmin exceeds --jmax\n";
    return kUsage;
  }

  try {
    if (analyze_cmd->parsed()) return analyze(o, out);
    if (generate_cmd->parsed()) return generate(o, out);
    if (facts_cmd->parsed()) return facts(o, out);
    if (report_cmd->parsed()) return report(o, out, err);
    if (o.kind == "santa-fe-facts") return santa_fe_facts(o, out);
    if (o.kind == "markov-words") return markov_words(o, out);
    return corpus_words(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kNumeric;
  }
}

}  // namespace ppmwords::cli
