#pragma once

// Config-driven sampling/reconstruction experiments: for every sampler,
// sampling rate and trial, draw a signal, sample it, optionally add noise,
// reconstruct by least squares and record the errors.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gbn/distances.hpp"
#include "gbn/error.hpp"
#include "gbn/generators.hpp"
#include "gbn/graph.hpp"
#include "gbn/io.hpp"
#include "gbn/parallel.hpp"
#include "gbn/plot.hpp"
#include "gbn/reconstruct.hpp"
#include "gbn/samplers.hpp"
#include "gbn/spectral.hpp"
#include "gbn/version.hpp"

namespace gbn {

enum class SamplerMethod { random, vac, chen, anis };

inline std::string to_string(SamplerMethod m) {
  switch (m) {
    case SamplerMethod::random: return "random";
    case SamplerMethod::vac: return "vac";
    case SamplerMethod::chen: return "chen";
    case SamplerMethod::anis: return "anis";
  }
  return "unknown";
}

inline SamplerMethod parse_sampler_method(const std::string& s) {
  if (s == "random") return SamplerMethod::random;
  if (s == "vac") return SamplerMethod::vac;
  if (s == "chen") return SamplerMethod::chen;
  if (s == "anis") return SamplerMethod::anis;
  throw ValidationError("unknown sampler '" + s + "' (expected random, vac, chen, anis)");
}

/// Default order of the spectral proxy used by the `anis` sampler.
inline constexpr unsigned kDefaultProxyOrder = 2;

struct SamplerConfig {
  SamplerMethod method = SamplerMethod::random;
  std::optional<unsigned> q;               // anis
  std::optional<std::size_t> k;            // chen; defaults to the reconstruction bandwidth
  std::optional<double> sigma;             // vac
  std::optional<double> tau;               // vac
  std::optional<std::size_t> num_iter;     // vac

  std::string label() const { return to_string(method); }
  friend bool operator==(const SamplerConfig&, const SamplerConfig&) = default;
};

enum class SignalKind { sm1, sm2 };

struct SignalModel {
  SignalKind kind = SignalKind::sm1;
  std::size_t k = 50;          // reconstruction bandwidth (SM1: also the signal bandwidth)
  std::size_t ref_index = 50;  // SM2 modulation knee, 1-based

  friend bool operator==(const SignalModel&, const SignalModel&) = default;
};

struct GraphSource {
  std::optional<GeneratorSpec> spec;
  std::optional<std::string> file;

  friend bool operator==(const GraphSource&, const GraphSource&) = default;
};

struct ExperimentConfig {
  GraphSource graph;
  SignalModel signal;
  std::vector<SamplerConfig> samplers;
  std::vector<std::size_t> sampling_rates;
  std::size_t trials = 50;
  std::optional<double> snr_db;
  std::uint64_t seed = 1;
  std::string output_dir = ".";
  bool record_runtime = false;  // wall-clock timings make outputs non-reproducible

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct ResultRow {
  std::string sampler;
  std::size_t m = 0;
  std::size_t trial = 0;
  double mse = 0.0;
  double relative_error = 0.0;
  double sigma_min = 0.0;
  double redness = 0.0;
  double runtime_ms = 0.0;
  double sse = 0.0;  // total squared error; summarized, not a results.csv column
  bool rank_deficient = false;
};

struct ResultTable {
  std::vector<ResultRow> rows;  // ordered by (sampler position in config, m position, trial)
};

struct SummaryRow {
  std::string sampler;
  std::size_t m = 0;
  double mean_mse = 0.0;
  double mean_sse = 0.0;
  double mean_relative_error = 0.0;
  double mean_sigma_min = 0.0;
  double mean_redness = 0.0;
  std::size_t rank_deficient = 0;
};

// --- seeds ---------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stream seed for (base, tag, m, trial); each stream is independent of
/// which other samplers or rates appear in the config.
inline std::uint64_t derive_seed(std::uint64_t base, const std::string& tag, std::size_t m, std::size_t trial) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  std::uint64_t s = splitmix64(base);
  s = splitmix64(s ^ h);
  s = splitmix64(s ^ static_cast<std::uint64_t>(m));
  s = splitmix64(s ^ static_cast<std::uint64_t>(trial));
  return s;
}

// --- config JSON -----------------------------------------------------------------

inline json to_json(const ExperimentConfig& c) {
  json j;
  if (c.graph.spec) j["graph"] = to_json(*c.graph.spec);
  if (c.graph.file) j["graph"] = json{{"file", *c.graph.file}};
  j["signal_model"] = c.signal.kind == SignalKind::sm1
                          ? json{{"type", "SM1"}, {"k", c.signal.k}}
                          : json{{"type", "SM2"}, {"k", c.signal.k}, {"ref_index", c.signal.ref_index}};
  json samplers = json::array();
  for (const auto& s : c.samplers) {
    json o{{"method", s.label()}};
    if (s.q) o["q"] = *s.q;
    if (s.k) o["k"] = *s.k;
    if (s.sigma) o["sigma"] = *s.sigma;
    if (s.tau) o["tau"] = *s.tau;
    if (s.num_iter) o["num_iter"] = *s.num_iter;
    samplers.push_back(o);
  }
  j["samplers"] = samplers;
  j["sampling_rates"] = c.sampling_rates;
  j["trials"] = c.trials;
  j["snr_db"] = c.snr_db ? json(*c.snr_db) : json(nullptr);
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["record_runtime"] = c.record_runtime;
  return j;
}

namespace detail {

template <typename T>
T field(const json& obj, const char* name, const std::string& where) {
  if (!obj.contains(name)) throw ValidationError(where + "." + name + ": required field missing");
  try {
    return obj.at(name).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + "." + name + ": wrong type");
  }
}

template <typename T>
std::optional<T> optional_field(const json& obj, const char* name, const std::string& where) {
  if (!obj.contains(name) || obj.at(name).is_null()) return std::nullopt;
  return field<T>(obj, name, where);
}

}  // namespace detail

/// Parses and validates an experiment config. Errors name the offending field.
inline ExperimentConfig experiment_config_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("config: expected a JSON object");
  ExperimentConfig c;

  if (!j.contains("graph")) throw ValidationError("config.graph: required field missing");
  const json& g = j.at("graph");
  if (g.is_string()) {
    c.graph.file = g.get<std::string>();
  } else if (g.is_object() && g.contains("file")) {
    c.graph.file = detail::field<std::string>(g, "file", "config.graph");
  } else if (g.is_object()) {
    c.graph.spec = generator_spec_from_json(g);
  } else {
    throw ValidationError("config.graph: expected a generator object or a file path");
  }

  if (!j.contains("signal_model")) throw ValidationError("config.signal_model: required field missing");
  const json& sm = j.at("signal_model");
  const auto type = detail::field<std::string>(sm, "type", "config.signal_model");
  if (type == "SM1" || type == "sm1") {
    c.signal.kind = SignalKind::sm1;
    c.signal.k = detail::field<std::size_t>(sm, "k", "config.signal_model");
    c.signal.ref_index = c.signal.k;
  } else if (type == "SM2" || type == "sm2") {
    c.signal.kind = SignalKind::sm2;
    c.signal.ref_index = detail::optional_field<std::size_t>(sm, "ref_index", "config.signal_model").value_or(50);
    c.signal.k = detail::optional_field<std::size_t>(sm, "k", "config.signal_model").value_or(c.signal.ref_index);
  } else {
    throw ValidationError("config.signal_model.type: expected SM1 or SM2, got '" + type + "'");
  }
  if (c.signal.k < 1) throw ValidationError("config.signal_model.k: must be >= 1");
  if (c.signal.ref_index < 1) throw ValidationError("config.signal_model.ref_index: must be >= 1");

  if (!j.contains("samplers") || !j.at("samplers").is_array() || j.at("samplers").empty()) {
    throw ValidationError("config.samplers: expected a non-empty array");
  }
  std::size_t idx = 0;
  for (const auto& s : j.at("samplers")) {
    const std::string where = "config.samplers[" + std::to_string(idx++) + "]";
    SamplerConfig sc;
    if (s.is_string()) {
      sc.method = parse_sampler_method(s.get<std::string>());
    } else {
      sc.method = parse_sampler_method(detail::field<std::string>(s, "method", where));
      sc.q = detail::optional_field<unsigned>(s, "q", where);
      sc.k = detail::optional_field<std::size_t>(s, "k", where);
      sc.sigma = detail::optional_field<double>(s, "sigma", where);
      sc.tau = detail::optional_field<double>(s, "tau", where);
      sc.num_iter = detail::optional_field<std::size_t>(s, "num_iter", where);
    }
    if (sc.q && *sc.q < 1) throw ValidationError(where + ".q: must be >= 1");
    if (sc.sigma && !(*sc.sigma > 0.0)) throw ValidationError(where + ".sigma: must be positive");
    if (sc.num_iter && *sc.num_iter < 1) throw ValidationError(where + ".num_iter: must be >= 1");
    for (const auto& prev : c.samplers) {
      if (prev.method == sc.method) throw ValidationError(where + ": sampler '" + sc.label() + "' listed twice");
    }
    c.samplers.push_back(sc);
  }

  c.sampling_rates = detail::field<std::vector<std::size_t>>(j, "sampling_rates", "config");
  if (c.sampling_rates.empty()) throw ValidationError("config.sampling_rates: must not be empty");
  c.trials = detail::optional_field<std::size_t>(j, "trials", "config").value_or(c.trials);
  if (c.trials < 1) throw ValidationError("config.trials: must be >= 1");
  c.snr_db = detail::optional_field<double>(j, "snr_db", "config");
  c.seed = detail::optional_field<std::uint64_t>(j, "seed", "config").value_or(c.seed);
  c.output_dir = detail::optional_field<std::string>(j, "output_dir", "config").value_or(c.output_dir);
  c.record_runtime = detail::optional_field<bool>(j, "record_runtime", "config").value_or(false);
  return c;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  try {
    return experiment_config_from_json(json::parse(read_text(path)));
  } catch (const json::parse_error& e) {
    throw ValidationError("config '" + path + "': " + e.what());
  }
}

// --- running -----------------------------------------------------------------------

inline Graph resolve_graph(const GraphSource& src) {
  if (src.file) return load_graph(*src.file);
  if (src.spec) return generate(*src.spec).graph;
  throw ValidationError("config.graph: no generator spec or file given");
}

/// Everything derived from the graph that experiments reuse.
struct GraphContext {
  Graph graph;
  Eigen::MatrixXd laplacian;
  SpectralBasis basis;
  std::optional<DistanceMatrix> distances;

  explicit GraphContext(Graph g, bool need_distances = true)
      : graph(std::move(g)), laplacian(gbn::laplacian(graph)), basis(eigendecompose(laplacian)) {
    if (need_distances) distances = geodesic_distances(graph);
  }
};

namespace detail {

inline void validate_against_graph(const ExperimentConfig& c, std::size_t n) {
  for (std::size_t i = 0; i < c.sampling_rates.size(); ++i) {
    const auto m = c.sampling_rates[i];
    if (m < 1 || m > n) {
      throw ValidationError("config.sampling_rates[" + std::to_string(i) + "]: " + std::to_string(m) +
                            " outside [1, " + std::to_string(n) + "]");
    }
  }
  if (c.signal.k > n) throw ValidationError("config.signal_model.k: exceeds the node count");
  if (c.signal.ref_index > n) throw ValidationError("config.signal_model.ref_index: exceeds the node count");
  for (std::size_t i = 0; i < c.samplers.size(); ++i) {
    if (c.samplers[i].k && (*c.samplers[i].k < 1 || *c.samplers[i].k > n)) {
      throw ValidationError("config.samplers[" + std::to_string(i) + "].k: outside [1, n]");
    }
  }
}

}  // namespace detail

/// Runs the experiment on an already-prepared graph context.
inline ResultTable run_experiment(const ExperimentConfig& c, const GraphContext& ctx) {
  const std::size_t n = ctx.graph.size();
  detail::validate_against_graph(c, n);
  const bool needs_vac = std::any_of(c.samplers.begin(), c.samplers.end(),
                                     [](const SamplerConfig& s) { return s.method == SamplerMethod::vac; });
  if (needs_vac && !ctx.distances) throw ValidationError("run_experiment: vac requires geodesic distances");
  const std::size_t m_max = *std::max_element(c.sampling_rates.begin(), c.sampling_rates.end());
  using clock = std::chrono::steady_clock;
  auto elapsed_ms = [](clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };

  // Deterministic samplers: one greedy pick order each, prefixes give every rate.
  std::map<std::size_t, std::vector<NodeId>> greedy_order;
  std::map<std::size_t, double> greedy_ms;
  // Void and cluster: one kernel per (sampler, rate).
  std::map<std::pair<std::size_t, std::size_t>, std::pair<Eigen::MatrixXd, double>> kernels;
  for (std::size_t si = 0; si < c.samplers.size(); ++si) {
    const auto& s = c.samplers[si];
    const auto t0 = clock::now();
    if (s.method == SamplerMethod::chen) {
      greedy_order[si] = greedy_sigma_min_order(ctx.basis, s.k.value_or(c.signal.k), m_max);
    } else if (s.method == SamplerMethod::anis) {
      greedy_order[si] = greedy_spectral_proxy_order(ctx.laplacian, m_max, s.q.value_or(kDefaultProxyOrder));
    } else if (s.method == SamplerMethod::vac) {
      for (auto m : c.sampling_rates) {
        const double sigma = s.sigma.value_or(default_vac_sigma(*ctx.distances, m));
        kernels[{si, m}] = {vac_kernel(*ctx.distances, sigma), sigma};
      }
    }
    greedy_ms[si] = elapsed_ms(t0);
  }

  // One signal per trial, shared by every sampler and rate.
  std::vector<Eigen::VectorXd> signals(c.trials);
  parallel_for(c.trials, [&](std::size_t t) {
    const auto seed = derive_seed(c.seed, "signal", 0, t);
    signals[t] = c.signal.kind == SignalKind::sm1 ? signal_sm1(ctx.basis, c.signal.k, seed)
                                                  : signal_sm2(ctx.basis, c.signal.ref_index, seed);
  });

  ResultTable table;
  const std::size_t per_sampler = c.sampling_rates.size() * c.trials;
  table.rows.resize(c.samplers.size() * per_sampler);
  parallel_for(table.rows.size(), [&](std::size_t idx) {
    const std::size_t si = idx / per_sampler;
    const std::size_t mi = (idx % per_sampler) / c.trials;
    const std::size_t t = idx % c.trials;
    const auto& s = c.samplers[si];
    const std::size_t m = c.sampling_rates[mi];
    const std::string tag = s.label();

    const auto t0 = clock::now();
    SamplingPattern pattern;
    double runtime = 0.0;
    switch (s.method) {
      case SamplerMethod::random: pattern = white_noise(n, m, derive_seed(c.seed, tag, m, t)); break;
      case SamplerMethod::vac: {
        const auto& [kernel, sigma] = kernels.at({si, m});
        VacParams p;
        p.m = m;
        p.sigma = sigma;
        p.tau = s.tau;
        p.num_iter = s.num_iter;
        p.seed = derive_seed(c.seed, tag, m, t);
        pattern = vac(kernel, p, sigma).pattern;
        break;
      }
      case SamplerMethod::chen:
      case SamplerMethod::anis: {
        const auto& order = greedy_order.at(si);
        pattern = SamplingPattern(n, NodeSet(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m)));
        break;
      }
    }
    runtime = elapsed_ms(t0);
    if (s.method == SamplerMethod::chen || s.method == SamplerMethod::anis) runtime += greedy_ms.at(si);

    const Eigen::VectorXd& x = signals[t];
    Eigen::VectorXd y = sample_signal(x, pattern.support());
    if (c.snr_db) y = add_noise(y, *c.snr_db, derive_seed(c.seed, "noise:" + tag, m, t));
    const auto rec = reconstruct_and_score(ctx.basis, c.signal.k, pattern.support(), y, x);

    ResultRow& row = table.rows[idx];
    row.sampler = tag;
    row.m = m;
    row.trial = t;
    row.mse = rec.report.mse;
    row.sse = rec.report.sse;
    row.relative_error = rec.report.relative_error;
    row.sigma_min = rec.report.sigma_min;
    row.rank_deficient = rec.report.rank_deficient;
    row.redness = m < n ? redness(ctx.basis, pattern) : 0.0;
    row.runtime_ms = c.record_runtime ? runtime : 0.0;
  });
  return table;
}

inline std::vector<SummaryRow> summarize(const ResultTable& table) {
  std::vector<SummaryRow> out;
  std::vector<std::size_t> counts;
  for (const auto& r : table.rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const SummaryRow& s) { return s.sampler == r.sampler && s.m == r.m; });
    if (it == out.end()) {
      out.push_back({r.sampler, r.m});
      counts.push_back(0);
      it = out.end() - 1;
    }
    auto& cnt = counts[static_cast<std::size_t>(it - out.begin())];
    ++cnt;
    it->mean_mse += r.mse;
    it->mean_sse += r.sse;
    it->mean_relative_error += r.relative_error;
    it->mean_sigma_min += r.sigma_min;
    it->mean_redness += r.redness;
    if (r.rank_deficient) ++it->rank_deficient;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double k = static_cast<double>(counts[i]);
    out[i].mean_mse /= k;
    out[i].mean_sse /= k;
    out[i].mean_relative_error /= k;
    out[i].mean_sigma_min /= k;
    out[i].mean_redness /= k;
  }
  return out;
}

inline std::string results_to_csv(const ResultTable& table) {
  std::string out = "sampler,m,trial,mse,relative_error,sigma_min,redness,runtime_ms\n";
  for (const auto& r : table.rows) {
    out += r.sampler + "," + std::to_string(r.m) + "," + std::to_string(r.trial) + "," + format_double(r.mse) + "," +
           format_double(r.relative_error) + "," + format_double(r.sigma_min) + "," + format_double(r.redness) + "," +
           format_double(r.runtime_ms) + "\n";
  }
  return out;
}

inline std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "sampler,m,mean_mse,mean_sse,mean_relative_error,mean_sigma_min,mean_redness,rank_deficient\n";
  for (const auto& r : rows) {
    out += r.sampler + "," + std::to_string(r.m) + "," + format_double(r.mean_mse) + "," + format_double(r.mean_sse) +
           "," + format_double(r.mean_relative_error) + "," + format_double(r.mean_sigma_min) + "," +
           format_double(r.mean_redness) + "," + std::to_string(r.rank_deficient) + "\n";
  }
  return out;
}

inline std::vector<PlotSeries> mse_series(const std::vector<SummaryRow>& rows) {
  std::vector<PlotSeries> series;
  for (const auto& r : rows) {
    auto it = std::find_if(series.begin(), series.end(), [&](const PlotSeries& s) { return s.label == r.sampler; });
    if (it == series.end()) {
      series.push_back({r.sampler, {}, {}});
      it = series.end() - 1;
    }
    it->x.push_back(static_cast<double>(r.m));
    it->y.push_back(r.mean_mse);
  }
  for (auto& s : series) {
    std::vector<std::size_t> idx(s.x.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s.x[a] < s.x[b]; });
    PlotSeries sorted{s.label, {}, {}};
    for (auto i : idx) {
      sorted.x.push_back(s.x[i]);
      sorted.y.push_back(s.y[i]);
    }
    s = std::move(sorted);
  }
  return series;
}

/// Writes results.csv, summary.csv, manifest.json and mse_curve.svg (+ .csv)
/// into the output directory.
inline void write_experiment_outputs(const ExperimentConfig& c, const ResultTable& table, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw ValidationError("cannot create output directory '" + dir + "'");
  const std::filesystem::path base(dir);
  write_text((base / "results.csv").string(), results_to_csv(table));
  const auto summary = summarize(table);
  write_text((base / "summary.csv").string(), summary_to_csv(summary));
  json manifest{{"config", to_json(c)}, {"library", "gbn"}, {"version", kVersion},
                {"outputs", {"results.csv", "summary.csv", "mse_curve.svg", "mse_curve.csv"}}};
  write_text((base / "manifest.json").string(), manifest.dump(2) + "\n");
  emit_plot(PlotKind::mse_curve, mse_series(summary), (base / "mse_curve.svg").string());
}

inline ResultTable run_experiment(const ExperimentConfig& c) {
  const bool needs_vac = std::any_of(c.samplers.begin(), c.samplers.end(),
                                     [](const SamplerConfig& s) { return s.method == SamplerMethod::vac; });
  GraphContext ctx(resolve_graph(c.graph), needs_vac);
  return run_experiment(c, ctx);
}

}  // namespace gbn
