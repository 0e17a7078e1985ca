// gbn: command-line front end for the blue-noise graph sampling library.
//
// Exit codes: 0 success, 1 validation error (bad flags, bad input files),
// 2 numeric failure (including a theory-check violation).

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>

#include "gbn/gbn.hpp"

using namespace gbn;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

// Builtin names for tiny graphs; anything else is a CSV path.
Graph load_graph_arg(const std::string& arg) {
  if (arg == "p3") return path_graph(3);
  if (arg == "k3") return complete_graph(3);
  if (arg.rfind("path:", 0) == 0) return path_graph(std::stoul(arg.substr(5)));
  if (!std::filesystem::exists(arg)) throw ValidationError("graph '" + arg + "' is neither a builtin (p3, k3, path:N) nor a file");
  return load_graph(arg);
}

void emit(const std::string& text, const std::optional<std::string>& out) {
  if (out) {
    write_text(*out, text);
  } else {
    std::cout << text;
  }
}

std::string check_format(const std::string& f) {
  if (f != "csv" && f != "json") throw ValidationError("--format must be csv or json, got '" + f + "'");
  return f;
}

std::string replace_extension(const std::string& path, const std::string& ext) {
  return std::filesystem::path(path).replace_extension(ext).string();
}

// --- gen-graph ---------------------------------------------------------------

struct GenGraphArgs {
  std::string family = "sensor";
  GeneratorSpec spec;
  std::string out;
};

void add_gen_graph(CLI::App& app, GenGraphArgs& a, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("gen-graph", "Generate a graph and write it as CSV plus a JSON sidecar");
  cmd->add_option("--family", a.family, "sensor | community | barabasi-albert | path | grid | complete")->capture_default_str();
  cmd->add_option("--n", a.spec.n, "Number of nodes");
  cmd->add_option("--seed", a.spec.seed, "Generator seed")->capture_default_str();
  cmd->add_option("--k-max", a.spec.k_max, "Sensor: neighbor cap")->capture_default_str();
  cmd->add_option("--communities", a.spec.n_communities, "Community: block count")->capture_default_str();
  cmd->add_option("--p-in", a.spec.p_in, "Community: within-block edge probability")->capture_default_str();
  cmd->add_option("--p-out", a.spec.p_out, "Community: cross-block edge probability")->capture_default_str();
  cmd->add_option("--m-attach", a.spec.m_attach, "Barabasi-Albert: edges per new node")->capture_default_str();
  cmd->add_option("--rows", a.spec.rows, "Grid rows");
  cmd->add_option("--cols", a.spec.cols, "Grid columns");
  cmd->add_option("--out", a.out, "Output CSV path")->required();
  cmd->callback([&] {
    action = [&] {
      a.spec.family = parse_graph_family(a.family);
      if (a.spec.family == GraphFamily::grid) a.spec.n = a.spec.rows * a.spec.cols;
      const auto gen = generate(a.spec);
      save_graph(a.out, gen.graph);
      json side = to_json(a.spec);
      side["edges"] = gen.graph.edges().size();
      side["bridging_edges"] = gen.repairs.size();
      write_text(replace_extension(a.out, ".json"), side.dump(2) + "\n");
      std::cout << "wrote " << a.out << " (" << gen.graph.size() << " nodes, " << gen.graph.edges().size() << " edges)\n";
    };
  });
}

// --- sample --------------------------------------------------------------------

struct SampleArgs {
  std::string method;
  std::size_t m = 0;
  std::uint64_t seed = 1;
  std::string graph;
  std::optional<unsigned> q;
  std::optional<std::size_t> k;
  std::optional<double> sigma;
  std::optional<double> tau;
  std::optional<std::size_t> iterations;
  std::optional<std::string> out;
  std::string format = "json";
};

SamplingPattern run_sampler(const SampleArgs& a) {
  const auto method = parse_sampler_method(a.method);
  if (a.m == 0) throw ValidationError("sample: --m must be >= 1");
  const Graph g = load_graph_arg(a.graph);
  const std::size_t n = g.size();
  if (a.m > n) throw ValidationError("sample: --m exceeds the number of nodes (" + std::to_string(n) + ")");
  switch (method) {
    case SamplerMethod::random:
      return white_noise(n, a.m, a.seed);
    case SamplerMethod::vac: {
      VacParams p;
      p.m = a.m;
      p.sigma = a.sigma;
      p.tau = a.tau;
      p.num_iter = a.iterations;
      p.seed = a.seed;
      return vac(geodesic_distances(g), p).pattern;
    }
    case SamplerMethod::chen:
      return greedy_sigma_min(eigendecompose(laplacian(g)), a.k.value_or(a.m), a.m);
    case SamplerMethod::anis:
      return greedy_spectral_proxy(laplacian(g), a.m, a.q.value_or(kDefaultProxyOrder));
  }
  throw ValidationError("sample: unknown method");
}

void add_sample(CLI::App& app, SampleArgs& a, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("sample", "Draw a sampling pattern");
  cmd->add_option("--method", a.method, "random | vac | chen | anis")->required();
  cmd->add_option("--m", a.m, "Number of samples")->required();
  cmd->add_option("--seed", a.seed, "Seed for random and vac")->capture_default_str();
  cmd->add_option("--graph", a.graph, "Graph CSV or builtin (p3, k3, path:N)")->required();
  cmd->add_option("--q", a.q, "anis: proxy order");
  cmd->add_option("--k", a.k, "chen: bandwidth (default m)");
  cmd->add_option("--sigma", a.sigma, "vac: kernel bandwidth");
  cmd->add_option("--tau", a.tau, "vac: empty-node offset");
  cmd->add_option("--iterations", a.iterations, "vac: swap budget");
  cmd->add_option("--out", a.out, "Output path (stdout when absent)");
  cmd->add_option("--format", a.format, "json | csv")->capture_default_str();
  cmd->callback([&] {
    action = [&] {
      check_format(a.format);
      const auto s = run_sampler(a);
      if (a.format == "json") {
        emit(to_json(s).dump() + "\n", a.out);
      } else {
        std::string text = "node\n";
        for (auto v : s.support()) text += std::to_string(v) + "\n";
        emit(text, a.out);
      }
    };
  });
}

// --- metrics -------------------------------------------------------------------

struct MetricsArgs {
  std::string kind;
  std::string graph;
  std::vector<std::string> patterns;
  std::optional<double> density;
  std::optional<double> theta;
  bool count_center = false;
  std::optional<std::string> out;
  std::string format = "json";
};

std::vector<SamplingPattern> load_patterns(const MetricsArgs& a, std::size_t n) {
  if (a.patterns.empty()) throw ValidationError("metrics " + a.kind + ": --pattern is required");
  std::vector<SamplingPattern> out;
  for (const auto& p : a.patterns) {
    out.push_back(load_pattern(p));
    if (out.back().size() != n) throw ValidationError("pattern '" + p + "' has n=" + std::to_string(out.back().size()) +
                                                      " but the graph has " + std::to_string(n) + " nodes");
  }
  return out;
}

void run_metrics(const MetricsArgs& a) {
  check_format(a.format);
  const Graph g = load_graph_arg(a.graph);
  const std::size_t n = g.size();
  const bool as_json = a.format == "json";

  if (a.kind == "wavelength") {
    double d = a.density.value_or(0.0);
    if (!a.density) d = load_patterns(a, n).front().density();
    const double lb = principal_wavelength(geodesic_distances(g), d);
    emit(as_json ? json{{"density", d}, {"lambda_b", lb}}.dump() + "\n"
                 : "density,lambda_b\n" + format_double(d) + "," + format_double(lb) + "\n",
         a.out);
    return;
  }

  const auto patterns = load_patterns(a, n);
  if (a.kind == "pair-correlation") {
    PairCorrelationOptions opts;
    opts.theta = a.theta;
    opts.count_center = a.count_center;
    const auto pc = pair_correlation(g, geodesic_distances(g), patterns, opts);
    emit(as_json ? json{{"theta", pc.theta}, {"rho", pc.rho}, {"R", pc.values}}.dump() + "\n" : pair_correlation_to_csv(pc),
         a.out);
  } else if (a.kind == "spectrum") {
    const auto basis = eigendecompose(laplacian(g));
    const Eigen::VectorXd p = power_spectrum(basis, patterns);
    if (as_json) {
      emit(json{{"p", std::vector<double>(p.data(), p.data() + p.size())}}.dump() + "\n", a.out);
    } else {
      emit(spectrum_to_csv(basis, p), a.out);
    }
  } else if (a.kind == "redness") {
    const auto basis = eigendecompose(laplacian(g));
    std::vector<double> r;
    for (const auto& s : patterns) r.push_back(redness(basis, s));
    if (as_json) {
      emit(json{{"redness", r}}.dump() + "\n", a.out);
    } else {
      std::string text = "pattern,redness\n";
      for (std::size_t i = 0; i < r.size(); ++i) text += std::to_string(i) + "," + format_double(r[i]) + "\n";
      emit(text, a.out);
    }
  } else if (a.kind == "ks" || a.kind == "lambda-set") {
    const auto& s = patterns.front();
    const double v = a.kind == "ks" ? uniqueness_constant_ks(g, s.support()) : lambda_set(laplacian(g), s.complement());
    const std::string key = a.kind == "ks" ? "K_S" : "lambda_Sc";
    emit(as_json ? json{{key, v}}.dump() + "\n" : key + "\n" + format_double(v) + "\n", a.out);
  } else if (a.kind == "partition") {
    const auto p = partition_from_pattern(g, geodesic_distances(g), patterns.front());
    const auto c = lambda_partition(g, p);
    for (const auto& w : c.warnings) std::cerr << "warning: " << w << "\n";
    if (as_json) {
      json j = to_json(p);
      j["radius"] = p.radius;
      j["lambda_P"] = c.value;
      j["per_cell"] = c.per_cell;
      emit(j.dump() + "\n", a.out);
    } else {
      std::string text = "node,cell\n";
      std::vector<std::size_t> cell(n);
      for (std::size_t j = 0; j < p.cells.size(); ++j) {
        for (auto v : p.cells[j]) cell[v] = j;
      }
      for (std::size_t v = 0; v < n; ++v) text += std::to_string(v) + "," + std::to_string(cell[v]) + "\n";
      emit(text, a.out);
    }
  } else {
    throw ValidationError("unknown metric '" + a.kind +
                          "' (expected pair-correlation, redness, wavelength, ks, lambda-set, partition, spectrum)");
  }
}

void add_metrics(CLI::App& app, MetricsArgs& a, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("metrics", "Compute a pattern metric");
  cmd->add_option("kind", a.kind, "pair-correlation | redness | wavelength | ks | lambda-set | partition | spectrum")->required();
  cmd->add_option("--graph", a.graph, "Graph CSV or builtin")->required();
  cmd->add_option("--pattern", a.patterns, "Pattern JSON; repeat to average over an ensemble");
  cmd->add_option("--density", a.density, "wavelength: sampling density (default: from --pattern)");
  cmd->add_option("--theta", a.theta, "pair-correlation: annulus half-width");
  cmd->add_flag("--count-center", a.count_center, "pair-correlation: count the center node in its own annulus");
  cmd->add_option("--out", a.out, "Output path (stdout when absent)");
  cmd->add_option("--format", a.format, "json | csv")->capture_default_str();
  cmd->callback([&] { action = [&] { run_metrics(a); }; });
}

// --- reconstruct ---------------------------------------------------------------

struct ReconstructArgs {
  std::string graph;
  std::string pattern;
  std::optional<std::string> signal;
  std::optional<std::string> model;
  std::size_t k = 0;
  std::optional<double> snr;
  std::uint64_t seed = 1;
  std::optional<std::string> out;
  std::string format = "json";
};

void run_reconstruct(const ReconstructArgs& a) {
  check_format(a.format);
  if (a.signal.has_value() == a.model.has_value()) throw ValidationError("reconstruct: give exactly one of --signal or --model");
  const Graph g = load_graph_arg(a.graph);
  const auto basis = eigendecompose(laplacian(g));
  const auto s = load_pattern(a.pattern);
  if (s.size() != g.size()) throw ValidationError("reconstruct: pattern size does not match the graph");
  if (a.k == 0 || a.k > g.size()) throw ValidationError("reconstruct: --k must be in [1, n]");
  Eigen::VectorXd x;
  if (a.signal) {
    x = signal_from_csv(read_text(*a.signal));
    if (static_cast<std::size_t>(x.size()) != g.size()) throw ValidationError("reconstruct: signal length does not match the graph");
  } else if (*a.model == "sm1") {
    x = signal_sm1(basis, a.k, a.seed);
  } else if (*a.model == "sm2") {
    x = signal_sm2(basis, a.k, a.seed);
  } else {
    throw ValidationError("reconstruct: --model must be sm1 or sm2");
  }
  Eigen::VectorXd y = sample_signal(x, s.support());
  if (a.snr) y = add_noise(y, *a.snr, a.seed ^ 0x9e3779b97f4a7c15ULL);
  const auto r = reconstruct_and_score(basis, a.k, s.support(), y, x);
  if (a.out) write_text(*a.out, signal_to_csv(r.signal));
  const auto& rep = r.report;
  if (a.format == "json") {
    std::cout << json{{"mse", rep.mse},
                      {"sse", rep.sse},
                      {"relative_error", rep.relative_error},
                      {"sigma_min", rep.sigma_min},
                      {"rank_deficient", rep.rank_deficient}}
                     .dump()
              << "\n";
  } else {
    std::cout << "mse,sse,relative_error,sigma_min,rank_deficient\n"
              << format_double(rep.mse) << "," << format_double(rep.sse) << "," << format_double(rep.relative_error) << ","
              << format_double(rep.sigma_min) << "," << (rep.rank_deficient ? 1 : 0) << "\n";
  }
}

void add_reconstruct(CLI::App& app, ReconstructArgs& a, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("reconstruct", "Least-squares bandlimited reconstruction from samples");
  cmd->add_option("--graph", a.graph, "Graph CSV or builtin")->required();
  cmd->add_option("--pattern", a.pattern, "Pattern JSON")->required();
  cmd->add_option("--signal", a.signal, "Ground-truth signal CSV (node,value)");
  cmd->add_option("--model", a.model, "Generate the ground truth instead: sm1 | sm2");
  cmd->add_option("--k", a.k, "Bandwidth used for reconstruction (and sm1/sm2 generation)")->required();
  cmd->add_option("--snr", a.snr, "Add white Gaussian noise at this SNR in dB");
  cmd->add_option("--seed", a.seed, "Seed for the signal model and noise")->capture_default_str();
  cmd->add_option("--out", a.out, "Write the reconstructed signal CSV here");
  cmd->add_option("--format", a.format, "Report format: json | csv")->capture_default_str();
  cmd->callback([&] { action = [&] { run_reconstruct(a); }; });
}

// --- experiment ----------------------------------------------------------------

struct ExperimentArgs {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
};

void add_experiment(CLI::App& app, ExperimentArgs& a, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("experiment", "Run a config-driven sampling experiment");
  cmd->add_option("--config", a.config, "Experiment config JSON")->required();
  cmd->add_option("--out", a.out, "Override the config's output_dir");
  cmd->add_option("--seed", a.seed, "Override the config's base seed");
  cmd->callback([&] {
    action = [&] {
      auto c = load_experiment_config(a.config);
      if (a.out) c.output_dir = *a.out;
      if (a.seed) c.seed = *a.seed;
      const auto table = run_experiment(c);
      write_experiment_outputs(c, table, c.output_dir);
      for (const auto& s : summarize(table)) {
        std::cout << s.sampler << " m=" << s.m << " mean_mse=" << format_double(s.mean_mse) << "\n";
      }
      std::cout << "wrote " << c.output_dir << "\n";
    };
  });
}

// --- theory-check --------------------------------------------------------------

struct TheoryArgs {
  std::string graph;
  std::size_t patterns = 1000;
  std::uint64_t seed = 1;
  std::string format = "csv";
};

int run_theory_check(const TheoryArgs& a) {
  check_format(a.format);
  const Graph g = load_graph_arg(a.graph);
  const auto basis = eigendecompose(laplacian(g));
  const auto patterns = identity_patterns(g.size(), a.patterns, a.seed);
  auto checks = check_pattern_identities(g, basis, patterns);
  for (auto& c : check_laplacian_identities(g, 100, a.seed)) checks.push_back(std::move(c));

  UniquenessTally total;
  for (const auto& s : patterns) {
    const auto t = check_uniqueness(g, basis, s);
    total.lambda_cases += t.lambda_cases;
    total.lambda_counterexamples += t.lambda_counterexamples;
    total.ks_cases += t.ks_cases;
    total.ks_counterexamples += t.ks_counterexamples;
  }
  bool ok = true;
  json rows = json::array();
  for (const auto& c : checks) {
    const bool fails = !c.passed && !c.informational;
    ok = ok && !fails;
    const char* status = c.passed ? "PASS" : (c.informational ? "NOTE" : "FAIL");
    if (a.format == "json") {
      rows.push_back({{"name", c.name}, {"status", status}, {"cases", c.cases}, {"violations", c.violations}, {"worst", c.worst}});
    } else {
      std::cout << status << "  " << c.name << "  (" << c.cases << " cases, " << c.violations << " violations, worst "
                << format_double(c.worst) << ")\n";
    }
  }
  const bool unique_ok = total.lambda_counterexamples == 0 && total.ks_counterexamples == 0;
  ok = ok && unique_ok;
  if (a.format == "json") {
    rows.push_back({{"name", "uniqueness"},
                    {"status", unique_ok ? "PASS" : "FAIL"},
                    {"lambda_cases", total.lambda_cases},
                    {"ks_cases", total.ks_cases},
                    {"counterexamples", total.lambda_counterexamples + total.ks_counterexamples}});
    std::cout << json{{"patterns", patterns.size()}, {"checks", rows}, {"passed", ok}}.dump(2) << "\n";
  } else {
    std::cout << (unique_ok ? "PASS" : "FAIL") << "  uniqueness: rank(U_k(S,:)) = k when mu_k is below either constant  ("
              << total.lambda_cases + total.ks_cases << " cases, "
              << total.lambda_counterexamples + total.ks_counterexamples << " counterexamples)\n";
    std::cout << patterns.size() << " patterns on " << g.size() << " nodes: " << (ok ? "all checks pass" : "FAILED") << "\n";
  }
  return ok ? 0 : kExitNumeric;
}

void add_theory_check(CLI::App& app, TheoryArgs& a, std::function<int()>& action) {
  auto* cmd = app.add_subcommand("theory-check", "Verify the sampling-pattern identities and bounds numerically");
  cmd->add_option("--graph", a.graph, "Graph CSV or builtin (p3, k3, path:N)")->required();
  cmd->add_option("--patterns", a.patterns, "Random patterns when n > 12 (smaller graphs are exhaustive)")->capture_default_str();
  cmd->add_option("--seed", a.seed, "Pattern seed")->capture_default_str();
  cmd->add_option("--format", a.format, "csv | json")->capture_default_str();
  cmd->callback([&] { action = [&] { return run_theory_check(a); }; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blue-noise sampling on graphs"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::function<void()> action;
  std::function<int()> checked_action;
  GenGraphArgs gen_args;
  SampleArgs sample_args;
  MetricsArgs metrics_args;
  ReconstructArgs reconstruct_args;
  ExperimentArgs experiment_args;
  TheoryArgs theory_args;
  add_gen_graph(app, gen_args, action);
  add_sample(app, sample_args, action);
  add_metrics(app, metrics_args, action);
  add_reconstruct(app, reconstruct_args, action);
  add_experiment(app, experiment_args, action);
  add_theory_check(app, theory_args, checked_action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (checked_action) return checked_action();
    if (action) action();
    return 0;
  } catch (const std::invalid_argument& e) {  // includes ValidationError
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
