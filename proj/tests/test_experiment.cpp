#include <gtest/gtest.h>

#include <filesystem>

#include "gbn/experiment.hpp"

using namespace gbn;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  GeneratorSpec spec;
  spec.family = GraphFamily::sensor;
  spec.n = 80;
  spec.seed = 2;
  c.graph.spec = spec;
  c.signal.kind = SignalKind::sm1;
  c.signal.k = 8;
  c.signal.ref_index = 8;
  for (auto m : {SamplerMethod::random, SamplerMethod::vac, SamplerMethod::chen, SamplerMethod::anis}) {
    SamplerConfig s;
    s.method = m;
    c.samplers.push_back(s);
  }
  c.sampling_rates = {10, 16, 24};
  c.trials = 3;
  c.snr_db = 20.0;
  c.seed = 5;
  return c;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Config, RoundTrip) {
  auto c = small_config();
  c.samplers[1].sigma = 0.3;
  c.samplers[3].q = 3;
  c.output_dir = "out";
  EXPECT_EQ(experiment_config_from_json(to_json(c)), c);
  c.signal.kind = SignalKind::sm2;
  c.signal.ref_index = 20;
  c.signal.k = 20;
  c.snr_db.reset();
  EXPECT_EQ(experiment_config_from_json(to_json(c)), c);
  c.graph.spec.reset();
  c.graph.file = "g.csv";
  EXPECT_EQ(experiment_config_from_json(to_json(c)), c);
}

TEST(Config, ErrorsNameTheField) {
  auto j = to_json(small_config());
  auto expect_message = [](const json& bad, const std::string& needle) {
    try {
      experiment_config_from_json(bad);
      ADD_FAILURE() << "accepted invalid config";
    } catch (const ValidationError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  auto bad = j;
  bad["trials"] = 0;
  expect_message(bad, "config.trials");
  bad = j;
  bad["samplers"][1]["method"] = "dpp";
  expect_message(bad, "dpp");
  bad = j;
  bad["sampling_rates"] = "many";
  expect_message(bad, "config.sampling_rates");
  bad = j;
  bad["signal_model"]["type"] = "SM3";
  expect_message(bad, "config.signal_model.type");
  bad = j;
  bad.erase("graph");
  expect_message(bad, "config.graph");
  bad = j;
  bad["samplers"][2]["q"] = 0;
  expect_message(bad, "config.samplers[2].q");
}

TEST(Config, RatesValidatedAgainstGraph) {
  auto c = small_config();
  c.sampling_rates = {10, 81};
  EXPECT_THROW(run_experiment(c), ValidationError);
  c.sampling_rates = {0};
  EXPECT_THROW(run_experiment(c), ValidationError);
}

TEST(DeriveSeed, SeparatesStreams) {
  EXPECT_EQ(derive_seed(1, "vac", 10, 0), derive_seed(1, "vac", 10, 0));
  EXPECT_NE(derive_seed(1, "vac", 10, 0), derive_seed(1, "random", 10, 0));
  EXPECT_NE(derive_seed(1, "vac", 10, 0), derive_seed(1, "vac", 11, 0));
  EXPECT_NE(derive_seed(1, "vac", 10, 0), derive_seed(1, "vac", 10, 1));
  EXPECT_NE(derive_seed(1, "vac", 10, 0), derive_seed(2, "vac", 10, 0));
}

TEST(Run, RowOrderAndShape) {
  const auto c = small_config();
  const auto t = run_experiment(c);
  ASSERT_EQ(t.rows.size(), 4u * 3u * 3u);
  std::size_t i = 0;
  for (const auto& s : c.samplers) {
    for (auto m : c.sampling_rates) {
      for (std::size_t trial = 0; trial < c.trials; ++trial, ++i) {
        EXPECT_EQ(t.rows[i].sampler, s.label());
        EXPECT_EQ(t.rows[i].m, m);
        EXPECT_EQ(t.rows[i].trial, trial);
        EXPECT_GE(t.rows[i].mse, 0.0);
        EXPECT_EQ(t.rows[i].runtime_ms, 0.0);
      }
    }
  }
}

TEST(Run, AddingSamplerKeepsOtherStreams) {
  auto c = small_config();
  const auto full = run_experiment(c);
  c.samplers.erase(c.samplers.begin() + 1);  // drop vac
  const auto reduced = run_experiment(c);
  // random rows come first in both.
  for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(full.rows[i].mse, reduced.rows[i].mse);
}

TEST(Run, FullSamplingHitsNoiseFloor) {
  auto c = small_config();
  c.samplers.resize(1);
  c.sampling_rates = {80};
  c.trials = 1;
  c.snr_db.reset();
  const auto t = run_experiment(c);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_LT(t.rows[0].relative_error, 1e-10);
  c.snr_db = 20.0;
  const auto noisy = run_experiment(c);
  // Projection onto k of n dimensions keeps about k/n of the noise power.
  EXPECT_GT(noisy.rows[0].mse, 0.0);
  EXPECT_LT(noisy.rows[0].relative_error, 0.1);
}

TEST(Run, OutputsAreByteIdentical) {
  auto c = small_config();
  const auto a = temp_dir("gbn_exp_a"), b = temp_dir("gbn_exp_b");
  write_experiment_outputs(c, run_experiment(c), a.string());
  write_experiment_outputs(c, run_experiment(c), b.string());
  for (const char* f : {"results.csv", "summary.csv", "manifest.json", "mse_curve.svg", "mse_curve.csv"}) {
    ASSERT_TRUE(std::filesystem::exists(a / f)) << f;
    EXPECT_EQ(read_text((a / f).string()), read_text((b / f).string())) << f;
  }
  const auto header = read_text((a / "results.csv").string()).substr(0, 64);
  EXPECT_EQ(header.substr(0, header.find('\n')), "sampler,m,trial,mse,relative_error,sigma_min,redness,runtime_ms");
  const auto manifest = json::parse(read_text((a / "manifest.json").string()));
  EXPECT_EQ(experiment_config_from_json(manifest.at("config")), c);
  EXPECT_EQ(manifest.at("version"), kVersion);
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST(Run, ThreadCountDoesNotChangeResults) {
  const auto c = small_config();
  ::setenv("GBN_THREADS", "1", 1);
  const auto one = results_to_csv(run_experiment(c));
  ::setenv("GBN_THREADS", "3", 1);
  const auto three = results_to_csv(run_experiment(c));
  ::unsetenv("GBN_THREADS");
  EXPECT_EQ(one, three);
}

TEST(Summary, MeansPerSamplerAndRate) {
  ResultTable t;
  t.rows.push_back({"a", 10, 0, 1.0, 0.1, 0.5, 2.0, 0.0, 10.0, false});
  t.rows.push_back({"a", 10, 1, 3.0, 0.3, 0.7, 4.0, 0.0, 30.0, true});
  t.rows.push_back({"b", 10, 0, 5.0, 0.5, 0.1, 1.0, 0.0, 50.0, false});
  const auto s = summarize(t);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s[0].mean_mse, 2.0);
  EXPECT_DOUBLE_EQ(s[0].mean_sse, 20.0);
  EXPECT_EQ(s[0].rank_deficient, 1u);
  EXPECT_DOUBLE_EQ(s[1].mean_mse, 5.0);
  const auto series = mse_series(s);
  ASSERT_EQ(series.size(), 2u);
  EXPECT_EQ(series[1].label, "b");
}
