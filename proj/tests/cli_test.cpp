#include "cli_config.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtg/checkpoint.hpp"
#include "test_util.hpp"

namespace qtg::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testutil::TempDir;
using testutil::write_text;

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// ---- config resolution, in process ----

TEST(ConfigFile, LoadsEveryField) {
  TempDir dir;
  const std::string path = dir.file("cfg.json");
  write_text(path, R"({
    "aae": {"beta": 2.5, "tau": 0.3, "n_qubits": 4, "update_strategy": "never",
            "encoding": "angle"},
    "run": {"lr": 0.01, "batch": 8, "epochs": 3, "eval_k": 7, "seed": 11,
            "memory_dim": 16, "embedding_dim": 24},
    "noise": {"shots": 512, "depol": 0.1, "readout_eps": 0.05, "n_eval": 50, "seed": 99}
  })");
  const AppConfig cfg = load_file(path);
  EXPECT_EQ(cfg.run.encoder.beta, 2.5);
  EXPECT_EQ(cfg.run.encoder.tau, 0.3);
  EXPECT_EQ(cfg.run.encoder.n_qubits, 4);
  EXPECT_EQ(cfg.run.encoder.strategy, UpdateStrategy::kNever);
  EXPECT_EQ(cfg.run.encoder.encoding, Encoding::kAngle);
  EXPECT_EQ(cfg.run.lr, 0.01);
  EXPECT_EQ(cfg.run.batch, 8);
  EXPECT_EQ(cfg.run.epochs, 3);
  EXPECT_EQ(cfg.run.eval_k, 7);
  EXPECT_EQ(cfg.run.seed, 11u);
  EXPECT_EQ(cfg.run.memory_dim, 16);
  EXPECT_EQ(cfg.run.embedding_dim, 24);
  EXPECT_EQ(cfg.noise.shots, 512u);
  EXPECT_EQ(cfg.noise.depol_p, 0.1);
  EXPECT_EQ(cfg.noise.readout_eps, 0.05);
  EXPECT_EQ(cfg.n_eval, 50u);
  EXPECT_EQ(cfg.noise.seed, 99u);
  EXPECT_TRUE(cfg.noise_seed_explicit);
}

TEST(ConfigFile, PartialFilesKeepDefaultsElsewhere) {
  TempDir dir;
  const std::string path = dir.file("cfg.json");
  write_text(path, R"({"run": {"seed": 5}})");
  const AppConfig cfg = load_file(path);
  EXPECT_EQ(cfg.run.seed, 5u);
  EXPECT_EQ(cfg.run.lr, 1e-3);
  EXPECT_EQ(cfg.run.encoder.n_qubits, 8);
  EXPECT_FALSE(cfg.noise_seed_explicit);
}

TEST(ConfigFile, RejectsUnknownKeys) {
  TempDir dir;
  const std::string path = dir.file("cfg.json");
  write_text(path, R"({"runs": {"lr": 0.1}})");
  EXPECT_THROW(load_file(path), ConfigError);
  write_text(path, R"({"run": {"lr": 0.1, "learning_rate": 0.1}})");
  EXPECT_THROW(load_file(path), ConfigError);
  write_text(path, R"({"aae": {"threshold": 0.5}})");
  EXPECT_THROW(load_file(path), ConfigError);
}

TEST(ConfigFile, RejectsBadValues) {
  TempDir dir;
  const std::string path = dir.file("cfg.json");
  write_text(path, R"({"aae": {"update_strategy": "sometimes"}})");
  EXPECT_THROW(load_file(path), ConfigError);
  write_text(path, R"({"run": {"lr": "fast"}})");
  EXPECT_THROW(load_file(path), ConfigError);
  write_text(path, R"({"run": {"lr": 0.0}})");
  EXPECT_THROW(load_file(path), ConfigError);
  write_text(path, R"({"run": {"lr": 0.1)");
  EXPECT_THROW(load_file(path), ConfigError);
  write_text(path, R"([1, 2, 3])");
  EXPECT_THROW(load_file(path), ConfigError);
  EXPECT_THROW(load_file(dir.file("absent.json")), ConfigError);
}

TEST(ConfigFile, FlagsBeatTheFile) {
  TempDir dir;
  const std::string path = dir.file("cfg.json");
  write_text(path, R"({"run": {"seed": 5, "lr": 0.01}, "aae": {"tau": 0.2}})");
  AppConfig cfg = load_file(path);
  Overrides ov;
  ov.seed = 9;
  ov.tau = 0.8;
  ov.strategy = "always";
  apply(cfg, ov);
  EXPECT_EQ(cfg.run.seed, 9u);
  EXPECT_EQ(cfg.run.encoder.tau, 0.8);
  EXPECT_EQ(cfg.run.encoder.strategy, UpdateStrategy::kAlways);
  EXPECT_EQ(cfg.run.lr, 0.01);  // untouched file value survives

  Overrides bad;
  bad.lr = 0.0;
  EXPECT_THROW(apply(cfg, bad), ConfigError);
}

TEST(ConfigFile, NoiseSeedFollowsTheRunSeedUnlessExplicit) {
  AppConfig cfg = defaults();
  Overrides ov;
  ov.seed = 31;
  apply(cfg, ov);
  EXPECT_EQ(cfg.noise.seed, 31u);

  AppConfig cfg2 = defaults();
  Overrides ov2;
  ov2.seed = 31;
  ov2.noise_seed = 4;
  apply(cfg2, ov2);
  EXPECT_EQ(cfg2.noise.seed, 4u);
  EXPECT_EQ(cfg2.run.seed, 31u);
}

TEST(ConfigFile, EchoCarriesEveryResolvedValue) {
  AppConfig cfg = defaults();
  cfg.run.seed = 77;
  cfg.run.encoder.tau = 0.25;
  const json j = to_json(cfg);
  EXPECT_EQ(j["run"]["seed"], 77);
  EXPECT_EQ(j["aae"]["tau"], 0.25);
  EXPECT_EQ(j["aae"]["update_strategy"], "adaptive");
  EXPECT_EQ(j["aae"]["encoding"], "aae");
  EXPECT_EQ(j["noise"]["shots"], 2048);
}

// ---- the installed binary, end to end ----

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const TempDir& dir, const std::vector<std::string>& args) {
  const std::string out_path = dir.file("last_stdout.txt");
  const std::string err_path = dir.file("last_stderr.txt");
  std::string cmd = std::string("'") + QTG_CLI_BIN + "'";
  for (const std::string& a : args) cmd += " '" + a + "'";
  cmd += " >'" + out_path + "' 2>'" + err_path + "'";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_text(out_path);
  r.err = read_text(err_path);
  return r;
}

std::string make_tiny_csv(const TempDir& dir, std::size_t n_events = 200,
                          std::uint64_t seed = 5) {
  SynthConfig s;
  s.n_users = 10;
  s.n_items = 10;
  s.n_events = n_events;
  s.seed = seed;
  const Dataset data = synth_generate(s);
  const std::string path = dir.file("events.csv");
  write_events_csv(data, path);
  return path;
}

const std::vector<std::string> kTinyModel = {"--qubits",     "3", "--memory-dim", "8",
                                             "--embedding-dim", "8", "--eval-k",  "4"};

std::vector<std::string> with_model(std::vector<std::string> args) {
  args.insert(args.end(), kTinyModel.begin(), kTinyModel.end());
  return args;
}

TEST(CliProcess, SynthTrainEvaluateRoundTrip) {
  TempDir dir;
  const std::string csv = dir.file("data.csv");
  CliResult r = run_cli(dir, {"synth", "--out", csv, "--users", "10", "--items", "10",
                              "--events", "250", "--signal", "0.8", "--seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(csv));
  ASSERT_TRUE(fs::exists(csv + ".meta.json"));
  const json meta = json::parse(read_text(csv + ".meta.json"));
  EXPECT_EQ(meta["seed"], 5);
  EXPECT_EQ(meta["n_events"], 250);
  const json summary = json::parse(r.out);
  EXPECT_EQ(summary["path"], csv);

  const std::string run_dir = dir.file("run");
  r = run_cli(dir, with_model({"train", "--data", csv, "--out", run_dir, "--epochs", "2",
                               "--batch", "16", "--seed", "42"}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("checkpoint at"), std::string::npos);
  EXPECT_TRUE(fs::exists(run_dir + "/checkpoint.txt"));
  EXPECT_TRUE(fs::exists(run_dir + "/config.json"));

  const std::string log = read_text(run_dir + "/train_log.csv");
  EXPECT_EQ(log.rfind("# seed=42\nepoch,events,mean_loss,refresh_rate,seconds\n", 0), 0u);
  EXPECT_NE(log.find("\n0,"), std::string::npos);  // epochs are logged zero-based
  EXPECT_NE(log.find("\n1,"), std::string::npos);

  const json echo = json::parse(read_text(run_dir + "/config.json"));
  EXPECT_EQ(echo["command"], "train");
  EXPECT_EQ(echo["data"], csv);
  EXPECT_EQ(echo["config"]["run"]["seed"], 42);
  EXPECT_EQ(echo["config"]["aae"]["n_qubits"], 3);

  r = run_cli(dir, with_model({"evaluate", "--checkpoint", run_dir + "/checkpoint.txt",
                               "--data", csv, "--split", "test", "--out", run_dir}));
  ASSERT_EQ(r.code, 0) << r.err;
  const json row = json::parse(r.out);
  EXPECT_EQ(row["split"], "test");
  EXPECT_EQ(row["K"], 4);
  EXPECT_GE(row["auc"].get<double>(), 0.0);
  EXPECT_LE(row["auc"].get<double>(), 1.0);
  EXPECT_GT(row["mrr"].get<double>(), 0.0);
  ASSERT_TRUE(fs::exists(run_dir + "/metrics.jsonl"));
  EXPECT_EQ(json::parse(read_text(run_dir + "/metrics.jsonl")), row);

  // same seed, same binary: the evaluation replays identically
  const CliResult again =
      run_cli(dir, with_model({"evaluate", "--checkpoint", run_dir + "/checkpoint.txt",
                               "--data", csv, "--split", "test"}));
  ASSERT_EQ(again.code, 0);
  EXPECT_EQ(again.out, r.out);

  r = run_cli(dir, with_model({"noisy-infer", "--checkpoint", run_dir + "/checkpoint.txt",
                               "--data", csv, "--split", "test", "--shots", "64",
                               "--n-eval", "10", "--noise-seed", "3"}));
  ASSERT_EQ(r.code, 0) << r.err;
  const json noisy = json::parse(r.out);
  EXPECT_EQ(noisy["shots"], 64);
  EXPECT_EQ(noisy["n_eval"], 10);
  EXPECT_EQ(noisy["noise_seed"], 3);
  EXPECT_GE(noisy["auc"].get<double>(), 0.0);
  EXPECT_LE(noisy["auc"].get<double>(), 1.0);
}

TEST(CliProcess, MissingDataFileExitsTwo) {
  TempDir dir;
  const CliResult r = run_cli(
      dir, {"train", "--data", dir.file("nope.csv"), "--out", dir.file("run")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("nope.csv"), std::string::npos);
}

TEST(CliProcess, ZeroEpochsWritesTheUntrainedInitialisation) {
  TempDir dir;
  const std::string csv = make_tiny_csv(dir);
  const std::string run_dir = dir.file("run");
  const CliResult r = run_cli(dir, with_model({"train", "--data", csv, "--out", run_dir,
                                               "--epochs", "0", "--seed", "77"}));
  ASSERT_EQ(r.code, 0) << r.err;

  const Checkpoint ckpt = load_checkpoint(run_dir + "/checkpoint.txt");
  Rng param_rng = Rng(77).fork(1);
  ParamStore expect = make_params(Dims{8, 8, 3}, param_rng);

  auto va = parameter_tensors(expect);
  ParamStore got = ckpt.params;
  auto vb = parameter_tensors(got);
  for (std::size_t i = 0; i < va.size(); ++i) {
    ASSERT_EQ(va[i].rows, vb[i].rows);
    ASSERT_EQ(va[i].cols, vb[i].cols);
    for (Eigen::Index j = 0; j < va[i].rows * va[i].cols; ++j)
      ASSERT_EQ(va[i].data[j], vb[i].data[j]) << va[i].name << "[" << j << "]";
  }
}

TEST(CliProcess, CorruptCheckpointExitsOneWithoutPartialOutput) {
  TempDir dir;
  const std::string csv = make_tiny_csv(dir);
  const std::string ckpt = dir.file("broken.txt");
  write_text(ckpt, "qtg-checkpoint 1\nseed 0\ndims 8 8");
  const std::string out_dir = dir.file("metrics");
  const CliResult r = run_cli(dir, with_model({"evaluate", "--checkpoint", ckpt, "--data",
                                               csv, "--split", "test", "--out", out_dir}));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("corrupt checkpoint"), std::string::npos);
  EXPECT_FALSE(fs::exists(out_dir + "/metrics.jsonl"));
}

TEST(CliProcess, AblateWithZeroThresholdMakesAdaptiveMatchAlways) {
  TempDir dir;
  const std::string csv = make_tiny_csv(dir, 120, 8);
  const std::string out_dir = dir.file("ablation");
  const CliResult r = run_cli(dir, with_model({"ablate", "--data", csv, "--out", out_dir,
                                               "--epochs", "1", "--tau", "0"}));
  ASSERT_EQ(r.code, 0) << r.err;

  std::vector<json> rows;
  std::istringstream lines(read_text(out_dir + "/ablation.jsonl"));
  for (std::string line; std::getline(lines, line);) rows.push_back(json::parse(line));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0]["strategy"], "adaptive");
  EXPECT_EQ(rows[1]["strategy"], "always");
  EXPECT_EQ(rows[2]["strategy"], "never");

  // tau = 0 refreshes on every event, so adaptive and always coincide exactly
  for (const char* metric : {"accuracy", "precision", "auc", "mrr"})
    EXPECT_EQ(rows[0][metric].get<double>(), rows[1][metric].get<double>()) << metric;
}

TEST(CliProcess, CompareEncodingsEmitsOneRowPerEncoding) {
  TempDir dir;
  const std::string csv = make_tiny_csv(dir, 120, 9);
  const CliResult r =
      run_cli(dir, with_model({"compare-encodings", "--data", csv, "--epochs", "1"}));
  ASSERT_EQ(r.code, 0) << r.err;

  std::vector<json> rows;
  std::istringstream lines(r.out);
  for (std::string line; std::getline(lines, line);) rows.push_back(json::parse(line));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0]["encoding"], "aae");
  EXPECT_EQ(rows[1]["encoding"], "amplitude");
  EXPECT_EQ(rows[2]["encoding"], "angle");
}

TEST(CliProcess, UsageAndConfigErrorsExitOne) {
  TempDir dir;
  EXPECT_EQ(run_cli(dir, {}).code, 1);                        // no subcommand
  EXPECT_EQ(run_cli(dir, {"train"}).code, 1);                 // missing required flags
  EXPECT_EQ(run_cli(dir, {"frobnicate"}).code, 1);            // unknown subcommand
  EXPECT_EQ(run_cli(dir, {"--help"}).code, 0);

  const std::string csv = make_tiny_csv(dir);
  const CliResult r = run_cli(dir, {"train", "--data", csv, "--out", dir.file("run"),
                                    "--qubits", "0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(CliProcess, ConfigFileDrivesTheRun) {
  TempDir dir;
  const std::string csv = make_tiny_csv(dir);
  const std::string cfg_path = dir.file("cfg.json");
  write_text(cfg_path, R"({
    "aae": {"n_qubits": 3},
    "run": {"epochs": 1, "eval_k": 4, "seed": 13, "memory_dim": 8, "embedding_dim": 8}
  })");
  const std::string run_dir = dir.file("run");
  const CliResult r =
      run_cli(dir, {"train", "--data", csv, "--out", run_dir, "--config", cfg_path});
  ASSERT_EQ(r.code, 0) << r.err;
  const json echo = json::parse(read_text(run_dir + "/config.json"));
  EXPECT_EQ(echo["config"]["run"]["seed"], 13);
  EXPECT_EQ(echo["config"]["run"]["epochs"], 1);
  EXPECT_EQ(echo["config"]["aae"]["n_qubits"], 3);
  EXPECT_EQ(read_text(run_dir + "/train_log.csv").rfind("# seed=13\n", 0), 0u);
}

}  // namespace
}  // namespace qtg::cli
