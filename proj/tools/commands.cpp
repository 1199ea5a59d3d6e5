#include "commands.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "qtg/checkpoint.hpp"

namespace qtg::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string full(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_config_echo(const CommandArgs& args, const std::string& command) {
  if (args.out_dir.empty()) return;
  ordered_json j;
  j["command"] = command;
  j["data"] = args.data_path;
  j["config"] = to_json(args.cfg);
  std::ofstream out(fs::path(args.out_dir) / "config.json");
  out << j.dump(2) << '\n';
  if (!out) throw Error("cannot write config echo in " + args.out_dir);
}

void ensure_out_dir(const std::string& dir) {
  if (dir.empty()) throw ConfigError("--out is required here");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
}

ordered_json metrics_row(const MetricsReport& m, Split split, const AppConfig& cfg) {
  ordered_json j;
  j["split"] = to_string(split);
  j["accuracy"] = m.accuracy;
  j["precision"] = m.precision;
  j["auc"] = m.auc;
  j["mrr"] = m.mrr;
  j["K"] = cfg.run.eval_k;
  j["seed"] = cfg.run.seed;
  return j;
}

void append_jsonl(const std::string& dir, const std::string& name, const ordered_json& row) {
  if (dir.empty()) return;
  std::ofstream out(fs::path(dir) / name, std::ios::app);
  out << row.dump() << '\n';
  if (!out) throw Error("cannot write " + name + " in " + dir);
}

void write_train_log(const std::string& dir, const TrainResult& result,
                     std::uint64_t seed) {
  std::ofstream out(fs::path(dir) / "train_log.csv");
  out << "# seed=" << seed << '\n';
  out << "epoch,events,mean_loss,refresh_rate,seconds\n";
  for (const TrainLogRecord& r : result.log)
    out << r.epoch << ',' << r.events << ',' << full(r.mean_loss) << ','
        << full(r.refresh_rate) << ',' << full(r.seconds) << '\n';
  if (!out) throw Error("cannot write train_log.csv in " + dir);
}

TrainResult train_with_progress(const Dataset& data, const RunConfig& cfg) {
  TrainResult result = train(data, cfg);
  for (const TrainLogRecord& r : result.log)
    std::printf("epoch %d: events=%llu mean_loss=%.6f refresh_rate=%.4f (%.2fs)\n", r.epoch,
                (unsigned long long)r.events, r.mean_loss, r.refresh_rate, r.seconds);
  return result;
}

}  // namespace

int cmd_train(const CommandArgs& args) {
  const Dataset data = parse_events_csv(args.data_path);
  validate(args.cfg.run, data);
  ensure_out_dir(args.out_dir);

  const TrainResult result = train_with_progress(data, args.cfg.run);

  const Dims dims{args.cfg.run.memory_dim, args.cfg.run.embedding_dim,
                  args.cfg.run.encoder.n_qubits};
  const fs::path ckpt = fs::path(args.out_dir) / "checkpoint.txt";
  save_checkpoint(result.params, dims, args.cfg.run.seed, ckpt.string());
  write_train_log(args.out_dir, result, args.cfg.run.seed);
  write_config_echo(args, "train");

  std::printf("trained %d epoch(s) on %zu events; checkpoint at %s\n", args.cfg.run.epochs,
              data.train_end, ckpt.string().c_str());
  return 0;
}

int cmd_evaluate(const CommandArgs& args) {
  const Dataset data = parse_events_csv(args.data_path);
  const Checkpoint ckpt = load_checkpoint(args.checkpoint_path);
  const Split split = parse_split(args.split);
  const MetricsReport m = evaluate(data, split, ckpt.params, args.cfg.run);

  const ordered_json row = metrics_row(m, split, args.cfg);
  std::cout << row.dump() << '\n';
  if (!args.out_dir.empty()) {
    ensure_out_dir(args.out_dir);
    append_jsonl(args.out_dir, "metrics.jsonl", row);
    write_config_echo(args, "evaluate");
  }
  return 0;
}

int cmd_ablate(const CommandArgs& args) {
  const Dataset data = parse_events_csv(args.data_path);
  validate(args.cfg.run, data);
  if (!args.out_dir.empty()) ensure_out_dir(args.out_dir);

  for (const UpdateStrategy s :
       {UpdateStrategy::kAdaptive, UpdateStrategy::kAlways, UpdateStrategy::kNever}) {
    RunConfig run = args.cfg.run;
    run.encoder.strategy = s;
    const TrainResult result = train(data, run);
    const MetricsReport m = evaluate(data, Split::kTest, result.params, run);
    AppConfig echo = args.cfg;
    echo.run = run;
    ordered_json row = metrics_row(m, Split::kTest, echo);
    row["strategy"] = to_string(s);
    std::cout << row.dump() << '\n';
    append_jsonl(args.out_dir, "ablation.jsonl", row);
  }
  if (!args.out_dir.empty()) write_config_echo(args, "ablate");
  return 0;
}

int cmd_compare_encodings(const CommandArgs& args) {
  const Dataset data = parse_events_csv(args.data_path);
  if (!args.out_dir.empty()) ensure_out_dir(args.out_dir);

  for (const Encoding e : {Encoding::kAae, Encoding::kAmplitude, Encoding::kAngle}) {
    RunConfig run = args.cfg.run;
    run.encoder.encoding = e;
    validate(run, data);
    const TrainResult result = train(data, run);
    const MetricsReport m = evaluate(data, Split::kTest, result.params, run);
    AppConfig echo = args.cfg;
    echo.run = run;
    ordered_json row = metrics_row(m, Split::kTest, echo);
    row["encoding"] = to_string(e);
    std::cout << row.dump() << '\n';
    append_jsonl(args.out_dir, "encodings.jsonl", row);
  }
  if (!args.out_dir.empty()) write_config_echo(args, "compare-encodings");
  return 0;
}

int cmd_noisy_infer(const CommandArgs& args) {
  const Dataset data = parse_events_csv(args.data_path);
  const Checkpoint ckpt = load_checkpoint(args.checkpoint_path);
  const Split split = parse_split(args.split);
  const MetricsReport m =
      noisy_evaluate(data, split, ckpt.params, args.cfg.run, args.cfg.noise, args.cfg.n_eval);

  ordered_json row = metrics_row(m, split, args.cfg);
  row["shots"] = args.cfg.noise.shots;
  row["depol"] = args.cfg.noise.depol_p;
  row["readout_eps"] = args.cfg.noise.readout_eps;
  row["n_eval"] = args.cfg.n_eval;
  row["noise_seed"] = args.cfg.noise.seed;
  std::cout << row.dump() << '\n';
  if (!args.out_dir.empty()) {
    ensure_out_dir(args.out_dir);
    append_jsonl(args.out_dir, "noisy.jsonl", row);
    write_config_echo(args, "noisy-infer");
  }
  return 0;
}

int cmd_synth(const SynthArgs& args) {
  if (args.out_csv.empty()) throw ConfigError("--out is required here");
  const Dataset data = synth_generate(args.synth);
  if (const fs::path parent = fs::path(args.out_csv).parent_path(); !parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
  }
  write_events_csv(data, args.out_csv);

  ordered_json meta;
  meta["n_users"] = args.synth.n_users;
  meta["n_items"] = args.synth.n_items;
  meta["n_events"] = args.synth.n_events;
  meta["signal"] = args.synth.signal;
  meta["feature_dim"] = args.synth.feature_dim;
  meta["seed"] = args.synth.seed;
  std::ofstream mf(args.out_csv + ".meta.json");
  mf << meta.dump(2) << '\n';
  if (!mf) throw Error("cannot write synth metadata next to " + args.out_csv);

  meta["path"] = args.out_csv;
  std::cout << meta.dump() << '\n';
  return 0;
}

}  // namespace qtg::cli
