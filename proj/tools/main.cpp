// Command-line frontend. Exit codes: 0 success, 1 usage/config/checkpoint
// problems, 2 data problems.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace qtg;
using namespace qtg::cli;

struct RawArgs {
  std::string config_path;
  CommandArgs cmd;
  Overrides ov;
};

void add_config_options(CLI::App* app, RawArgs& raw) {
  app->add_option("--config", raw.config_path, "JSON config file");
  app->add_option("--seed", raw.ov.seed, "root RNG seed");
  app->add_option("--lr", raw.ov.lr, "Adam learning rate");
  app->add_option("--batch", raw.ov.batch, "gradient accumulation window");
  app->add_option("--epochs", raw.ov.epochs, "training epochs");
  app->add_option("--eval-k", raw.ov.eval_k, "negatives ranked per query");
  app->add_option("--beta", raw.ov.beta, "activity sensitivity");
  app->add_option("--tau", raw.ov.tau, "refresh threshold");
  app->add_option("--qubits", raw.ov.n_qubits, "circuit width");
  app->add_option("--memory-dim", raw.ov.memory_dim, "node memory width");
  app->add_option("--embedding-dim", raw.ov.embedding_dim, "fused embedding width");
  app->add_option("--strategy", raw.ov.strategy, "adaptive|always|never");
  app->add_option("--encoding", raw.ov.encoding, "aae|amplitude|angle");
}

void add_noise_options(CLI::App* app, RawArgs& raw) {
  app->add_option("--shots", raw.ov.shots, "measurement shots per circuit");
  app->add_option("--depol", raw.ov.depol, "depolarising probability");
  app->add_option("--readout-eps", raw.ov.readout_eps, "per-qubit readout flip probability");
  app->add_option("--n-eval", raw.ov.n_eval, "events scored under noise");
  app->add_option("--noise-seed", raw.ov.noise_seed, "noise RNG seed (defaults to --seed)");
}

CommandArgs resolve(RawArgs& raw) {
  raw.cmd.cfg = raw.config_path.empty() ? defaults() : load_file(raw.config_path);
  apply(raw.cmd.cfg, raw.ov);
  return raw.cmd;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temporal link prediction with adaptively refreshed quantum feature maps"};
  app.require_subcommand(1);

  RawArgs t_raw, e_raw, a_raw, c_raw, n_raw;
  SynthArgs s_args;

  CLI::App* t = app.add_subcommand("train", "train on a temporal event stream");
  t->add_option("--data", t_raw.cmd.data_path, "events CSV")->required();
  t->add_option("--out", t_raw.cmd.out_dir, "output directory")->required();
  add_config_options(t, t_raw);

  CLI::App* e = app.add_subcommand("evaluate", "score a held-out split from a checkpoint");
  e->add_option("--checkpoint", e_raw.cmd.checkpoint_path, "checkpoint file")->required();
  e->add_option("--data", e_raw.cmd.data_path, "events CSV")->required();
  e->add_option("--split", e_raw.cmd.split, "train|val|test")->required();
  e->add_option("--out", e_raw.cmd.out_dir, "optional output directory");
  add_config_options(e, e_raw);

  CLI::App* a = app.add_subcommand("ablate", "train and test every update strategy");
  a->add_option("--data", a_raw.cmd.data_path, "events CSV")->required();
  a->add_option("--out", a_raw.cmd.out_dir, "optional output directory");
  add_config_options(a, a_raw);

  CLI::App* c = app.add_subcommand("compare-encodings", "train and test every encoding");
  c->add_option("--data", c_raw.cmd.data_path, "events CSV")->required();
  c->add_option("--out", c_raw.cmd.out_dir, "optional output directory");
  add_config_options(c, c_raw);

  CLI::App* n = app.add_subcommand("noisy-infer", "evaluate with sampled noisy readout");
  n->add_option("--checkpoint", n_raw.cmd.checkpoint_path, "checkpoint file")->required();
  n->add_option("--data", n_raw.cmd.data_path, "events CSV")->required();
  n->add_option("--split", n_raw.cmd.split, "train|val|test")->required();
  n->add_option("--out", n_raw.cmd.out_dir, "optional output directory");
  add_config_options(n, n_raw);
  add_noise_options(n, n_raw);

  CLI::App* s = app.add_subcommand("synth", "generate a planted-community stream");
  s->add_option("--out", s_args.out_csv, "output CSV path")->required();
  s->add_option("--users", s_args.synth.n_users, "number of users");
  s->add_option("--items", s_args.synth.n_items, "number of items");
  s->add_option("--events", s_args.synth.n_events, "number of events");
  s->add_option("--signal", s_args.synth.signal, "community preference strength [0,1]");
  s->add_option("--dim", s_args.synth.feature_dim, "feature dimension");
  s->add_option("--seed", s_args.synth.seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::CallForAllHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& pe) {
    app.exit(pe);
    return 1;
  }

  try {
    if (t->parsed()) return cmd_train(resolve(t_raw));
    if (e->parsed()) return cmd_evaluate(resolve(e_raw));
    if (a->parsed()) return cmd_ablate(resolve(a_raw));
    if (c->parsed()) return cmd_compare_encodings(resolve(c_raw));
    if (n->parsed()) return cmd_noisy_infer(resolve(n_raw));
    if (s->parsed()) return cmd_synth(s_args);
  } catch (const DataError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 1;
}
