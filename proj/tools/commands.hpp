#pragma once

#include <string>

#include "cli_config.hpp"

namespace qtg::cli {

struct CommandArgs {
  AppConfig cfg;
  std::string data_path;
  std::string checkpoint_path;
  std::string out_dir;  // optional for everything but train
  std::string split = "test";
};

int cmd_train(const CommandArgs& args);
int cmd_evaluate(const CommandArgs& args);
int cmd_ablate(const CommandArgs& args);
int cmd_compare_encodings(const CommandArgs& args);
int cmd_noisy_infer(const CommandArgs& args);

struct SynthArgs {
  SynthConfig synth;
  std::string out_csv;
};

int cmd_synth(const SynthArgs& args);

}  // namespace qtg::cli
