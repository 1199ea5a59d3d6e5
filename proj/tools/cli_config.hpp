// Resolved tool configuration: built-in defaults, then an optional JSON file,
// then command-line flags, in that order of precedence.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "qtg/noise.hpp"
#include "qtg/pipeline.hpp"

namespace qtg::cli {

struct AppConfig {
  RunConfig run;
  NoiseModel noise;
  std::size_t n_eval = 100;
  bool noise_seed_explicit = false;  // otherwise the run seed is reused
};

struct Overrides {
  std::optional<double> lr, beta, tau, depol, readout_eps;
  std::optional<int> batch, epochs, eval_k, n_qubits;
  std::optional<long long> memory_dim, embedding_dim;
  std::optional<std::uint64_t> seed, noise_seed, shots, n_eval;
  std::optional<std::string> strategy, encoding;
};

AppConfig defaults();

// Strict parse: unknown sections or keys anywhere are ConfigErrors.
AppConfig load_file(const std::string& path);

void apply(AppConfig& cfg, const Overrides& ov);

// full resolved view, suitable for the config echo artifact
nlohmann::ordered_json to_json(const AppConfig& cfg);

}  // namespace qtg::cli
