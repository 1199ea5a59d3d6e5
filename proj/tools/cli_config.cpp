#include "cli_config.hpp"

#include <fstream>

namespace qtg::cli {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const char* section,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (key == k) known = true;
    if (!known)
      throw ConfigError(std::string("unknown key '") + key + "' in config section '" +
                        section + "'");
  }
}

template <typename T>
void take(const json& obj, const char* section, const char* key, T& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config value '") + section + "." + key +
                      "' has the wrong type");
  }
}

}  // namespace

AppConfig defaults() { return AppConfig{}; }

AppConfig load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be a JSON object");
  check_keys(root, "<root>", {"aae", "run", "noise"});

  AppConfig cfg;
  if (root.contains("aae")) {
    const json& a = root["aae"];
    check_keys(a, "aae", {"beta", "tau", "n_qubits", "update_strategy", "encoding"});
    take(a, "aae", "beta", cfg.run.encoder.beta);
    take(a, "aae", "tau", cfg.run.encoder.tau);
    take(a, "aae", "n_qubits", cfg.run.encoder.n_qubits);
    std::string name;
    take(a, "aae", "update_strategy", name);
    if (!name.empty()) cfg.run.encoder.strategy = parse_update_strategy(name);
    name.clear();
    take(a, "aae", "encoding", name);
    if (!name.empty()) cfg.run.encoder.encoding = parse_encoding(name);
  }
  if (root.contains("run")) {
    const json& r = root["run"];
    check_keys(r, "run",
               {"lr", "batch", "epochs", "eval_k", "seed", "memory_dim", "embedding_dim"});
    take(r, "run", "lr", cfg.run.lr);
    take(r, "run", "batch", cfg.run.batch);
    take(r, "run", "epochs", cfg.run.epochs);
    take(r, "run", "eval_k", cfg.run.eval_k);
    take(r, "run", "seed", cfg.run.seed);
    long long md = cfg.run.memory_dim, ed = cfg.run.embedding_dim;
    take(r, "run", "memory_dim", md);
    take(r, "run", "embedding_dim", ed);
    cfg.run.memory_dim = md;
    cfg.run.embedding_dim = ed;
    if (!(cfg.run.lr > 0.0)) throw ConfigError("run.lr must be positive");
  }
  if (root.contains("noise")) {
    const json& n = root["noise"];
    check_keys(n, "noise", {"shots", "depol", "readout_eps", "n_eval", "seed"});
    take(n, "noise", "shots", cfg.noise.shots);
    take(n, "noise", "depol", cfg.noise.depol_p);
    take(n, "noise", "readout_eps", cfg.noise.readout_eps);
    take(n, "noise", "n_eval", cfg.n_eval);
    if (n.contains("seed")) {
      take(n, "noise", "seed", cfg.noise.seed);
      cfg.noise_seed_explicit = true;
    }
  }

  validate(cfg.run);
  validate(cfg.noise);
  if (cfg.n_eval < 1) throw ConfigError("noise.n_eval must be >= 1");
  return cfg;
}

void apply(AppConfig& cfg, const Overrides& ov) {
  if (ov.lr) {
    if (!(*ov.lr > 0.0)) throw ConfigError("--lr must be positive");
    cfg.run.lr = *ov.lr;
  }
  if (ov.beta) cfg.run.encoder.beta = *ov.beta;
  if (ov.tau) cfg.run.encoder.tau = *ov.tau;
  if (ov.batch) cfg.run.batch = *ov.batch;
  if (ov.epochs) cfg.run.epochs = *ov.epochs;
  if (ov.eval_k) cfg.run.eval_k = *ov.eval_k;
  if (ov.n_qubits) cfg.run.encoder.n_qubits = *ov.n_qubits;
  if (ov.memory_dim) cfg.run.memory_dim = *ov.memory_dim;
  if (ov.embedding_dim) cfg.run.embedding_dim = *ov.embedding_dim;
  if (ov.seed) cfg.run.seed = *ov.seed;
  if (ov.strategy) cfg.run.encoder.strategy = parse_update_strategy(*ov.strategy);
  if (ov.encoding) cfg.run.encoder.encoding = parse_encoding(*ov.encoding);
  if (ov.shots) cfg.noise.shots = *ov.shots;
  if (ov.depol) cfg.noise.depol_p = *ov.depol;
  if (ov.readout_eps) cfg.noise.readout_eps = *ov.readout_eps;
  if (ov.n_eval) cfg.n_eval = std::size_t(*ov.n_eval);
  if (ov.noise_seed) {
    cfg.noise.seed = *ov.noise_seed;
    cfg.noise_seed_explicit = true;
  }
  if (!cfg.noise_seed_explicit) cfg.noise.seed = cfg.run.seed;

  validate(cfg.run);
  validate(cfg.noise);
  if (cfg.n_eval < 1) throw ConfigError("n_eval must be >= 1");
}

nlohmann::ordered_json to_json(const AppConfig& cfg) {
  nlohmann::ordered_json j;
  j["aae"] = {{"beta", cfg.run.encoder.beta},
              {"tau", cfg.run.encoder.tau},
              {"n_qubits", cfg.run.encoder.n_qubits},
              {"update_strategy", to_string(cfg.run.encoder.strategy)},
              {"encoding", to_string(cfg.run.encoder.encoding)}};
  j["run"] = {{"lr", cfg.run.lr},
              {"batch", cfg.run.batch},
              {"epochs", cfg.run.epochs},
              {"eval_k", cfg.run.eval_k},
              {"seed", cfg.run.seed},
              {"memory_dim", cfg.run.memory_dim},
              {"embedding_dim", cfg.run.embedding_dim}};
  j["noise"] = {{"shots", cfg.noise.shots},
                {"depol", cfg.noise.depol_p},
                {"readout_eps", cfg.noise.readout_eps},
                {"n_eval", cfg.n_eval},
                {"seed", cfg.noise.seed}};
  return j;
}

}  // namespace qtg::cli
