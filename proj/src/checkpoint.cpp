#include "qtg/checkpoint.hpp"

#include <charconv>
#include <fstream>

namespace qtg {

namespace {

constexpr const char* kMagic = "qtg-checkpoint";
constexpr int kVersion = 1;

void write_double(std::ofstream& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
  out.write(buf, res.ptr - buf);
}

}  // namespace

void save_checkpoint(const ParamStore& params, const Dims& dims, std::uint64_t seed,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write checkpoint: " + path);
  out << kMagic << ' ' << kVersion << '\n';
  out << "seed " << seed << '\n';
  out << "dims " << dims.memory << ' ' << dims.embedding << ' ' << dims.n_qubits << '\n';
  // parameter_tensors wants mutable access; serialisation does not mutate
  auto views = parameter_tensors(const_cast<ParamStore&>(params));
  for (const TensorView& t : views) {
    out << "tensor " << t.name << ' ' << t.rows << ' ' << t.cols << '\n';
    // Eigen stores column-major; emit row-major so the file reads naturally
    for (Eigen::Index r = 0; r < t.rows; ++r) {
      for (Eigen::Index c = 0; c < t.cols; ++c) {
        if (c) out << ' ';
        write_double(out, t.data[c * t.rows + r]);
      }
      out << '\n';
    }
  }
  out << "end\n";
  if (!out) throw Error("short write on checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open checkpoint: " + path);

  const auto corrupt = [&path](const std::string& why) {
    return Error("corrupt checkpoint " + path + ": " + why);
  };

  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != kMagic || version != kVersion)
    throw corrupt("bad header");

  Checkpoint ckpt;
  if (!(in >> word >> ckpt.seed) || word != "seed") throw corrupt("missing seed");
  if (!(in >> word >> ckpt.dims.memory >> ckpt.dims.embedding >> ckpt.dims.n_qubits) ||
      word != "dims")
    throw corrupt("missing dims");
  if (ckpt.dims.memory < 1 || ckpt.dims.embedding < 1 || ckpt.dims.n_qubits < 1)
    throw corrupt("non-positive dimensions");

  Rng unused(0);
  ckpt.params = make_params(ckpt.dims, unused);
  for (const TensorView& t : parameter_tensors(ckpt.params)) {
    Eigen::Index rows = 0, cols = 0;
    std::string name;
    if (!(in >> word >> name >> rows >> cols) || word != "tensor")
      throw corrupt("missing tensor record");
    if (name != t.name || rows != t.rows || cols != t.cols)
      throw corrupt("tensor " + name + " does not match the declared dimensions");
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) {
        double v = 0.0;
        if (!(in >> v)) throw corrupt("truncated tensor " + name);
        t.data[c * rows + r] = v;
      }
  }
  if (!(in >> word) || word != "end") throw corrupt("missing end marker");
  return ckpt;
}

}  // namespace qtg
