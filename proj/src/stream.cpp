#include "qtg/stream.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace qtg {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

long long parse_int(const std::string& s, std::size_t line_no, const char* what) {
  long long v = 0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw SchemaError("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
  return v;
}

double parse_double(const std::string& s, std::size_t line_no, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw SchemaError("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
  }
}

}  // namespace

Dataset parse_events_stream(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw EmptyDatasetError(origin + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_line(line);
  if (header.size() < 4 || header[0] != "src" || header[1] != "dst" || header[2] != "t")
    throw SchemaError(origin + ": header must start with src,dst,t,f0,...");
  const Eigen::Index d = Eigen::Index(header.size()) - 3;
  for (Eigen::Index k = 0; k < d; ++k)
    if (header[std::size_t(3 + k)] != "f" + std::to_string(k))
      throw SchemaError(origin + ": feature columns must be named f0..f" +
                        std::to_string(d - 1));

  Dataset data;
  data.feature_dim = d;
  std::unordered_map<long long, NodeId> user_ids, item_ids;
  double prev_t = -std::numeric_limits<double>::infinity();
  std::size_t line_no = 1;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != std::size_t(3 + d))
      throw SchemaError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(3 + d) + " fields, got " +
                        std::to_string(cells.size()));

    const long long raw_src = parse_int(cells[0], line_no, "src");
    const long long raw_dst = parse_int(cells[1], line_no, "dst");
    if (raw_src < 0 || raw_dst < 0)
      throw SchemaError("line " + std::to_string(line_no) + ": negative node id");

    TemporalEvent e;
    e.t = parse_double(cells[2], line_no, "timestamp");
    if (!std::isfinite(e.t))
      throw SchemaError("line " + std::to_string(line_no) + ": non-finite timestamp");
    if (e.t < prev_t)
      throw OrderError("line " + std::to_string(line_no) +
                       ": timestamp decreases; the stream must be chronological");
    prev_t = e.t;

    e.features = Vector(d);
    for (Eigen::Index k = 0; k < d; ++k)
      e.features[k] = parse_double(cells[std::size_t(3 + k)], line_no, "feature");

    e.src = user_ids.try_emplace(raw_src, NodeId(user_ids.size())).first->second;
    e.dst = item_ids.try_emplace(raw_dst, NodeId(item_ids.size())).first->second;
    data.events.push_back(std::move(e));
  }

  if (data.events.empty()) throw EmptyDatasetError(origin + ": no events");
  data.n_users = NodeId(user_ids.size());
  data.n_items = NodeId(item_ids.size());
  assign_splits(data);
  return data;
}

Dataset parse_events_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open events file: " + path);
  return parse_events_stream(in, path);
}

void assign_splits(Dataset& data) {
  const std::size_t n = data.events.size();
  data.train_end = n * 70 / 100;
  data.val_end = n * 85 / 100;
}

void write_events_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write events file: " + path);
  out << "src,dst,t";
  for (Eigen::Index k = 0; k < data.feature_dim; ++k) out << ",f" << k;
  out << "\n";
  char buf[64];
  const auto put = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
  };
  for (const TemporalEvent& e : data.events) {
    out << e.src << ',' << e.dst << ',';
    put(e.t);
    for (Eigen::Index k = 0; k < data.feature_dim; ++k) {
      out << ',';
      put(e.features[k]);
    }
    out << '\n';
  }
  if (!out) throw DataError("short write: " + path);
}

bool InteractionHistory::contains(NodeId user, NodeId item) const {
  const auto it = seen_.find(user);
  return it != seen_.end() && it->second.count(item) > 0;
}

std::size_t InteractionHistory::count(NodeId user) const {
  const auto it = seen_.find(user);
  return it == seen_.end() ? 0 : it->second.size();
}

const std::unordered_set<NodeId>& InteractionHistory::items_of(NodeId user) const {
  static const std::unordered_set<NodeId> empty;
  const auto it = seen_.find(user);
  return it == seen_.end() ? empty : it->second;
}

NodeId sample_negative(NodeId user, const InteractionHistory& history, NodeId n_items,
                       Rng& rng) {
  if (n_items < 1) throw ConfigError("cannot sample negatives without items");
  const auto& seen = history.items_of(user);
  if (NodeId(seen.size()) >= n_items)  // saturated: every item is a false negative
    return NodeId(rng.next_below(std::uint64_t(n_items)));
  // index the unseen items in id order so one bounded draw settles the pick
  std::uint64_t pick = rng.next_below(std::uint64_t(n_items) - seen.size());
  for (NodeId i = 0; i < n_items; ++i) {
    if (seen.count(i)) continue;
    if (pick == 0) return i;
    --pick;
  }
  throw Error("unreachable: negative sampling exhausted the item range");
}

Dataset synth_generate(const SynthConfig& cfg) {
  if (cfg.n_users < 1 || cfg.n_items < 1 || cfg.n_events < 1)
    throw ConfigError("synthetic stream needs users, items, and events");
  if (cfg.signal < 0.0 || cfg.signal > 1.0) throw ConfigError("signal must lie in [0, 1]");
  if (cfg.feature_dim < 1) throw ConfigError("feature_dim must be positive");

  std::vector<std::vector<NodeId>> items_by_comm(2);
  for (NodeId i = 0; i < cfg.n_items; ++i) items_by_comm[std::size_t(i % 2)].push_back(i);

  Rng rng(cfg.seed);

  // One dense orthonormal prototype per (side, community): columns 0-1 for
  // the user communities, 2-3 for the item communities. Dense directions keep
  // the amplitude map away from degenerate symmetric states, and
  // orthogonality fixes the community-switch distance at sqrt(2) regardless
  // of seed. Below 4 dims full orthogonality is impossible; the leftover
  // prototypes fall back to their raw directions.
  Matrix proto(cfg.feature_dim, 4);
  for (int c = 0; c < 4; ++c) {
    Vector raw(cfg.feature_dim);
    for (Eigen::Index j = 0; j < cfg.feature_dim; ++j) raw[j] = 2.0 * rng.next_double() - 1.0;
    Vector p = raw;
    for (int k = 0; k < c; ++k) p -= proto.col(k).dot(p) * proto.col(k);
    const double residual = p.norm();
    proto.col(c) = residual > 1e-9 ? Vector(p / residual) : raw.normalized();
  }
  // dimension-independent noise norm ~0.1: repeats of the same community pair
  // stay below the default refresh threshold, community switches exceed it
  const double sigma = 0.1 / std::sqrt(double(cfg.feature_dim));

  Dataset data;
  data.n_users = cfg.n_users;
  data.n_items = cfg.n_items;
  data.feature_dim = cfg.feature_dim;
  data.events.reserve(cfg.n_events);

  const double p_within = 0.5 + 0.5 * cfg.signal;
  for (std::size_t k = 0; k < cfg.n_events; ++k) {
    const NodeId u = NodeId(rng.next_below(std::uint64_t(cfg.n_users)));
    const int u_comm = int(u % 2);
    const bool within = rng.next_double() < p_within;
    int comm = within ? u_comm : 1 - u_comm;
    if (items_by_comm[std::size_t(comm)].empty()) comm = 1 - comm;
    const auto& pool = items_by_comm[std::size_t(comm)];
    const NodeId item = pool[rng.next_below(pool.size())];

    TemporalEvent e;
    e.src = u;
    e.dst = item;
    e.t = double(k + 1);
    e.features = proto.col(u_comm) + proto.col(2 + item % 2);
    for (Eigen::Index j = 0; j < cfg.feature_dim; ++j)
      e.features[j] += sigma * rng.next_gaussian();
    data.events.push_back(std::move(e));
  }

  assign_splits(data);
  return data;
}

}  // namespace qtg
