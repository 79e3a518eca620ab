#include "osnrecruit/worker_pool.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "osnrecruit/seeding.hpp"

namespace osnrecruit {

void AttributeModel::validate() const {
  if (!(speed_kmh.lower_bound() > 0.0)) {
    throw std::invalid_argument(fmt::format("speed distribution {} can produce non-positive speeds", speed_kmh.describe()));
  }
  if (residual_energy.lower_bound() < 0.0 || residual_energy.upper_bound() > 1.0) {
    throw std::invalid_argument(
        fmt::format("residual energy distribution {} leaves [0,1]", residual_energy.describe()));
  }
  if (reputation.lower_bound() < 0.0 || reputation.upper_bound() > 1.0) {
    throw std::invalid_argument(fmt::format("reputation distribution {} leaves [0,1]", reputation.describe()));
  }
  for (const auto& [label, geo] : geometry) {
    if (!(geo.radius_km >= 0.0) || !std::isfinite(geo.radius_km)) {
      throw std::invalid_argument(fmt::format("subarea '{}' has invalid radius {}", label, geo.radius_km));
    }
  }
}

WorkerPool::WorkerPool(const SocialGraph& graph, std::vector<Worker> workers)
    : graph_(&graph), workers_(std::move(workers)) {
  std::sort(workers_.begin(), workers_.end(), [](const Worker& a, const Worker& b) { return a.node < b.node; });
}

const Worker* WorkerPool::find(NodeIndex node) const {
  const auto it = std::lower_bound(workers_.begin(), workers_.end(), node,
                                   [](const Worker& w, NodeIndex n) { return w.node < n; });
  return (it != workers_.end() && it->node == node) ? &*it : nullptr;
}

WorkerPool WorkerPool::subset(std::span<const std::size_t> positions) const {
  std::vector<Worker> out;
  out.reserve(positions.size());
  for (const auto p : positions) out.push_back(workers_.at(p));
  return WorkerPool(*graph_, std::move(out));
}

WorkerPool register_workers(const SocialGraph& g, std::span<const NodeIndex> active, const AttributeModel& model,
                            std::uint64_t seed) {
  model.validate();
  std::vector<NodeIndex> nodes(active.begin(), active.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::vector<Worker> workers;
  workers.reserve(nodes.size());
  for (const NodeIndex v : nodes) {
    if (v >= g.size()) throw std::invalid_argument(fmt::format("node index {} out of range", v));
    const auto& social = g.node(v);
    const auto geo = model.geometry.find(social.general_location);
    if (geo == model.geometry.end()) {
      throw std::invalid_argument(
          fmt::format("no geometry for subarea '{}' (node '{}')", social.general_location, social.id.str()));
    }
    Rng rng(derive_seed(seed, {v}));
    Worker w;
    w.node = v;
    w.id = social.id;
    // Area-uniform point in the disk: radius ~ R * sqrt(U).
    const double r = geo->second.radius_km * std::sqrt(uniform01(rng));
    const double bearing = 2.0 * std::numbers::pi * uniform01(rng);
    w.gps = destination_point(geo->second.center, bearing, r);
    w.avg_speed_kmh = model.speed_kmh.sample(rng);
    w.residual_energy = model.residual_energy.sample(rng);
    w.reputation = model.reputation.sample(rng);
    workers.push_back(std::move(w));
  }
  return WorkerPool(g, std::move(workers));
}

TableError::TableError(const std::string& what, std::size_t line)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}", line, what) : what), line_(line) {}

Distribution AttributeTable::distribution(const std::string& column) const {
  const auto it = columns.find(column);
  if (it == columns.end()) throw TableError(fmt::format("attribute table has no '{}' column", column));
  return Distribution::empirical(it->second);
}

AttributeTable parse_attribute_table(std::istream& csv) {
  std::string line;
  std::size_t number = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(csv, line)) {
      ++number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
    }
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  };

  if (!next_line()) throw TableError("attribute table is empty");
  const auto header = split(line);
  AttributeTable table;
  std::vector<std::pair<std::size_t, std::string>> wanted;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "speed_kmh" || header[c] == "reputation") {
      if (table.columns.contains(header[c])) throw TableError(fmt::format("duplicate column '{}'", header[c]), number);
      wanted.emplace_back(c, header[c]);
      table.columns[header[c]];
    }
  }
  if (wanted.empty()) throw TableError("attribute table header names neither 'speed_kmh' nor 'reputation'", number);

  while (next_line()) {
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw TableError(fmt::format("expected {} fields, found {}", header.size(), cells.size()), number);
    }
    for (const auto& [c, name] : wanted) {
      const auto& s = cells[c];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw TableError(fmt::format("invalid {} value '{}'", name, s), number);
      }
      if (name == "speed_kmh" && !(v > 0.0)) throw TableError(fmt::format("speed must be positive, got {}", v), number);
      if (name == "reputation" && !(v >= 0.0 && v <= 1.0)) {
        throw TableError(fmt::format("reputation must be in [0,1], got {}", v), number);
      }
      table.columns[name].push_back(v);
    }
  }
  for (const auto& [name, values] : table.columns) {
    if (values.empty()) throw TableError(fmt::format("column '{}' has no rows", name));
  }
  return table;
}

AttributeTable load_attribute_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TableError(fmt::format("cannot open attribute table '{}'", path.string()));
  return parse_attribute_table(in);
}

}  // namespace osnrecruit
