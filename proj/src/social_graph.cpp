#include "osnrecruit/social_graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>
#include <unordered_set>

#include <fmt/format.h>

#include "osnrecruit/portfolio.hpp"

namespace osnrecruit {

GraphError::GraphError(const std::string& what, std::size_t line)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}", line, what) : what), line_(line) {}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(std::string_view s, std::size_t line, const char* what) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw GraphError(fmt::format("invalid {} '{}'", what, s), line);
  }
  return v;
}

/// Reads non-blank lines, returning (1-based line number, content without trailing CR).
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (number_ == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
      if (!trim(line).empty()) return true;
    }
    return false;
  }
  std::size_t number() const noexcept { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

}  // namespace

SocialGraph SocialGraph::build(std::vector<SocialNode> nodes, std::vector<FollowEdge> edges) {
  SocialGraph g;
  std::sort(nodes.begin(), nodes.end(), [](const SocialNode& a, const SocialNode& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i].id == nodes[i - 1].id) throw GraphError(fmt::format("duplicate node id '{}'", nodes[i].id.str()));
  }

  std::set<std::string> interest_set;
  std::set<std::string> location_set;
  for (auto& n : nodes) {
    if (n.id.empty()) throw GraphError("empty node id");
    std::sort(n.interests.begin(), n.interests.end());
    n.interests.erase(std::unique(n.interests.begin(), n.interests.end()), n.interests.end());
    if (n.interests.empty()) throw GraphError(fmt::format("node '{}' has no interests", n.id.str()));
    for (const auto& [label, count] : n.posts_per_interest) {
      if (!std::binary_search(n.interests.begin(), n.interests.end(), label)) {
        throw GraphError(fmt::format("node '{}' has posts for '{}' which is not among its interests", n.id.str(), label));
      }
      if (!(count >= 0.0) || !std::isfinite(count)) {
        throw GraphError(fmt::format("node '{}' has invalid post rate {} for '{}'", n.id.str(), count, label));
      }
    }
    interest_set.insert(n.interests.begin(), n.interests.end());
    location_set.insert(n.general_location);
  }
  g.interest_labels_.assign(interest_set.begin(), interest_set.end());
  g.location_labels_.assign(location_set.begin(), location_set.end());

  g.nodes_ = std::move(nodes);
  const std::size_t n = g.nodes_.size();
  g.index_.reserve(n);
  g.interest_offsets_.assign(1, 0);
  for (NodeIndex i = 0; i < n; ++i) {
    const auto& node = g.nodes_[i];
    g.index_.emplace(node.id, i);
    for (const auto& label : node.interests) {
      const auto it = std::lower_bound(g.interest_labels_.begin(), g.interest_labels_.end(), label);
      g.interest_code_list_.push_back(static_cast<std::uint32_t>(it - g.interest_labels_.begin()));
    }
    g.interest_offsets_.push_back(g.interest_code_list_.size());
    const auto lit = std::lower_bound(g.location_labels_.begin(), g.location_labels_.end(), node.general_location);
    g.node_location_.push_back(static_cast<std::uint32_t>(lit - g.location_labels_.begin()));
  }

  struct Resolved {
    NodeIndex follower;
    NodeIndex followee;
    std::optional<double> probability;
  };
  std::vector<Resolved> resolved;
  resolved.reserve(edges.size());
  for (const auto& e : edges) {
    const auto f = g.find(e.follower);
    const auto t = g.find(e.followee);
    if (!f) throw GraphError(fmt::format("edge references unknown node '{}'", e.follower.str()));
    if (!t) throw GraphError(fmt::format("edge references unknown node '{}'", e.followee.str()));
    if (*f == *t) throw GraphError(fmt::format("self-loop on node '{}'", e.follower.str()));
    if (e.probability && !(*e.probability >= 0.0 && *e.probability <= 1.0)) {
      throw GraphError(fmt::format("edge {}->{} probability {} outside [0,1]", e.follower.str(), e.followee.str(),
                                   *e.probability));
    }
    resolved.push_back({*f, *t, e.probability});
    if (e.probability) g.any_edge_probability_ = true;
  }

  // Followers grouped by followee; followees grouped by follower.
  std::sort(resolved.begin(), resolved.end(), [](const Resolved& a, const Resolved& b) {
    return std::tie(a.followee, a.follower) < std::tie(b.followee, b.follower);
  });
  for (std::size_t i = 1; i < resolved.size(); ++i) {
    if (resolved[i].follower == resolved[i - 1].follower && resolved[i].followee == resolved[i - 1].followee) {
      throw GraphError(fmt::format("duplicate edge {}->{}", g.nodes_[resolved[i].follower].id.str(),
                                   g.nodes_[resolved[i].followee].id.str()));
    }
  }
  g.follower_offsets_.assign(n + 1, 0);
  g.followee_offsets_.assign(n + 1, 0);
  for (const auto& r : resolved) {
    ++g.follower_offsets_[r.followee + 1];
    ++g.followee_offsets_[r.follower + 1];
  }
  std::partial_sum(g.follower_offsets_.begin(), g.follower_offsets_.end(), g.follower_offsets_.begin());
  std::partial_sum(g.followee_offsets_.begin(), g.followee_offsets_.end(), g.followee_offsets_.begin());
  g.follower_list_.reserve(resolved.size());
  g.follower_probability_.reserve(resolved.size());
  for (const auto& r : resolved) {
    g.follower_list_.push_back(r.follower);
    g.follower_probability_.push_back(r.probability);
  }
  std::sort(resolved.begin(), resolved.end(), [](const Resolved& a, const Resolved& b) {
    return std::tie(a.follower, a.followee) < std::tie(b.follower, b.followee);
  });
  g.followee_list_.reserve(resolved.size());
  for (const auto& r : resolved) g.followee_list_.push_back(r.followee);
  return g;
}

std::optional<NodeIndex> SocialGraph::find(const NodeId& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeIndex SocialGraph::index_of(const NodeId& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw std::out_of_range(fmt::format("unknown node id '{}'", id.str()));
  return it->second;
}

std::vector<NodeIndex> SocialGraph::indices_of(std::span<const NodeId> ids) const {
  std::vector<NodeIndex> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(index_of(id));
  return out;
}

std::span<const NodeIndex> SocialGraph::followers(NodeIndex v) const {
  return std::span<const NodeIndex>(follower_list_).subspan(follower_offsets_.at(v),
                                                            follower_offsets_[v + 1] - follower_offsets_[v]);
}

std::span<const NodeIndex> SocialGraph::followees(NodeIndex u) const {
  return std::span<const NodeIndex>(followee_list_).subspan(followee_offsets_.at(u),
                                                            followee_offsets_[u + 1] - followee_offsets_[u]);
}

std::span<const std::optional<double>> SocialGraph::follower_edge_probabilities(NodeIndex v) const {
  return std::span<const std::optional<double>>(follower_probability_)
      .subspan(follower_offsets_.at(v), follower_offsets_[v + 1] - follower_offsets_[v]);
}

std::optional<std::size_t> SocialGraph::interest_code(const std::string& label) const {
  const auto it = std::lower_bound(interest_labels_.begin(), interest_labels_.end(), label);
  if (it == interest_labels_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - interest_labels_.begin());
}

std::optional<std::size_t> SocialGraph::location_code(const std::string& label) const {
  const auto it = std::lower_bound(location_labels_.begin(), location_labels_.end(), label);
  if (it == location_labels_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - location_labels_.begin());
}

std::span<const std::uint32_t> SocialGraph::interest_codes(NodeIndex i) const {
  return std::span<const std::uint32_t>(interest_code_list_)
      .subspan(interest_offsets_.at(i), interest_offsets_[i + 1] - interest_offsets_[i]);
}

bool SocialGraph::has_interest(NodeIndex i, const std::string& label) const {
  const auto& in = nodes_.at(i).interests;
  return std::binary_search(in.begin(), in.end(), label);
}

std::vector<FollowEdge> SocialGraph::edges() const {
  std::vector<FollowEdge> out;
  out.reserve(edge_count());
  for (NodeIndex u = 0; u < size(); ++u) {
    for (const NodeIndex v : followees(u)) {
      const auto fs = followers(v);
      const auto pos = std::lower_bound(fs.begin(), fs.end(), u) - fs.begin();
      out.push_back({nodes_[u].id, nodes_[v].id, follower_probability_[follower_offsets_[v] + pos]});
    }
  }
  return out;
}

SocialGraph parse_graph(std::istream& nodes_csv, std::istream& edges_csv) {
  std::vector<SocialNode> nodes;
  std::unordered_set<NodeId> dropped;
  std::unordered_set<NodeId> seen;
  {
    LineReader reader(nodes_csv);
    std::string line;
    if (!reader.next(line) || trim(line) != "id,general_location,interests,posts") {
      throw GraphError("node file header must be 'id,general_location,interests,posts'", reader.number());
    }
    while (reader.next(line)) {
      const auto ln = reader.number();
      const auto fields = split(line, ',');
      if (fields.size() != 4) throw GraphError(fmt::format("expected 4 fields, found {}", fields.size()), ln);
      SocialNode node;
      node.id = NodeId(std::string(trim(fields[0])));
      if (node.id.empty()) throw GraphError("empty node id", ln);
      if (!seen.insert(node.id).second) throw GraphError(fmt::format("duplicate node id '{}'", node.id.str()), ln);
      node.general_location = std::string(trim(fields[1]));
      if (!trim(fields[2]).empty()) {
        for (const auto part : split(fields[2], ';')) {
          const auto label = trim(part);
          if (label.empty()) throw GraphError("empty interest label", ln);
          node.interests.emplace_back(label);
        }
      }
      if (!trim(fields[3]).empty()) {
        for (const auto part : split(fields[3], ';')) {
          const auto colon = part.rfind(':');
          if (colon == std::string_view::npos) throw GraphError(fmt::format("post entry '{}' is not label:count", part), ln);
          const std::string label(trim(part.substr(0, colon)));
          const double count = parse_real(part.substr(colon + 1), ln, "post count");
          if (count < 0.0) throw GraphError(fmt::format("negative post count for '{}'", label), ln);
          if (std::find(node.interests.begin(), node.interests.end(), label) == node.interests.end()) {
            throw GraphError(fmt::format("posts for '{}' which is not among the node's interests", label), ln);
          }
          if (!node.posts_per_interest.emplace(label, count).second) {
            throw GraphError(fmt::format("duplicate post entry for '{}'", label), ln);
          }
        }
      }
      if (node.interests.empty()) {
        dropped.insert(node.id);
        continue;
      }
      nodes.push_back(std::move(node));
    }
  }

  std::vector<FollowEdge> edges;
  {
    LineReader reader(edges_csv);
    std::string line;
    if (!reader.next(line)) throw GraphError("edge file is empty; expected header 'follower,followee'");
    const auto header = trim(line);
    bool with_probability = false;
    if (header == "follower,followee,probability") {
      with_probability = true;
    } else if (header != "follower,followee") {
      throw GraphError("edge file header must be 'follower,followee' (optionally ',probability')", reader.number());
    }
    std::set<std::pair<NodeId, NodeId>> edge_seen;
    while (reader.next(line)) {
      const auto ln = reader.number();
      const auto fields = split(line, ',');
      if (!(fields.size() == 2 || (with_probability && fields.size() == 3))) {
        throw GraphError(fmt::format("unexpected field count {}", fields.size()), ln);
      }
      FollowEdge e{NodeId(std::string(trim(fields[0]))), NodeId(std::string(trim(fields[1]))), std::nullopt};
      if (with_probability && fields.size() == 3 && !trim(fields[2]).empty()) {
        e.probability = parse_real(fields[2], ln, "edge probability");
        if (!(*e.probability >= 0.0 && *e.probability <= 1.0)) throw GraphError("edge probability outside [0,1]", ln);
      }
      for (const auto* id : {&e.follower, &e.followee}) {
        if (!seen.contains(*id)) throw GraphError(fmt::format("edge references unknown node '{}'", id->str()), ln);
      }
      if (e.follower == e.followee) throw GraphError(fmt::format("self-loop on node '{}'", e.follower.str()), ln);
      if (!edge_seen.emplace(e.follower, e.followee).second) {
        throw GraphError(fmt::format("duplicate edge {}->{}", e.follower.str(), e.followee.str()), ln);
      }
      if (dropped.contains(e.follower) || dropped.contains(e.followee)) continue;
      edges.push_back(std::move(e));
    }
  }
  return SocialGraph::build(std::move(nodes), std::move(edges));
}

SocialGraph load_graph(const std::filesystem::path& nodes_path, const std::filesystem::path& edges_path) {
  std::ifstream nodes(nodes_path);
  if (!nodes) throw GraphError(fmt::format("cannot open node file '{}'", nodes_path.string()));
  std::ifstream edges(edges_path);
  if (!edges) throw GraphError(fmt::format("cannot open edge file '{}'", edges_path.string()));
  return parse_graph(nodes, edges);
}

void write_graph(const SocialGraph& g, std::ostream& nodes_csv, std::ostream& edges_csv) {
  nodes_csv << "id,general_location,interests,posts\n";
  for (const auto& n : g.nodes()) {
    nodes_csv << n.id.str() << ',' << n.general_location << ',';
    for (std::size_t i = 0; i < n.interests.size(); ++i) nodes_csv << (i ? ";" : "") << n.interests[i];
    nodes_csv << ',';
    bool first = true;
    for (const auto& [label, count] : n.posts_per_interest) {
      nodes_csv << (first ? "" : ";") << label << ':' << fmt::format("{}", count);
      first = false;
    }
    nodes_csv << '\n';
  }
  const bool with_probability = g.has_edge_probabilities();
  edges_csv << (with_probability ? "follower,followee,probability\n" : "follower,followee\n");
  for (const auto& e : g.edges()) {
    edges_csv << e.follower.str() << ',' << e.followee.str();
    if (with_probability) {
      edges_csv << ',';
      if (e.probability) edges_csv << fmt::format("{}", *e.probability);
    }
    edges_csv << '\n';
  }
}

void save_graph(const SocialGraph& g, const std::filesystem::path& nodes_path,
                const std::filesystem::path& edges_path) {
  std::ofstream nodes(nodes_path, std::ios::binary);
  std::ofstream edges(edges_path, std::ios::binary);
  if (!nodes || !edges) throw GraphError("cannot open graph output files for writing");
  write_graph(g, nodes, edges);
  if (!nodes || !edges) throw GraphError("failed writing graph files");
}

std::size_t unique_followers(const SocialGraph& g, std::span<const NodeIndex> members) {
  std::vector<NodeIndex> all;
  for (const NodeIndex m : members) {
    const auto f = g.followers(m);
    all.insert(all.end(), f.begin(), f.end());
  }
  std::sort(all.begin(), all.end());
  return static_cast<std::size_t>(std::unique(all.begin(), all.end()) - all.begin());
}

std::size_t unique_followers(const SocialGraph& g, std::span<const NodeId> members) {
  const auto idx = g.indices_of(members);
  return unique_followers(g, std::span<const NodeIndex>(idx));
}

std::vector<NodeIndex> filter_candidate_indices(const SocialGraph& g, const AoiPartition& aoi,
                                                const TaskPortfolio& portfolio, std::size_t min_degree) {
  std::vector<NodeIndex> out;
  for (NodeIndex i = 0; i < g.size(); ++i) {
    const auto& node = g.node(i);
    if (!aoi.contains(node.general_location)) continue;
    if (g.in_degree(i) < min_degree) continue;
    const bool overlaps = std::any_of(node.interests.begin(), node.interests.end(),
                                      [&](const std::string& s) { return portfolio.contains(s); });
    if (overlaps) out.push_back(i);
  }
  return out;
}

std::vector<NodeId> filter_candidates(const SocialGraph& g, const AoiPartition& aoi, const TaskPortfolio& portfolio,
                                      std::size_t min_degree) {
  std::vector<NodeId> out;
  for (const auto i : filter_candidate_indices(g, aoi, portfolio, min_degree)) out.push_back(g.node(i).id);
  return out;
}

}  // namespace osnrecruit
