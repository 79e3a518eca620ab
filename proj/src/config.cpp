#include "osnrecruit/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "osnrecruit/seeding.hpp"

namespace osnrecruit {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::ImComparison: return "im_comparison";
    case ExperimentKind::InterestComparison: return "interest_comparison";
    case ExperimentKind::FullComparison: return "full_comparison";
  }
  return "?";
}

ExperimentKind parse_kind(const std::string& name) {
  for (const auto k : {ExperimentKind::ImComparison, ExperimentKind::InterestComparison,
                       ExperimentKind::FullComparison}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError(fmt::format("unknown experiment kind '{}'", name));
}

void ExperimentConfig::validate() const {
  if (influencer_sizes.empty()) throw ConfigError("experiment.influencer_sizes must not be empty");
  if (std::find(influencer_sizes.begin(), influencer_sizes.end(), 0u) != influencer_sizes.end()) {
    throw ConfigError("experiment.influencer_sizes must be positive");
  }
  if (acceptance_grid.empty()) throw ConfigError("experiment.acceptance_grid must not be empty");
  for (const double a : acceptance_grid) {
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError(fmt::format("acceptance probability {} outside [0,1]", a));
  }
  if (repetitions == 0) throw ConfigError("experiment.repetitions must be at least 1");
  try {
    ga.validate();
    diffusion.validate();
    recruit.validate();
    attributes.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

namespace {

std::string where(const YAML::Node& n) {
  const auto m = n.Mark();
  return m.is_null() ? std::string{} : fmt::format(" (line {})", m.line + 1);
}

void check_keys(const YAML::Node& n, const std::string& ctx, std::initializer_list<const char*> allowed) {
  if (!n.IsMap()) throw ConfigError(fmt::format("'{}' must be a mapping{}", ctx, where(n)));
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(fmt::format("unknown key '{}' in '{}'{}", key, ctx, where(kv.first)));
    }
  }
}

template <class T>
T as(const YAML::Node& n, const std::string& ctx) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(fmt::format("invalid value for '{}'{}", ctx, where(n)));
  }
}

template <class T>
void read(const YAML::Node& parent, const char* key, const std::string& ctx, T& out) {
  if (const auto n = parent[key]) {
    if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
      const auto v = as<long long>(n, ctx + "." + key);
      if (v < 0) throw ConfigError(fmt::format("'{}.{}' must be non-negative{}", ctx, key, where(n)));
      out = static_cast<T>(v);
    } else {
      out = as<T>(n, ctx + "." + key);
    }
  }
}

template <class T>
std::vector<T> read_list(const YAML::Node& n, const std::string& ctx) {
  if (!n.IsSequence()) throw ConfigError(fmt::format("'{}' must be a list{}", ctx, where(n)));
  std::vector<T> out;
  for (const auto& item : n) {
    if constexpr (std::is_unsigned_v<T>) {
      const auto v = as<long long>(item, ctx);
      if (v < 0) throw ConfigError(fmt::format("'{}' entries must be non-negative{}", ctx, where(item)));
      out.push_back(static_cast<T>(v));
    } else {
      out.push_back(as<T>(item, ctx));
    }
  }
  return out;
}

Distribution read_distribution(const YAML::Node& n, const std::string& ctx) {
  check_keys(n, ctx, {"kind", "value", "low", "high", "mean", "values"});
  const auto kind = n["kind"] ? as<std::string>(n["kind"], ctx + ".kind") : std::string{};
  auto need = [&](const char* key) {
    if (!n[key]) throw ConfigError(fmt::format("'{}' of kind {} needs '{}'{}", ctx, kind, key, where(n)));
    return as<double>(n[key], ctx + "." + key);
  };
  try {
    if (kind == "constant") return Distribution::constant(need("value"));
    if (kind == "uniform") return Distribution::uniform(need("low"), need("high"));
    if (kind == "exponential") return Distribution::exponential(need("mean"));
    if (kind == "empirical") {
      if (!n["values"]) throw ConfigError(fmt::format("'{}' of kind empirical needs 'values'{}", ctx, where(n)));
      return Distribution::empirical(read_list<double>(n["values"], ctx + ".values"));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("'{}': {}{}", ctx, e.what(), where(n)));
  }
  throw ConfigError(fmt::format("'{}.kind' must be constant, uniform, exponential or empirical{}", ctx, where(n)));
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

GraphSpec read_graph(const YAML::Node& n, const std::filesystem::path& base) {
  GraphSpec spec;
  if (!n) return spec;
  check_keys(n, "graph",
             {"source", "seed", "nodes", "edges", "node_count", "edge_count", "edge_model", "interests",
              "interest_weights", "subareas", "subarea_weights", "max_interests_per_node", "post_rate",
              "interest_homophily", "portfolio_interests", "off_topic_interest", "subarea", "hub_count",
              "hub_followers", "community_count", "community_followers"});
  const auto source = n["source"] ? as<std::string>(n["source"], "graph.source") : std::string("synthetic");
  if (source == "synthetic") {
    spec.source = GraphSource::Synthetic;
  } else if (source == "files") {
    spec.source = GraphSource::Files;
  } else if (source == "interest_adversarial") {
    spec.source = GraphSource::InterestAdversarial;
  } else {
    throw ConfigError(fmt::format("graph.source must be synthetic, files or interest_adversarial{}", where(n["source"])));
  }
  if (n["seed"]) spec.seed = as<std::uint64_t>(n["seed"], "graph.seed");

  auto& s = spec.synthetic;
  read(n, "node_count", "graph", s.node_count);
  read(n, "edge_count", "graph", s.edge_count);
  if (n["edge_model"]) {
    const auto m = as<std::string>(n["edge_model"], "graph.edge_model");
    if (m == "preferential_attachment") {
      s.edge_model = EdgeModel::PreferentialAttachment;
    } else if (m == "uniform_random") {
      s.edge_model = EdgeModel::UniformRandom;
    } else {
      throw ConfigError(fmt::format("graph.edge_model must be preferential_attachment or uniform_random{}",
                                    where(n["edge_model"])));
    }
  }
  if (n["interests"]) s.interests = read_list<std::string>(n["interests"], "graph.interests");
  if (n["interest_weights"]) s.interest_weights = read_list<double>(n["interest_weights"], "graph.interest_weights");
  if (n["subareas"]) s.subareas = read_list<std::string>(n["subareas"], "graph.subareas");
  if (n["subarea_weights"]) s.subarea_weights = read_list<double>(n["subarea_weights"], "graph.subarea_weights");
  read(n, "max_interests_per_node", "graph", s.max_interests_per_node);
  if (n["post_rate"]) {
    s.post_rate = read_distribution(n["post_rate"], "graph.post_rate");
    spec.adversarial.post_rate = s.post_rate;
  }
  read(n, "interest_homophily", "graph", s.interest_homophily);

  auto& a = spec.adversarial;
  if (n["portfolio_interests"]) {
    a.portfolio_interests = read_list<std::string>(n["portfolio_interests"], "graph.portfolio_interests");
  }
  read(n, "off_topic_interest", "graph", a.off_topic_interest);
  read(n, "subarea", "graph", a.subarea);
  read(n, "hub_count", "graph", a.hub_count);
  read(n, "hub_followers", "graph", a.hub_followers);
  read(n, "community_count", "graph", a.community_count);
  read(n, "community_followers", "graph", a.community_followers);

  if (spec.source == GraphSource::Files) {
    if (!n["nodes"] || !n["edges"]) throw ConfigError("graph.source files needs 'nodes' and 'edges' paths");
    spec.nodes_path = resolve(base, as<std::string>(n["nodes"], "graph.nodes"));
    spec.edges_path = resolve(base, as<std::string>(n["edges"], "graph.edges"));
  }
  return spec;
}

struct SubareaEntry {
  std::string label;
  SubareaGeometry geometry;
};

std::vector<SubareaEntry> read_subareas(const YAML::Node& n) {
  if (!n) throw ConfigError("missing 'subareas' list");
  if (!n.IsSequence() || n.size() == 0) throw ConfigError(fmt::format("'subareas' must be a non-empty list{}", where(n)));
  std::vector<SubareaEntry> out;
  for (const auto& item : n) {
    check_keys(item, "subareas[]", {"label", "lat", "lon", "radius_km"});
    if (!item["label"] || !item["lat"] || !item["lon"]) {
      throw ConfigError(fmt::format("each subarea needs label, lat and lon{}", where(item)));
    }
    SubareaEntry e;
    e.label = as<std::string>(item["label"], "subareas[].label");
    e.geometry.center = {as<double>(item["lat"], "subareas[].lat"), as<double>(item["lon"], "subareas[].lon")};
    read(item, "radius_km", "subareas[]", e.geometry.radius_km);
    if (std::any_of(out.begin(), out.end(), [&](const SubareaEntry& o) { return o.label == e.label; })) {
      throw ConfigError(fmt::format("duplicate subarea '{}'{}", e.label, where(item)));
    }
    out.push_back(std::move(e));
  }
  return out;
}

AoiPartition read_aoi(const YAML::Node& n, const std::vector<SubareaEntry>& subareas) {
  auto known = [&](const std::string& label) {
    return std::any_of(subareas.begin(), subareas.end(), [&](const SubareaEntry& e) { return e.label == label; });
  };
  try {
    if (!n) {
      std::vector<std::string> labels;
      for (const auto& e : subareas) labels.push_back(e.label);
      return AoiPartition::uniform(labels);
    }
    if (n.IsSequence()) {
      const auto labels = read_list<std::string>(n, "aoi");
      for (const auto& l : labels) {
        if (!known(l)) throw ConfigError(fmt::format("aoi names unknown subarea '{}'", l));
      }
      return AoiPartition::uniform(labels);
    }
    if (!n.IsMap()) throw ConfigError(fmt::format("'aoi' must be a list of labels or a label: weight mapping{}", where(n)));
    std::vector<AoiPartition::Subarea> parts;
    for (const auto& kv : n) {
      const auto label = as<std::string>(kv.first, "aoi");
      if (!known(label)) throw ConfigError(fmt::format("aoi names unknown subarea '{}'{}", label, where(kv.first)));
      parts.push_back({label, as<double>(kv.second, "aoi." + label)});
    }
    return AoiPartition(std::move(parts));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("aoi: {}", e.what()));
  }
}

TaskPortfolio read_portfolio(const YAML::Node& tasks_node, const YAML::Node& weights_node) {
  if (!tasks_node || !tasks_node.IsSequence() || tasks_node.size() == 0) {
    throw ConfigError("'tasks' must be a non-empty list");
  }
  std::vector<Task> tasks;
  try {
    for (const auto& item : tasks_node) {
      check_keys(item, "tasks[]", {"lat", "lon", "time_constraint_min", "min_reputation", "domain"});
      if (!item["lat"] || !item["lon"] || !item["time_constraint_min"] || !item["domain"]) {
        throw ConfigError(fmt::format("each task needs lat, lon, time_constraint_min and domain{}", where(item)));
      }
      double min_rep = 0.0;
      read(item, "min_reputation", "tasks[]", min_rep);
      tasks.emplace_back(LatLon{as<double>(item["lat"], "tasks[].lat"), as<double>(item["lon"], "tasks[].lon")},
                         as<double>(item["time_constraint_min"], "tasks[].time_constraint_min"), min_rep,
                         as<std::string>(item["domain"], "tasks[].domain"));
    }
    if (!weights_node) return TaskPortfolio::with_uniform_weights(std::move(tasks));
    if (!weights_node.IsMap()) throw ConfigError("'portfolio_weights' must be a domain: weight mapping");
    std::vector<TaskPortfolio::InterestWeight> weights;
    for (const auto& kv : weights_node) {
      const auto label = as<std::string>(kv.first, "portfolio_weights");
      weights.push_back({label, as<double>(kv.second, "portfolio_weights." + label)});
    }
    return TaskPortfolio(std::move(tasks), std::move(weights));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("tasks: {}", e.what()));
  }
}

void read_ga(const YAML::Node& n, GaConfig& ga) {
  if (!n) return;
  check_keys(n, "ga", {"population_size", "max_generations", "convergence_window", "crossover_rate", "mutation_rate",
                       "elitism_count", "max_possible_score"});
  read(n, "population_size", "ga", ga.population_size);
  read(n, "max_generations", "ga", ga.max_generations);
  read(n, "convergence_window", "ga", ga.convergence_window);
  read(n, "crossover_rate", "ga", ga.crossover_rate);
  read(n, "mutation_rate", "ga", ga.mutation_rate);
  read(n, "elitism_count", "ga", ga.elitism_count);
  if (n["max_possible_score"]) ga.max_possible_score = as<double>(n["max_possible_score"], "ga.max_possible_score");
}

void read_diffusion(const YAML::Node& n, DiffusionConfig& d) {
  if (!n) return;
  check_keys(n, "diffusion", {"activation_probability", "runs", "use_edge_probabilities"});
  read(n, "activation_probability", "diffusion", d.activation_probability);
  read(n, "runs", "diffusion", d.runs);
  read(n, "use_edge_probabilities", "diffusion", d.use_edge_probabilities);
}

void read_recruit(const YAML::Node& n, RecruitConfig& r) {
  if (!n) return;
  check_keys(n, "recruit", {"group_size", "qos_min", "acceptance_probability", "mode", "grs_pool_size"});
  read(n, "group_size", "recruit", r.group_size);
  read(n, "qos_min", "recruit", r.qos_min);
  read(n, "acceptance_probability", "recruit", r.acceptance_probability);
  read(n, "grs_pool_size", "recruit", r.grs_pool_size);
  if (n["mode"]) {
    try {
      r.mode = parse_mode(as<std::string>(n["mode"], "recruit.mode"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(fmt::format("recruit.mode: {}{}", e.what(), where(n["mode"])));
    }
  }
}

void read_registration(const YAML::Node& n, const std::filesystem::path& base, AttributeModel& m) {
  if (!n) return;
  check_keys(n, "registration", {"speed_kmh", "residual_energy", "reputation", "attribute_table"});
  if (n["speed_kmh"]) m.speed_kmh = read_distribution(n["speed_kmh"], "registration.speed_kmh");
  if (n["residual_energy"]) m.residual_energy = read_distribution(n["residual_energy"], "registration.residual_energy");
  if (n["reputation"]) m.reputation = read_distribution(n["reputation"], "registration.reputation");
  if (n["attribute_table"]) {
    const auto path = resolve(base, as<std::string>(n["attribute_table"], "registration.attribute_table"));
    try {
      const auto table = load_attribute_table(path);
      if (table.has("speed_kmh")) m.speed_kmh = table.distribution("speed_kmh");
      if (table.has("reputation")) m.reputation = table.distribution("reputation");
    } catch (const TableError& e) {
      throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    }
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("config is not valid YAML: {}", e.what()));
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping");
  try {
    check_keys(root, "<root>",
               {"master_seed", "graph", "subareas", "aoi", "tasks", "portfolio_weights", "filter", "ga", "diffusion",
                "recruit", "registration", "im", "experiment"});

    const auto subareas = read_subareas(root["subareas"]);
    ExperimentConfig cfg(read_aoi(root["aoi"], subareas), read_portfolio(root["tasks"], root["portfolio_weights"]));
    for (const auto& e : subareas) cfg.attributes.geometry[e.label] = e.geometry;

    read(root, "master_seed", "<root>", cfg.master_seed);
    cfg.graph = read_graph(root["graph"], base_dir);
    if (const auto f = root["filter"]) {
      check_keys(f, "filter", {"min_degree"});
      read(f, "min_degree", "filter", cfg.min_degree);
    }
    read_ga(root["ga"], cfg.ga);
    read_diffusion(root["diffusion"], cfg.diffusion);
    read_recruit(root["recruit"], cfg.recruit);
    read_registration(root["registration"], base_dir, cfg.attributes);
    if (const auto im = root["im"]) {
      check_keys(im, "im", {"objective"});
      if (im["objective"]) {
        try {
          cfg.im_objective = parse_objective(as<std::string>(im["objective"], "im.objective"));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(fmt::format("im.objective: {}", e.what()));
        }
      }
    }
    if (const auto ex = root["experiment"]) {
      check_keys(ex, "experiment", {"kind", "influencer_sizes", "acceptance_grid", "repetitions", "output"});
      if (ex["kind"]) cfg.kind = parse_kind(as<std::string>(ex["kind"], "experiment.kind"));
      if (ex["influencer_sizes"]) {
        cfg.influencer_sizes = read_list<std::size_t>(ex["influencer_sizes"], "experiment.influencer_sizes");
      }
      if (ex["acceptance_grid"]) {
        cfg.acceptance_grid = read_list<double>(ex["acceptance_grid"], "experiment.acceptance_grid");
      }
      read(ex, "repetitions", "experiment", cfg.repetitions);
      if (ex["output"]) cfg.output_path = resolve(base_dir, as<std::string>(ex["output"], "experiment.output"));
    }
    cfg.validate();
    return cfg;
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("config: {}", e.what()));
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

SocialGraph build_graph(const ExperimentConfig& cfg) {
  const std::uint64_t seed = cfg.graph.seed.value_or(derive_seed(cfg.master_seed, {label_key("graph")}));
  switch (cfg.graph.source) {
    case GraphSource::Files:
      return load_graph(cfg.graph.nodes_path, cfg.graph.edges_path);
    case GraphSource::InterestAdversarial:
      return generate_interest_adversarial(cfg.graph.adversarial, seed);
    case GraphSource::Synthetic:
      break;
  }
  return generate_synthetic(cfg.graph.synthetic, seed);
}

}  // namespace osnrecruit
