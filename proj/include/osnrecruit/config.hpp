#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "osnrecruit/diffusion.hpp"
#include "osnrecruit/group_metrics.hpp"
#include "osnrecruit/influence_max.hpp"
#include "osnrecruit/portfolio.hpp"
#include "osnrecruit/recruitment.hpp"
#include "osnrecruit/social_graph.hpp"
#include "osnrecruit/synthetic.hpp"
#include "osnrecruit/worker_pool.hpp"

namespace osnrecruit {

/// Raised for malformed or inconsistent configuration documents.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GraphSource { Synthetic, Files, InterestAdversarial };

struct GraphSpec {
  GraphSource source = GraphSource::Synthetic;
  SynthConfig synthetic;
  InterestAdversarialConfig adversarial;
  std::filesystem::path nodes_path;
  std::filesystem::path edges_path;
  /// Generator seed; derived from the master seed when unset.
  std::optional<std::uint64_t> seed;
};

enum class ExperimentKind { ImComparison, InterestComparison, FullComparison };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_kind(const std::string& name);

struct ExperimentConfig {
  ExperimentConfig(AoiPartition aoi_, TaskPortfolio portfolio_)
      : aoi(std::move(aoi_)), portfolio(std::move(portfolio_)) {}

  GraphSpec graph;
  AoiPartition aoi;
  TaskPortfolio portfolio;
  std::size_t min_degree = 1;
  GaConfig ga;
  DiffusionConfig diffusion;
  RecruitConfig recruit;
  AttributeModel attributes;
  GroupObjective im_objective = GroupObjective::Rank;

  ExperimentKind kind = ExperimentKind::FullComparison;
  std::vector<std::size_t> influencer_sizes{10};
  std::vector<double> acceptance_grid{1.0};
  std::size_t repetitions = 100;
  std::uint64_t master_seed = 0;
  std::filesystem::path output_path = "results.csv";

  /// Throws ConfigError on empty grids, zero repetitions or invalid sections.
  void validate() const;
};

/// Parses a YAML document. Relative paths resolve against base_dir.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Graph named by the config; synthetic graphs use `graph.seed` or a seed derived from master_seed.
SocialGraph build_graph(const ExperimentConfig& cfg);

}  // namespace osnrecruit
