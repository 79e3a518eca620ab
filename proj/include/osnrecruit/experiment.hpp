#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osnrecruit/config.hpp"

namespace osnrecruit {

inline constexpr const char* kCsvHeader = "mode,influencer_size,acceptance_probability,metric,mean,std,repetitions";

struct ResultRow {
  std::string mode;
  std::size_t influencer_size = 0;
  std::optional<double> acceptance_probability;  // empty for the IM and interest comparisons
  std::string metric;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single repetition
  std::size_t repetitions = 0;
};

struct Summary {
  double mean = 0.0;
  double std = 0.0;
};

Summary summarize(std::span<const double> values);

/// Seed of repetition `rep` in the cell (experiment, size).
std::uint64_t repetition_seed(std::uint64_t master_seed, ExperimentKind kind, std::size_t size, std::size_t rep);

/// Group (GA) and individual (greedy) selection per influencer size: U_g from
/// the unique-followers objective, R_g from the rank objective.
std::vector<ResultRow> run_im_comparison(const ExperimentConfig& cfg, const SocialGraph& g);

/// Influence and interested influence of one cascade from the rank-selected
/// and the unique-followers-selected group, per repetition.
std::vector<ResultRow> run_interest_comparison(const ExperimentConfig& cfg, const SocialGraph& g);

/// Everything one repetition of the recruitment comparison shares across modes
/// and acceptance probabilities.
struct RecruitmentPipeline {
  InfluencerGroup group;   // GA, rank objective
  InfluencerGroup greedy;  // greedy, unique-followers objective
  WorkerPool group_pool;
  WorkerPool greedy_pool;
  std::uint64_t seed = 0;
};

/// Select both groups, run one cascade from each with the same stream and
/// register the active nodes. Throws InfeasibleSelection when no feasible group exists.
RecruitmentPipeline run_recruitment_pipeline(const ExperimentConfig& cfg, const SocialGraph& g,
                                             std::span<const NodeIndex> candidates, std::size_t k,
                                             std::uint64_t seed);

/// Recruitment results for every portfolio task in one mode. GRS and DGRS use
/// the whole registered pool when it is no larger than grs_pool_size.
std::vector<RecruitmentResult> recruit_portfolio(const ExperimentConfig& cfg, const RecruitmentPipeline& pipeline,
                                                 RecruitMode mode, double acceptance_probability);

/// Mean average_qos over the portfolio tasks.
double portfolio_average_qos(std::span<const RecruitmentResult> results);

/// avg_qos per mode, acceptance probability and influencer size.
std::vector<ResultRow> run_full_comparison(const ExperimentConfig& cfg, const SocialGraph& g);

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, const SocialGraph& g);

/// Orders rows by (mode, size, acceptance, metric).
void sort_rows(std::vector<ResultRow>& rows);
void write_csv(std::ostream& out, std::span<const ResultRow> rows);

}  // namespace osnrecruit
