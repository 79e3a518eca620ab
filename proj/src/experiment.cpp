#include "osnrecruit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <tuple>

#include <fmt/format.h>

#include "osnrecruit/seeding.hpp"

namespace osnrecruit {

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  // Shifted by the first sample so constant samples come out exact.
  const double shift = values.front();
  double total = 0.0;
  for (const double v : values) total += v - shift;
  const double offset = total / static_cast<double>(values.size());
  s.mean = shift + offset;
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - shift - offset) * (v - shift - offset);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::uint64_t repetition_seed(std::uint64_t master_seed, ExperimentKind kind, std::size_t size, std::size_t rep) {
  return derive_seed(master_seed, {label_key(to_string(kind)), size, rep});
}

namespace {

// Per-repetition samples keyed by (mode, acceptance bits, metric).
class Collector {
 public:
  void add(const std::string& mode, std::optional<double> acceptance, const std::string& metric, double value) {
    samples_[{mode, acceptance, metric}].push_back(value);
  }

  void flush(std::size_t size, std::size_t repetitions, std::vector<ResultRow>& out) {
    for (const auto& [key, values] : samples_) {
      const auto s = summarize(values);
      out.push_back({std::get<0>(key), size, std::get<1>(key), std::get<2>(key), s.mean, s.std, repetitions});
    }
    samples_.clear();
  }

 private:
  std::map<std::tuple<std::string, std::optional<double>, std::string>, std::vector<double>> samples_;
};

std::vector<NodeIndex> candidates_for(const ExperimentConfig& cfg, const SocialGraph& g) {
  return filter_candidate_indices(g, cfg.aoi, cfg.portfolio, cfg.min_degree);
}

std::uint64_t stage_seed(std::uint64_t seed, const char* stage) { return derive_seed(seed, {label_key(stage)}); }

}  // namespace

std::vector<ResultRow> run_im_comparison(const ExperimentConfig& cfg, const SocialGraph& g) {
  cfg.validate();
  const auto candidates = candidates_for(cfg, g);
  const GroupScorer by_rank(g, cfg.aoi, cfg.portfolio, GroupObjective::Rank);
  const GroupScorer by_followers(g, cfg.aoi, cfg.portfolio, GroupObjective::UniqueFollowers);
  std::vector<ResultRow> rows;
  Collector c;
  for (const auto k : cfg.influencer_sizes) {
    const auto greedy_u = greedy_select(by_followers, candidates, k);
    const auto greedy_r = greedy_select(by_rank, candidates, k);
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
      const auto seed = stage_seed(repetition_seed(cfg.master_seed, ExperimentKind::ImComparison, k, rep), "ga");
      const auto group_u = ga_select(by_followers, candidates, k, cfg.ga, seed);
      const auto group_r = ga_select(by_rank, candidates, k, cfg.ga, seed);
      c.add("group", std::nullopt, "U_g", static_cast<double>(group_u.unique_followers));
      c.add("group", std::nullopt, "R_g", group_r.rank);
      c.add("greedy", std::nullopt, "U_g", static_cast<double>(greedy_u.unique_followers));
      c.add("greedy", std::nullopt, "R_g", greedy_r.rank);
    }
    c.flush(k, cfg.repetitions, rows);
  }
  sort_rows(rows);
  return rows;
}

std::vector<ResultRow> run_interest_comparison(const ExperimentConfig& cfg, const SocialGraph& g) {
  cfg.validate();
  const auto candidates = candidates_for(cfg, g);
  const GroupScorer by_rank(g, cfg.aoi, cfg.portfolio, GroupObjective::Rank);
  const GroupScorer by_followers(g, cfg.aoi, cfg.portfolio, GroupObjective::UniqueFollowers);
  std::vector<ResultRow> rows;
  Collector c;
  for (const auto k : cfg.influencer_sizes) {
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
      const auto seed = repetition_seed(cfg.master_seed, ExperimentKind::InterestComparison, k, rep);
      const std::pair<const char*, const GroupScorer*> selectors[] = {{"rank", &by_rank},
                                                                      {"unique_followers", &by_followers}};
      for (const auto& [mode, scorer] : selectors) {
        const auto group = ga_select(*scorer, candidates, k, cfg.ga, stage_seed(seed, "ga"));
        const auto seeds = g.indices_of(group.members);
        const auto outcome = simulate_ic(g, seeds, cfg.diffusion, stage_seed(seed, "cascade"));
        c.add(mode, std::nullopt, "influence", static_cast<double>(outcome.active.size()));
        c.add(mode, std::nullopt, "interested_influence",
              static_cast<double>(interested_influence(g, outcome.active, cfg.portfolio)));
      }
    }
    c.flush(k, cfg.repetitions, rows);
  }
  sort_rows(rows);
  return rows;
}

RecruitmentPipeline run_recruitment_pipeline(const ExperimentConfig& cfg, const SocialGraph& g,
                                             std::span<const NodeIndex> candidates, std::size_t k,
                                             std::uint64_t seed) {
  const GroupScorer by_rank(g, cfg.aoi, cfg.portfolio, GroupObjective::Rank);
  const GroupScorer by_followers(g, cfg.aoi, cfg.portfolio, GroupObjective::UniqueFollowers);
  auto group = ga_select(by_rank, candidates, k, cfg.ga, stage_seed(seed, "ga"));
  auto greedy = greedy_select(by_followers, candidates, k);

  const auto cascade_seed = stage_seed(seed, "cascade");
  const auto registration_seed = stage_seed(seed, "registration");
  const auto group_active = simulate_ic(g, g.indices_of(group.members), cfg.diffusion, cascade_seed).active;
  const auto greedy_active = simulate_ic(g, g.indices_of(greedy.members), cfg.diffusion, cascade_seed).active;
  return RecruitmentPipeline{std::move(group), std::move(greedy),
                             register_workers(g, group_active, cfg.attributes, registration_seed),
                             register_workers(g, greedy_active, cfg.attributes, registration_seed), seed};
}

std::vector<RecruitmentResult> recruit_portfolio(const ExperimentConfig& cfg, const RecruitmentPipeline& pipeline,
                                                 RecruitMode mode, double acceptance_probability) {
  RecruitConfig rc = cfg.recruit;
  rc.mode = mode;
  rc.acceptance_probability = acceptance_probability;
  rc.validate();
  // Registered pools no larger than grs_pool_size are used whole.
  const bool sampled = mode == RecruitMode::GRS || mode == RecruitMode::DGRS;
  const auto pool = sampled && rc.grs_pool_size >= pipeline.group_pool.size()
                        ? pipeline.group_pool
                        : build_mode_pool(pipeline.group_pool, pipeline.greedy_pool, rc, stage_seed(pipeline.seed, "pool"));
  const auto& tasks = cfg.portfolio.tasks();
  std::vector<RecruitmentResult> results;
  results.reserve(tasks.size());
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto accept_seed =
        derive_seed(pipeline.seed, {label_key("acceptance"), real_key(acceptance_probability), t});
    results.push_back(recruit_dynamic(pool, tasks[t], rc, accept_seed));
  }
  return results;
}

double portfolio_average_qos(std::span<const RecruitmentResult> results) {
  if (results.empty()) return 0.0;
  double total = 0.0;
  for (const auto& r : results) total += r.average_qos;
  return total / static_cast<double>(results.size());
}

std::vector<ResultRow> run_full_comparison(const ExperimentConfig& cfg, const SocialGraph& g) {
  cfg.validate();
  const auto candidates = candidates_for(cfg, g);
  std::vector<ResultRow> rows;
  Collector c;
  for (const auto k : cfg.influencer_sizes) {
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
      const auto pipeline =
          run_recruitment_pipeline(cfg, g, candidates, k,
                                   repetition_seed(cfg.master_seed, ExperimentKind::FullComparison, k, rep));
      for (const double a : cfg.acceptance_grid) {
        for (const auto mode : kAllModes) {
          const auto results = recruit_portfolio(cfg, pipeline, mode, a);
          c.add(to_string(mode), a, "avg_qos", portfolio_average_qos(results));
        }
      }
    }
    c.flush(k, cfg.repetitions, rows);
  }
  sort_rows(rows);
  return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, const SocialGraph& g) {
  switch (cfg.kind) {
    case ExperimentKind::ImComparison: return run_im_comparison(cfg, g);
    case ExperimentKind::InterestComparison: return run_interest_comparison(cfg, g);
    case ExperimentKind::FullComparison: break;
  }
  return run_full_comparison(cfg, g);
}

void sort_rows(std::vector<ResultRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.mode, a.influencer_size, a.acceptance_probability, a.metric) <
           std::tie(b.mode, b.influencer_size, b.acceptance_probability, b.metric);
  });
}

void write_csv(std::ostream& out, std::span<const ResultRow> rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{},{},{}\n", r.mode, r.influencer_size,
                       r.acceptance_probability ? fmt::format("{}", *r.acceptance_probability) : std::string{},
                       r.metric, r.mean, r.std, r.repetitions);
  }
}

}  // namespace osnrecruit
