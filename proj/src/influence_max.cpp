#include "osnrecruit/influence_max.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "osnrecruit/seeding.hpp"

namespace osnrecruit {

void GaConfig::validate() const {
  if (population_size == 0) throw std::invalid_argument("ga: population_size must be positive");
  if (max_generations == 0) throw std::invalid_argument("ga: max_generations must be positive");
  if (convergence_window == 0) throw std::invalid_argument("ga: convergence_window must be positive");
  if (convergence_window > max_generations) {
    throw std::invalid_argument("ga: convergence_window must not exceed max_generations");
  }
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw std::invalid_argument("ga: crossover_rate must be in [0,1]");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw std::invalid_argument("ga: mutation_rate must be in [0,1]");
  if (elitism_count >= population_size) throw std::invalid_argument("ga: elitism_count must be below population_size");
  if (max_possible_score && !(*max_possible_score > 0.0)) {
    throw std::invalid_argument("ga: max_possible_score must be positive when set");
  }
}

__extension__ using Wide = unsigned __int128;

std::uint64_t combination_count(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Wide c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(c);
}

namespace {

std::vector<NodeIndex> sorted_candidates(std::span<const NodeIndex> candidates, std::size_t k) {
  std::vector<NodeIndex> c(candidates.begin(), candidates.end());
  std::sort(c.begin(), c.end());
  if (std::adjacent_find(c.begin(), c.end()) != c.end()) throw std::invalid_argument("candidate list has duplicates");
  if (k == 0) throw std::invalid_argument("group size k must be positive");
  if (k > c.size()) {
    throw std::invalid_argument(fmt::format("group size k={} exceeds the {} available candidates", k, c.size()));
  }
  return c;
}

/// Genes are positions into the sorted candidate list, kept sorted.
struct Individual {
  std::vector<std::uint32_t> genes;
  double fitness = 0.0;
  bool feasible = false;
};

/// Feasible first, then higher fitness, then lexicographically smaller genes.
bool better(const Individual& a, const Individual& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (a.fitness != b.fitness) return a.fitness > b.fitness;
  return a.genes < b.genes;
}

class GeneticSearch {
 public:
  GeneticSearch(const GroupScorer& scorer, std::vector<NodeIndex> candidates, std::size_t k, const GaConfig& cfg,
                std::uint64_t seed)
      : scorer_(scorer), candidates_(std::move(candidates)), k_(k), cfg_(cfg), rng_(seed) {
    if (scorer_.objective() == GroupObjective::Rank) {
      holders_.resize(scorer_.interest_count());
      for (std::uint32_t p = 0; p < candidates_.size(); ++p) {
        for (const auto slot : scorer_.portfolio_interests(candidates_[p])) holders_[slot].push_back(p);
      }
    }
  }

  Individual run(const std::vector<std::uint32_t>& greedy_genes, GaReport& report) {
    std::vector<Individual> population;
    population.reserve(cfg_.population_size);
    population.push_back(make(greedy_genes));
    while (population.size() < cfg_.population_size) population.push_back(make(random_genes()));

    Individual best = *std::min_element(population.begin(), population.end(), better);
    std::size_t generation = 0;
    std::size_t stale = 0;
    while (true) {
      if (cfg_.max_possible_score && best.feasible && best.fitness >= *cfg_.max_possible_score) {
        report.termination = GaTermination::MaxScoreReached;
        break;
      }
      if (generation >= cfg_.max_generations) {
        report.termination = GaTermination::MaxGenerations;
        break;
      }
      if (stale >= cfg_.convergence_window) {
        report.termination = GaTermination::Converged;
        break;
      }
      std::sort(population.begin(), population.end(), better);
      std::vector<Individual> next(population.begin(),
                                   population.begin() + static_cast<std::ptrdiff_t>(cfg_.elitism_count));
      while (next.size() < cfg_.population_size) {
        auto a = tournament(population).genes;
        auto b = tournament(population).genes;
        if (uniform01(rng_) < cfg_.crossover_rate) crossover(a, b);
        mutate(a);
        mutate(b);
        next.push_back(make(std::move(a)));
        if (next.size() < cfg_.population_size) next.push_back(make(std::move(b)));
      }
      population = std::move(next);
      ++generation;
      const auto& gen_best = *std::min_element(population.begin(), population.end(), better);
      if (better(gen_best, best)) {
        // Only a strictly higher score resets the convergence counter.
        const bool improved = gen_best.feasible != best.feasible || gen_best.fitness > best.fitness;
        best = gen_best;
        stale = improved ? 0 : stale + 1;
      } else {
        ++stale;
      }
    }
    report.generations = generation;
    report.evaluations = evaluations_;
    return best;
  }

  std::vector<NodeIndex> members(const std::vector<std::uint32_t>& genes) const {
    std::vector<NodeIndex> m;
    m.reserve(genes.size());
    for (const auto p : genes) m.push_back(candidates_[p]);
    return m;
  }

 private:
  Individual make(std::vector<std::uint32_t> genes) {
    repair(genes);
    std::sort(genes.begin(), genes.end());
    Individual ind;
    const auto m = members(genes);
    ind.feasible = scorer_.objective() != GroupObjective::Rank || scorer_.feasible(m);
    ind.fitness = scorer_.fitness(m);
    ind.genes = std::move(genes);
    ++evaluations_;
    return ind;
  }

  std::vector<std::uint32_t> random_genes() {
    std::vector<std::uint32_t> pool(candidates_.size());
    std::iota(pool.begin(), pool.end(), 0u);
    for (std::size_t i = 0; i < k_; ++i) {
      const auto j = i + uniform_below(rng_, pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k_);
    return pool;
  }

  bool contains(const std::vector<std::uint32_t>& genes, std::uint32_t p) const {
    return std::find(genes.begin(), genes.end(), p) != genes.end();
  }

  std::uint32_t random_unused(const std::vector<std::uint32_t>& genes) {
    while (true) {
      const auto p = static_cast<std::uint32_t>(uniform_below(rng_, candidates_.size()));
      if (!contains(genes, p)) return p;
    }
  }

  const Individual& tournament(const std::vector<Individual>& population) {
    const auto& a = population[uniform_below(rng_, population.size())];
    const auto& b = population[uniform_below(rng_, population.size())];
    return better(b, a) ? b : a;
  }

  void crossover(std::vector<std::uint32_t>& a, std::vector<std::uint32_t>& b) {
    for (std::size_t i = 0; i < k_; ++i) {
      if (uniform01(rng_) < 0.5) std::swap(a[i], b[i]);
    }
    dedupe(a);
    dedupe(b);
  }

  void dedupe(std::vector<std::uint32_t>& genes) {
    for (std::size_t i = 1; i < genes.size(); ++i) {
      if (std::find(genes.begin(), genes.begin() + static_cast<std::ptrdiff_t>(i), genes[i]) !=
          genes.begin() + static_cast<std::ptrdiff_t>(i)) {
        genes[i] = random_unused(genes);
      }
    }
  }

  void mutate(std::vector<std::uint32_t>& genes) {
    if (candidates_.size() == k_) return;
    for (std::size_t i = 0; i < genes.size(); ++i) {
      if (uniform01(rng_) < cfg_.mutation_rate) genes[i] = random_unused(genes);
    }
  }

  /// Swaps genes in to cover missing portfolio interests where a swap does not
  /// uncover another interest.
  void repair(std::vector<std::uint32_t>& genes) {
    if (scorer_.objective() != GroupObjective::Rank) return;
    const std::size_t ni = scorer_.interest_count();
    for (std::size_t pass = 0; pass < ni; ++pass) {
      std::vector<std::size_t> cover(ni, 0);
      for (const auto p : genes) {
        for (const auto slot : scorer_.portfolio_interests(candidates_[p])) ++cover[slot];
      }
      const auto missing = std::find(cover.begin(), cover.end(), 0u);
      if (missing == cover.end()) return;
      const auto slot = static_cast<std::size_t>(missing - cover.begin());
      const auto& holders = holders_[slot];
      if (holders.empty()) return;

      std::vector<std::size_t> removable;
      for (std::size_t i = 0; i < genes.size(); ++i) {
        const auto held = scorer_.portfolio_interests(candidates_[genes[i]]);
        if (std::all_of(held.begin(), held.end(), [&](std::uint32_t s) { return cover[s] > 1; })) {
          removable.push_back(i);
        }
      }
      if (removable.empty()) return;
      const auto incoming = holders[uniform_below(rng_, holders.size())];
      genes[removable[uniform_below(rng_, removable.size())]] = incoming;
    }
  }

  const GroupScorer& scorer_;
  std::vector<NodeIndex> candidates_;
  std::size_t k_;
  const GaConfig& cfg_;
  Rng rng_;
  std::vector<std::vector<std::uint32_t>> holders_;  // candidate positions holding each portfolio interest
  std::size_t evaluations_ = 0;
};

std::vector<std::uint32_t> greedy_positions(const GroupScorer& scorer, const std::vector<NodeIndex>& candidates,
                                            std::size_t k) {
  std::vector<std::uint32_t> chosen;
  std::vector<NodeIndex> current;
  std::vector<bool> used(candidates.size(), false);
  for (std::size_t step = 0; step < k; ++step) {
    const double base = current.empty() ? 0.0 : scorer.raw_fitness(current);
    std::optional<std::uint32_t> best;
    double best_gain = 0.0;
    current.push_back(0);
    for (std::uint32_t p = 0; p < candidates.size(); ++p) {
      if (used[p]) continue;
      current.back() = candidates[p];
      const double gain = scorer.raw_fitness(current) - base;
      if (!best || gain > best_gain) {
        best = p;
        best_gain = gain;
      }
    }
    current.back() = candidates[*best];
    used[*best] = true;
    chosen.push_back(*best);
  }
  return chosen;
}

}  // namespace

InfluencerGroup greedy_select(const GroupScorer& scorer, std::span<const NodeIndex> candidates, std::size_t k) {
  const auto c = sorted_candidates(candidates, k);
  std::vector<NodeIndex> members;
  for (const auto p : greedy_positions(scorer, c, k)) members.push_back(c[p]);
  return scorer.evaluate(members);
}

InfluencerGroup ga_select(const GroupScorer& scorer, std::span<const NodeIndex> candidates, std::size_t k,
                          const GaConfig& cfg, std::uint64_t seed, GaReport* report) {
  cfg.validate();
  auto c = sorted_candidates(candidates, k);
  GaReport local;
  GaReport& rep = report ? *report : local;
  rep = GaReport{};
  if (k == c.size()) {
    auto full = scorer.evaluate(c);
    rep.evaluations = 1;
    rep.termination = GaTermination::FullGroup;
    if (!full.feasible) throw InfeasibleSelection("the only possible group violates interest coverage", full);
    return full;
  }
  auto greedy = greedy_positions(scorer, c, k);
  GeneticSearch search(scorer, std::move(c), k, cfg, seed);
  const auto best = search.run(greedy, rep);
  auto group = scorer.evaluate(search.members(best.genes));
  if (!best.feasible) throw InfeasibleSelection("no group covering every portfolio interest was found", group);
  return group;
}

InfluencerGroup exhaustive_select(const GroupScorer& scorer, std::span<const NodeIndex> candidates, std::size_t k,
                                  std::uint64_t cap) {
  const auto c = sorted_candidates(candidates, k);
  const auto total = combination_count(c.size(), k);
  if (total > cap) {
    throw std::length_error(fmt::format("exhaustive search over C({}, {}) = {} groups exceeds the cap of {}", c.size(),
                                        k, total, cap));
  }
  std::vector<std::size_t> pos(k);
  std::iota(pos.begin(), pos.end(), 0u);
  std::vector<NodeIndex> members(k);
  std::optional<std::vector<NodeIndex>> best;
  double best_fitness = 0.0;
  std::vector<NodeIndex> first;
  while (true) {
    for (std::size_t i = 0; i < k; ++i) members[i] = c[pos[i]];
    if (first.empty()) first = members;
    const bool ok = scorer.objective() != GroupObjective::Rank || scorer.feasible(members);
    if (ok) {
      const double f = scorer.fitness(members);
      if (!best || f > best_fitness) {
        best = members;
        best_fitness = f;
      }
    }
    // Next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && pos[i - 1] == c.size() - k + (i - 1)) --i;
    if (i == 0) break;
    ++pos[i - 1];
    for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }
  if (!best) throw InfeasibleSelection("no group covering every portfolio interest exists", scorer.evaluate(first));
  return scorer.evaluate(*best);
}

InfluencerGroup ga_select(const SocialGraph& g, std::span<const NodeId> candidates, std::size_t k,
                          const AoiPartition& aoi, const TaskPortfolio& portfolio, const GaConfig& cfg,
                          std::uint64_t seed, GroupObjective objective) {
  const GroupScorer scorer(g, aoi, portfolio, objective);
  const auto idx = g.indices_of(candidates);
  return ga_select(scorer, idx, k, cfg, seed);
}

InfluencerGroup greedy_select(const SocialGraph& g, std::span<const NodeId> candidates, std::size_t k,
                              const AoiPartition& aoi, const TaskPortfolio& portfolio, GroupObjective objective) {
  const GroupScorer scorer(g, aoi, portfolio, objective);
  const auto idx = g.indices_of(candidates);
  return greedy_select(scorer, idx, k);
}

InfluencerGroup exhaustive_select(const SocialGraph& g, std::span<const NodeId> candidates, std::size_t k,
                                  const AoiPartition& aoi, const TaskPortfolio& portfolio, GroupObjective objective,
                                  std::uint64_t cap) {
  const GroupScorer scorer(g, aoi, portfolio, objective);
  const auto idx = g.indices_of(candidates);
  return exhaustive_select(scorer, idx, k, cap);
}

}  // namespace osnrecruit
