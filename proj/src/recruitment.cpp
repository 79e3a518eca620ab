#include "osnrecruit/recruitment.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "osnrecruit/geo.hpp"
#include "osnrecruit/seeding.hpp"

namespace osnrecruit {

std::string to_string(RecruitMode mode) {
  switch (mode) {
    case RecruitMode::IIWRS: return "IIWRS";
    case RecruitMode::GRS: return "GRS";
    case RecruitMode::DGRS: return "DGRS";
    case RecruitMode::SWRS: return "SWRS";
    case RecruitMode::DSWRS: return "DSWRS";
  }
  return "?";
}

RecruitMode parse_mode(const std::string& name) {
  for (const auto m : kAllModes) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument(fmt::format("unknown recruitment mode '{}'", name));
}

bool substitutes_refusals(RecruitMode mode) {
  return mode == RecruitMode::IIWRS || mode == RecruitMode::DGRS || mode == RecruitMode::DSWRS;
}

bool ranks_by_in_degree(RecruitMode mode) { return mode == RecruitMode::SWRS || mode == RecruitMode::DSWRS; }

void RecruitConfig::validate() const {
  if (group_size == 0) throw std::invalid_argument("recruit: group_size must be positive");
  if (!(qos_min >= 0.0 && qos_min <= 1.0)) throw std::invalid_argument("recruit: qos_min must be in [0,1]");
  if (!(acceptance_probability >= 0.0 && acceptance_probability <= 1.0)) {
    throw std::invalid_argument("recruit: acceptance_probability must be in [0,1]");
  }
  if (grs_pool_size == 0) throw std::invalid_argument("recruit: grs_pool_size must be positive");
}

double travel_time(const Worker& w, const Task& t) {
  if (!(w.avg_speed_kmh > 0.0)) throw std::invalid_argument("travel_time: worker speed must be positive");
  return haversine_km(w.gps, t.location()) / w.avg_speed_kmh * 60.0;
}

double tau(double travel_min, double time_constraint_min) {
  if (!(time_constraint_min > 1.0)) {
    throw std::invalid_argument(fmt::format("tau: time constraint must exceed 1, got {}", time_constraint_min));
  }
  if (!(travel_min > 0.0)) return 1.0;  // log -> -inf, clamped to 0
  const double l = std::log(travel_min) / std::log(time_constraint_min);
  return 1.0 - std::max(0.0, std::min(l, 1.0));
}

double qos_from_components(double residual_energy, double interest_level, double tau, double reputation) {
  return std::pow(residual_energy * interest_level * tau * reputation, 0.25);
}

double domain_posts(const WorkerPool& pool, const Worker& w, const Task& t) {
  const auto& posts = pool.social(w).posts_per_interest;
  const auto it = posts.find(t.domain());
  return it == posts.end() ? 0.0 : it->second;
}

std::size_t interested_followees(const WorkerPool& pool, const Worker& w, const Task& t) {
  const auto& g = pool.graph();
  const auto followees = g.followees(w.node);
  return static_cast<std::size_t>(
      std::count_if(followees.begin(), followees.end(), [&](NodeIndex v) { return g.has_interest(v, t.domain()); }));
}

InterestNormalizer interest_normalizer(const WorkerPool& pool, const Task& t) {
  InterestNormalizer n;
  for (const auto& w : pool.workers()) {
    if (!pool.graph().has_interest(w.node, t.domain())) continue;
    n.max_posts = std::max(n.max_posts, domain_posts(pool, w, t));
    n.max_interested_followees =
        std::max(n.max_interested_followees, static_cast<double>(interested_followees(pool, w, t)));
  }
  return n;
}

double interest_level(const Worker& w, const Task& t, const WorkerPool& pool, const InterestNormalizer& norm) {
  const double p = norm.max_posts > 0.0 ? std::min(domain_posts(pool, w, t) / norm.max_posts, 1.0) : 0.0;
  const double f = norm.max_interested_followees > 0.0
                       ? std::min(static_cast<double>(interested_followees(pool, w, t)) / norm.max_interested_followees, 1.0)
                       : 0.0;
  return (p + f) / 2.0;
}

double interest_level(const Worker& w, const Task& t, const WorkerPool& pool) {
  return interest_level(w, t, pool, interest_normalizer(pool, t));
}

namespace {

WorkerAssessment assess(const Worker& w, std::size_t position, const Task& t, const WorkerPool& pool,
                        const InterestNormalizer& norm, double qos_min) {
  WorkerAssessment a;
  a.position = position;
  a.travel_min = travel_time(w, t);
  a.tau = tau(a.travel_min, t.time_constraint_min());
  a.interest_level = interest_level(w, t, pool, norm);
  a.qos = qos_from_components(w.residual_energy, a.interest_level, a.tau, w.reputation);
  a.domain_match = pool.graph().has_interest(w.node, t.domain());
  a.eligible = a.domain_match && a.travel_min <= t.time_constraint_min() && a.qos >= qos_min &&
               w.reputation >= t.min_reputation();
  return a;
}

}  // namespace

double qos(const Worker& w, const Task& t, const WorkerPool& pool) {
  return assess(w, 0, t, pool, interest_normalizer(pool, t), 0.0).qos;
}

bool eligible(const Worker& w, const Task& t, const WorkerPool& pool, double qos_min) {
  return assess(w, 0, t, pool, interest_normalizer(pool, t), qos_min).eligible;
}

std::vector<WorkerAssessment> assess_pool(const WorkerPool& pool, const Task& t, double qos_min) {
  const auto norm = interest_normalizer(pool, t);
  std::vector<WorkerAssessment> out;
  out.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) out.push_back(assess(pool[i], i, t, pool, norm, qos_min));
  return out;
}

std::vector<Candidate> rank_candidates(const WorkerPool& pool, const Task& t, const RecruitConfig& cfg) {
  struct Keyed {
    Candidate c;
    double key;
  };
  std::vector<Keyed> keyed;
  const bool by_degree = ranks_by_in_degree(cfg.mode);
  for (const auto& a : assess_pool(pool, t, cfg.qos_min)) {
    if (!a.eligible) continue;
    const auto& w = pool[a.position];
    const double key = by_degree ? static_cast<double>(pool.graph().in_degree(w.node)) : a.qos;
    keyed.push_back({{w.node, w.id, a.qos}, key});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.key != b.key) return a.key > b.key;
    return a.c.node < b.c.node;
  });
  std::vector<Candidate> out;
  out.reserve(keyed.size());
  for (auto& k : keyed) out.push_back(std::move(k.c));
  return out;
}

AcceptanceDecider seeded_acceptance(double probability, std::uint64_t seed) {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw std::invalid_argument("acceptance probability must be in [0,1]");
  }
  return [probability, seed](const Candidate& c) {
    if (probability >= 1.0) return true;
    if (probability <= 0.0) return false;
    Rng rng(derive_seed(seed, {c.node}));
    return uniform01(rng) < probability;
  };
}

AcceptanceDecider scripted_acceptance(std::vector<bool> script) {
  auto state = std::make_shared<std::pair<std::vector<bool>, std::size_t>>(std::move(script), 0);
  return [state](const Candidate&) {
    auto& [s, next] = *state;
    if (next >= s.size()) throw std::out_of_range("acceptance script exhausted");
    return static_cast<bool>(s[next++]);
  };
}

RecruitmentResult run_offers(std::span<const Candidate> ranked, std::size_t group_size, bool substitute,
                             const AcceptanceDecider& accept) {
  if (group_size == 0) throw std::invalid_argument("group size must be positive");
  RecruitmentResult r;
  r.slots.assign(group_size, std::nullopt);
  std::deque<std::size_t> open;
  std::vector<std::size_t> substitute_offers(group_size, 0);
  std::size_t next_initial = 0;
  std::size_t filled = 0;
  for (const auto& c : ranked) {
    if (filled == group_size) break;
    std::size_t slot = 0;
    if (next_initial < group_size) {
      slot = next_initial++;
    } else if (substitute && !open.empty()) {
      slot = open.front();
      open.pop_front();
      ++substitute_offers[slot];
    } else {
      break;
    }
    ++r.offers;
    if (accept(c)) {
      r.slots[slot] = c;
      ++filled;
    } else {
      open.push_back(slot);
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < group_size; ++i) {
    if (!r.slots[i]) continue;
    total += r.slots[i]->qos;
    r.substitutions += substitute_offers[i];
  }
  r.average_qos = total / static_cast<double>(group_size);
  return r;
}

RecruitmentResult recruit(const WorkerPool& pool, const Task& t, const RecruitConfig& cfg,
                          const AcceptanceDecider& accept) {
  cfg.validate();
  const auto ranked = rank_candidates(pool, t, cfg);
  return run_offers(ranked, cfg.group_size, substitutes_refusals(cfg.mode), accept);
}

RecruitmentResult recruit_dynamic(const WorkerPool& pool, const Task& t, const RecruitConfig& cfg,
                                  std::uint64_t seed) {
  return recruit(pool, t, cfg, seeded_acceptance(cfg.acceptance_probability, seed));
}

WorkerPool build_mode_pool(const WorkerPool& group_pool, const WorkerPool& greedy_pool, const RecruitConfig& cfg,
                           std::uint64_t seed) {
  switch (cfg.mode) {
    case RecruitMode::IIWRS:
      return group_pool;
    case RecruitMode::SWRS:
    case RecruitMode::DSWRS:
      return greedy_pool;
    case RecruitMode::GRS:
    case RecruitMode::DGRS:
      break;
  }
  if (cfg.grs_pool_size > group_pool.size()) {
    throw std::invalid_argument(fmt::format("grs_pool_size {} exceeds the {} registered workers", cfg.grs_pool_size,
                                            group_pool.size()));
  }
  Rng rng(seed);
  std::vector<std::size_t> positions(group_pool.size());
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  for (std::size_t i = 0; i < cfg.grs_pool_size; ++i) {
    std::swap(positions[i], positions[i + uniform_below(rng, positions.size() - i)]);
  }
  positions.resize(cfg.grs_pool_size);
  return group_pool.subset(positions);
}

}  // namespace osnrecruit
