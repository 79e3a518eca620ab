#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osnrecruit/portfolio.hpp"
#include "osnrecruit/worker_pool.hpp"

namespace osnrecruit {

/// Recruitment systems compared in the experiments.
///  - IIWRS: pool from group-based IM, QoS ranking, substitution of refusals.
///  - GRS / DGRS: small fixed pool sampled from the registered pool, QoS
///    ranking, without / with substitution.
///  - SWRS / DSWRS: pool from greedy in-degree IM, in-degree ranking, without /
///    with substitution.
enum class RecruitMode { IIWRS, GRS, DGRS, SWRS, DSWRS };

inline constexpr RecruitMode kAllModes[] = {RecruitMode::IIWRS, RecruitMode::GRS, RecruitMode::DGRS,
                                            RecruitMode::SWRS, RecruitMode::DSWRS};

std::string to_string(RecruitMode mode);
RecruitMode parse_mode(const std::string& name);
bool substitutes_refusals(RecruitMode mode);
bool ranks_by_in_degree(RecruitMode mode);

struct RecruitConfig {
  std::size_t group_size = 10;
  double qos_min = 0.0;
  double acceptance_probability = 1.0;
  RecruitMode mode = RecruitMode::IIWRS;
  std::size_t grs_pool_size = 182;

  void validate() const;
};

/// Minutes needed to reach the task: great-circle distance over average speed.
double travel_time(const Worker& w, const Task& t);

/// 1 - clamp(log_tc(tr), 0, 1); 1 at tr = 0. Throws std::invalid_argument for tc <= 1.
double tau(double travel_min, double time_constraint_min);

/// Fourth root of the product of the four components.
double qos_from_components(double residual_energy, double interest_level, double tau, double reputation);

/// Per-pool maxima used to normalize the two interest-level terms. Taken over
/// workers whose interests include the task domain.
struct InterestNormalizer {
  double max_posts = 0.0;
  double max_interested_followees = 0.0;
};

InterestNormalizer interest_normalizer(const WorkerPool& pool, const Task& t);
/// Posts per unit time in the task domain.
double domain_posts(const WorkerPool& pool, const Worker& w, const Task& t);
/// Number of followees holding the task domain as an interest.
std::size_t interested_followees(const WorkerPool& pool, const Worker& w, const Task& t);
double interest_level(const Worker& w, const Task& t, const WorkerPool& pool, const InterestNormalizer& norm);
double interest_level(const Worker& w, const Task& t, const WorkerPool& pool);

double qos(const Worker& w, const Task& t, const WorkerPool& pool);

/// Domain match, travel time within the constraint, QoS at least qos_min and
/// reputation at least the task's minimum.
bool eligible(const Worker& w, const Task& t, const WorkerPool& pool, double qos_min);

/// Every recruitment quantity for one worker, under a frozen normalizer.
struct WorkerAssessment {
  std::size_t position = 0;  // index in the pool
  double travel_min = 0.0;
  double tau = 0.0;
  double interest_level = 0.0;
  double qos = 0.0;
  bool domain_match = false;
  bool eligible = false;
};

std::vector<WorkerAssessment> assess_pool(const WorkerPool& pool, const Task& t, double qos_min);

/// An entry of the offer list.
struct Candidate {
  NodeIndex node = 0;
  NodeId id;
  double qos = 0.0;
};

/// Eligible workers in offer order: QoS descending, or in-degree descending for
/// the SWRS family; ties by ascending NodeId.
std::vector<Candidate> rank_candidates(const WorkerPool& pool, const Task& t, const RecruitConfig& cfg);

struct RecruitmentResult {
  std::vector<std::optional<Candidate>> slots;  // size group_size
  /// Replacement offers made to slots that end up filled; slots left empty
  /// when the list runs out contribute nothing.
  std::size_t substitutions = 0;
  std::size_t offers = 0;
  /// Sum of filled QoS over group_size; empty slots count as 0.
  double average_qos = 0.0;
};

/// Decides whether an offered worker accepts.
using AcceptanceDecider = std::function<bool(const Candidate&)>;

/// Bernoulli(p) per worker, keyed by (seed, node): the same worker gives the
/// same answer wherever it is offered within one round.
AcceptanceDecider seeded_acceptance(double probability, std::uint64_t seed);
/// Replays a fixed accept/reject script in offer order; throws std::out_of_range when exhausted.
AcceptanceDecider scripted_acceptance(std::vector<bool> script);

/// Offers the first group_size candidates one slot each, in order. With
/// substitution, every refusal frees its slot and the next unoffered candidate
/// is offered the earliest free slot, until all slots are filled or the list
/// runs out. Without substitution, refused slots stay empty.
RecruitmentResult run_offers(std::span<const Candidate> ranked, std::size_t group_size, bool substitute,
                             const AcceptanceDecider& accept);

RecruitmentResult recruit(const WorkerPool& pool, const Task& t, const RecruitConfig& cfg,
                          const AcceptanceDecider& accept);
RecruitmentResult recruit_dynamic(const WorkerPool& pool, const Task& t, const RecruitConfig& cfg,
                                  std::uint64_t seed);

/// Pool a mode recruits from: the group-IM registered pool (IIWRS), a uniform
/// sample of grs_pool_size workers from it (GRS, DGRS), or the greedy-IM
/// registered pool (SWRS, DSWRS). Throws std::invalid_argument if
/// grs_pool_size exceeds the registered pool.
WorkerPool build_mode_pool(const WorkerPool& group_pool, const WorkerPool& greedy_pool, const RecruitConfig& cfg,
                           std::uint64_t seed);

}  // namespace osnrecruit
