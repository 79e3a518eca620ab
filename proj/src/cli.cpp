#include "osnrecruit/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "osnrecruit/config.hpp"
#include "osnrecruit/experiment.hpp"
#include "osnrecruit/seeding.hpp"

namespace osnrecruit {

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;

  std::string nodes_out;
  std::string edges_out;

  std::optional<std::size_t> k;
  std::string method = "group";
  std::optional<std::string> objective;
  std::vector<std::string> seeds;
  std::optional<std::size_t> runs;
  std::optional<std::string> mode;
  std::optional<double> acceptance;
  std::optional<std::string> kind;
  std::optional<std::string> output;
};

ExperimentConfig load(const Options& o) {
  auto cfg = load_config(o.config_path);
  if (o.seed) cfg.master_seed = *o.seed;
  return cfg;
}

std::string join(const std::vector<NodeId>& ids) {
  std::string s;
  for (const auto& id : ids) {
    if (!s.empty()) s += ',';
    s += id.str();
  }
  return s;
}

std::size_t group_size(const Options& o, const ExperimentConfig& cfg) { return o.k.value_or(cfg.influencer_sizes.front()); }

InfluencerGroup select(const Options& o, const ExperimentConfig& cfg, const SocialGraph& g, GroupObjective objective) {
  const auto candidates = filter_candidate_indices(g, cfg.aoi, cfg.portfolio, cfg.min_degree);
  const GroupScorer scorer(g, cfg.aoi, cfg.portfolio, objective);
  const auto k = group_size(o, cfg);
  if (o.method == "greedy") return greedy_select(scorer, candidates, k);
  if (o.method == "exhaustive") return exhaustive_select(scorer, candidates, k);
  return ga_select(scorer, candidates, k, cfg.ga, derive_seed(cfg.master_seed, {label_key("im")}));
}

int cmd_gen(const Options& o, std::ostream& out) {
  const auto cfg = load(o);
  const auto g = build_graph(cfg);
  save_graph(g, o.nodes_out, o.edges_out);
  out << fmt::format("wrote {} nodes to {} and {} edges to {}\n", g.size(), o.nodes_out, g.edge_count(), o.edges_out);
  return 0;
}

int cmd_im(const Options& o, std::ostream& out) {
  const auto cfg = load(o);
  const auto g = build_graph(cfg);
  const auto objective = o.objective ? parse_objective(*o.objective) : cfg.im_objective;
  const auto group = select(o, cfg, g, objective);
  out << fmt::format("method: {}\nobjective: {}\nmembers: {}\n", o.method, to_string(objective), join(group.members));
  out << fmt::format("D: {}\nI: {}\nU: {}\nR: {}\nfeasible: {}\n", group.distribution, group.interest,
                     group.unique_followers, group.rank, group.feasible);
  return 0;
}

int cmd_diffuse(const Options& o, std::ostream& out) {
  const auto cfg = load(o);
  const auto g = build_graph(cfg);
  std::vector<NodeId> members;
  if (!o.seeds.empty()) {
    for (const auto& s : o.seeds) members.emplace_back(s);
  } else {
    members = select(o, cfg, g, o.objective ? parse_objective(*o.objective) : cfg.im_objective).members;
  }
  auto dc = cfg.diffusion;
  if (o.runs) dc.runs = *o.runs;
  dc.validate();
  const auto seeds = g.indices_of(members);
  const auto base = derive_seed(cfg.master_seed, {label_key("diffuse")});
  std::vector<double> sizes;
  std::vector<double> interested;
  for (std::size_t i = 0; i < dc.runs; ++i) {
    const auto outcome = simulate_ic(g, seeds, dc, derive_seed(base, {i}));
    sizes.push_back(static_cast<double>(outcome.active.size()));
    interested.push_back(static_cast<double>(interested_influence(g, outcome.active, cfg.portfolio)));
  }
  const auto s = summarize(sizes);
  const auto si = summarize(interested);
  out << fmt::format("seeds: {}\nruns: {}\ninfluence_mean: {}\ninfluence_std: {}\n", join(members), dc.runs, s.mean,
                     s.std);
  out << fmt::format("interested_influence_mean: {}\ninterested_influence_std: {}\n", si.mean, si.std);
  return 0;
}

int cmd_recruit(const Options& o, std::ostream& out) {
  const auto cfg = load(o);
  const auto g = build_graph(cfg);
  const auto mode = o.mode ? parse_mode(*o.mode) : cfg.recruit.mode;
  const double acceptance = o.acceptance.value_or(cfg.recruit.acceptance_probability);
  const auto candidates = filter_candidate_indices(g, cfg.aoi, cfg.portfolio, cfg.min_degree);
  const auto pipeline =
      run_recruitment_pipeline(cfg, g, candidates, group_size(o, cfg), derive_seed(cfg.master_seed, {label_key("recruit")}));
  const auto results = recruit_portfolio(cfg, pipeline, mode, acceptance);
  out << fmt::format("mode: {}\nacceptance_probability: {}\ninfluencers: {}\n", to_string(mode), acceptance,
                     join(pipeline.group.members));
  out << fmt::format("registered_workers: {}\n", pipeline.group_pool.size());
  for (std::size_t t = 0; t < results.size(); ++t) {
    const auto& r = results[t];
    out << fmt::format("task {} ({}): offers={} substitutions={} average_qos={}\n", t,
                       cfg.portfolio.tasks()[t].domain(), r.offers, r.substitutions, r.average_qos);
    for (std::size_t s = 0; s < r.slots.size(); ++s) {
      if (r.slots[s]) {
        out << fmt::format("  slot {}: {} qos={}\n", s, r.slots[s]->id.str(), r.slots[s]->qos);
      } else {
        out << fmt::format("  slot {}: unfilled\n", s);
      }
    }
  }
  out << fmt::format("avg_qos: {}\n", portfolio_average_qos(results));
  return 0;
}

int cmd_experiment(const Options& o, std::ostream& out) {
  auto cfg = load(o);
  if (o.kind) cfg.kind = parse_kind(*o.kind);
  if (o.output) cfg.output_path = *o.output;
  const auto g = build_graph(cfg);
  const auto rows = run_experiment(cfg, g);
  std::ofstream file(cfg.output_path, std::ios::binary);
  if (!file) throw std::runtime_error(fmt::format("cannot write '{}'", cfg.output_path.string()));
  write_csv(file, rows);
  out << fmt::format("wrote {} rows to {}\n", rows.size(), cfg.output_path.string());
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Influencer selection and worker recruitment simulator", "osnrecruit"};
  app.require_subcommand(1);
  app.add_option("--config", o.config_path, "YAML configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "Override the configured master seed");

  auto* gen = app.add_subcommand("gen", "Write the configured graph as node and edge CSV files");
  gen->add_option("--nodes", o.nodes_out, "Node CSV output path")->required();
  gen->add_option("--edges", o.edges_out, "Edge CSV output path")->required();

  auto add_selection = [&](CLI::App* sub) {
    sub->add_option("--k", o.k, "Influencer group size (default: first experiment size)")->check(CLI::PositiveNumber);
    sub->add_option("--method", o.method, "Selection method")
        ->check(CLI::IsMember({"group", "greedy", "exhaustive"}));
    sub->add_option("--objective", o.objective, "Group objective")
        ->check(CLI::IsMember({"rank", "unique_followers"}));
  };
  auto* im = app.add_subcommand("im", "Select influencers and print the group scores");
  add_selection(im);

  auto* diffuse = app.add_subcommand("diffuse", "Estimate the spread of a seed group");
  add_selection(diffuse);
  diffuse->add_option("--seeds", o.seeds, "Explicit seed node ids (overrides selection)")->delimiter(',');
  diffuse->add_option("--runs", o.runs, "Number of cascades")->check(CLI::PositiveNumber);

  auto* recruit = app.add_subcommand("recruit", "Run one recruitment round per task");
  recruit->add_option("--k", o.k, "Influencer group size (default: first experiment size)")
      ->check(CLI::PositiveNumber);
  recruit->add_option("--mode", o.mode, "Recruitment mode")
      ->check(CLI::IsMember({"IIWRS", "GRS", "DGRS", "SWRS", "DSWRS"}));
  recruit->add_option("--acceptance", o.acceptance, "Acceptance probability")->check(CLI::Range(0.0, 1.0));

  auto* experiment = app.add_subcommand("experiment", "Run a comparison and write its CSV");
  experiment->add_option("--kind", o.kind, "Comparison to run")
      ->check(CLI::IsMember({"im_comparison", "interest_comparison", "full_comparison"}));
  experiment->add_option("--output", o.output, "CSV output path");

  try {
    app.parse(argc, argv);
    if (o.config_path.empty()) throw CLI::RequiredError("--config");
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << '\n' << app.help();
    return 1;
  }

  try {
    if (gen->parsed()) return cmd_gen(o, out);
    if (im->parsed()) return cmd_im(o, out);
    if (diffuse->parsed()) return cmd_diffuse(o, out);
    if (recruit->parsed()) return cmd_recruit(o, out);
    return cmd_experiment(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace osnrecruit
