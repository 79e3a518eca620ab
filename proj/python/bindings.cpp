#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "osnrecruit/cli.hpp"
#include "osnrecruit/experiment.hpp"
#include "osnrecruit/geo.hpp"

namespace py = pybind11;
using namespace osnrecruit;

namespace {

std::vector<NodeId> to_ids(const std::vector<std::string>& names) {
  return {names.begin(), names.end()};
}

std::vector<std::string> to_names(const std::vector<NodeId>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(id.str());
  return out;
}

std::vector<std::string> names_of(const SocialGraph& g, std::span<const NodeIndex> idx) {
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (const auto i : idx) out.push_back(g.node(i).id.str());
  return out;
}

AoiPartition make_aoi(const std::vector<std::pair<std::string, double>>& subareas) {
  std::vector<AoiPartition::Subarea> out;
  for (const auto& [label, weight] : subareas) out.push_back({label, weight});
  return AoiPartition(std::move(out));
}

py::dict row_dict(const ResultRow& r) {
  py::dict d;
  d["mode"] = r.mode;
  d["influencer_size"] = r.influencer_size;
  d["acceptance_probability"] = r.acceptance_probability;
  d["metric"] = r.metric;
  d["mean"] = r.mean;
  d["std"] = r.std;
  d["repetitions"] = r.repetitions;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Influencer selection, diffusion and worker recruitment";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InfeasibleSelection>(m, "InfeasibleSelection", PyExc_RuntimeError);

  py::enum_<GroupObjective>(m, "GroupObjective")
      .value("RANK", GroupObjective::Rank)
      .value("UNIQUE_FOLLOWERS", GroupObjective::UniqueFollowers);

  py::enum_<RecruitMode>(m, "RecruitMode")
      .value("IIWRS", RecruitMode::IIWRS)
      .value("GRS", RecruitMode::GRS)
      .value("DGRS", RecruitMode::DGRS)
      .value("SWRS", RecruitMode::SWRS)
      .value("DSWRS", RecruitMode::DSWRS);

  py::class_<LatLon>(m, "LatLon")
      .def(py::init<double, double>(), py::arg("lat"), py::arg("lon"))
      .def_readwrite("lat", &LatLon::lat)
      .def_readwrite("lon", &LatLon::lon);

  py::class_<AoiPartition>(m, "AoiPartition")
      .def(py::init(&make_aoi), py::arg("subareas"))
      .def_static("uniform", &AoiPartition::uniform)
      .def("__len__", &AoiPartition::size)
      .def_property_readonly("subareas", [](const AoiPartition& a) {
        std::vector<std::pair<std::string, double>> out;
        for (const auto& s : a.subareas()) out.emplace_back(s.label, s.weight);
        return out;
      });

  py::class_<Task>(m, "Task")
      .def(py::init<LatLon, double, double, std::string>(), py::arg("location"), py::arg("time_constraint_min"),
           py::arg("min_reputation"), py::arg("domain"))
      .def_property_readonly("location", &Task::location)
      .def_property_readonly("time_constraint_min", &Task::time_constraint_min)
      .def_property_readonly("min_reputation", &Task::min_reputation)
      .def_property_readonly("domain", &Task::domain);

  py::class_<TaskPortfolio>(m, "TaskPortfolio")
      .def_static("with_uniform_weights", &TaskPortfolio::with_uniform_weights, py::arg("tasks"))
      .def_property_readonly("tasks", &TaskPortfolio::tasks)
      .def_property_readonly("interests", [](const TaskPortfolio& p) {
        std::vector<std::pair<std::string, double>> out;
        for (const auto& w : p.interests()) out.emplace_back(w.label, w.weight);
        return out;
      });

  py::class_<SocialGraph>(m, "SocialGraph")
      .def("__len__", &SocialGraph::size)
      .def_property_readonly("edge_count", &SocialGraph::edge_count)
      .def_property_readonly("ids", [](const SocialGraph& g) {
        std::vector<std::string> out;
        for (const auto& n : g.nodes()) out.push_back(n.id.str());
        return out;
      })
      .def("followers", [](const SocialGraph& g, const std::string& id) {
        return names_of(g, g.followers(g.index_of(NodeId(id))));
      })
      .def("followees", [](const SocialGraph& g, const std::string& id) {
        return names_of(g, g.followees(g.index_of(NodeId(id))));
      })
      .def("interests", [](const SocialGraph& g, const std::string& id) { return g.node(g.index_of(NodeId(id))).interests; })
      .def("location", [](const SocialGraph& g, const std::string& id) {
        return g.node(g.index_of(NodeId(id))).general_location;
      });

  m.def("load_graph", &load_graph, py::arg("nodes_path"), py::arg("edges_path"));

  py::class_<InfluencerGroup>(m, "InfluencerGroup")
      .def_property_readonly("members", [](const InfluencerGroup& g) { return to_names(g.members); })
      .def_readonly("distribution", &InfluencerGroup::distribution)
      .def_readonly("interest", &InfluencerGroup::interest)
      .def_readonly("unique_followers", &InfluencerGroup::unique_followers)
      .def_readonly("rank", &InfluencerGroup::rank)
      .def_readonly("feasible", &InfluencerGroup::feasible);

  m.def("unique_followers",
        [](const SocialGraph& g, const std::vector<std::string>& members) {
          const auto ids = to_ids(members);
          return unique_followers(g, std::span<const NodeId>(ids));
        },
        py::arg("graph"), py::arg("members"));
  m.def("score_group",
        [](const SocialGraph& g, const std::vector<std::string>& members, const AoiPartition& aoi,
           const TaskPortfolio& portfolio) { return score_group(g, to_ids(members), aoi, portfolio); },
        py::arg("graph"), py::arg("members"), py::arg("aoi"), py::arg("portfolio"));
  m.def("rank", &rank, py::arg("distribution"), py::arg("interest"), py::arg("unique_followers"));

  py::class_<GaConfig>(m, "GaConfig")
      .def(py::init<>())
      .def_readwrite("population_size", &GaConfig::population_size)
      .def_readwrite("max_generations", &GaConfig::max_generations)
      .def_readwrite("convergence_window", &GaConfig::convergence_window)
      .def_readwrite("crossover_rate", &GaConfig::crossover_rate)
      .def_readwrite("mutation_rate", &GaConfig::mutation_rate)
      .def_readwrite("elitism_count", &GaConfig::elitism_count);

  m.def("ga_select",
        [](const SocialGraph& g, const std::vector<std::string>& candidates, std::size_t k, const AoiPartition& aoi,
           const TaskPortfolio& portfolio, const GaConfig& cfg, std::uint64_t seed, GroupObjective objective) {
          const auto ids = to_ids(candidates);
          return ga_select(g, ids, k, aoi, portfolio, cfg, seed, objective);
        },
        py::arg("graph"), py::arg("candidates"), py::arg("k"), py::arg("aoi"), py::arg("portfolio"),
        py::arg("config") = GaConfig{}, py::arg("seed") = 0, py::arg("objective") = GroupObjective::Rank);
  m.def("greedy_select",
        [](const SocialGraph& g, const std::vector<std::string>& candidates, std::size_t k, const AoiPartition& aoi,
           const TaskPortfolio& portfolio, GroupObjective objective) {
          const auto ids = to_ids(candidates);
          return greedy_select(g, ids, k, aoi, portfolio, objective);
        },
        py::arg("graph"), py::arg("candidates"), py::arg("k"), py::arg("aoi"), py::arg("portfolio"),
        py::arg("objective") = GroupObjective::Rank);
  m.def("exhaustive_select",
        [](const SocialGraph& g, const std::vector<std::string>& candidates, std::size_t k, const AoiPartition& aoi,
           const TaskPortfolio& portfolio, GroupObjective objective) {
          const auto ids = to_ids(candidates);
          return exhaustive_select(g, ids, k, aoi, portfolio, objective);
        },
        py::arg("graph"), py::arg("candidates"), py::arg("k"), py::arg("aoi"), py::arg("portfolio"),
        py::arg("objective") = GroupObjective::Rank);

  m.def("simulate_ic",
        [](const SocialGraph& g, const std::vector<std::string>& seeds, double p, std::uint64_t seed) {
          DiffusionConfig cfg;
          cfg.activation_probability = p;
          const auto ids = to_ids(seeds);
          return names_of(g, simulate_ic(g, std::span<const NodeId>(ids), cfg, seed).active);
        },
        py::arg("graph"), py::arg("seeds"), py::arg("p"), py::arg("seed") = 0);
  m.def("estimate_influence",
        [](const SocialGraph& g, const std::vector<std::string>& seeds, double p, std::size_t runs, std::uint64_t seed) {
          DiffusionConfig cfg;
          cfg.activation_probability = p;
          cfg.runs = runs;
          const auto ids = to_ids(seeds);
          return estimate_influence(g, std::span<const NodeId>(ids), cfg, seed).mean;
        },
        py::arg("graph"), py::arg("seeds"), py::arg("p"), py::arg("runs") = 100, py::arg("seed") = 0);

  m.def("haversine_km", &haversine_km, py::arg("a"), py::arg("b"));
  m.def("tau", &tau, py::arg("travel_min"), py::arg("time_constraint_min"));
  m.def("qos_from_components", &qos_from_components, py::arg("residual_energy"), py::arg("interest_level"),
        py::arg("tau"), py::arg("reputation"));
  m.def("run_offers",
        [](const std::vector<double>& ranked_qos, std::size_t group_size, bool substitute, std::vector<bool> script) {
          std::vector<Candidate> ranked;
          for (std::size_t i = 0; i < ranked_qos.size(); ++i) {
            ranked.push_back({static_cast<NodeIndex>(i), NodeId(std::to_string(i)), ranked_qos[i]});
          }
          const auto r = run_offers(ranked, group_size, substitute, scripted_acceptance(std::move(script)));
          py::dict d;
          std::vector<std::optional<double>> slots;
          for (const auto& s : r.slots) slots.push_back(s ? std::optional<double>(s->qos) : std::nullopt);
          d["slots"] = slots;
          d["substitutions"] = r.substitutions;
          d["offers"] = r.offers;
          d["average_qos"] = r.average_qos;
          return d;
        },
        py::arg("ranked_qos"), py::arg("group_size"), py::arg("substitute"), py::arg("script"),
        "Replay the offer process over a QoS-ranked list with scripted accept/refuse answers.");

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_property_readonly("kind", [](const ExperimentConfig& c) { return to_string(c.kind); })
      .def_readwrite("repetitions", &ExperimentConfig::repetitions)
      .def_readwrite("master_seed", &ExperimentConfig::master_seed)
      .def_readwrite("influencer_sizes", &ExperimentConfig::influencer_sizes)
      .def_readwrite("acceptance_grid", &ExperimentConfig::acceptance_grid)
      .def_readonly("aoi", &ExperimentConfig::aoi)
      .def_readonly("portfolio", &ExperimentConfig::portfolio);

  m.def("load_config", &load_config, py::arg("path"));
  m.def("parse_config", &parse_config, py::arg("text"), py::arg("base_dir") = std::filesystem::path{});
  m.def("build_graph", &build_graph, py::arg("config"));
  m.def("run_experiment",
        [](const ExperimentConfig& cfg, const SocialGraph& g) {
          py::list out;
          for (const auto& r : run_experiment(cfg, g)) out.append(row_dict(r));
          return out;
        },
        py::arg("config"), py::arg("graph"));
  m.def("experiment_csv",
        [](const ExperimentConfig& cfg, const SocialGraph& g) {
          std::ostringstream os;
          write_csv(os, run_experiment(cfg, g));
          return os.str();
        },
        py::arg("config"), py::arg("graph"));
  m.attr("CSV_HEADER") = kCsvHeader;

  m.def("main",
        [](const std::vector<std::string>& args) {
          std::vector<const char*> argv{"osnrecruit"};
          for (const auto& a : args) argv.push_back(a.c_str());
          std::ostringstream out;
          std::ostringstream err;
          const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line interface in process; returns (exit_code, stdout, stderr).");
}
