#include "goalinf/bench/dataset.hpp"

#include "goalinf/pddl/semantics.hpp"
#include "goalinf/planner/astar.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace goalinf::bench {

using json = nlohmann::json;
namespace fs = std::filesystem;

void DatasetSpec::validate() const
{
    if (domain.empty())
        throw std::invalid_argument("dataset domain is empty");
    const auto names = domains::bundle_names();
    if (std::find(names.begin(), names.end(), domain) == names.end())
        throw domains::UnknownDomainError("unknown domain bundle: " + domain);
    if (!optimal)
        agent.validate();
}

std::string provenance(const DatasetSpec& spec, planner::HeuristicKind h)
{
    std::ostringstream os;
    if (spec.optimal) {
        os << "optimal(h=" << planner::to_string(h) << ")";
    } else {
        os << "agent(r=" << spec.agent.r << ",q=" << spec.agent.q << ",gamma=" << spec.agent.gamma
           << ",h=" << planner::to_string(h) << ")";
    }
    return os.str();
}

namespace {

json agent_json(const agent::AgentParams& a)
{
    return {{"r", a.r}, {"q", a.q}, {"gamma", a.gamma}};
}

}  // namespace

Dataset generate_dataset(const DatasetSpec& spec, const fs::path& out_dir, const fs::path& data_dir)
{
    spec.validate();
    const auto bundle = domains::load_bundle(spec.domain, data_dir);
    const auto hk = spec.heuristic.value_or(bundle.default_heuristic);

    std::vector<fs::path> files;
    if (spec.problems.empty())
        files = bundle.problem_files;
    else
        for (const auto& stem : spec.problems)
            files.push_back(bundle.find(stem));
    if (files.empty() && spec.n > 0)
        throw std::invalid_argument("no problems to draw trajectories from");

    struct Loaded
    {
        std::unique_ptr<pddl::Problem> pb;
        planner::HeuristicPtr h;
    };
    std::vector<Loaded> problems;
    for (const auto& f : files) {
        Loaded l;
        l.pb = std::make_unique<pddl::Problem>(bundle.load_problem(f));
        l.h = planner::make_heuristic(hk, *l.pb);
        problems.push_back(std::move(l));
    }

    Dataset ds;
    ds.spec = spec;
    ds.spec.heuristic = hk;
    ds.dir = out_dir;
    fs::create_directories(out_dir);

    agent::AgentParams ap = spec.agent;
    ap.heuristic = hk;
    for (std::size_t i = 0; i < spec.n; ++i) {
        const std::size_t g = i % bundle.goal_count;
        const std::size_t pi = (i / bundle.goal_count) % problems.size();
        const auto& pb = *problems[pi].pb;
        const auto& h = *problems[pi].h;
        const auto& goal = pb.goals()[g];

        DatasetEntry e;
        e.problem = files[pi].stem().string();
        e.goal = goal.label;
        e.seed = derive_seed(spec.seed, i);

        auto best = planner::astar(pb, pb.initial_state(), goal, h);
        if (!best.stats.found_goal) {
            ds.warnings.push_back("skipping " + e.problem + "/" + e.goal + ": goal unreachable");
            std::cerr << "warning: " << ds.warnings.back() << "\n";
            continue;
        }
        e.optimal_steps = best.plan.steps.size();

        Trajectory tr;
        if (spec.optimal) {
            std::vector<pddl::GroundAction> acts;
            for (const auto& st : best.plan.steps)
                acts.push_back(st.action);
            tr = replay(pb, acts);
        } else {
            Rng rng(e.seed);
            const std::size_t t_max = spec.t_max ? spec.t_max : 3 * e.optimal_steps + 10;
            auto trace = agent::simulate(pb, h, g, ap, t_max, rng);
            tr.states = std::move(trace.states);
            tr.actions = std::move(trace.actions);
        }
        tr.domain = spec.domain;
        tr.problem = e.problem;
        tr.goal = e.goal;
        tr.provenance = provenance(spec, hk);
        tr.seed = e.seed;
        e.length = tr.length();
        e.steps = tr.actions.size();
        e.reached = pddl::satisfies(pb, tr.states.back(), goal);

        char name[32];
        std::snprintf(name, sizeof name, "traj-%03zu.jsonl", i);
        e.file = name;
        write_trajectory(out_dir / e.file, pb, tr);
        ds.entries.push_back(std::move(e));
    }

    json m = {{"domain", spec.domain},
              {"n", spec.n},
              {"split", spec.optimal ? "optimal" : "suboptimal"},
              {"seed", spec.seed},
              {"heuristic", planner::to_string(hk)},
              {"agent", agent_json(spec.agent)},
              {"t_max", spec.t_max},
              {"problems", spec.problems},
              {"provenance", provenance(spec, hk)},
              {"warnings", ds.warnings}};
    m["trajectories"] = json::array();
    for (const auto& e : ds.entries)
        m["trajectories"].push_back({{"file", e.file},
                                     {"problem", e.problem},
                                     {"goal", e.goal},
                                     {"seed", e.seed},
                                     {"length", e.length},
                                     {"steps", e.steps},
                                     {"optimal_steps", e.optimal_steps},
                                     {"reached", e.reached}});
    std::ofstream os(out_dir / "manifest.json", std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot write " + (out_dir / "manifest.json").string());
    os << m.dump(2) << "\n";
    return ds;
}

Dataset load_dataset(const fs::path& dir)
{
    std::ifstream is(dir / "manifest.json");
    if (!is)
        throw std::runtime_error("no dataset manifest in " + dir.string());
    json m = json::parse(is);
    Dataset ds;
    ds.dir = dir;
    ds.spec.domain = m.at("domain").get<std::string>();
    ds.spec.n = m.at("n").get<std::size_t>();
    ds.spec.optimal = m.at("split").get<std::string>() == "optimal";
    ds.spec.seed = m.at("seed").get<std::uint64_t>();
    ds.spec.heuristic = planner::parse_heuristic_kind(m.at("heuristic").get<std::string>());
    ds.spec.agent.r = m.at("agent").at("r").get<int>();
    ds.spec.agent.q = m.at("agent").at("q").get<double>();
    ds.spec.agent.gamma = m.at("agent").at("gamma").get<double>();
    ds.spec.t_max = m.value("t_max", std::size_t{0});
    ds.spec.problems = m.value("problems", std::vector<std::string>{});
    ds.warnings = m.value("warnings", std::vector<std::string>{});
    for (const auto& t : m.at("trajectories")) {
        DatasetEntry e;
        e.file = t.at("file").get<std::string>();
        e.problem = t.at("problem").get<std::string>();
        e.goal = t.at("goal").get<std::string>();
        e.seed = t.at("seed").get<std::uint64_t>();
        e.length = t.at("length").get<std::size_t>();
        e.steps = t.value("steps", e.length ? e.length - 1 : 0);
        e.optimal_steps = t.value("optimal_steps", std::size_t{0});
        e.reached = t.value("reached", true);
        ds.entries.push_back(std::move(e));
    }
    return ds;
}

}  // namespace goalinf::bench
