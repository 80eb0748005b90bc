#include "goalinf/agent/agent.hpp"
#include "goalinf/bench/config.hpp"
#include "goalinf/bench/dataset.hpp"
#include "goalinf/bench/experiment.hpp"
#include "goalinf/bench/trajectory.hpp"
#include "goalinf/domains/bundle.hpp"
#include "goalinf/pddl/parser.hpp"
#include "goalinf/pddl/semantics.hpp"
#include "goalinf/planner/astar.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace goalinf;

namespace {

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct Target
{
    std::string domain;  // bundle name, or the domain file path
    std::string stem;    // problem stem, or the problem file path
    std::shared_ptr<const pddl::Problem> problem;
    planner::HeuristicKind default_heuristic = planner::HeuristicKind::HAdd;
};

bool is_bundle(const std::string& name)
{
    const auto names = domains::bundle_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

/// `domain` is a bundle name or a domain file; `problem` a stem or a file.
Target load_target(const std::string& domain, const std::string& problem, const fs::path& data_dir)
{
    Target t;
    t.domain = domain;
    if (is_bundle(domain)) {
        auto b = domains::load_bundle(domain, data_dir);
        const fs::path file = fs::is_regular_file(problem) ? fs::path(problem) : b.find(problem);
        t.stem = file.stem().string();
        t.problem = std::make_shared<const pddl::Problem>(b.load_problem(file));
        t.default_heuristic = b.default_heuristic;
        return t;
    }
    if (!fs::is_regular_file(domain))
        throw domains::UnknownDomainError("no bundle or domain file named " + domain);
    auto d = std::make_shared<const pddl::Domain>(pddl::parse_domain(pddl::read_file(domain)));
    t.stem = problem;
    t.problem = std::make_shared<const pddl::Problem>(pddl::parse_problem(pddl::read_file(problem), d));
    return t;
}

planner::HeuristicKind heuristic_or(const std::string& name, planner::HeuristicKind fallback)
{
    if (name.empty())
        return fallback;
    auto h = planner::parse_heuristic_kind(name);
    if (!h)
        throw bench::ConfigError("unknown heuristic " + name);
    return *h;
}

std::size_t goal_index(const pddl::Problem& pb, long index)
{
    if (index < 0 || static_cast<std::size_t>(index) >= pb.goals().size())
        throw bench::ConfigError("goal index out of range (problem has " + std::to_string(pb.goals().size()) +
                                 " goals)");
    return static_cast<std::size_t>(index);
}

/// Opens `path` for writing, or returns stdout for an empty path.
std::ostream& output(const std::string& path, std::unique_ptr<std::ofstream>& holder)
{
    if (path.empty())
        return std::cout;
    const fs::path p(path);
    if (p.has_parent_path())
        fs::create_directories(p.parent_path());
    holder = std::make_unique<std::ofstream>(p, std::ios::binary);
    if (!*holder)
        throw std::runtime_error("cannot write " + path);
    return *holder;
}

void print_parse_error(const std::string& file, const pddl::ParseError& e)
{
    std::cerr << file << ":" << e.location().line << ":" << e.location().column << ": " << e.detail() << "\n";
}

int validate_files(const std::string& domain_file, const std::vector<std::string>& problem_files)
{
    std::shared_ptr<const pddl::Domain> d;
    try {
        d = std::make_shared<const pddl::Domain>(pddl::parse_domain(pddl::read_file(domain_file)));
        std::cout << "ok " << domain_file << "\n";
    } catch (const pddl::ParseError& e) {
        print_parse_error(domain_file, e);
        return kRuntimeError;
    }
    int rc = 0;
    for (const auto& f : problem_files) {
        try {
            auto pb = pddl::parse_problem(pddl::read_file(f), d);
            std::cout << "ok " << f << " (" << pb.goals().size() << " goals)\n";
        } catch (const pddl::ParseError& e) {
            print_parse_error(f, e);
            rc = kRuntimeError;
        }
    }
    return rc;
}

struct AgentFlags
{
    int r = 2;
    double q = 0.95;
    double gamma = 0.1;
    std::string heuristic;

    void add(CLI::App* app)
    {
        app->add_option("--r", r, "Persistence: failures before the search stops");
        app->add_option("--q", q, "Persistence: probability of continuing the search");
        app->add_option("--gamma", gamma, "Search noise");
        app->add_option("--heuristic", heuristic, "manhattan, maze, goal_count or hadd");
    }
    [[nodiscard]] agent::AgentParams params(planner::HeuristicKind h) const
    {
        agent::AgentParams a;
        a.r = r;
        a.q = q;
        a.gamma = gamma;
        a.heuristic = h;
        return a;
    }
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Online goal inference for boundedly rational planning agents"};
    app.require_subcommand(1);
    std::string data_dir = domains::default_data_dir().string();
    app.add_option("--data-dir", data_dir, "Directory holding domains/<bundle>");

    // list-domains
    auto* list = app.add_subcommand("list-domains", "Print bundle metadata as JSON");

    // validate
    auto* validate = app.add_subcommand("validate", "Parse domain, problem and trajectory files");
    std::string v_domain, v_problem, v_trajectory;
    validate->add_option("--domain", v_domain, "Bundle name or domain file")->required();
    validate->add_option("--problem", v_problem, "Problem stem or file (default: every bundled problem)");
    validate->add_option("--trajectory", v_trajectory, "Trajectory file to replay");

    // plan
    auto* plan = app.add_subcommand("plan", "Search for a plan to one goal");
    std::string p_domain, p_problem, p_heuristic;
    long p_goal = 0;
    double p_gamma = 0;
    std::optional<std::size_t> p_budget;
    std::uint64_t p_seed = 0;
    plan->add_option("--domain", p_domain, "Bundle name or domain file")->required();
    plan->add_option("--problem", p_problem, "Problem stem or file")->required();
    plan->add_option("--goal-index", p_goal, "Index into the problem's goal list");
    plan->add_option("--heuristic", p_heuristic, "manhattan, maze, goal_count or hadd");
    plan->add_option("--gamma", p_gamma, "Search noise (0 = standard A*)");
    plan->add_option("--budget", p_budget, "Node expansion budget");
    plan->add_option("--seed", p_seed, "Seed for the stochastic search");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run the replanning agent and write its trajectory");
    std::string s_domain, s_problem, s_out;
    long s_goal = 0;
    std::size_t s_tmax = 100;
    std::uint64_t s_seed = 0;
    AgentFlags s_agent;
    simulate->add_option("--domain", s_domain, "Bundle name or domain file")->required();
    simulate->add_option("--problem", s_problem, "Problem stem or file")->required();
    simulate->add_option("--goal-index", s_goal, "Index into the problem's goal list");
    simulate->add_option("--t-max", s_tmax, "Maximum number of actions");
    simulate->add_option("--seed", s_seed, "Random seed")->required();
    simulate->add_option("--out", s_out, "Trajectory file (default: stdout)");
    s_agent.add(simulate);

    // generate-problem
    auto* genp = app.add_subcommand("generate-problem", "Generate a problem instance for a bundled domain");
    std::string g_domain, g_name = "generated", g_out, g_passenger;
    std::uint64_t g_seed = 0;
    domains::GenerateParams g_params;
    std::vector<std::string> g_words;
    std::vector<int> g_subsets;
    genp->add_option("--domain", g_domain, "Bundle name")->required();
    genp->add_option("--seed", g_seed, "Random seed")->required();
    genp->add_option("--name", g_name, "Problem name");
    genp->add_option("--width", g_params.width, "Grid width (0 = domain default)");
    genp->add_option("--height", g_params.height, "Grid height (0 = domain default)");
    genp->add_option("--keys", g_params.keys, "Keys (doors-keys-gems)");
    genp->add_option("--doors", g_params.doors, "Doors (doors-keys-gems)");
    genp->add_option("--gems", g_params.gems, "Gems (doors-keys-gems)");
    genp->add_option("--wall-density", g_params.wall_density, "Wall probability per cell");
    genp->add_option("--passenger", g_passenger, "Depot holding the passenger: R, G, B or Y (taxi)");
    genp->add_option("--words", g_words, "Goal words (block-words)");
    genp->add_option("--hosts", g_params.hosts, "Host count (intrusion-detection)");
    genp->add_option("--subsets", g_subsets, "Goal subset sizes (intrusion-detection)");
    genp->add_option("--out", g_out, "Output file (default: stdout)");

    // generate-dataset
    auto* gend = app.add_subcommand("generate-dataset", "Generate a trajectory dataset");
    std::string d_config, d_domain, d_out, d_split = "suboptimal";
    std::optional<std::uint64_t> d_seed;
    std::optional<std::size_t> d_n, d_tmax;
    std::vector<std::string> d_problems;
    AgentFlags d_agent;
    gend->add_option("--config", d_config, "Experiment config (YAML)");
    gend->add_option("--domain", d_domain, "Bundle name");
    gend->add_option("--n", d_n, "Number of trajectories");
    gend->add_option("--split", d_split, "optimal or suboptimal")->check(CLI::IsMember({"optimal", "suboptimal"}));
    gend->add_option("--seed", d_seed, "Random seed");
    gend->add_option("--t-max", d_tmax, "Action limit per agent run");
    gend->add_option("--problems", d_problems, "Problem stems to use");
    gend->add_option("--out", d_out, "Dataset directory");
    d_agent.add(gend);

    // infer
    auto* infer = app.add_subcommand("infer", "Run goal inference on one trajectory");
    std::string i_method = "sips", i_traj, i_out, i_oracle;
    std::uint64_t i_seed = 0;
    std::size_t i_ppg = 10, i_vi = 0;
    double i_ess = 0.25, i_pg = 0.25, i_alpha = 1, i_beta = 1, i_discount = 0.9, i_flip = 0.05, i_sigma = 0.25;
    bool i_rejuv = false, i_no_noise = false, i_corrupt = false;
    AgentFlags i_agent;
    infer->add_option("--method", i_method, "sips, birl-unbiased, birl-oracle or prp")
        ->check(CLI::IsMember({"sips", "birl-unbiased", "birl-oracle", "prp"}));
    infer->add_option("--trajectory", i_traj, "Trajectory file")->required();
    infer->add_option("--out", i_out, "Snapshot log (default: stdout)");
    infer->add_option("--seed", i_seed, "Random seed");
    infer->add_option("--particles-per-goal", i_ppg, "SIPS particles per goal");
    infer->add_option("--ess-threshold", i_ess, "Resample when ESS / particles falls below this");
    infer->add_flag("--rejuvenation", i_rejuv, "Enable rejuvenation moves after resampling");
    infer->add_option("--p-goal-move", i_pg, "Probability of a goal move when rejuvenating");
    infer->add_option("--flip-prob", i_flip, "Observation model: atom flip probability");
    infer->add_option("--sigma", i_sigma, "Observation model: fluent noise");
    infer->add_flag("--no-noise", i_no_noise, "Score observations with the deterministic channel");
    infer->add_flag("--corrupt-observations", i_corrupt, "Corrupt the observed states with the same noise model");
    infer->add_option("--alpha", i_alpha, "BIRL rationality");
    infer->add_option("--beta", i_beta, "PRP rationality");
    infer->add_option("--discount", i_discount, "BIRL discount");
    infer->add_option("--vi-iters", i_vi, "Async VI backups per goal (0 = default)");
    infer->add_option("--oracle-trajectories", i_oracle, "Dataset directory for birl-oracle states");
    i_agent.add(infer);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run methods over a dataset and write metrics");
    std::string b_config, b_domain, b_dataset, b_metrics, b_snapshots, b_split;
    std::optional<std::uint64_t> b_seed;
    std::optional<std::size_t> b_n, b_ppg, b_vi;
    std::optional<double> b_ess;
    bool b_no_noise = false;
    std::vector<std::string> b_methods;
    bench_cmd->add_option("--config", b_config, "Experiment config (YAML)");
    bench_cmd->add_option("--domain", b_domain, "Bundle name");
    bench_cmd->add_option("--seed", b_seed, "Random seed");
    bench_cmd->add_option("--methods", b_methods, "Methods to run");
    bench_cmd->add_option("--dataset-dir", b_dataset, "Dataset directory (generated when missing)");
    bench_cmd->add_option("--n", b_n, "Trajectories when generating");
    bench_cmd->add_option("--split", b_split, "optimal or suboptimal")
        ->check(CLI::IsMember({"optimal", "suboptimal"}));
    bench_cmd->add_option("--particles-per-goal", b_ppg, "SIPS particles per goal");
    bench_cmd->add_option("--ess-threshold", b_ess, "SIPS resampling threshold");
    bench_cmd->add_option("--vi-iters", b_vi, "Async VI backups per goal");
    bench_cmd->add_flag("--no-noise", b_no_noise, "SIPS scores observations with the deterministic channel");
    bench_cmd->add_option("--metrics", b_metrics, "Metrics CSV path");
    bench_cmd->add_option("--snapshots", b_snapshots, "Snapshot log directory");

    // robustness
    auto* robust = app.add_subcommand("robustness", "Top-1 at Q3 over assumed vs true agent settings");
    std::string r_config, r_work, r_out;
    std::optional<std::uint64_t> r_seed;
    std::optional<std::size_t> r_n;
    robust->add_option("--config", r_config, "Robustness config (YAML)")->required();
    robust->add_option("--seed", r_seed, "Random seed");
    robust->add_option("--n", r_n, "Trajectories per true setting");
    robust->add_option("--work-dir", r_work, "Directory for generated datasets");
    robust->add_option("--out", r_out, "Output CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigError;
    }

    try {
        const fs::path dd(data_dir);

        if (*list) {
            json out = json::array();
            for (const auto& name : domains::bundle_names()) {
                auto b = domains::load_bundle(name, dd);
                json probs = json::array(), scen = json::array();
                for (const auto& f : b.problem_files)
                    probs.push_back(f.stem().string());
                for (const auto& f : b.scenario_files)
                    scen.push_back(f.stem().string());
                out.push_back({{"name", name},
                               {"goal_count", b.goal_count},
                               {"default_heuristic", planner::to_string(b.default_heuristic)},
                               {"problems", probs},
                               {"scenarios", scen}});
            }
            std::cout << out.dump(2) << "\n";
            return 0;
        }

        if (*validate) {
            int rc = 0;
            if (is_bundle(v_domain)) {
                const fs::path dir = dd / "domains" / v_domain;
                std::vector<std::string> files;
                if (!v_problem.empty()) {
                    files.push_back(fs::is_regular_file(v_problem) ? v_problem
                                                                   : domains::load_bundle(v_domain, dd).find(v_problem).string());
                } else {
                    for (const char* sub : {"problems", "scenarios"})
                        if (fs::is_directory(dir / sub))
                            for (const auto& e : fs::directory_iterator(dir / sub))
                                if (e.path().extension() == ".pddl")
                                    files.push_back(e.path().string());
                    std::sort(files.begin(), files.end());
                }
                rc = validate_files((dir / "domain.pddl").string(), files);
            } else {
                std::vector<std::string> files;
                if (!v_problem.empty())
                    files.push_back(v_problem);
                rc = validate_files(v_domain, files);
            }
            if (rc == 0 && !v_trajectory.empty()) {
                auto lt = bench::read_trajectory(v_trajectory, dd);
                if (!bench::replay_sound(*lt.problem, lt.trajectory)) {
                    std::cerr << v_trajectory << ": actions do not reproduce the recorded states\n";
                    return kRuntimeError;
                }
                std::cout << "ok " << v_trajectory << " (" << lt.trajectory.length() << " states)\n";
            }
            return rc;
        }

        if (*plan) {
            auto t = load_target(p_domain, p_problem, dd);
            const auto& pb = *t.problem;
            const auto g = goal_index(pb, p_goal);
            auto h = planner::make_heuristic(heuristic_or(p_heuristic, t.default_heuristic), pb);
            planner::SearchResult res;
            if (p_gamma > 0) {
                Rng rng(p_seed);
                res = planner::probabilistic_astar(pb, pb.initial_state(), pb.goals()[g], *h, p_gamma, p_budget, rng);
            } else {
                res = planner::astar(pb, pb.initial_state(), pb.goals()[g], *h, p_budget);
            }
            for (const auto& st : res.plan.steps)
                std::cout << pddl::action_to_string(pb, st.action) << "\n";
            json stats = {{"goal", pb.goals()[g].label},
                          {"length", res.plan.steps.size()},
                          {"complete", res.plan.complete},
                          {"found_goal", res.stats.found_goal},
                          {"nodes_expanded", res.stats.nodes_expanded}};
            stats["budget"] = res.stats.budget ? json(*res.stats.budget) : json(nullptr);
            std::cerr << stats.dump() << "\n";
            return res.stats.found_goal || p_budget ? 0 : kRuntimeError;
        }

        if (*simulate) {
            auto t = load_target(s_domain, s_problem, dd);
            const auto& pb = *t.problem;
            const auto g = goal_index(pb, s_goal);
            const auto hk = heuristic_or(s_agent.heuristic, t.default_heuristic);
            auto h = planner::make_heuristic(hk, pb);
            const auto params = s_agent.params(hk);
            Rng rng(s_seed);
            auto trace = agent::simulate(pb, *h, g, params, s_tmax, rng);
            bench::Trajectory tr;
            tr.domain = t.domain;
            tr.problem = t.stem;
            tr.goal = pb.goals()[g].label;
            bench::DatasetSpec spec;
            spec.agent = params;
            tr.provenance = bench::provenance(spec, hk);
            tr.seed = s_seed;
            tr.states = std::move(trace.states);
            tr.actions = std::move(trace.actions);
            std::unique_ptr<std::ofstream> f;
            bench::write_trajectory(output(s_out, f), pb, tr);
            return 0;
        }

        if (*genp) {
            if (!is_bundle(g_domain))
                throw domains::UnknownDomainError("unknown domain bundle: " + g_domain);
            if (!g_passenger.empty()) {
                if (g_passenger.size() != 1)
                    throw bench::ConfigError("--passenger takes one of R, G, B, Y");
                g_params.passenger = g_passenger[0];
            }
            if (!g_words.empty())
                g_params.words = g_words;
            if (!g_subsets.empty())
                g_params.subset_sizes = g_subsets;
            Rng rng(g_seed);
            const auto text = domains::generate_problem(g_domain, g_params, rng, g_name);
            // The header repeats the invocation, minus --out, so the file can be regenerated.
            std::ostringstream header;
            header << "; goalinf generate-problem";
            std::vector<std::string> args(argv + 1, argv + argc);
            auto it = std::find(args.begin(), args.end(), "generate-problem");
            for (++it; it != args.end(); ++it) {
                if (*it == "--out") {
                    ++it;
                    if (it == args.end())
                        break;
                    continue;
                }
                if (it->rfind("--out=", 0) == 0)
                    continue;
                header << " " << *it;
            }
            std::unique_ptr<std::ofstream> f;
            output(g_out, f) << header.str() << "\n" << text;
            return 0;
        }

        if (*gend) {
            bench::DatasetSpec spec;
            std::string out = d_out;
            if (!d_config.empty()) {
                auto cfg = bench::load_experiment_config(d_config);
                spec = cfg.dataset;
                if (out.empty())
                    out = cfg.dataset_dir.string();
            } else {
                if (d_domain.empty() || !d_seed)
                    throw bench::ConfigError("generate-dataset needs --config or both --domain and --seed");
                spec.domain = d_domain;
            }
            if (!d_domain.empty())
                spec.domain = d_domain;
            if (d_seed)
                spec.seed = *d_seed;
            if (d_n)
                spec.n = *d_n;
            if (d_tmax)
                spec.t_max = *d_tmax;
            if (!d_problems.empty())
                spec.problems = d_problems;
            if (gend->count("--split"))
                spec.optimal = d_split == "optimal";
            if (gend->count("--r"))
                spec.agent.r = d_agent.r;
            if (gend->count("--q"))
                spec.agent.q = d_agent.q;
            if (gend->count("--gamma"))
                spec.agent.gamma = d_agent.gamma;
            if (!d_agent.heuristic.empty())
                spec.heuristic = heuristic_or(d_agent.heuristic, planner::HeuristicKind::HAdd);
            if (out.empty())
                throw bench::ConfigError("generate-dataset needs --out");
            auto ds = bench::generate_dataset(spec, out, dd);
            std::cout << "wrote " << ds.entries.size() << " trajectories to " << out << "\n";
            return 0;
        }

        if (*infer) {
            auto lt = bench::read_trajectory(i_traj, dd);
            const auto& pb = *lt.problem;
            const auto& tr = lt.trajectory;
            const auto method = *bench::parse_method(i_method);
            planner::HeuristicKind dh = planner::HeuristicKind::HAdd;
            if (is_bundle(tr.domain))
                dh = domains::load_bundle(tr.domain, dd).default_heuristic;
            const auto hk = heuristic_or(i_agent.heuristic, dh);

            bench::MethodParams mp;
            mp.sips.particles_per_goal = i_ppg;
            mp.sips.ess_threshold = i_ess;
            mp.sips.agent = i_agent.params(hk);
            mp.sips.noise = {i_flip, i_sigma};
            if (i_no_noise)
                mp.sips.noise = {0, 0};
            if (i_corrupt)
                mp.observation_noise = mp.sips.noise;
            mp.sips.rejuvenation.enabled = i_rejuv;
            mp.sips.rejuvenation.goal_move_prob = i_pg;
            mp.alpha = i_alpha;
            mp.beta = i_beta;
            mp.discount = i_discount;
            mp.vi_iters = i_vi;
            mp.heuristic = hk;
            try {
                mp.validate();
            } catch (const std::invalid_argument& e) {
                throw bench::ConfigError(e.what());
            }

            bench::Inference inf;
            switch (method) {
            case bench::Method::Sips: inf = bench::infer_sips(pb, tr, mp, hk, i_seed); break;
            case bench::Method::Prp: inf = bench::infer_prp(pb, tr, mp, hk); break;
            case bench::Method::BirlUnbiased:
            case bench::Method::BirlOracle: {
                if (!is_bundle(tr.domain))
                    throw bench::ConfigError("BIRL needs a bundled domain for its state sampler");
                std::vector<pddl::State> oracle;
                if (method == bench::Method::BirlOracle) {
                    if (i_oracle.empty())
                        throw bench::ConfigError("birl-oracle needs --oracle-trajectories");
                    auto ds = bench::load_dataset(i_oracle);
                    for (const auto& e : ds.entries) {
                        if (e.problem != tr.problem)
                            continue;
                        std::ifstream is(ds.dir / e.file);
                        auto other = bench::read_trajectory(is, pb);
                        oracle.insert(oracle.end(), other.states.begin(), other.states.end());
                    }
                    if (oracle.empty())
                        oracle = tr.states;
                }
                auto model = bench::solve_birl(pb, tr.domain, method, mp, oracle, i_seed);
                inf = bench::infer_birl(pb, tr, mp, model);
                break;
            }
            }
            std::unique_ptr<std::ofstream> f;
            bench::write_snapshots(output(i_out, f), pb, i_method, fs::path(i_traj).filename().string(),
                                   inf.snapshots);
            return 0;
        }

        if (*bench_cmd) {
            bench::ExperimentConfig cfg;
            if (!b_config.empty()) {
                cfg = bench::load_experiment_config(b_config);
            } else {
                if (b_domain.empty() || !b_seed || b_dataset.empty())
                    throw bench::ConfigError("bench needs --config or --domain, --seed and --dataset-dir");
                cfg.seed = *b_seed;
                cfg.dataset.domain = b_domain;
                cfg.dataset.seed = *b_seed;
            }
            cfg.data_dir = dd;
            if (!b_domain.empty())
                cfg.dataset.domain = b_domain;
            if (b_seed)
                cfg.seed = *b_seed;
            if (!b_dataset.empty())
                cfg.dataset_dir = b_dataset;
            if (b_n)
                cfg.dataset.n = *b_n;
            if (!b_split.empty())
                cfg.dataset.optimal = b_split == "optimal";
            if (b_ppg)
                cfg.params.sips.particles_per_goal = *b_ppg;
            if (b_ess)
                cfg.params.sips.ess_threshold = *b_ess;
            if (b_vi)
                cfg.params.vi_iters = *b_vi;
            if (b_no_noise)
                cfg.params.sips.noise = {0, 0};
            if (!b_metrics.empty())
                cfg.metrics_csv = b_metrics;
            if (!b_snapshots.empty())
                cfg.snapshot_dir = b_snapshots;
            if (!b_methods.empty()) {
                cfg.methods.clear();
                for (const auto& m : b_methods) {
                    auto pm = bench::parse_method(m);
                    if (!pm)
                        throw bench::ConfigError("unknown method " + m);
                    cfg.methods.push_back(*pm);
                }
            }
            try {
                cfg.validate();
            } catch (const std::invalid_argument& e) {
                throw bench::ConfigError(e.what());
            }
            auto res = bench::run_experiment(cfg);
            bench::write_csv_header(std::cout);
            for (const auto& row : res.rows)
                bench::write_csv_row(std::cout, row);
            return 0;
        }

        if (*robust) {
            auto cfg = bench::load_robustness_config(r_config);
            cfg.data_dir = dd;
            if (r_seed)
                cfg.seed = *r_seed;
            if (r_n)
                cfg.n = *r_n;
            if (!r_work.empty())
                cfg.work_dir = r_work;
            if (!r_out.empty())
                cfg.out_csv = r_out;
            auto cells = bench::run_robustness(cfg);
            std::cout << "true,assumed,top1_q3,p_q3,failed\n";
            for (const auto& c : cells)
                std::cout << c.true_label << "," << c.assumed_label << "," << c.top1_q3 << "," << c.p_q3 << ","
                          << c.failed << "\n";
            return 0;
        }
    } catch (const pddl::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return 0;
}
