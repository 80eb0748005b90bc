#include "goalinf/bench/experiment.hpp"

#include "goalinf/baselines/prp.hpp"
#include "goalinf/pddl/semantics.hpp"

#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <stdexcept>

namespace goalinf::bench {

using json = nlohmann::json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::Sips: return "sips";
    case Method::BirlUnbiased: return "birl-unbiased";
    case Method::BirlOracle: return "birl-oracle";
    case Method::Prp: return "prp";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view s)
{
    for (Method m : {Method::Sips, Method::BirlUnbiased, Method::BirlOracle, Method::Prp})
        if (to_string(m) == s)
            return m;
    return std::nullopt;
}

void MethodParams::validate() const
{
    sips.validate();
    if (!(alpha >= 0) || !(beta >= 0))
        throw std::invalid_argument("alpha and beta must be >= 0");
    if (!(discount > 0 && discount < 1))
        throw std::invalid_argument("discount must be in (0, 1)");
    if (observation_noise)
        observation_noise->validate();
}

std::size_t default_vi_iters(const std::string& domain, Method m)
{
    const bool taxi = domain == "taxi";
    if (m == Method::BirlOracle)
        return taxi ? 2500 : 10000;
    return taxi ? 10000 : 250000;
}

Inference infer_sips(const pddl::Problem& pb, const Trajectory& tr, const MethodParams& mp,
                     planner::HeuristicKind hk, std::uint64_t seed)
{
    Inference out;
    std::vector<observation::Observation> obs;
    if (mp.observation_noise) {
        Rng orng(derive_seed(seed, 1));
        for (const auto& s : tr.states)
            obs.push_back(observation::corrupt(pb, s, *mp.observation_noise, orng));
    } else {
        for (const auto& s : tr.states)
            obs.push_back(observation::observe_exact(pb, s));
    }

    Rng rng(derive_seed(seed, 0));
    auto t0 = Clock::now();
    auto h = planner::make_heuristic(hk, pb);
    sips::SipsConfig cfg = mp.sips;
    cfg.agent.heuristic = hk;
    const sips::SipsContext ctx{pb, *h, cfg};
    auto ps = sips::init(ctx, rng);
    out.setup_seconds = seconds_since(t0);
    for (const auto& o : obs) {
        t0 = Clock::now();
        sips::step(ps, o, ctx, rng);
        out.snapshots.push_back(sips::goal_posterior(ps, pb.goals().size()));
        out.step_seconds.push_back(seconds_since(t0));
    }
    out.nodes = static_cast<double>(ps.totals.nodes_expanded);
    return out;
}

Inference infer_prp(const pddl::Problem& pb, const Trajectory& tr, const MethodParams& mp, planner::HeuristicKind hk)
{
    Inference out;
    auto t0 = Clock::now();
    auto h = planner::make_heuristic(hk, pb);
    baselines::PrpCache cache(pb, *h);
    for (std::size_t g = 0; g < pb.goals().size(); ++g)
        (void)cache.completion_cost(tr.states.front(), g);
    out.setup_seconds = seconds_since(t0);
    // Each snapshot needs the completions from s_t only; time them one by one.
    for (std::size_t t = 1; t <= tr.states.size(); ++t) {
        t0 = Clock::now();
        auto snaps = baselines::prp_posteriors(pb, std::span(tr.states).first(t), mp.beta, cache);
        out.snapshots.push_back(snaps.back());
        out.step_seconds.push_back(seconds_since(t0));
    }
    out.nodes = static_cast<double>(cache.nodes_expanded());
    return out;
}

BirlModel solve_birl(const pddl::Problem& pb, const std::string& domain, Method m, const MethodParams& mp,
                     const std::vector<pddl::State>& oracle_states, std::uint64_t seed)
{
    if (m != Method::BirlUnbiased && m != Method::BirlOracle)
        throw std::invalid_argument("solve_birl needs a BIRL method");
    baselines::ViConfig vc;
    vc.discount = mp.discount;
    vc.iters = mp.vi_iters ? mp.vi_iters : default_vi_iters(domain, m);
    if (m == Method::BirlUnbiased) {
        vc.mode = baselines::ViMode::AsyncUniform;
        vc.sampler = domains::state_sampler(domain, pb);
    } else {
        vc.mode = baselines::ViMode::AsyncOracle;
        vc.oracle_states = oracle_states;
    }
    BirlModel model;
    const auto t0 = Clock::now();
    double updates = 0;
    for (std::size_t g = 0; g < pb.goals().size(); ++g) {
        Rng rng(derive_seed(seed, g));
        model.qfns.push_back(baselines::value_iteration(pb, pb.goals()[g], vc, rng));
        updates += static_cast<double>(model.qfns.back().state_updates());
    }
    model.seconds = seconds_since(t0);
    model.nodes = updates / static_cast<double>(pb.goals().size());
    return model;
}

Inference infer_birl(const pddl::Problem& pb, const Trajectory& tr, const MethodParams& mp, const BirlModel& model)
{
    Inference out;
    out.setup_seconds = model.seconds;
    const auto t0 = Clock::now();
    out.snapshots = baselines::birl_posteriors(pb, tr.states, tr.actions, model.qfns, mp.alpha);
    const double per = seconds_since(t0) / static_cast<double>(tr.states.size());
    out.step_seconds.assign(tr.states.size(), per);
    out.nodes = model.nodes;
    return out;
}

void write_snapshots(std::ostream& os, const pddl::Problem& pb, const std::string& method,
                     const std::string& trajectory, const std::vector<PosteriorSnapshot>& snaps)
{
    json goals = json::array();
    for (const auto& g : pb.goals())
        goals.push_back(g.label);
    os << json{{"method", method}, {"trajectory", trajectory}, {"goals", goals}}.dump() << "\n";
    for (const auto& s : snaps) {
        // Only particle methods have an effective sample size.
        json ess = method == "sips" ? json(s.ess) : json(nullptr);
        json line = {{"t", s.t}, {"probs", s.probs}, {"ess", ess}, {"nodes", s.nodes_expanded},
                     {"planner_calls", s.planner_calls}};
        os << line.dump() << "\n";
    }
}

SnapshotLog read_snapshots(std::istream& is)
{
    SnapshotLog log;
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("empty snapshot log");
    json head = json::parse(line);
    log.method = head.at("method").get<std::string>();
    log.trajectory = head.at("trajectory").get<std::string>();
    log.goals = head.at("goals").get<std::vector<std::string>>();
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        json j = json::parse(line);
        PosteriorSnapshot s;
        s.t = j.at("t").get<std::size_t>();
        s.probs = j.at("probs").get<std::vector<double>>();
        s.ess = j.at("ess").is_null() ? 0.0 : j.at("ess").get<double>();
        s.nodes_expanded = j.at("nodes").get<std::size_t>();
        s.planner_calls = j.at("planner_calls").get<std::size_t>();
        log.snapshots.push_back(std::move(s));
    }
    return log;
}

void ExperimentConfig::validate() const
{
    if (dataset_dir.empty())
        throw std::invalid_argument("dataset directory is not set");
    if (methods.empty())
        throw std::invalid_argument("no methods selected");
    params.validate();
}

namespace {

TrajectoryScore score(const Inference& inf, std::size_t true_goal, std::size_t T)
{
    TrajectoryScore s;
    s.quartiles = quartile_metrics(inf.snapshots, true_goal, T);
    s.c0 = inf.setup_seconds;
    double total = 0;
    for (double x : inf.step_seconds)
        total += x;
    s.mc = inf.step_seconds.empty() ? 0 : total / static_cast<double>(inf.step_seconds.size());
    s.ac = (s.c0 + total) / static_cast<double>(T);
    s.nodes = inf.nodes;
    return s;
}

fs::path log_path(const fs::path& dir, Method m, const std::string& file)
{
    return dir / std::string(to_string(m)) / (fs::path(file).stem().string() + ".jsonl");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    if (!fs::exists(cfg.dataset_dir / "manifest.json"))
        generate_dataset(cfg.dataset, cfg.dataset_dir, cfg.data_dir);
    const Dataset ds = load_dataset(cfg.dataset_dir);
    const auto bundle = domains::load_bundle(ds.spec.domain, cfg.data_dir);
    const auto hk = cfg.params.heuristic.value_or(bundle.default_heuristic);

    std::map<std::string, std::shared_ptr<const pddl::Problem>> problems;
    std::vector<std::string> problem_order;
    std::vector<Trajectory> trajs;
    for (const auto& e : ds.entries) {
        auto& pb = problems[e.problem];
        if (!pb) {
            pb = std::make_shared<const pddl::Problem>(bundle.load_problem(bundle.find(e.problem)));
            problem_order.push_back(e.problem);
        }
        std::ifstream is(ds.dir / e.file);
        if (!is)
            throw std::runtime_error("cannot read " + (ds.dir / e.file).string());
        trajs.push_back(read_trajectory(is, *pb));
        if (!replay_sound(*pb, trajs.back()))
            throw std::runtime_error(e.file + " does not replay from its problem");
    }

    ExperimentResult res;
    for (Method m : cfg.methods) {
        std::map<std::string, BirlModel> models;
        if (m == Method::BirlUnbiased || m == Method::BirlOracle) {
            for (std::size_t pi = 0; pi < problem_order.size(); ++pi) {
                const auto& stem = problem_order[pi];
                std::vector<pddl::State> oracle;
                if (m == Method::BirlOracle)
                    for (std::size_t i = 0; i < trajs.size(); ++i)
                        if (ds.entries[i].problem == stem)
                            oracle.insert(oracle.end(), trajs[i].states.begin(), trajs[i].states.end());
                models[stem] = solve_birl(*problems[stem], ds.spec.domain, m, cfg.params, oracle,
                                          derive_seed(cfg.seed, 1000 + pi));
            }
        }

        std::vector<std::optional<TrajectoryScore>> per;
        std::vector<TrajectoryScore> ok;
        std::size_t failed = 0;
        for (std::size_t i = 0; i < trajs.size(); ++i) {
            const auto& e = ds.entries[i];
            const auto& pb = *problems[e.problem];
            const auto& tr = trajs[i];
            try {
                Inference inf;
                switch (m) {
                case Method::Sips: inf = infer_sips(pb, tr, cfg.params, hk, derive_seed(cfg.seed, i)); break;
                case Method::Prp: inf = infer_prp(pb, tr, cfg.params, hk); break;
                default: inf = infer_birl(pb, tr, cfg.params, models.at(e.problem)); break;
                }
                if (!cfg.snapshot_dir.empty()) {
                    const auto path = log_path(cfg.snapshot_dir, m, e.file);
                    fs::create_directories(path.parent_path());
                    std::ofstream os(path, std::ios::binary);
                    write_snapshots(os, pb, std::string(to_string(m)), e.file, inf.snapshots);
                }
                auto s = score(inf, *pb.find_goal(e.goal), tr.length());
                per.push_back(s);
                ok.push_back(s);
            } catch (const std::exception& ex) {
                ++failed;
                per.push_back(std::nullopt);
                res.errors.push_back(std::string(to_string(m)) + " " + e.file + ": " + ex.what());
                std::cerr << "warning: " << res.errors.back() << "\n";
                if (!cfg.snapshot_dir.empty())
                    fs::remove(log_path(cfg.snapshot_dir, m, e.file));
            }
        }
        res.rows.push_back(aggregate(ds.spec.domain, std::string(to_string(m)), ok, failed));
        res.scores.push_back(std::move(per));
    }

    if (!cfg.metrics_csv.empty()) {
        if (cfg.metrics_csv.has_parent_path())
            fs::create_directories(cfg.metrics_csv.parent_path());
        std::ofstream os(cfg.metrics_csv, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot write " + cfg.metrics_csv.string());
        write_csv_header(os);
        for (const auto& r : res.rows)
            write_csv_row(os, r);
    }
    return res;
}

MetricsRow metrics_from_logs(const Dataset& ds, const fs::path& snapshot_dir, Method m)
{
    std::vector<TrajectoryScore> scores;
    std::size_t failed = 0;
    for (const auto& e : ds.entries) {
        std::ifstream is(log_path(snapshot_dir, m, e.file));
        if (!is) {
            ++failed;
            continue;
        }
        const auto log = read_snapshots(is);
        std::size_t g = 0;
        while (g < log.goals.size() && log.goals[g] != e.goal)
            ++g;
        if (g == log.goals.size())
            throw std::invalid_argument("snapshot log lacks goal " + e.goal);
        TrajectoryScore s;
        s.quartiles = quartile_metrics(log.snapshots, g, log.snapshots.size());
        s.nodes = static_cast<double>(log.snapshots.back().nodes_expanded);
        scores.push_back(s);
    }
    return aggregate(ds.spec.domain, std::string(to_string(m)), scores, failed);
}

void RobustnessConfig::validate() const
{
    if (domain.empty())
        throw std::invalid_argument("robustness domain is not set");
    if (true_settings.empty() || assumed_settings.empty())
        throw std::invalid_argument("robustness grid needs true and assumed settings");
    if (work_dir.empty())
        throw std::invalid_argument("robustness work directory is not set");
    for (const auto& s : true_settings)
        s.params.validate();
    for (const auto& s : assumed_settings)
        s.params.validate();
    params.validate();
}

std::vector<RobustnessCell> run_robustness(const RobustnessConfig& cfg)
{
    cfg.validate();
    std::vector<RobustnessCell> cells;
    for (std::size_t ti = 0; ti < cfg.true_settings.size(); ++ti) {
        const auto& ts = cfg.true_settings[ti];
        DatasetSpec spec;
        spec.domain = cfg.domain;
        spec.n = cfg.n;
        spec.seed = derive_seed(cfg.seed, ti);
        spec.agent = ts.params;
        spec.heuristic = ts.heuristic;
        const auto dir = cfg.work_dir / ("true-" + ts.label);
        for (const auto& as : cfg.assumed_settings) {
            ExperimentConfig ec;
            ec.seed = cfg.seed;
            ec.data_dir = cfg.data_dir;
            ec.dataset = spec;
            ec.dataset_dir = dir;
            ec.methods = {Method::Sips};
            ec.params = cfg.params;
            ec.params.sips.agent = as.params;
            ec.params.heuristic = as.heuristic;
            const auto res = run_experiment(ec);
            RobustnessCell c;
            c.true_label = ts.label;
            c.assumed_label = as.label;
            c.top1_q3 = res.rows[0].top1[2].mean;
            c.p_q3 = res.rows[0].prob[2].mean;
            c.failed = res.rows[0].failed;
            cells.push_back(c);
        }
    }
    if (!cfg.out_csv.empty()) {
        if (cfg.out_csv.has_parent_path())
            fs::create_directories(cfg.out_csv.parent_path());
        std::ofstream os(cfg.out_csv, std::ios::binary);
        os << "true,assumed,top1_q3,p_q3,failed\n";
        for (const auto& c : cells)
            os << c.true_label << "," << c.assumed_label << "," << c.top1_q3 << "," << c.p_q3 << "," << c.failed
               << "\n";
    }
    return cells;
}

}  // namespace goalinf::bench
