#include "goalinf/bench/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace goalinf::bench {

namespace {

void check_keys(const YAML::Node& n, const std::string& where, std::set<std::string> allowed)
{
    if (!n)
        return;
    if (!n.IsMap())
        throw ConfigError(where + " must be a mapping");
    for (const auto& kv : n) {
        const auto k = kv.first.as<std::string>();
        if (!allowed.count(k))
            throw ConfigError("unknown key '" + k + "' in " + where);
    }
}

template <class T>
T get(const YAML::Node& n, const std::string& key, T fallback)
{
    if (!n || !n[key])
        return fallback;
    try {
        return n[key].as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError("bad value for '" + key + "'");
    }
}

planner::HeuristicKind heuristic(const YAML::Node& n)
{
    const auto s = n.as<std::string>();
    auto h = planner::parse_heuristic_kind(s);
    if (!h)
        throw ConfigError("unknown heuristic '" + s + "'");
    return *h;
}

void read_agent(const YAML::Node& n, const std::string& where, agent::AgentParams& a,
                std::optional<planner::HeuristicKind>* h, std::set<std::string> extra = {})
{
    if (!n)
        return;
    extra.insert({"r", "q", "gamma", "heuristic"});
    check_keys(n, where, extra);
    a.r = get(n, "r", a.r);
    a.q = get(n, "q", a.q);
    a.gamma = get(n, "gamma", a.gamma);
    if (n["heuristic"]) {
        if (!h)
            throw ConfigError("heuristic is not configurable in " + where);
        *h = heuristic(n["heuristic"]);
    }
}

void read_noise(const YAML::Node& n, const std::string& where, observation::NoiseModel& nm)
{
    if (!n)
        return;
    check_keys(n, where, {"flip_prob", "sigma"});
    nm.flip_prob = get(n, "flip_prob", nm.flip_prob);
    nm.sigma = get(n, "sigma", nm.sigma);
}

void read_method_params(const YAML::Node& root, MethodParams& mp)
{
    if (const auto s = root["sips"]) {
        check_keys(s, "sips", {"particles_per_goal", "ess_threshold", "rejuvenation", "agent", "noise"});
        mp.sips.particles_per_goal = get(s, "particles_per_goal", mp.sips.particles_per_goal);
        mp.sips.ess_threshold = get(s, "ess_threshold", mp.sips.ess_threshold);
        if (const auto r = s["rejuvenation"]) {
            check_keys(r, "sips.rejuvenation", {"enabled", "goal_move_prob", "temperature"});
            mp.sips.rejuvenation.enabled = get(r, "enabled", mp.sips.rejuvenation.enabled);
            mp.sips.rejuvenation.goal_move_prob = get(r, "goal_move_prob", mp.sips.rejuvenation.goal_move_prob);
            mp.sips.rejuvenation.temperature = get(r, "temperature", mp.sips.rejuvenation.temperature);
        }
        read_agent(s["agent"], "sips.agent", mp.sips.agent, nullptr);
        read_noise(s["noise"], "sips.noise", mp.sips.noise);
    }
    if (const auto b = root["baselines"]) {
        check_keys(b, "baselines", {"alpha", "beta", "discount", "vi_iters"});
        mp.alpha = get(b, "alpha", mp.alpha);
        mp.beta = get(b, "beta", mp.beta);
        mp.discount = get(b, "discount", mp.discount);
        mp.vi_iters = get(b, "vi_iters", mp.vi_iters);
    }
    if (root["heuristic"])
        mp.heuristic = heuristic(root["heuristic"]);
    if (const auto o = root["observation_noise"]) {
        observation::NoiseModel nm;
        read_noise(o, "observation_noise", nm);
        mp.observation_noise = nm;
    }
}

YAML::Node parse(const std::string& text)
{
    try {
        auto n = YAML::Load(text);
        if (!n.IsMap())
            throw ConfigError("config must be a mapping");
        return n;
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

std::uint64_t seed_of(const YAML::Node& root)
{
    if (!root["seed"])
        throw ConfigError("config must set 'seed'");
    return get<std::uint64_t>(root, "seed", 0);
}

std::string slurp(const std::filesystem::path& file)
{
    std::ifstream is(file);
    if (!is)
        throw ConfigError("cannot read config " + file.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

template <class F>
auto rethrow_invalid(F f)
{
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text)
{
    const auto root = parse(text);
    check_keys(root, "config",
               {"seed", "data_dir", "dataset", "methods", "sips", "baselines", "heuristic", "observation_noise",
                "output"});
    ExperimentConfig cfg;
    cfg.seed = seed_of(root);
    if (root["data_dir"])
        cfg.data_dir = root["data_dir"].as<std::string>();

    const auto d = root["dataset"];
    if (!d)
        throw ConfigError("config must have a 'dataset' section");
    check_keys(d, "dataset", {"domain", "dir", "n", "split", "seed", "t_max", "problems", "agent"});
    cfg.dataset.domain = get<std::string>(d, "domain", "");
    cfg.dataset_dir = get<std::string>(d, "dir", "");
    cfg.dataset.n = get(d, "n", cfg.dataset.n);
    const auto split = get<std::string>(d, "split", "suboptimal");
    if (split != "optimal" && split != "suboptimal")
        throw ConfigError("dataset.split must be optimal or suboptimal");
    cfg.dataset.optimal = split == "optimal";
    cfg.dataset.seed = get(d, "seed", cfg.seed);
    cfg.dataset.t_max = get(d, "t_max", cfg.dataset.t_max);
    cfg.dataset.problems = get(d, "problems", cfg.dataset.problems);
    read_agent(d["agent"], "dataset.agent", cfg.dataset.agent, &cfg.dataset.heuristic);
    if (cfg.dataset.domain.empty())
        throw ConfigError("dataset.domain is required");
    if (!rethrow_invalid([&] { return domains::load_bundle(cfg.dataset.domain, cfg.data_dir); }).goal_count)
        throw ConfigError("bundle " + cfg.dataset.domain + " has no goals");

    // The assumed agent defaults to the generating one.
    cfg.params.sips.agent = cfg.dataset.agent;
    read_method_params(root, cfg.params);

    if (const auto m = root["methods"]) {
        cfg.methods.clear();
        for (const auto& x : m) {
            auto pm = parse_method(x.as<std::string>());
            if (!pm)
                throw ConfigError("unknown method '" + x.as<std::string>() + "'");
            cfg.methods.push_back(*pm);
        }
    }
    if (const auto o = root["output"]) {
        check_keys(o, "output", {"metrics", "snapshots"});
        cfg.metrics_csv = get<std::string>(o, "metrics", "");
        cfg.snapshot_dir = get<std::string>(o, "snapshots", "");
    }
    rethrow_invalid([&] {
        cfg.validate();
        cfg.dataset.validate();
        return 0;
    });
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& file)
{
    return parse_experiment_config(slurp(file));
}

RobustnessConfig parse_robustness_config(const std::string& text)
{
    const auto root = parse(text);
    check_keys(root, "config",
               {"seed", "data_dir", "domain", "n", "true", "assumed", "sips", "baselines", "heuristic",
                "observation_noise", "work_dir", "output"});
    RobustnessConfig cfg;
    cfg.seed = seed_of(root);
    if (root["data_dir"])
        cfg.data_dir = root["data_dir"].as<std::string>();
    cfg.domain = get<std::string>(root, "domain", "");
    rethrow_invalid([&] { return domains::load_bundle(cfg.domain, cfg.data_dir).goal_count; });
    cfg.n = get(root, "n", cfg.n);
    cfg.work_dir = get<std::string>(root, "work_dir", "");
    cfg.out_csv = get<std::string>(root, "output", "");
    read_method_params(root, cfg.params);
    auto settings = [&](const char* key) {
        std::vector<RobustnessSetting> out;
        const auto list = root[key];
        if (!list || !list.IsSequence())
            throw ConfigError(std::string("'") + key + "' must be a list of agent settings");
        for (const auto& n : list) {
            RobustnessSetting s;
            read_agent(n, key, s.params, &s.heuristic, {"label"});
            s.label = get<std::string>(n, "label", "");
            if (s.label.empty())
                throw ConfigError(std::string("every entry of '") + key + "' needs a label");
            out.push_back(std::move(s));
        }
        return out;
    };
    cfg.true_settings = settings("true");
    cfg.assumed_settings = settings("assumed");
    rethrow_invalid([&] {
        cfg.validate();
        return 0;
    });
    return cfg;
}

RobustnessConfig load_robustness_config(const std::filesystem::path& file)
{
    return parse_robustness_config(slurp(file));
}

}  // namespace goalinf::bench
