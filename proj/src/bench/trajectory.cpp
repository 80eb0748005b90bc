#include "goalinf/bench/trajectory.hpp"

#include "goalinf/pddl/parser.hpp"
#include "goalinf/pddl/semantics.hpp"
#include "goalinf/pddl/sexpr.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace goalinf::bench {

using json = nlohmann::json;
using pddl::Problem;
using pddl::State;

bool replay_sound(const Problem& pb, const Trajectory& tr)
{
    if (tr.states.empty() || !(tr.states[0] == pb.initial_state()))
        return false;
    if (tr.actions.size() + 1 != tr.states.size())
        return false;
    for (std::size_t i = 0; i < tr.actions.size(); ++i) {
        if (!pddl::is_applicable(pb, tr.states[i], tr.actions[i]))
            return false;
        if (!(pddl::apply(pb, tr.states[i], tr.actions[i]) == tr.states[i + 1]))
            return false;
    }
    return true;
}

Trajectory replay(const Problem& pb, const std::vector<pddl::GroundAction>& actions)
{
    Trajectory tr;
    tr.states.push_back(pb.initial_state());
    for (const auto& a : actions) {
        tr.states.push_back(pddl::apply(pb, tr.states.back(), a));
        tr.actions.push_back(a);
    }
    return tr;
}

void write_trajectory(std::ostream& os, const Problem& pb, const Trajectory& tr)
{
    json head = {{"domain", tr.domain}, {"problem", tr.problem}, {"goal", tr.goal},
                 {"provenance", tr.provenance}, {"seed", tr.seed}, {"length", tr.states.size()}};
    os << head.dump() << "\n";
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
        const State& s = tr.states[i];
        json fl = json::object();
        for (std::size_t f = 0; f < pb.dynamic_fluent_count(); ++f)
            fl[pb.dynamic_fluent_name(f)] = s.fluents[f];
        json line = {{"t", i + 1}, {"facts", pddl::fact_strings(pb, s)}, {"fluents", fl}};
        line["action"] = i < tr.actions.size() ? json(pddl::action_to_string(pb, tr.actions[i])) : json(nullptr);
        os << line.dump() << "\n";
    }
}

void write_trajectory(const std::filesystem::path& file, const Problem& pb, const Trajectory& tr)
{
    if (file.has_parent_path())
        std::filesystem::create_directories(file.parent_path());
    std::ofstream os(file, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot write " + file.string());
    write_trajectory(os, pb, tr);
}

State parse_state(const Problem& pb, const std::vector<std::string>& facts,
                  const std::vector<std::pair<std::string, std::int64_t>>& fluents)
{
    State s = pb.make_empty_state();
    const auto& d = pb.domain();
    auto ground = [&](const std::string& text, bool fluent) {
        pddl::SExpr e = pddl::read_sexpr(text);
        if (!e.is_list || e.items.empty() || !e.items[0].is_atom())
            throw std::invalid_argument("malformed ground atom: " + text);
        std::vector<pddl::ObjectId> args;
        for (std::size_t i = 1; i < e.size(); ++i) {
            auto o = pb.find_object(e[i].atom);
            if (!o)
                throw std::invalid_argument("unknown object in " + text);
            args.push_back(*o);
        }
        std::optional<std::uint32_t> sym = fluent ? d.find_fluent(e.items[0].atom) : d.find_predicate(e.items[0].atom);
        if (!sym)
            throw std::invalid_argument("unknown symbol in " + text);
        auto sl = fluent ? pb.fluent_slot(*sym, args) : pb.atom_slot(*sym, args);
        if (!sl || sl->rigid)
            throw std::invalid_argument("not a dynamic " + std::string(fluent ? "fluent: " : "fact: ") + text);
        return sl->index;
    };
    for (const auto& f : facts)
        s.set(ground(f, false), true);
    for (const auto& [name, v] : fluents)
        s.fluents[ground(name, true)] = v;
    return s;
}

namespace {

Trajectory read_body(std::istream& is, const json& head, const Problem& pb)
{
    Trajectory tr;
    tr.domain = head.at("domain").get<std::string>();
    tr.problem = head.at("problem").get<std::string>();
    tr.goal = head.at("goal").get<std::string>();
    tr.provenance = head.value("provenance", "external");
    tr.seed = head.value("seed", std::uint64_t{0});
    if (!pb.find_goal(tr.goal))
        throw std::invalid_argument("trajectory goal " + tr.goal + " is not a goal of " + pb.name());
    std::string line;
    bool ended = false;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        if (ended)
            throw std::invalid_argument("trajectory has states after a null action");
        json j = json::parse(line);
        if (j.at("t").get<std::size_t>() != tr.states.size() + 1)
            throw std::invalid_argument("trajectory timesteps are not consecutive");
        std::vector<std::pair<std::string, std::int64_t>> fl;
        for (const auto& [k, v] : j.at("fluents").items())
            fl.emplace_back(k, v.get<std::int64_t>());
        tr.states.push_back(parse_state(pb, j.at("facts").get<std::vector<std::string>>(), fl));
        if (j.at("action").is_null())
            ended = true;
        else
            tr.actions.push_back(pddl::parse_action(pb, j.at("action").get<std::string>()));
    }
    if (tr.states.empty())
        throw std::invalid_argument("trajectory has no states");
    if (tr.actions.size() + 1 != tr.states.size())
        throw std::invalid_argument("trajectory must end with a null action");
    return tr;
}

}  // namespace

Trajectory read_trajectory(std::istream& is, const Problem& pb)
{
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("empty trajectory file");
    return read_body(is, json::parse(line), pb);
}

LoadedTrajectory read_trajectory(const std::filesystem::path& file, const std::filesystem::path& data_dir)
{
    std::ifstream is(file);
    if (!is)
        throw std::runtime_error("cannot read " + file.string());
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("empty trajectory file " + file.string());
    json head = json::parse(line);
    const auto domain = head.at("domain").get<std::string>();
    const auto problem = head.at("problem").get<std::string>();
    LoadedTrajectory out;
    const auto names = domains::bundle_names();
    if (std::find(names.begin(), names.end(), domain) == names.end() && std::filesystem::is_regular_file(domain)) {
        // Trajectory over standalone domain/problem files.
        auto d = std::make_shared<const pddl::Domain>(pddl::parse_domain(pddl::read_file(domain)));
        out.problem = std::make_shared<const Problem>(pddl::parse_problem(pddl::read_file(problem), d));
    } else {
        auto bundle = domains::load_bundle(domain, data_dir);
        out.problem = std::make_shared<const Problem>(bundle.load_problem(bundle.find(problem)));
    }
    out.trajectory = read_body(is, head, *out.problem);
    return out;
}

}  // namespace goalinf::bench
