#include "goalinf/domains/bundle.hpp"

#include "goalinf/pddl/parser.hpp"

#include <algorithm>
#include <cstdlib>

namespace goalinf::domains {

namespace fs = std::filesystem;

std::filesystem::path default_data_dir()
{
    if (const char* env = std::getenv("GOALINF_DATA_DIR"); env && *env)
        return env;
    return GOALINF_DATA_DIR;
}

std::vector<std::string> bundle_names()
{
    return {"block-words", "doors-keys-gems", "intrusion-detection", "taxi"};
}

namespace {

planner::HeuristicKind default_heuristic_for(const std::string& name)
{
    if (name == "taxi" || name == "doors-keys-gems")
        return planner::HeuristicKind::Manhattan;
    return planner::HeuristicKind::HAdd;
}

std::vector<fs::path> pddl_files(const fs::path& dir)
{
    std::vector<fs::path> out;
    if (!fs::is_directory(dir))
        return out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".pddl")
            out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

pddl::Problem DomainBundle::load_problem(std::size_t index) const { return load_problem(problem_files.at(index)); }

pddl::Problem DomainBundle::load_problem(const fs::path& file) const
{
    return pddl::parse_problem(pddl::read_file(file.string()), domain);
}

fs::path DomainBundle::find(const std::string& stem) const
{
    for (const auto* files : {&problem_files, &scenario_files})
        for (const auto& f : *files)
            if (f.stem() == stem)
                return f;
    throw std::invalid_argument("bundle " + name + " has no problem named " + stem);
}

DomainBundle load_bundle(const std::string& name, const fs::path& data_dir)
{
    const auto names = bundle_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw UnknownDomainError("unknown domain bundle: " + name);
    DomainBundle b;
    b.name = name;
    b.dir = data_dir / "domains" / name;
    b.domain_text = pddl::read_file((b.dir / "domain.pddl").string());
    b.domain = std::make_shared<const pddl::Domain>(pddl::parse_domain(b.domain_text));
    b.problem_files = pddl_files(b.dir / "problems");
    b.scenario_files = pddl_files(b.dir / "scenarios");
    b.default_heuristic = default_heuristic_for(name);
    if (b.problem_files.empty())
        throw std::runtime_error("bundle " + name + " has no problems");
    for (const auto& f : b.problem_files) {
        auto pb = b.load_problem(f);
        if (b.goal_count == 0)
            b.goal_count = pb.goals().size();
        else if (pb.goals().size() != b.goal_count)
            throw std::runtime_error("problem " + f.string() + " has " + std::to_string(pb.goals().size()) +
                                     " goals, expected " + std::to_string(b.goal_count));
    }
    for (const auto& f : b.scenario_files)
        (void)b.load_problem(f);
    return b;
}

}  // namespace goalinf::domains
