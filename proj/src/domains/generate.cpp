#include "goalinf/domains/bundle.hpp"

#include "goalinf/domains/grid.hpp"
#include "goalinf/pddl/parser.hpp"
#include "goalinf/pddl/semantics.hpp"
#include "goalinf/planner/astar.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace goalinf::domains {

namespace {

std::shared_ptr<const pddl::Domain> bundled_domain(const std::string& name)
{
    return std::make_shared<const pddl::Domain>(
        pddl::parse_domain(pddl::read_file((default_data_dir() / "domains" / name / "domain.pddl").string())));
}

bool all_goals_reachable(const std::string& text, const std::string& domain, planner::HeuristicKind kind)
{
    static std::map<std::string, std::shared_ptr<const pddl::Domain>> cache;
    auto& d = cache[domain];
    if (!d)
        d = bundled_domain(domain);
    const auto pb = pddl::parse_problem(text, d);
    const auto h = planner::make_heuristic(kind, pb);
    for (const auto& g : pb.goals()) {
        if (pddl::satisfies(pb, pb.initial_state(), g))
            return false;
        if (!planner::astar(pb, pb.initial_state(), g, *h, std::nullopt).plan.complete)
            return false;
    }
    return true;
}

std::string map_comment(const GridMap& m)
{
    std::string out;
    for (const auto& row : m.rows)
        out += ";   " + row + "\n";
    return out;
}

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

GenerateParams with_size(GenerateParams p, int side)
{
    if (p.width == 0)
        p.width = side;
    if (p.height == 0)
        p.height = side;
    return p;
}

std::string doors_keys_gems(const GenerateParams& params, Rng& rng, const std::string& name)
{
    const GenerateParams p = with_size(params, 7);
    if (p.width < 1 || p.height < 1 || p.keys < 0 || p.doors < 0 || p.gems < 1 || p.gems > 5)
        throw std::invalid_argument("doors-keys-gems needs a positive size and 1..5 gems");
    if (p.doors > p.gems)
        throw std::invalid_argument("doors-keys-gems places at most one door per gem");
    const int cells = p.width * p.height;
    if (cells < 1 + p.gems + p.keys + 2 * p.doors)
        throw GenerationError("grid too small for the requested items");
    static const char kGems[] = {'r', 'y', 'b', 'g', 'p'};
    const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
    for (int attempt = 0; attempt < p.max_attempts; ++attempt) {
        GridMap m;
        m.rows.assign(static_cast<std::size_t>(p.height), std::string(static_cast<std::size_t>(p.width), '.'));
        for (int y = 1; y <= p.height; ++y)
            for (int x = 1; x <= p.width; ++x)
                if (uniform01(rng) < p.wall_density)
                    m.set(x, y, '#');
        auto free_cell = [&](int& x, int& y) {
            for (int tries = 0; tries < 100; ++tries) {
                x = pick(rng, 1, p.width);
                y = pick(rng, 1, p.height);
                if (m.at(x, y) == '.')
                    return true;
            }
            return false;
        };
        bool ok = true;
        for (int gi = 0; gi < p.gems && ok; ++gi) {
            int x, y;
            if (!(ok = free_cell(x, y)))
                break;
            m.set(x, y, kGems[gi]);
            if (gi >= p.doors)
                continue;
            // Seal the gem in: one neighbour becomes the door, the rest walls.
            std::vector<int> dirs;
            for (int k = 0; k < 4; ++k)
                if (m.in_bounds(x + dx[k], y + dy[k]) && m.at(x + dx[k], y + dy[k]) == '.')
                    dirs.push_back(k);
            if (dirs.empty()) {
                ok = false;
                break;
            }
            const int door = dirs[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(dirs.size()) - 1))];
            for (int k = 0; k < 4; ++k) {
                const int nx = x + dx[k], ny = y + dy[k];
                if (!m.in_bounds(nx, ny))
                    continue;
                if (k == door)
                    m.set(nx, ny, 'D');
                else if (m.at(nx, ny) == '.')
                    m.set(nx, ny, '#');
            }
        }
        for (int k = 0; k < p.keys && ok; ++k) {
            int x, y;
            if ((ok = free_cell(x, y)))
                m.set(x, y, 'k');
        }
        int sx, sy;
        if (!ok || !free_cell(sx, sy))
            continue;
        m.set(sx, sy, 's');
        const std::string text = dkg_problem_text(m, name);
        if (all_goals_reachable(text, "doors-keys-gems", planner::HeuristicKind::Maze))
            return map_comment(m) + text;
    }
    throw GenerationError("no solvable doors-keys-gems layout within the attempt limit");
}

std::string taxi(const GenerateParams& params, Rng&, const std::string& name)
{
    const GenerateParams p = with_size(params, 5);
    if (p.width < 2 || p.height < 2)
        throw GenerationError("taxi needs at least a 2x2 grid");
    if (std::string("RGBY").find(p.passenger) == std::string::npos)
        throw std::invalid_argument("taxi passenger depot must be one of R, G, B, Y");
    GridMap m;
    m.rows.assign(static_cast<std::size_t>(p.height), std::string(static_cast<std::size_t>(p.width), '.'));
    m.set(1, 1, 'R');
    m.set(p.width, 1, 'G');
    m.set(1, p.height, 'Y');
    m.set(p.width, p.height, 'B');
    // The taxi starts at the centre; depots are corners so they never collide.
    const int sx = (p.width + 1) / 2, sy = (p.height + 1) / 2;
    if (m.at(sx, sy) != '.')
        throw GenerationError("taxi grid too small for a free start cell");
    m.set(sx, sy, 's');
    return map_comment(m) + taxi_problem_text(m, name, p.passenger);
}

std::string tower_goal(const std::string& word)
{
    std::ostringstream os;
    os << "(and (clear " << word.front() << ")";
    for (std::size_t i = 0; i + 1 < word.size(); ++i)
        os << " (on " << word[i] << " " << word[i + 1] << ")";
    os << " (ontable " << word.back() << "))";
    return os.str();
}

std::string block_words(const GenerateParams& p, Rng& rng, const std::string& name)
{
    if (p.words.empty())
        throw std::invalid_argument("block-words needs at least one word");
    std::set<char> letters;
    for (const auto& w : p.words) {
        if (w.empty() || std::set<char>(w.begin(), w.end()).size() != w.size())
            throw std::invalid_argument("block-words words must be non-empty with distinct letters: " + w);
        for (char c : w) {
            if (c < 'a' || c > 'z')
                throw std::invalid_argument("block-words letters must be lowercase a-z");
            letters.insert(c);
        }
    }
    for (int attempt = 0; attempt < p.max_attempts; ++attempt) {
        std::vector<char> blocks(letters.begin(), letters.end());
        std::shuffle(blocks.begin(), blocks.end(), rng);
        std::vector<std::vector<char>> towers;
        for (char b : blocks) {
            if (towers.empty() || uniform01(rng) < 0.5)
                towers.emplace_back();
            towers.back().push_back(b);
        }
        std::ostringstream os;
        os << "(define (problem " << name << ")\n  (:domain block-words)\n  (:objects";
        for (char c : letters)
            os << " " << c;
        os << " - block)\n  (:init (handempty)";
        for (const auto& t : towers) {
            os << "\n    (ontable " << t.front() << ")";
            for (std::size_t i = 1; i < t.size(); ++i)
                os << " (on " << t[i] << " " << t[i - 1] << ")";
            os << " (clear " << t.back() << ")";
        }
        os << ")\n  (:goals";
        for (const auto& w : p.words)
            os << "\n    (" << w << " " << tower_goal(w) << ")";
        os << "))\n";
        if (all_goals_reachable(os.str(), "block-words", planner::HeuristicKind::HAdd))
            return os.str();
    }
    throw GenerationError("every sampled block-words start already satisfies a goal");
}

std::string intrusion(const GenerateParams& p, Rng& rng, const std::string& name)
{
    int total = 0;
    for (int s : p.subset_sizes) {
        if (s < 1)
            throw std::invalid_argument("intrusion subsets must be non-empty");
        total += s;
    }
    if (p.hosts < 1 || total != p.hosts)
        throw std::invalid_argument("intrusion subset sizes must sum to the host count");
    std::vector<int> hosts(static_cast<std::size_t>(p.hosts));
    for (int i = 0; i < p.hosts; ++i)
        hosts[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(hosts.begin(), hosts.end(), rng);
    static const char* kAttacks[][2] = {{"vandalism", "vandalized"},
                                        {"data-theft", "data-stolen"},
                                        {"backdoor", "backdoor-installed"},
                                        {"denial-of-service", "service-denied"},
                                        {"ransomware", "ransomware-deployed"}};
    std::ostringstream os;
    os << "(define (problem " << name << ")\n  (:domain intrusion-detection)\n  (:objects";
    for (int i = 1; i <= p.hosts; ++i)
        os << " h" << i;
    os << " - host)\n  (:init)\n  (:goals";
    for (const auto& [label, pred] : kAttacks) {
        std::size_t at = 0;
        for (std::size_t k = 0; k < p.subset_sizes.size(); ++k) {
            std::vector<int> subset(hosts.begin() + static_cast<std::ptrdiff_t>(at),
                                    hosts.begin() + static_cast<std::ptrdiff_t>(at) + p.subset_sizes[k]);
            at += static_cast<std::size_t>(p.subset_sizes[k]);
            std::sort(subset.begin(), subset.end());
            os << "\n    (" << label << "-" << (k + 1) << " (and";
            for (int h : subset)
                os << " (" << pred << " h" << h << ")";
            os << "))";
        }
    }
    os << "))\n";
    return os.str();
}

}  // namespace

std::string generate_problem(const std::string& domain, const GenerateParams& params, Rng& rng,
                             const std::string& name)
{
    if (domain == "doors-keys-gems")
        return doors_keys_gems(params, rng, name);
    if (domain == "taxi")
        return taxi(params, rng, name);
    if (domain == "block-words")
        return block_words(params, rng, name);
    if (domain == "intrusion-detection")
        return intrusion(params, rng, name);
    throw UnknownDomainError("cannot generate problems for domain " + domain);
}

}  // namespace goalinf::domains
