#pragma once

#include "goalinf/pddl/parser.hpp"
#include "goalinf/pddl/semantics.hpp"

#include <memory>
#include <string>

namespace testutil {

inline const char* kBlocksDomain = R"(
(define (domain blocks)
  (:requirements :strips :typing)
  (:types block)
  (:predicates (on ?x - block ?y - block) (ontable ?x - block) (clear ?x - block)
               (handempty) (holding ?x - block))
  (:action pick-up
    :parameters (?x - block)
    :precondition (and (clear ?x) (ontable ?x) (handempty))
    :effect (and (not (ontable ?x)) (not (clear ?x)) (not (handempty)) (holding ?x)))
  (:action put-down
    :parameters (?x - block)
    :precondition (holding ?x)
    :effect (and (not (holding ?x)) (clear ?x) (handempty) (ontable ?x)))
  (:action stack
    :parameters (?x - block ?y - block)
    :precondition (and (holding ?x) (clear ?y) (not (= ?x ?y)))
    :effect (and (not (holding ?x)) (not (clear ?y)) (clear ?x) (handempty) (on ?x ?y)))
  (:action unstack
    :parameters (?x - block ?y - block)
    :precondition (and (on ?x ?y) (clear ?x) (handempty) (not (= ?x ?y)))
    :effect (and (holding ?x) (clear ?y) (not (clear ?x)) (not (handempty)) (not (on ?x ?y)))))
)";

inline const char* kBlocks3Problem = R"(
(define (problem three)
  (:domain blocks)
  (:objects a b c - block)
  (:init (ontable a) (ontable b) (ontable c) (clear a) (clear b) (clear c) (handempty))
  (:goals
    (abc (and (on a b) (on b c) (ontable c) (clear a)))
    (cba (and (on c b) (on b a) (ontable a) (clear c)))))
)";

inline std::shared_ptr<const goalinf::pddl::Domain> domain(const std::string& text)
{
    return std::make_shared<const goalinf::pddl::Domain>(goalinf::pddl::parse_domain(text));
}

inline goalinf::pddl::Problem problem(const std::string& dom, const std::string& prob)
{
    return goalinf::pddl::parse_problem(prob, domain(dom));
}

}  // namespace testutil

#include "goalinf/domains/grid.hpp"

#include <deque>
#include <map>
#include <random>

namespace testutil {

inline std::string data_path(const std::string& rel) { return std::string(GOALINF_DATA_DIR) + "/" + rel; }

inline std::shared_ptr<const goalinf::pddl::Domain> dkg_domain()
{
    static auto d = domain(goalinf::pddl::read_file(data_path("domains/doors-keys-gems/domain.pddl")));
    return d;
}

/// Grid BFS on the raw map, doors treated as walls. -1 when unreachable.
inline int bfs_distance(const goalinf::domains::GridMap& m, std::pair<int, int> from, std::pair<int, int> to)
{
    std::map<std::pair<int, int>, int> dist;
    std::deque<std::pair<int, int>> q{from};
    dist[from] = 0;
    while (!q.empty()) {
        auto [x, y] = q.front();
        q.pop_front();
        if (std::pair{x, y} == to)
            return dist[to];
        const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            std::pair<int, int> n{x + dx[k], y + dy[k]};
            if (!m.walkable(n.first, n.second) || m.at(n.first, n.second) == 'D' || dist.count(n))
                continue;
            dist[n] = dist[{x, y}] + 1;
            q.push_back(n);
        }
    }
    return -1;
}

struct RandomGrid
{
    goalinf::domains::GridMap map;
    std::pair<int, int> start, goal;
    int shortest = -1;
};

/// Random walled grid with a reachable navigation goal.
inline RandomGrid random_grid(std::mt19937_64& rng, int max_side = 7, double wall_p = 0.25)
{
    std::uniform_int_distribution<int> side(2, max_side);
    std::bernoulli_distribution wall(wall_p);
    for (;;) {
        const int w = side(rng), h = side(rng);
        goalinf::domains::GridMap m;
        m.rows.assign(static_cast<std::size_t>(h), std::string(static_cast<std::size_t>(w), '.'));
        for (int y = 1; y <= h; ++y)
            for (int x = 1; x <= w; ++x)
                if (wall(rng))
                    m.set(x, y, '#');
        std::uniform_int_distribution<int> ux(1, w), uy(1, h);
        RandomGrid g;
        g.start = {ux(rng), uy(rng)};
        g.goal = {ux(rng), uy(rng)};
        if (!m.walkable(g.start.first, g.start.second) || !m.walkable(g.goal.first, g.goal.second))
            continue;
        g.shortest = bfs_distance(m, g.start, g.goal);
        if (g.shortest < 0)
            continue;
        m.set(g.start.first, g.start.second, 's');
        g.map = m;
        return g;
    }
}

inline goalinf::pddl::Problem navigation(const goalinf::domains::GridMap& m, std::vector<std::pair<int, int>> goals)
{
    return goalinf::pddl::parse_problem(goalinf::domains::navigation_problem_text(m, "nav", goals), dkg_domain());
}

inline goalinf::domains::GridMap open_grid(int w, int h, int sx, int sy)
{
    goalinf::domains::GridMap m;
    m.rows.assign(static_cast<std::size_t>(h), std::string(static_cast<std::size_t>(w), '.'));
    m.set(sx, sy, 's');
    return m;
}

}  // namespace testutil
