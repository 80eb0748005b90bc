#pragma once

#include <string>
#include <utility>
#include <vector>

namespace goalinf::domains {

/// ASCII grid map. Row 0 is y = 1 and column 0 is x = 1.
///   '.' free   '#' wall   'D' locked door   'k' key   's' agent start
///   'r' 'y' 'b' 'g' 'p' gems (colour initial)
/// Taxi maps additionally use 'R' 'G' 'B' 'Y' for depots.
struct GridMap
{
    std::vector<std::string> rows;

    [[nodiscard]] int width() const { return rows.empty() ? 0 : static_cast<int>(rows[0].size()); }
    [[nodiscard]] int height() const { return static_cast<int>(rows.size()); }
    [[nodiscard]] char at(int x, int y) const { return rows[static_cast<std::size_t>(y - 1)][static_cast<std::size_t>(x - 1)]; }
    void set(int x, int y, char c) { rows[static_cast<std::size_t>(y - 1)][static_cast<std::size_t>(x - 1)] = c; }
    [[nodiscard]] bool in_bounds(int x, int y) const { return x >= 1 && y >= 1 && x <= width() && y <= height(); }
    [[nodiscard]] bool walkable(int x, int y) const { return in_bounds(x, y) && at(x, y) != '#'; }
};

std::string gem_label(char c);

/// Doors/keys/gems problem; goals are "has gem-<colour>" for every gem.
std::string dkg_problem_text(const GridMap& map, const std::string& name);

/// Pure navigation on the doors-keys-gems domain: each goal is an (x, y)
/// target labelled "x<x>-y<y>".
std::string navigation_problem_text(const GridMap& map, const std::string& name,
                                    const std::vector<std::pair<int, int>>& goals);

/// Taxi problem: passenger waits at depot `passenger`; goals deliver it to
/// each other depot.
std::string taxi_problem_text(const GridMap& map, const std::string& name, char passenger);

}  // namespace goalinf::domains
