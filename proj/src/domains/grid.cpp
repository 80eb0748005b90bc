#include "goalinf/domains/grid.hpp"

#include <sstream>
#include <stdexcept>

namespace goalinf::domains {

std::string gem_label(char c)
{
    switch (c) {
    case 'r': return "red";
    case 'y': return "yellow";
    case 'b': return "blue";
    case 'g': return "green";
    case 'p': return "purple";
    }
    throw std::invalid_argument(std::string("not a gem glyph: ") + c);
}

namespace {

bool is_gem(char c) { return c == 'r' || c == 'y' || c == 'b' || c == 'g' || c == 'p'; }

std::string cell_name(int x, int y) { return "c" + std::to_string(x) + "-" + std::to_string(y); }

struct Writer
{
    std::ostringstream objects, init;
};

void write_cells(const GridMap& m, Writer& w, bool doors)
{
    int sx = 0, sy = 0;
    for (int y = 1; y <= m.height(); ++y) {
        for (int x = 1; x <= m.width(); ++x) {
            const char c = m.at(x, y);
            if (c == '#')
                continue;
            const std::string n = cell_name(x, y);
            w.objects << " " << n;
            w.init << "\n    (= (cx " << n << ") " << x << ") (= (cy " << n << ") " << y << ")";
            if (doors && c == 'D')
                w.init << " (locked " << n << ")";
            if (c == 's') {
                if (sx)
                    throw std::invalid_argument("grid map has two start cells");
                sx = x;
                sy = y;
            }
        }
    }
    if (!sx)
        throw std::invalid_argument("grid map has no start cell");
    w.objects << " - cell";
    w.init << "\n    (= (xpos) " << sx << ") (= (ypos) " << sy << ")";
}

}  // namespace

std::string dkg_problem_text(const GridMap& m, const std::string& name)
{
    Writer w;
    write_cells(m, w, true);
    std::ostringstream keys, gems, goals;
    int nk = 0;
    for (int y = 1; y <= m.height(); ++y) {
        for (int x = 1; x <= m.width(); ++x) {
            const char c = m.at(x, y);
            std::string item;
            if (c == 'k') {
                item = "key" + std::to_string(++nk);
                keys << " " << item;
            } else if (is_gem(c)) {
                item = "gem-" + gem_label(c);
                gems << " " << item;
                goals << "\n    (" << gem_label(c) << " (has " << item << "))";
            } else {
                continue;
            }
            w.init << "\n    (= (xloc " << item << ") " << x << ") (= (yloc " << item << ") " << y << ")";
        }
    }
    if (goals.str().empty())
        throw std::invalid_argument("grid map has no gems");
    std::ostringstream os;
    os << "(define (problem " << name << ")\n  (:domain doors-keys-gems)\n  (:objects" << w.objects.str();
    if (nk)
        os << keys.str() << " - key";
    os << gems.str() << " - gem)\n  (:init" << w.init.str() << ")\n  (:goals" << goals.str() << "))\n";
    return os.str();
}

std::string navigation_problem_text(const GridMap& m, const std::string& name,
                                    const std::vector<std::pair<int, int>>& goals)
{
    Writer w;
    write_cells(m, w, true);
    std::ostringstream os;
    os << "(define (problem " << name << ")\n  (:domain doors-keys-gems)\n  (:objects" << w.objects.str()
       << ")\n  (:init" << w.init.str() << ")\n  (:goals";
    for (auto [x, y] : goals)
        os << "\n    (x" << x << "-y" << y << " (and (= (xpos) " << x << ") (= (ypos) " << y << ")))";
    os << "))\n";
    return os.str();
}

std::string taxi_problem_text(const GridMap& m, const std::string& name, char passenger)
{
    Writer w;
    write_cells(m, w, false);
    std::ostringstream depots, goals;
    bool found = false;
    for (int y = 1; y <= m.height(); ++y) {
        for (int x = 1; x <= m.width(); ++x) {
            const char c = m.at(x, y);
            if (c != 'R' && c != 'G' && c != 'B' && c != 'Y')
                continue;
            const std::string d = std::string("depot-") + static_cast<char>(c - 'A' + 'a');
            depots << " " << d;
            w.init << "\n    (= (xloc " << d << ") " << x << ") (= (yloc " << d << ") " << y << ")";
            if (c == passenger) {
                w.init << " (pass-at " << d << ")";
                found = true;
            } else {
                goals << "\n    (" << d << " (pass-at " << d << "))";
            }
        }
    }
    if (!found)
        throw std::invalid_argument("taxi passenger depot not on map");
    std::ostringstream os;
    os << "(define (problem " << name << ")\n  (:domain taxi)\n  (:objects" << w.objects.str() << depots.str()
       << " - depot)\n  (:init" << w.init.str() << ")\n  (:goals" << goals.str() << "))\n";
    return os.str();
}

}  // namespace goalinf::domains
