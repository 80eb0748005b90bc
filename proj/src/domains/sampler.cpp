#include "goalinf/domains/bundle.hpp"

#include <algorithm>
#include <numeric>

namespace goalinf::domains {

using pddl::ObjectId;
using pddl::Problem;
using pddl::State;

namespace {

std::size_t atom(const Problem& pb, const char* pred, std::initializer_list<ObjectId> args)
{
    auto p = pb.domain().find_predicate(pred);
    if (!p)
        throw std::invalid_argument(std::string("domain lacks predicate ") + pred);
    std::vector<ObjectId> a(args);
    auto sl = pb.atom_slot(*p, a);
    if (!sl || sl->rigid)
        throw std::logic_error(std::string("not a dynamic atom: ") + pred);
    return sl->index;
}

std::size_t fluent(const Problem& pb, const char* name)
{
    auto f = pb.domain().find_fluent(name);
    if (!f)
        throw std::invalid_argument(std::string("domain lacks function ") + name);
    auto sl = pb.fluent_slot(*f, {});
    if (!sl || sl->rigid)
        throw std::logic_error(std::string("not a dynamic fluent: ") + name);
    return sl->index;
}

std::int64_t rigid(const Problem& pb, const char* name, ObjectId o)
{
    auto f = pb.domain().find_fluent(name);
    std::vector<ObjectId> a{o};
    auto sl = pb.fluent_slot(*f, a);
    return pb.rigid_fluent(sl->index);
}

const std::vector<ObjectId>& objects(const Problem& pb, const char* type)
{
    static const std::vector<ObjectId> none;
    auto t = pb.domain().find_type(type);
    return t ? pb.objects_of_type(*t) : none;
}

bool coin(Rng& rng, double p) { return uniform01(rng) < p; }

std::size_t below(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

StateSampler taxi(const Problem& pb)
{
    return [&pb](Rng& rng) {
        State s = pb.make_empty_state();
        const auto& cells = objects(pb, "cell");
        const auto& depots = objects(pb, "depot");
        const ObjectId c = cells[below(rng, cells.size())];
        s.fluents[fluent(pb, "xpos")] = rigid(pb, "cx", c);
        s.fluents[fluent(pb, "ypos")] = rigid(pb, "cy", c);
        const std::size_t where = below(rng, depots.size() + 1);
        if (where == depots.size())
            s.set(atom(pb, "in-taxi", {}), true);
        else
            s.set(atom(pb, "pass-at", {depots[where]}), true);
        return s;
    };
}

StateSampler doors_keys_gems(const Problem& pb)
{
    return [&pb](Rng& rng) {
        State s = pb.make_empty_state();
        const auto& cells = objects(pb, "cell");
        const ObjectId c = cells[below(rng, cells.size())];
        s.fluents[fluent(pb, "xpos")] = rigid(pb, "cx", c);
        s.fluents[fluent(pb, "ypos")] = rigid(pb, "cy", c);
        // Any cell but the agent's may hold a locked door.
        for (ObjectId d : cells)
            if (d != c && coin(rng, 0.5))
                s.set(atom(pb, "locked", {d}), true);
        // Keys lie on the floor, are carried, or were used up.
        for (ObjectId k : objects(pb, "key")) {
            switch (below(rng, 3)) {
            case 0: break;
            case 1:
                s.set(atom(pb, "taken", {k}), true);
                s.set(atom(pb, "has", {k}), true);
                break;
            default: s.set(atom(pb, "taken", {k}), true); break;
            }
        }
        for (ObjectId g : objects(pb, "gem")) {
            if (coin(rng, 0.2)) {
                s.set(atom(pb, "taken", {g}), true);
                s.set(atom(pb, "has", {g}), true);
            }
        }
        return s;
    };
}

StateSampler block_words(const Problem& pb)
{
    return [&pb](Rng& rng) {
        State s = pb.make_empty_state();
        std::vector<ObjectId> blocks = objects(pb, "block");
        std::shuffle(blocks.begin(), blocks.end(), rng);
        // Cut the permutation into towers listed bottom to top.
        std::vector<std::vector<ObjectId>> towers;
        for (ObjectId b : blocks) {
            if (towers.empty() || coin(rng, 0.4))
                towers.emplace_back();
            towers.back().push_back(b);
        }
        bool holding = coin(rng, 0.25);
        for (std::size_t i = 0; i < towers.size(); ++i) {
            auto& t = towers[i];
            if (holding && i + 1 == towers.size()) {
                s.set(atom(pb, "holding", {t.back()}), true);
                t.pop_back();
            }
            for (std::size_t j = 0; j < t.size(); ++j) {
                if (j == 0)
                    s.set(atom(pb, "ontable", {t[j]}), true);
                else
                    s.set(atom(pb, "on", {t[j], t[j - 1]}), true);
            }
            if (!t.empty())
                s.set(atom(pb, "clear", {t.back()}), true);
        }
        if (!holding)
            s.set(atom(pb, "handempty", {}), true);
        return s;
    };
}

StateSampler intrusion(const Problem& pb)
{
    return [&pb](Rng& rng) {
        State s = pb.make_empty_state();
        for (ObjectId h : objects(pb, "host")) {
            auto on = [&](const char* p) { return s.test(atom(pb, p, {h})); };
            auto maybe = [&](const char* p, bool pre) {
                if (pre && coin(rng, 0.4))
                    s.set(atom(pb, p, {h}), true);
            };
            maybe("recon-performed", true);
            for (const char* breach : {"root-access", "user-access", "vulnerability-exploited", "information-gathered"})
                maybe(breach, on("recon-performed"));
            maybe("vandalized", on("root-access"));
            maybe("ransomware-deployed", on("root-access"));
            maybe("data-stolen", on("user-access"));
            maybe("backdoor-installed", on("vulnerability-exploited"));
            maybe("service-denied", on("information-gathered"));
        }
        return s;
    };
}

}  // namespace

StateSampler state_sampler(const std::string& domain, const Problem& pb)
{
    if (domain == "taxi")
        return taxi(pb);
    if (domain == "doors-keys-gems")
        return doors_keys_gems(pb);
    if (domain == "block-words")
        return block_words(pb);
    if (domain == "intrusion-detection")
        return intrusion(pb);
    throw UnknownDomainError("no state sampler for domain " + domain);
}

}  // namespace goalinf::domains
