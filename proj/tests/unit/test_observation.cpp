#include "test_util.hpp"

#include "goalinf/common/numeric.hpp"
#include "goalinf/observation/noise.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace goalinf;
using namespace goalinf::observation;
using pddl::Problem;

namespace {

// Ten dynamic atoms, no fluents.
Problem ten_atoms()
{
    return testutil::problem(R"((define (domain ten) (:types thing) (:predicates (p ?t - thing))
        (:action set :parameters (?t - thing) :precondition (and) :effect (p ?t))))",
                             R"((define (problem q) (:domain ten) (:objects a b c d e f g h i j - thing)
        (:init (p a)) (:goal (p b))))");
}

Problem hundred_atoms()
{
    std::string objs;
    for (int i = 0; i < 100; ++i)
        objs += " o" + std::to_string(i);
    return testutil::problem(R"((define (domain many) (:types thing) (:predicates (p ?t - thing))
        (:action set :parameters (?t - thing) :precondition (and) :effect (p ?t))))",
                             "(define (problem q) (:domain many) (:objects" + objs + " - thing) (:init) (:goal (p o1)))");
}

}  // namespace

TEST_CASE("zero noise leaves the state unchanged")
{
    Problem pb = testutil::navigation(testutil::open_grid(4, 4, 2, 3), {{1, 1}});
    Rng rng(1);
    auto o = corrupt(pb, pb.initial_state(), NoiseModel{0, 0}, rng);
    CHECK(o == observe_exact(pb, pb.initial_state()));
    CHECK(log_likelihood(o, pb.initial_state(), NoiseModel{0, 0}) == 0.0);
    o.fluents[0] += 1;
    CHECK(log_likelihood(o, pb.initial_state(), NoiseModel{0, 0}) == -kInf);
}

TEST_CASE("flip count averages five on a 100-atom vocabulary")
{
    Problem pb = hundred_atoms();
    REQUIRE(pb.dynamic_atom_count() == 100);
    Rng rng(2);
    double total = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i)
        total += static_cast<double>(atom_mismatches(corrupt(pb, pb.initial_state(), {0.05, 0}, rng), pb.initial_state()));
    // Binomial(1e6, 0.05) mean per trial 5, sd of the average ~0.022.
    CHECK(std::abs(total / n - 5.0) < 0.1);
}

TEST_CASE("fluent perturbation has standard deviation sigma")
{
    Problem pb = testutil::navigation(testutil::open_grid(3, 3, 1, 1), {{3, 3}});
    Rng rng(3);
    double s2 = 0;
    std::size_t n = 0;
    for (int i = 0; i < 50000; ++i) {
        auto o = corrupt(pb, pb.initial_state(), {0, 0.25}, rng);
        for (std::size_t k = 0; k < o.fluents.size(); ++k, ++n) {
            const double d = o.fluents[k] - static_cast<double>(pb.initial_state().fluents[k]);
            s2 += d * d;
        }
    }
    CHECK(n >= 100000);
    CHECK(std::abs(std::sqrt(s2 / static_cast<double>(n)) - 0.25) < 0.01);
}

TEST_CASE("closed-form log likelihoods")
{
    Problem pb = ten_atoms();
    const auto& s = pb.initial_state();
    auto o = observe_exact(pb, s);
    CHECK(log_likelihood(o, s, {0.05, 0.25}) == doctest::Approx(10 * std::log(0.95)).epsilon(1e-12));
    o.bits[0] ^= 2;
    CHECK(log_likelihood(o, s, {0.05, 0.25}) ==
          doctest::Approx(9 * std::log(0.95) + std::log(0.05)).epsilon(1e-12));

    Problem grid = testutil::navigation(testutil::open_grid(3, 3, 1, 1), {{3, 3}});
    auto og = observe_exact(grid, grid.initial_state());
    REQUIRE(og.fluents.size() == 2);
    og.fluents[0] += 0.25;
    const double base = log_likelihood(observe_exact(grid, grid.initial_state()), grid.initial_state(), {0.05, 0.25});
    const double expected = -std::log(0.25 * std::sqrt(2 * std::numbers::pi)) - 0.5;
    const double one_sd = log_likelihood(og, grid.initial_state(), {0.05, 0.25});
    // Only the first fluent's term changes: from its peak density to one sd.
    CHECK(one_sd - base == doctest::Approx(expected + std::log(0.25 * std::sqrt(2 * std::numbers::pi))).epsilon(1e-12));
}

TEST_CASE("likelihood normalizes over a one-atom vocabulary")
{
    Problem pb = testutil::problem(R"((define (domain one) (:predicates (p))
        (:action set :parameters () :precondition (and) :effect (p))))",
                                   "(define (problem q) (:domain one) (:init) (:goal (p)))");
    for (double p : {0.01, 0.05, 0.2, 0.45}) {
        auto o = observe_exact(pb, pb.initial_state());
        const double a = std::exp(log_likelihood(o, pb.initial_state(), {p, 0}));
        o.bits[0] ^= 1;
        const double b = std::exp(log_likelihood(o, pb.initial_state(), {p, 0}));
        CHECK(std::abs(a + b - 1.0) < 1e-12);
    }
}

TEST_CASE("more mismatches give strictly lower likelihood")
{
    Problem pb = ten_atoms();
    auto o = observe_exact(pb, pb.initial_state());
    double prev = log_likelihood(o, pb.initial_state(), {0.05, 0.25});
    for (int i = 0; i < 10; ++i) {
        o.bits[0] ^= std::uint64_t{1} << i;
        const double ll = log_likelihood(o, pb.initial_state(), {0.05, 0.25});
        CHECK(ll < prev);
        prev = ll;
    }
}

TEST_CASE("average log likelihood of corrupted samples matches the expectation")
{
    Problem pb = testutil::navigation(testutil::open_grid(4, 4, 2, 2), {{4, 4}});
    const NoiseModel nm{0.05, 0.25};
    Rng rng(4);
    const int n = 10000;
    double total = 0;
    for (int i = 0; i < n; ++i)
        total += log_likelihood(corrupt(pb, pb.initial_state(), nm, rng), pb.initial_state(), nm);
    const double V = static_cast<double>(pb.dynamic_atom_count());
    const double F = static_cast<double>(pb.dynamic_fluent_count());
    const double expected = V * (0.95 * std::log(0.95) + 0.05 * std::log(0.05)) +
                            F * (-std::log(0.25 * std::sqrt(2 * std::numbers::pi)) - 0.5);
    CHECK(std::abs(total / n - expected) < 0.05);
}
