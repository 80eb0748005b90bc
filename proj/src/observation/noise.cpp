#include "goalinf/observation/noise.hpp"

#include "goalinf/common/numeric.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace goalinf::observation {

void NoiseModel::validate() const
{
    if (!(flip_prob >= 0 && flip_prob < 0.5))
        throw std::invalid_argument("flip probability must lie in [0, 0.5)");
    if (!(sigma >= 0))
        throw std::invalid_argument("sigma must be >= 0");
}

Observation observe_exact(const pddl::Problem& pb, const pddl::State& s)
{
    Observation o;
    o.atom_count = pb.dynamic_atom_count();
    o.bits = s.bits;
    o.fluents.assign(s.fluents.begin(), s.fluents.end());
    return o;
}

Observation corrupt(const pddl::Problem& pb, const pddl::State& s, const NoiseModel& nm, Rng& rng)
{
    Observation o = observe_exact(pb, s);
    if (nm.flip_prob > 0) {
        for (std::size_t i = 0; i < o.atom_count; ++i)
            if (uniform01(rng) < nm.flip_prob)
                o.bits[i >> 6] ^= std::uint64_t{1} << (i & 63);
    }
    if (nm.sigma > 0) {
        std::normal_distribution<double> n(0.0, nm.sigma);
        for (auto& f : o.fluents)
            f += n(rng);
    }
    return o;
}

std::size_t atom_mismatches(const Observation& o, const pddl::State& s)
{
    std::size_t m = 0;
    for (std::size_t w = 0; w < o.bits.size(); ++w)
        m += static_cast<std::size_t>(std::popcount(o.bits[w] ^ s.bits[w]));
    return m;
}

double log_likelihood(const Observation& o, const pddl::State& s, const NoiseModel& nm)
{
    if (o.bits.size() != s.bits.size() || o.fluents.size() != s.fluents.size())
        throw std::invalid_argument("observation and state vocabularies differ");
    const std::size_t m = atom_mismatches(o, s);
    double ll = 0;
    if (nm.flip_prob == 0) {
        if (m)
            return -kInf;
    } else {
        ll += static_cast<double>(o.atom_count - m) * std::log1p(-nm.flip_prob) +
              static_cast<double>(m) * std::log(nm.flip_prob);
    }
    if (nm.sigma == 0) {
        for (std::size_t i = 0; i < o.fluents.size(); ++i)
            if (o.fluents[i] != static_cast<double>(s.fluents[i]))
                return -kInf;
    } else {
        const double norm = -std::log(nm.sigma * std::sqrt(2 * std::numbers::pi));
        for (std::size_t i = 0; i < o.fluents.size(); ++i) {
            const double z = (o.fluents[i] - static_cast<double>(s.fluents[i])) / nm.sigma;
            ll += norm - 0.5 * z * z;
        }
    }
    return ll;
}

}  // namespace goalinf::observation
