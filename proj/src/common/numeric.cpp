#include "goalinf/common/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace goalinf {

double log_sum_exp(std::span<const double> xs)
{
    double m = -kInf;
    for (double x : xs)
        m = std::max(m, x);
    if (m == -kInf)
        return -kInf;
    if (m == kInf)
        return kInf;
    double s = 0.0;
    for (double x : xs)
        s += std::exp(x - m);
    return m + std::log(s);
}

std::vector<double> softmax(std::span<const double> logits)
{
    double m = -kInf;
    for (double x : logits)
        m = std::max(m, x);
    if (!std::isfinite(m))
        throw std::domain_error("softmax of all -inf (or +inf) logits");
    std::vector<double> p(logits.size());
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        s += p[i] = std::exp(logits[i] - m);
    for (double& x : p)
        x /= s;
    return p;
}

std::vector<double> normalize_log_weights(std::span<const double> log_w) { return softmax(log_w); }

}  // namespace goalinf
