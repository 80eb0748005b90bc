#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace goalinf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// log(sum(exp(x))). Returns -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> xs);

/// Normalized probabilities exp(x_i - logsumexp(x)). All -inf input is an error.
std::vector<double> softmax(std::span<const double> logits);

/// Normalize log-weights into probabilities; -inf entries get 0.
std::vector<double> normalize_log_weights(std::span<const double> log_w);

}  // namespace goalinf
