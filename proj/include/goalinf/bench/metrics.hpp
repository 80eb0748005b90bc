#pragma once

#include "goalinf/common/posterior.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace goalinf::bench {

/// 1-based snapshot indices ceil(qT/4) for q = 1, 2, 3.
std::array<std::size_t, 3> quartile_indices(std::size_t T);

struct QuartileMetrics
{
    std::array<double, 3> prob{};
    /// 1 when the true goal is the unique argmax.
    std::array<double, 3> top1_strict{};
    /// 1/|argmax| when the true goal is in the argmax set.
    std::array<double, 3> top1_chance{};
};

/// Snapshots must cover t = 1..T in order.
QuartileMetrics quartile_metrics(std::span<const PosteriorSnapshot> snaps, std::size_t true_goal, std::size_t T);

struct Stat
{
    double mean = 0;
    double sd = 0;  // sample standard deviation, 0 for fewer than two values
};

Stat summarize(std::span<const double> xs);

/// Per-trajectory outcome of one method.
struct TrajectoryScore
{
    QuartileMetrics quartiles;
    double c0 = 0;  // seconds
    double mc = 0;
    double ac = 0;
    double nodes = 0;
};

struct MetricsRow
{
    std::string domain;
    std::string method;
    std::size_t n = 0;
    std::size_t failed = 0;
    std::array<Stat, 3> prob;
    std::array<Stat, 3> top1;  // chance credit
    std::array<Stat, 3> top1_strict;
    Stat c0, mc, ac, nodes;
};

/// Aggregates scores in the given order.
MetricsRow aggregate(const std::string& domain, const std::string& method,
                     std::span<const TrajectoryScore> scores, std::size_t failed);

/// Columns whose values depend on wall-clock time.
const std::vector<std::string>& wall_clock_columns();
std::vector<std::string> csv_header();
void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const MetricsRow& row);

}  // namespace goalinf::bench
