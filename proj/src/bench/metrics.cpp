#include "goalinf/bench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace goalinf::bench {

std::array<std::size_t, 3> quartile_indices(std::size_t T)
{
    if (T == 0)
        throw std::invalid_argument("quartiles of an empty trajectory");
    return {(T + 3) / 4, (2 * T + 3) / 4, (3 * T + 3) / 4};
}

QuartileMetrics quartile_metrics(std::span<const PosteriorSnapshot> snaps, std::size_t true_goal, std::size_t T)
{
    if (snaps.size() < T)
        throw std::invalid_argument("snapshots do not cover the trajectory");
    QuartileMetrics m;
    const auto idx = quartile_indices(T);
    for (int q = 0; q < 3; ++q) {
        const auto& p = snaps[idx[q] - 1].probs;
        if (true_goal >= p.size())
            throw std::out_of_range("true goal index out of range");
        const double best = *std::max_element(p.begin(), p.end());
        const auto ties = static_cast<std::size_t>(std::count(p.begin(), p.end(), best));
        m.prob[q] = p[true_goal];
        const bool top = p[true_goal] == best;
        m.top1_strict[q] = top && ties == 1 ? 1.0 : 0.0;
        m.top1_chance[q] = top ? 1.0 / static_cast<double>(ties) : 0.0;
    }
    return m;
}

Stat summarize(std::span<const double> xs)
{
    Stat s;
    if (xs.empty())
        return s;
    double sum = 0;
    for (double x : xs)
        sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0;
        for (double x : xs)
            ss += (x - s.mean) * (x - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return s;
}

MetricsRow aggregate(const std::string& domain, const std::string& method,
                     std::span<const TrajectoryScore> scores, std::size_t failed)
{
    MetricsRow row;
    row.domain = domain;
    row.method = method;
    row.n = scores.size();
    row.failed = failed;
    auto column = [&](auto get) {
        std::vector<double> v;
        v.reserve(scores.size());
        for (const auto& s : scores)
            v.push_back(get(s));
        return summarize(v);
    };
    for (int q = 0; q < 3; ++q) {
        row.prob[q] = column([q](const TrajectoryScore& s) { return s.quartiles.prob[q]; });
        row.top1[q] = column([q](const TrajectoryScore& s) { return s.quartiles.top1_chance[q]; });
        row.top1_strict[q] = column([q](const TrajectoryScore& s) { return s.quartiles.top1_strict[q]; });
    }
    row.c0 = column([](const TrajectoryScore& s) { return s.c0; });
    row.mc = column([](const TrajectoryScore& s) { return s.mc; });
    row.ac = column([](const TrajectoryScore& s) { return s.ac; });
    row.nodes = column([](const TrajectoryScore& s) { return s.nodes; });
    return row;
}

const std::vector<std::string>& wall_clock_columns()
{
    static const std::vector<std::string> cols{"c0", "mc", "ac", "sd_c0", "sd_mc", "sd_ac"};
    return cols;
}

std::vector<std::string> csv_header()
{
    return {"domain",    "method",    "n",         "failed",         "p_q1",           "p_q2",
            "p_q3",      "top1_q1",   "top1_q2",   "top1_q3",        "c0",             "mc",
            "ac",        "nodes",     "sd_p_q1",   "sd_p_q2",        "sd_p_q3",        "sd_top1_q1",
            "sd_top1_q2", "sd_top1_q3", "sd_c0",   "sd_mc",          "sd_ac",          "sd_nodes",
            "top1_strict_q1", "top1_strict_q2", "top1_strict_q3"};
}

void write_csv_header(std::ostream& os)
{
    const auto h = csv_header();
    for (std::size_t i = 0; i < h.size(); ++i)
        os << (i ? "," : "") << h[i];
    os << "\n";
}

namespace {

std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

}  // namespace

void write_csv_row(std::ostream& os, const MetricsRow& r)
{
    os << r.domain << "," << r.method << "," << r.n << "," << r.failed;
    for (const auto& s : r.prob)
        os << "," << num(s.mean);
    for (const auto& s : r.top1)
        os << "," << num(s.mean);
    os << "," << num(r.c0.mean) << "," << num(r.mc.mean) << "," << num(r.ac.mean) << "," << num(r.nodes.mean);
    for (const auto& s : r.prob)
        os << "," << num(s.sd);
    for (const auto& s : r.top1)
        os << "," << num(s.sd);
    os << "," << num(r.c0.sd) << "," << num(r.mc.sd) << "," << num(r.ac.sd) << "," << num(r.nodes.sd);
    for (const auto& s : r.top1_strict)
        os << "," << num(s.mean);
    os << "\n";
}

}  // namespace goalinf::bench
