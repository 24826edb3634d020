#include "nocsched/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace nocsched {

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean of empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

namespace {

// Two-sided 97.5% Student-t quantiles for small n, normal tail beyond.
double t_quantile_975(int dof) {
    static const double table[] = {0,     12.706, 4.303, 3.182, 2.776, 2.571,
                                   2.447, 2.365,  2.306, 2.262, 2.228, 2.201,
                                   2.179, 2.160,  2.145, 2.131, 2.120, 2.110,
                                   2.101, 2.093,  2.086, 2.080, 2.074, 2.069,
                                   2.064, 2.060,  2.056, 2.052, 2.048, 2.045,
                                   2.042};
    if (dof <= 0) return 0.0;
    if (dof <= 30) return table[dof];
    if (dof <= 60) return 2.0;
    return 1.96;
}

}  // namespace

MeanCi mean_ci95(const std::vector<double>& xs) {
    MeanCi out;
    out.n = static_cast<int>(xs.size());
    out.mean = mean_of(xs);
    if (out.n >= 2) {
        const double se = std::sqrt(sample_variance(xs) / out.n);
        out.half_width = t_quantile_975(out.n - 1) * se;
    }
    return out;
}

bool ci_below(const MeanCi& a, const MeanCi& b) { return a.hi() < b.lo(); }

std::vector<double> windowed_variance(const std::vector<double>& history,
                                      int window) {
    if (window < 2) throw std::invalid_argument("window must hold >= 2 samples");
    const int count = static_cast<int>(history.size()) / window;
    if (count < 2) throw std::invalid_argument("need at least two full windows");
    std::vector<double> out;
    out.reserve(count);
    for (int w = 0; w < count; ++w) {
        std::vector<double> chunk(history.begin() + w * window,
                                  history.begin() + (w + 1) * window);
        out.push_back(sample_variance(chunk));
    }
    return out;
}

double welch_t(const std::vector<double>& a, const std::vector<double>& b) {
    const double va = sample_variance(a) / static_cast<double>(a.size());
    const double vb = sample_variance(b) / static_cast<double>(b.size());
    return (mean_of(a) - mean_of(b)) / std::sqrt(va + vb);
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        // Both empirical CDFs jump together at a shared value, so consume the
        // whole tie group from each side before sampling the gap.
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

std::string event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::TaskArrival: return "arrival";
        case EventKind::TaskDeparture: return "departure";
        case EventKind::QuotaTick: return "quota";
        case EventKind::PairingEnd: return "pairing_end";
    }
    return "?";
}

namespace {

std::ofstream open_csv(const std::string& path,
                       const std::vector<std::string>& comments) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(12);
    for (const auto& line : comments) out << "# " << line << '\n';
    return out;
}

}  // namespace

void write_trace_csv(const std::string& path, const std::vector<DecisionRow>& rows,
                     const std::vector<std::string>& header_comments) {
    auto out = open_csv(path, header_comments);
    out << "k,time_s,event_kind,action_core,action_level,reward_Ks,dt_s,peak_K,"
           "queue_len\n";
    for (const auto& r : rows)
        out << r.k << ',' << r.time_s << ',' << event_kind_name(r.event_kind)
            << ',' << r.action_core << ',' << r.action_level << ','
            << r.reward_ks << ',' << r.dt_s << ',' << r.peak_k << ','
            << r.queue_len << '\n';
}

void write_summary_csv(const std::string& path,
                       const std::vector<RunSummary>& rows,
                       const std::vector<std::string>& header_comments) {
    auto out = open_csv(path, header_comments);
    out << "scheduler,mesh,lambda,seed,avg_peak_K,avg_service_s,"
           "total_dyn_energy_J,mean_queue_len\n";
    for (const auto& r : rows) {
        out << r.scheduler << ',' << r.rows << 'x' << r.cols << ',' << r.lambda
            << ',' << r.seed << ',' << r.avg_peak_k << ',';
        if (r.has_service) out << r.avg_service_s;
        out << ',' << r.total_dyn_energy_j << ',' << r.mean_queue_len << '\n';
    }
}

}  // namespace nocsched
