#pragma once

#include <string>
#include <vector>

#include "nocsched/simcore.hpp"

namespace nocsched {

struct MeanCi {
    double mean = 0.0;
    double half_width = 0.0;  // 95% confidence half-width
    int n = 0;

    double lo() const { return mean - half_width; }
    double hi() const { return mean + half_width; }
};

double mean_of(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs);
MeanCi mean_ci95(const std::vector<double>& xs);

/// True when the two intervals do not overlap and a's upper end sits below
/// b's lower end.
bool ci_below(const MeanCi& a, const MeanCi& b);

/// Per-window sample variance of a scalar history; requires at least
/// two full windows. Trailing samples short of a window are dropped.
std::vector<double> windowed_variance(const std::vector<double>& history,
                                      int window);

/// Welch's t statistic for a difference in means (used for two-sided
/// significance checks without assuming equal variances).
double welch_t(const std::vector<double>& a, const std::vector<double>& b);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b);

std::string event_kind_name(EventKind kind);

/// Writes the decision trace CSV. Extra header comment lines (each written
/// with a leading "# ") can carry the resolved configuration.
void write_trace_csv(const std::string& path, const std::vector<DecisionRow>& rows,
                     const std::vector<std::string>& header_comments = {});

void write_summary_csv(const std::string& path,
                       const std::vector<RunSummary>& rows,
                       const std::vector<std::string>& header_comments = {});

}  // namespace nocsched
