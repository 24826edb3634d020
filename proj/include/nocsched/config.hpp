#pragma once

#include <array>
#include <string>
#include <vector>

#include "nocsched/schedulers.hpp"
#include "nocsched/simcore.hpp"

namespace nocsched {

/// Sweep axes. Empty axes fall back to the single base value.
struct SweepGrid {
    std::vector<double> lambdas;
    std::vector<std::array<int, 2>> meshes;  // {rows, cols}
    std::vector<std::string> schedulers;
    std::vector<int> centers;  // temperature-bank sizes x
};

/// Full experiment description with shipped defaults: 4x4 mesh, aggregate
/// arrival rate 8.41/s over the built-in task-type table, threshold 358 K,
/// A = 50, B = 1000, x = 2 temperature centers.
struct ExperimentConfig {
    SimConfig sim;
    std::string scheduler = "dvfs";
    int bank_x = 2;
    std::array<int, 4> ir_x = {2, 2, 2, 2};
    double lr_a = 50.0;
    double lr_b = 1000.0;
    double eps_floor = 0.05;
    double eps_halflife = 500.0;
    std::vector<uint64_t> seeds = {1};
    std::string out_dir = "out";
    std::string task_table_path;  // empty -> built-in table
    double lambda = 0.0;          // 0 -> table aggregate
    int trials = 1;               // theta carries over between trials of a seed
    double heatmap_every_s = 0.0;
    SweepGrid grid;
    int sweep_cap = 512;

    /// Parses the JSON config file; unknown keys and type mismatches raise
    /// std::runtime_error naming the offending field path.
    static ExperimentConfig load(const std::string& path);
    static ExperimentConfig parse(const std::string& json_text);

    /// SimConfig with lambda/table/scheduler-mode effects applied.
    SimConfig resolved_sim(const std::string& sched_name, uint64_t seed) const;
    LearnerConfig learner(const std::string& sched_name) const;

    /// Human-readable resolved settings for CSV header comments.
    std::vector<std::string> resolved_lines() const;
};

}  // namespace nocsched
