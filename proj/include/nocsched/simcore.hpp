#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "nocsched/mesh.hpp"
#include "nocsched/schedulers.hpp"
#include "nocsched/thermal.hpp"
#include "nocsched/workload.hpp"

namespace nocsched {

/// State triple seen by the scheduler: temperatures, busy flags, task count.
struct SystemState {
    std::vector<double> temps;
    std::vector<uint8_t> busy;
    int64_t task_count = 0;

    int busy_count() const;
    int queue_length() const { return static_cast<int>(task_count) - busy_count(); }
};

enum class EventKind : uint8_t { TaskArrival, TaskDeparture, QuotaTick, PairingEnd };

struct Event {
    double time;
    uint64_t seq;  // FIFO tie-break
    EventKind kind;
    int64_t task_id = -1;
};

/// One SMDP transition: previous decision pair, the state at the next
/// decision, and the reward/time accumulated in between.
struct TransitionRecord {
    SystemState from;
    Action action;
    SystemState to;
    double reward_ks = 0.0;
    double elapsed_s = 0.0;
};

struct DecisionRow {
    int64_t k;
    double time_s;
    EventKind event_kind;
    int action_core;
    int action_level;
    double reward_ks;
    double dt_s;
    double peak_k;
    int queue_len;
};

struct SimConfig {
    int rows = 4;
    int cols = 4;
    TaskTypeTable table = TaskTypeTable::builtin();
    std::vector<VfLevel> levels = default_vf_levels();
    int fixed_level = 2;  // 1.1 V / 3.3 GHz, used by all non-DVFS modes
    double p_pair = 0.5;
    double comm_rate_xi = 0.0;  // 0 -> 1 / mean base time
    ThermalParams thermal;
    PowerParams power;
    double t_threshold_k = 358.0;
    double horizon_s = 600.0;
    double warmup_frac = 0.1;
    double quota_s = 0.1;       // LDT decision quota
    bool quota_mode = false;    // decisions only on quota ticks
    bool point_reward = false;  // rectangle reward from the epoch's margin sample
    bool keep_trace = true;
    bool keep_service_samples = true;
    uint64_t seed = 1;

    /// Scales every per-type arrival rate so the aggregate equals lambda.
    void set_lambda(double lambda);
    double lambda() const { return table.aggregate_rate(); }
    double default_xi() const;
};

struct RunSummary {
    std::string scheduler;
    int rows = 0, cols = 0;
    double lambda = 0.0;
    uint64_t seed = 0;
    double avg_peak_k = 0.0;
    double avg_service_s = 0.0;
    bool has_service = false;
    double total_dyn_energy_j = 0.0;
    double mean_queue_len = 0.0;
    int64_t decisions = 0;
    int64_t completed = 0;
    std::vector<double> tile_dyn_energy_j;       // post-warm-up, per tile
    std::vector<double> tile_core_dyn_energy_j;  // core share only, per tile
    std::array<double, 4> queue_quarter_avg{};   // whole-horizon quarters
    double measure_window_s = 0.0;
};

struct RunResult {
    RunSummary summary;
    std::vector<DecisionRow> trace;
    std::vector<double> service_samples_s;  // completions after warm-up
    std::vector<double> final_temps_k;
};

/// Single-threaded continuous-time event loop. One instance per run.
class Simulator {
  public:
    Simulator(SimConfig cfg, Scheduler& scheduler);

    RunResult run();

    /// Per-snapshot heatmap dump: every `every_s` seconds of simulated time a
    /// matrix of temperatures (one line per mesh row), snapshots separated by
    /// a blank line.
    void enable_heatmap(const std::string& path, double every_s);

  private:
    struct CoreSlot {
        bool busy = false;
        int64_t task_id = -1;
        double busy_since = 0.0;
        double busy_accum = 0.0;
    };

    void schedule(double time, EventKind kind, int64_t task_id);
    void schedule_next_arrival();
    void advance_thermal_to(double t);
    void refresh_power();
    void handle_arrival(const Event& ev);
    void handle_departure(const Event& ev);
    void handle_quota_tick(const Event& ev);
    void handle_pairing_end(const Event& ev);
    void make_decision(EventKind trigger);
    SystemState snapshot_state() const;
    std::vector<PairCandidate> unpaired_running_sorted() const;
    bool any_idle() const;
    void add_queue_time(double t0, double t1, int qlen);

    SimConfig cfg_;
    Scheduler* sched_;
    Mesh mesh_;
    ThermalField field_;
    Rng rng_arrival_, rng_pairing_, rng_sched_, rng_thermal_;

    std::priority_queue<Event, std::vector<Event>,
                        bool (*)(const Event&, const Event&)> events_;
    uint64_t event_seq_ = 0;

    std::vector<TaskInstance> tasks_;
    std::deque<int64_t> queue_;
    std::vector<CoreSlot> cores_;
    std::vector<double> injection_;  // per-tile summed injection rates
    std::vector<double> power_w_;    // cached per-tile total power
    std::vector<double> dyn_w_;      // cached per-tile dynamic power
    std::vector<double> core_dyn_w_;  // cached per-tile core-only dynamic power
    int64_t task_count_ = 0;  // kappa

    double clock_ = 0.0;
    double thermal_time_ = 0.0;
    double margin_now_ = 0.0;
    double peak_now_ = 0.0;

    // transition accumulation between decisions
    double acc_reward_ = 0.0;
    double last_decision_t_ = 0.0;
    int64_t decision_k_ = 0;

    // metrics
    double warmup_end_ = 0.0;
    double peak_integral_ = 0.0;
    double queue_integral_ = 0.0;
    double last_queue_change_t_ = 0.0;
    std::array<double, 4> queue_quarter_integral_{};
    std::vector<double> tile_dyn_energy_;
    std::vector<double> tile_core_dyn_energy_;
    std::vector<double> service_samples_;
    int64_t completed_ = 0;
    int64_t arrived_ = 0;
    std::vector<DecisionRow> trace_;

    std::string heatmap_path_;
    double heatmap_every_s_ = 0.0;
    double next_heatmap_t_ = 0.0;
};

}  // namespace nocsched
