#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nocsched/mesh.hpp"

namespace nocsched {

using Rng = std::mt19937_64;

/// A discrete voltage/frequency operating point.
struct VfLevel {
    double volts;
    double ghz;
};

/// The four operating points used throughout the defaults.
const std::vector<VfLevel>& default_vf_levels();

struct TaskType {
    int type;
    int subtype;
    double base_time_s;   // pure execution time at the maximum frequency
    double arrival_rate;  // tasks per second
};

/// Per-(type, subtype) base execution times and arrival rates.
class TaskTypeTable {
  public:
    explicit TaskTypeTable(std::vector<TaskType> entries);

    static TaskTypeTable builtin();
    static TaskTypeTable load(const std::string& path);
    void save(const std::string& path) const;

    const std::vector<TaskType>& entries() const { return entries_; }
    double aggregate_rate() const { return aggregate_rate_; }
    double mean_base_time() const;

    /// zeta_{i,n,l}: base time scaled by f_max / f_level.
    double exec_time(int entry_index, const VfLevel& level,
                     const std::vector<VfLevel>& levels) const;

    /// Samples an entry index with probability proportional to its rate.
    int sample_type(Rng& rng) const;

  private:
    std::vector<TaskType> entries_;
    double aggregate_rate_;
    std::vector<double> cum_;
};

struct Pairing {
    int64_t partner = -1;         // task id of the partner
    double duration_s = 0.0;      // communication duration
    double injection_rate = 0.0;  // in [0, 1]
    Route route;                  // routers between the two cores
};

struct TaskInstance {
    int64_t id = -1;
    int type_index = -1;  // row of the TaskTypeTable
    double arrival_s = 0.0;
    int core = -1;   // -1 until assigned
    int level = -1;  // V-F level index, -1 until assigned
    double assign_s = -1.0;
    double depart_s = -1.0;
    double exec_s = 0.0;  // pure execution time at the assigned level
    std::optional<Pairing> pairing;
    bool pairing_active = false;  // pairing communication still in progress
    bool paired_passive = false;  // currently the partner of someone else's pairing
};

struct ArrivalSample {
    double interarrival_s;
    int type_index;
};

/// Exponential interarrival plus type draw (Poisson merge of per-type streams).
ArrivalSample next_arrival(const TaskTypeTable& table, Rng& rng);

/// Candidate descriptor for pairing: a running, currently unpaired task.
struct PairCandidate {
    int64_t task_id;
    int core;
};

/// With probability p_pair and a nonempty candidate set, picks a partner
/// uniformly, draws an Exponential(xi) duration and a Uniform[0,1] injection
/// rate, and routes between the two cores. Candidates must be sorted by id.
std::optional<Pairing> try_pair(int new_task_core,
                                const std::vector<PairCandidate>& candidates,
                                const Mesh& mesh, Rng& rng, double p_pair,
                                double xi);

/// Pure execution time plus communication time when paired.
double total_service_time(double exec_s, const std::optional<Pairing>& pairing);

}  // namespace nocsched
