#pragma once

#include <cstdint>
#include <vector>

#include "nocsched/workload.hpp"

namespace nocsched {

/// A deliberately tiny two-core queueing model with discretized per-core
/// temperature levels. Small enough that the optimal average-reward policy
/// can be computed exactly, yet it keeps the structure of the full problem:
/// decisions at arrival/transition epochs, random holding times, and a
/// reward that accrues at a state-dependent rate between decisions.
struct ToySmdpParams {
    double lambda = 1.0;   // arrival rate
    double mu = 1.0;       // per-core service rate
    double nu_up = 1.5;    // temperature level up-rate while busy
    double nu_down = 1.0;  // temperature level down-rate while idle
    int temp_levels = 3;   // per-core levels 0 .. temp_levels-1
    int queue_cap = 2;     // arrivals beyond the cap are lost
    double margin_scale = 1.0;
};

struct ToyState {
    int h[2];  // per-core temperature level
    int b[2];  // per-core busy flag
    int q;     // queued tasks
};

/// Actions: 0 = no assignment, 1 = assign head of queue to core 0,
/// 2 = assign to core 1.
class ToySmdp {
  public:
    static constexpr int kActions = 3;

    explicit ToySmdp(ToySmdpParams params = {});

    const ToySmdpParams& params() const { return params_; }
    int state_count() const { return state_count_; }
    int encode(const ToyState& s) const;
    ToyState decode(int code) const;

    std::vector<int> feasible_actions(int state) const;

    /// Reward accrual rate in the (post-decision) state.
    double reward_rate(const ToyState& s) const;

    struct Outcome {
        int state;
        double prob;
    };
    /// Exact one-epoch model: expected holding time, expected reward and the
    /// embedded transition distribution for (state, action).
    void dynamics(int state, int action, double* expected_dt,
                  double* expected_reward, std::vector<Outcome>* outcomes) const;

    struct Step {
        int next_state;
        double dt;
        double reward;
    };
    /// Generative sampler for learners: applies the action, races the
    /// exponential events and accrues reward at the post-decision rate.
    Step step(int state, int action, Rng& rng) const;

  private:
    ToyState apply_action(ToyState s, int action) const;
    struct EventList;
    void enabled_events(const ToyState& post, EventList* out) const;

    ToySmdpParams params_;
    int state_count_;
};

struct RviResult {
    double rho = 0.0;                     // optimal average reward per second
    std::vector<double> bias;             // relative value per state
    std::vector<std::vector<double>> q;   // q[state][action], feasible only
    int iterations = 0;
    double final_span = 0.0;
};

/// Relative value iteration on the uniformized discrete-time equivalent of
/// the semi-Markov model; stops when the span seminorm of successive bias
/// differences drops below tol.
RviResult relative_value_iteration(const ToySmdp& smdp, double tol = 1e-8,
                                   int max_iterations = 2000000);

/// Optimal action set (ties included) per state, from an RviResult.
std::vector<std::vector<int>> greedy_actions(const ToySmdp& smdp,
                                             const RviResult& rvi,
                                             double tie_tol = 1e-9);

/// States reachable from the empty/cold/idle state under any action choice.
std::vector<uint8_t> reachable_states(const ToySmdp& smdp);

struct ToyLearningReport {
    double rho_hat = 0.0;        // tail-averaged reference value
    int decision_states = 0;     // reachable states with >= 2 feasible actions
    int agreeing_states = 0;     // where the learned greedy action is optimal
    std::vector<double> q_avg;   // tail-averaged table, [state * 3 + action]
};

/// Runs per-pair-rate tabular learning on the toy model for the given number
/// of updates, reading the result off a Polyak tail average of the table
/// (the average over the last (1 - tail_skip) fraction of updates smooths the
/// stochastic-approximation noise without changing the fixed point).
ToyLearningReport run_toy_learning(const ToySmdp& smdp, const RviResult& rvi,
                                   int64_t updates, uint64_t seed,
                                   double lr_a = 50.0, double lr_b = 1000.0,
                                   double eps_floor = 0.25,
                                   double tail_skip = 0.25);

}  // namespace nocsched
