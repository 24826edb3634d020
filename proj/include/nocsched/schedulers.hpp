#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nocsched/features.hpp"
#include "nocsched/mesh.hpp"
#include "nocsched/workload.hpp"

namespace nocsched {

struct Action {
    int core = -1;
    int level = -1;  // index into the V-F level set
};

/// Everything a scheduler may look at when invoked for one decision.
struct DecisionContext {
    double now = 0.0;
    const std::vector<double>* temps = nullptr;
    const std::vector<uint8_t>* busy = nullptr;
    int64_t task_count = 0;
    const std::vector<PairCandidate>* unpaired_running = nullptr;  // sorted by id
    const std::vector<double>* utilization = nullptr;
    // transition observed since the previous decision
    double reward_ks = 0.0;
    double elapsed_s = 0.0;
};

enum class SchedMode { Dvfs, Ir, Lct, Ldt, Rand, Tbo };

std::string to_string(SchedMode mode);
SchedMode sched_mode_from_string(const std::string& s);

struct LearnerConfig {
    SchedMode mode = SchedMode::Dvfs;
    double lr_a = 50.0;    // A in alpha_k = A / (B + k)
    double lr_b = 1000.0;  // B
    double eps_floor = 0.05;
    double eps_halflife = 500.0;  // eps_k = max(floor, 1 / (1 + k / halflife))
    // The reference pair (whose value stands in for the average reward) is the
    // pair visited at update index ref_freeze_k and stays fixed afterwards.
    // Freezing at the very first decision would pin the reference to the
    // cold-start state, which never recurs once the chip has warmed up; its
    // value would then stop tracking the gain and the temporal-difference
    // error would keep a persistent bias.
    int64_t ref_freeze_k = 1000;
    int fixed_level = 2;          // level used by non-DVFS modes
    RbfBank bank = RbfBank::standard(2);        // 9-grid temperature bank
    std::array<RbfBank, 4> ir_banks = {RbfBank::standard(2), RbfBank::standard(2),
                                       RbfBank::standard(2), RbfBank::standard(2)};
};

/// Temperature-only learner configuration for the reimplemented baselines.
LearnerConfig baseline_learner_config(SchedMode mode);

/// Weight-vector length for a mode on a given machine.
int64_t theta_dim(const LearnerConfig& cfg, int core_count, int level_count);

double learning_rate(int64_t k, double a, double b);
double epsilon_schedule(int64_t k, const LearnerConfig& cfg);
double q_hat(const std::vector<double>& theta, const FeatureVector& phi);

/// One semi-gradient step: target = reward - Q(ref) * elapsed + max_b Q(s', b);
/// theta += alpha * (target - Q(phi_prev)) * phi_prev. The max term is 0 when
/// next_feasible is empty.
void smdp_update(std::vector<double>& theta, const FeatureVector& phi_prev,
                 double reward, double elapsed_s,
                 const std::vector<FeatureVector>& next_feasible, double alpha,
                 const FeatureVector& ref_phi);

/// Per-update convergence sample.
struct LearnerSample {
    int64_t k;
    double alpha;
    double q_ref;
    double q_chosen;
    std::array<double, 3> theta_track;
};

class Scheduler {
  public:
    virtual ~Scheduler() = default;
    virtual Action decide(const DecisionContext& ctx,
                          const std::vector<Action>& feasible, Rng& rng) = 0;
    virtual std::string name() const = 0;
    virtual const std::vector<LearnerSample>* diagnostics() const { return nullptr; }
};

class RandScheduler : public Scheduler {
  public:
    Action decide(const DecisionContext&, const std::vector<Action>& feasible,
                  Rng& rng) override;
    std::string name() const override { return "rand"; }
};

/// Minimal-cost assignment: cost = utilization / (1 + distance from center);
/// ties go to the cooler core, then the lower index.
int tbo_select(const Mesh& mesh, const std::vector<int>& idle_cores,
               const std::vector<double>& utilization,
               const std::vector<double>& temps);

class TboScheduler : public Scheduler {
  public:
    explicit TboScheduler(const Mesh& mesh) : mesh_(&mesh) {}
    Action decide(const DecisionContext& ctx, const std::vector<Action>& feasible,
                  Rng& rng) override;
    std::string name() const override { return "tbo"; }

  private:
    const Mesh* mesh_;
};

/// SMDP Q-learning with linear function approximation. Covers the
/// DVFS-enabled and IR variants plus the temperature-only LCT/LDT baselines.
class LinearLearnerScheduler : public Scheduler {
  public:
    LinearLearnerScheduler(LearnerConfig cfg, const Mesh& mesh,
                           const std::vector<VfLevel>& levels);

    Action decide(const DecisionContext& ctx, const std::vector<Action>& feasible,
                  Rng& rng) override;
    std::string name() const override { return to_string(cfg_.mode); }
    const std::vector<LearnerSample>* diagnostics() const override { return &diag_; }

    const std::vector<double>& theta() const { return theta_; }
    void set_theta(std::vector<double> theta);
    int64_t updates() const { return k_; }
    const LearnerConfig& config() const { return cfg_; }
    /// Lower the exploration floor (e.g. to 0 for near-greedy evaluation of a
    /// trained policy; the schedule term keeps decaying with k).
    void set_exploration_floor(double f) { cfg_.eps_floor = f; }

    void save_theta(const std::string& path) const;
    void load_theta(const std::string& path);

  private:
    int action_index(const Action& a) const;
    FeatureVector make_features(const DecisionContext& ctx, const Action& a,
                                const std::vector<double>& state_feats) const;
    std::vector<double> state_feature_block(const DecisionContext& ctx) const;

    LearnerConfig cfg_;
    const Mesh* mesh_;
    std::vector<VfLevel> levels_;
    int action_count_;
    std::vector<double> theta_;
    int64_t k_ = 0;
    std::optional<FeatureVector> pending_;
    std::optional<FeatureVector> ref_;
    std::vector<LearnerSample> diag_;
};

/// Plain tabular SMDP Q-learning over integer state/action ids; the direct
/// form used by the toy-model oracle comparison.
class TabularSmdpLearner {
  public:
    /// With per_pair_alpha the learning-rate index k counts updates of the
    /// specific (state, action) entry rather than all updates; asynchronous
    /// tabular learning needs this so rarely visited entries still receive
    /// enough total step mass.
    TabularSmdpLearner(int n_states, int n_actions, double lr_a, double lr_b,
                       double eps_floor = 0.05, double eps_halflife = 500.0,
                       bool per_pair_alpha = false);

    /// Observes the transition into `state` (reward/elapsed since the previous
    /// decision), updates the pending pair, then picks an action eps-greedily.
    int decide(int state, const std::vector<int>& feasible, double reward,
               double elapsed_s, Rng& rng);

    double q(int state, int action) const { return q_[idx(state, action)]; }
    int greedy(int state, const std::vector<int>& feasible) const;
    double rho_estimate() const;  // current Q(s*, a*)
    int64_t updates() const { return k_; }

  private:
    size_t idx(int s, int a) const { return static_cast<size_t>(s) * n_actions_ + a; }

    int n_states_, n_actions_;
    double lr_a_, lr_b_, eps_floor_, eps_halflife_;
    bool per_pair_alpha_;
    std::vector<double> q_;
    std::vector<int64_t> visits_;
    int64_t k_ = 0;
    int pending_s_ = -1, pending_a_ = -1;
    int ref_s_ = -1, ref_a_ = -1;
};

std::unique_ptr<Scheduler> make_scheduler(SchedMode mode, const LearnerConfig& cfg,
                                          const Mesh& mesh,
                                          const std::vector<VfLevel>& levels);

}  // namespace nocsched
