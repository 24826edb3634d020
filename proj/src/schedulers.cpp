#include "nocsched/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nocsched {

std::string to_string(SchedMode mode) {
    switch (mode) {
        case SchedMode::Dvfs: return "dvfs";
        case SchedMode::Ir: return "ir";
        case SchedMode::Lct: return "lct";
        case SchedMode::Ldt: return "ldt";
        case SchedMode::Rand: return "rand";
        case SchedMode::Tbo: return "tbo";
    }
    return "?";
}

SchedMode sched_mode_from_string(const std::string& s) {
    if (s == "dvfs") return SchedMode::Dvfs;
    if (s == "ir") return SchedMode::Ir;
    if (s == "lct") return SchedMode::Lct;
    if (s == "ldt") return SchedMode::Ldt;
    if (s == "rand") return SchedMode::Rand;
    if (s == "tbo") return SchedMode::Tbo;
    throw std::invalid_argument("unknown scheduler: " + s);
}

LearnerConfig baseline_learner_config(SchedMode mode) {
    if (mode != SchedMode::Lct && mode != SchedMode::Ldt)
        throw std::invalid_argument("baseline_learner_config: LCT or LDT only");
    LearnerConfig cfg;
    cfg.mode = mode;
    return cfg;
}

int64_t theta_dim(const LearnerConfig& cfg, int core_count, int level_count) {
    switch (cfg.mode) {
        case SchedMode::Dvfs:
            return grid_feature_count(cfg.bank) * core_count * level_count;
        case SchedMode::Lct:
        case SchedMode::Ldt:
            return grid_feature_count(cfg.bank) * core_count;
        case SchedMode::Ir: {
            int64_t d = 1;
            for (const auto& b : cfg.ir_banks) d *= b.size();
            return d;
        }
        default:
            return 0;
    }
}

double learning_rate(int64_t k, double a, double b) { return a / (b + k); }

double epsilon_schedule(int64_t k, const LearnerConfig& cfg) {
    return std::max(cfg.eps_floor, 1.0 / (1.0 + k / cfg.eps_halflife));
}

double q_hat(const std::vector<double>& theta, const FeatureVector& phi) {
    return phi.dot(theta);
}

void smdp_update(std::vector<double>& theta, const FeatureVector& phi_prev,
                 double reward, double elapsed_s,
                 const std::vector<FeatureVector>& next_feasible, double alpha,
                 const FeatureVector& ref_phi) {
    const double q_ref = ref_phi.dot(theta);
    double best_next = 0.0;
    bool first = true;
    for (const auto& phi : next_feasible) {
        const double q = phi.dot(theta);
        if (first || q > best_next) best_next = q;
        first = false;
    }
    const double target = reward - q_ref * elapsed_s + best_next;
    const double delta = target - phi_prev.dot(theta);
    if (!std::isfinite(delta))
        throw std::runtime_error("smdp_update: diverged to a non-finite value");
    phi_prev.axpy(alpha * delta, theta);
}

Action RandScheduler::decide(const DecisionContext&,
                             const std::vector<Action>& feasible, Rng& rng) {
    if (feasible.empty()) throw std::logic_error("rand_select: empty feasible set");
    std::uniform_int_distribution<size_t> pick(0, feasible.size() - 1);
    return feasible[pick(rng)];
}

int tbo_select(const Mesh& mesh, const std::vector<int>& idle_cores,
               const std::vector<double>& utilization,
               const std::vector<double>& temps) {
    if (idle_cores.empty()) throw std::logic_error("tbo_select: no idle core");
    const Point center = mesh.center();
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    double best_temp = std::numeric_limits<double>::infinity();
    for (int core : idle_cores) {
        const double weight = 1.0 / (1.0 + dist_from_point(mesh, core, center));
        const double cost = weight * utilization[core];
        const bool better = best < 0 || cost < best_cost - 1e-12 ||
                            (std::abs(cost - best_cost) <= 1e-12 &&
                             temps[core] < best_temp);
        if (better) {
            best = core;
            best_cost = cost;
            best_temp = temps[core];
        }
    }
    return best;
}

Action TboScheduler::decide(const DecisionContext& ctx,
                            const std::vector<Action>& feasible, Rng&) {
    std::vector<int> idle;
    idle.reserve(feasible.size());
    int level = feasible.front().level;
    for (const auto& a : feasible)
        if (idle.empty() || idle.back() != a.core) idle.push_back(a.core);
    const int core = tbo_select(*mesh_, idle, *ctx.utilization, *ctx.temps);
    return {core, level};
}

LinearLearnerScheduler::LinearLearnerScheduler(LearnerConfig cfg, const Mesh& mesh,
                                               const std::vector<VfLevel>& levels)
    : cfg_(std::move(cfg)), mesh_(&mesh), levels_(levels) {
    const int m = mesh.tile_count();
    const int l = static_cast<int>(levels_.size());
    action_count_ = (cfg_.mode == SchedMode::Dvfs) ? m * l : m;
    theta_.assign(theta_dim(cfg_, m, l), 0.0);
}

void LinearLearnerScheduler::set_theta(std::vector<double> theta) {
    if (theta.size() != theta_.size())
        throw std::invalid_argument("set_theta: dimension mismatch");
    theta_ = std::move(theta);
}

int LinearLearnerScheduler::action_index(const Action& a) const {
    if (cfg_.mode == SchedMode::Dvfs)
        return a.core * static_cast<int>(levels_.size()) + a.level;
    return a.core;
}

std::vector<double> LinearLearnerScheduler::state_feature_block(
    const DecisionContext& ctx) const {
    const auto grid = interpolate_grid(*mesh_, *ctx.temps);
    std::array<double, 9> norm{};
    for (int i = 0; i < 9; ++i) norm[i] = normalize_temperature(grid[i]);
    return grid_state_features(norm, cfg_.bank);
}

FeatureVector LinearLearnerScheduler::make_features(
    const DecisionContext& ctx, const Action& a,
    const std::vector<double>& state_feats) const {
    if (cfg_.mode == SchedMode::Ir) {
        const IrQuadruple q =
            make_ir_quadruple(*mesh_, *ctx.temps, a.core, *ctx.unpaired_running);
        return ir_features(q, cfg_.ir_banks);
    }
    FeatureVector fv;
    fv.block = state_feats;
    const int64_t g = static_cast<int64_t>(state_feats.size());
    fv.dim = g * action_count_;
    fv.offset = g * action_index(a);
    return fv;
}

Action LinearLearnerScheduler::decide(const DecisionContext& ctx,
                                      const std::vector<Action>& feasible,
                                      Rng& rng) {
    if (feasible.empty())
        throw std::logic_error("learner invoked with empty feasible set");

    std::vector<double> state_feats;
    if (cfg_.mode != SchedMode::Ir) state_feats = state_feature_block(ctx);

    std::vector<FeatureVector> phis;
    phis.reserve(feasible.size());
    for (const auto& a : feasible) phis.push_back(make_features(ctx, a, state_feats));

    if (pending_) {
        const double alpha = learning_rate(k_, cfg_.lr_a, cfg_.lr_b);
        smdp_update(theta_, *pending_, ctx.reward_ks, ctx.elapsed_s, phis, alpha,
                    *ref_);
        ++k_;
        LearnerSample s;
        s.k = k_;
        s.alpha = alpha;
        s.q_ref = ref_->dot(theta_);
        s.q_chosen = pending_->dot(theta_);
        const int64_t base = ref_->offset;
        const int64_t n = static_cast<int64_t>(ref_->block.size());
        s.theta_track = {theta_[base], theta_[base + n / 2], theta_[base + n - 1]};
        diag_.push_back(s);
    }

    // eps-greedy over the (possibly just updated) weights
    size_t choice = 0;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    if (u01(rng) < epsilon_schedule(k_, cfg_)) {
        std::uniform_int_distribution<size_t> pick(0, feasible.size() - 1);
        choice = pick(rng);
    } else {
        double best = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < phis.size(); ++i) {
            const double q = phis[i].dot(theta_);
            if (q > best) {
                best = q;
                choice = i;
            }
        }
    }

    pending_ = std::move(phis[choice]);
    if (!ref_ || k_ <= cfg_.ref_freeze_k) ref_ = pending_;
    return feasible[choice];
}

void LinearLearnerScheduler::save_theta(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    out << "nocsched-theta v1\n";
    out << to_string(cfg_.mode) << ' ' << theta_.size() << ' ' << cfg_.bank.size()
        << ' ' << cfg_.bank.sigma << '\n';
    out.precision(17);
    for (double v : theta_) out << v << '\n';
}

void LinearLearnerScheduler::load_theta(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    std::string magic, version, mode;
    size_t dim = 0;
    int bank_x = 0;
    double sigma = 0;
    in >> magic >> version >> mode >> dim >> bank_x >> sigma;
    if (magic != "nocsched-theta" || mode != to_string(cfg_.mode) ||
        dim != theta_.size())
        throw std::runtime_error("checkpoint header mismatch: " + path);
    for (size_t i = 0; i < dim; ++i)
        if (!(in >> theta_[i]))
            throw std::runtime_error("truncated checkpoint: " + path);
}

TabularSmdpLearner::TabularSmdpLearner(int n_states, int n_actions, double lr_a,
                                       double lr_b, double eps_floor,
                                       double eps_halflife, bool per_pair_alpha)
    : n_states_(n_states),
      n_actions_(n_actions),
      lr_a_(lr_a),
      lr_b_(lr_b),
      eps_floor_(eps_floor),
      eps_halflife_(eps_halflife),
      per_pair_alpha_(per_pair_alpha),
      q_(static_cast<size_t>(n_states) * n_actions, 0.0),
      visits_(per_pair_alpha ? q_.size() : 0, 0) {}

int TabularSmdpLearner::greedy(int state, const std::vector<int>& feasible) const {
    int best = feasible.front();
    double best_q = q(state, best);
    for (int a : feasible) {
        const double v = q(state, a);
        if (v > best_q) {
            best_q = v;
            best = a;
        }
    }
    return best;
}

int TabularSmdpLearner::decide(int state, const std::vector<int>& feasible,
                               double reward, double elapsed_s, Rng& rng) {
    if (feasible.empty()) throw std::logic_error("tabular learner: empty feasible set");
    if (pending_s_ >= 0) {
        const int64_t lr_k =
            per_pair_alpha_ ? visits_[idx(pending_s_, pending_a_)]++ : k_;
        const double alpha = learning_rate(lr_k, lr_a_, lr_b_);
        const double q_ref = q_[idx(ref_s_, ref_a_)];
        double best_next = 0.0;
        bool first = true;
        for (int a : feasible) {
            const double v = q_[idx(state, a)];
            if (first || v > best_next) best_next = v;
            first = false;
        }
        const double target = reward - q_ref * elapsed_s + best_next;
        double& cell = q_[idx(pending_s_, pending_a_)];
        cell += alpha * (target - cell);
        ++k_;
    }
    const double eps = std::max(eps_floor_, 1.0 / (1.0 + k_ / eps_halflife_));
    int action;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    if (u01(rng) < eps) {
        std::uniform_int_distribution<size_t> pick(0, feasible.size() - 1);
        action = feasible[pick(rng)];
    } else {
        action = greedy(state, feasible);
    }
    if (ref_s_ < 0) {
        ref_s_ = state;
        ref_a_ = action;
    }
    pending_s_ = state;
    pending_a_ = action;
    return action;
}

double TabularSmdpLearner::rho_estimate() const {
    if (ref_s_ < 0) return 0.0;
    return q_[idx(ref_s_, ref_a_)];
}

std::unique_ptr<Scheduler> make_scheduler(SchedMode mode, const LearnerConfig& cfg,
                                          const Mesh& mesh,
                                          const std::vector<VfLevel>& levels) {
    switch (mode) {
        case SchedMode::Rand: return std::make_unique<RandScheduler>();
        case SchedMode::Tbo: return std::make_unique<TboScheduler>(mesh);
        default: {
            LearnerConfig c = cfg;
            c.mode = mode;
            return std::make_unique<LinearLearnerScheduler>(c, mesh, levels);
        }
    }
}

}  // namespace nocsched
