#include "nocsched/oracle.hpp"

#include "nocsched/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace nocsched {

ToySmdp::ToySmdp(ToySmdpParams params) : params_(params) {
    if (params_.temp_levels < 2 || params_.queue_cap < 1)
        throw std::invalid_argument("degenerate toy model");
    const int L = params_.temp_levels;
    state_count_ = L * L * 2 * 2 * (params_.queue_cap + 1);
}

int ToySmdp::encode(const ToyState& s) const {
    const int L = params_.temp_levels;
    return (((s.h[0] * L + s.h[1]) * 2 + s.b[0]) * 2 + s.b[1]) *
               (params_.queue_cap + 1) +
           s.q;
}

ToyState ToySmdp::decode(int code) const {
    const int L = params_.temp_levels;
    ToyState s;
    s.q = code % (params_.queue_cap + 1);
    code /= params_.queue_cap + 1;
    s.b[1] = code % 2;
    code /= 2;
    s.b[0] = code % 2;
    code /= 2;
    s.h[1] = code % L;
    s.h[0] = code / L;
    return s;
}

std::vector<int> ToySmdp::feasible_actions(int state) const {
    const ToyState s = decode(state);
    std::vector<int> acts;
    if (s.q > 0) {
        if (!s.b[0]) acts.push_back(1);
        if (!s.b[1]) acts.push_back(2);
    }
    if (acts.empty()) acts.push_back(0);
    return acts;
}

double ToySmdp::reward_rate(const ToyState& s) const {
    const int top = params_.temp_levels - 1;
    return params_.margin_scale * ((top - s.h[0]) + (top - s.h[1]));
}

ToyState ToySmdp::apply_action(ToyState s, int action) const {
    if (action == 0) return s;
    const int core = action - 1;
    if (s.q == 0 || s.b[core])
        throw std::logic_error("infeasible toy action");
    s.q -= 1;
    s.b[core] = 1;
    return s;
}

struct ToySmdp::EventList {
    int count = 0;
    double rate[7];
    ToyState next[7];
    double total = 0.0;

    void add(double r, const ToyState& s) {
        rate[count] = r;
        next[count] = s;
        ++count;
        total += r;
    }
};

void ToySmdp::enabled_events(const ToyState& post, EventList* out) const {
    if (post.q < params_.queue_cap) {
        ToyState n = post;
        n.q += 1;
        out->add(params_.lambda, n);
    }
    for (int c = 0; c < 2; ++c) {
        if (post.b[c]) {
            ToyState n = post;
            n.b[c] = 0;
            out->add(params_.mu, n);
            if (post.h[c] < params_.temp_levels - 1) {
                ToyState up = post;
                up.h[c] += 1;
                out->add(params_.nu_up, up);
            }
        } else if (post.h[c] > 0) {
            ToyState n = post;
            n.h[c] -= 1;
            out->add(params_.nu_down, n);
        }
    }
    if (out->count == 0)
        throw std::logic_error("absorbing toy state");  // cannot happen: q>0 => busy
}

void ToySmdp::dynamics(int state, int action, double* expected_dt,
                       double* expected_reward,
                       std::vector<Outcome>* outcomes) const {
    const ToyState post = apply_action(decode(state), action);
    EventList ev;
    enabled_events(post, &ev);
    const double tbar = 1.0 / ev.total;
    if (expected_dt) *expected_dt = tbar;
    if (expected_reward) *expected_reward = reward_rate(post) * tbar;
    if (outcomes) {
        outcomes->clear();
        for (int i = 0; i < ev.count; ++i)
            outcomes->push_back({encode(ev.next[i]), ev.rate[i] / ev.total});
    }
}

ToySmdp::Step ToySmdp::step(int state, int action, Rng& rng) const {
    const ToyState post = apply_action(decode(state), action);
    EventList ev;
    enabled_events(post, &ev);
    const double dt = std::exponential_distribution<double>(ev.total)(rng);
    double pick = std::uniform_real_distribution<double>(0.0, ev.total)(rng);
    int chosen = ev.count - 1;
    for (int i = 0; i < ev.count; ++i) {
        pick -= ev.rate[i];
        if (pick <= 0.0) {
            chosen = i;
            break;
        }
    }
    return {encode(ev.next[chosen]), dt, reward_rate(post) * dt};
}

RviResult relative_value_iteration(const ToySmdp& smdp, double tol,
                                   int max_iterations) {
    const int n = smdp.state_count();

    // Precompute the per-pair model, plus the uniformized ("transformed")
    // discrete-time equivalent: rewards become rates, transitions are damped
    // by eta / tbar with the remainder as a self-loop. The discrete model's
    // gain equals the semi-Markov average reward per second.
    struct Pair {
        int action;
        double tbar, reward, rate_reward;
        std::vector<ToySmdp::Outcome> out;
    };
    std::vector<std::vector<Pair>> model(n);
    double min_tbar = std::numeric_limits<double>::infinity();
    for (int s = 0; s < n; ++s) {
        for (int a : smdp.feasible_actions(s)) {
            Pair p;
            p.action = a;
            smdp.dynamics(s, a, &p.tbar, &p.reward, &p.out);
            p.rate_reward = p.reward / p.tbar;
            min_tbar = std::min(min_tbar, p.tbar);
            model[s].push_back(std::move(p));
        }
    }
    const double eta = 0.5 * min_tbar;

    std::vector<double> v(n, 0.0), v_next(n, 0.0);
    RviResult res;
    double gain = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
        for (int s = 0; s < n; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (const Pair& p : model[s]) {
                const double damp = eta / p.tbar;
                double ev = (1.0 - damp) * v[s];
                for (const auto& o : p.out) ev += damp * o.prob * v[o.state];
                best = std::max(best, p.rate_reward + ev);
            }
            v_next[s] = best;
        }
        double dmin = std::numeric_limits<double>::infinity();
        double dmax = -dmin;
        for (int s = 0; s < n; ++s) {
            const double d = v_next[s] - v[s];
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
        gain = 0.5 * (dmin + dmax);
        const double anchor = v_next[0];
        for (int s = 0; s < n; ++s) v[s] = v_next[s] - anchor;
        res.iterations = it + 1;
        res.final_span = dmax - dmin;
        if (res.final_span < tol) break;
    }
    res.rho = gain;

    // Semi-Markov bias is eta * (discrete relative value); q-values follow
    // from one lookahead of the evaluation equation.
    res.bias.resize(n);
    for (int s = 0; s < n; ++s) res.bias[s] = eta * v[s];
    res.q.assign(n, {});
    for (int s = 0; s < n; ++s) {
        for (const Pair& p : model[s]) {
            double hq = p.reward - res.rho * p.tbar;
            for (const auto& o : p.out) hq += o.prob * res.bias[o.state];
            res.q[s].push_back(hq);
        }
    }
    return res;
}

std::vector<std::vector<int>> greedy_actions(const ToySmdp& smdp,
                                             const RviResult& rvi,
                                             double tie_tol) {
    const int n = smdp.state_count();
    std::vector<std::vector<int>> out(n);
    for (int s = 0; s < n; ++s) {
        const auto acts = smdp.feasible_actions(s);
        const double best = *std::max_element(rvi.q[s].begin(), rvi.q[s].end());
        for (size_t i = 0; i < acts.size(); ++i)
            if (rvi.q[s][i] >= best - tie_tol) out[s].push_back(acts[i]);
    }
    return out;
}

ToyLearningReport run_toy_learning(const ToySmdp& smdp, const RviResult& rvi,
                                   int64_t updates, uint64_t seed, double lr_a,
                                   double lr_b, double eps_floor,
                                   double tail_skip) {
    const int ns = smdp.state_count();
    TabularSmdpLearner learner(ns, ToySmdp::kActions, lr_a, lr_b, eps_floor,
                               500.0, /*per_pair_alpha=*/true);
    Rng rng(seed);
    const int start = smdp.encode(ToyState{});
    int state = start;
    double reward = 0.0, elapsed = 0.0;

    ToyLearningReport rep;
    rep.q_avg.assign(static_cast<size_t>(ns) * ToySmdp::kActions, 0.0);
    const int64_t tail_from = static_cast<int64_t>(tail_skip * updates);
    int64_t tail = 0;
    for (int64_t k = 0; k < updates; ++k) {
        const auto feasible = smdp.feasible_actions(state);
        const int action = learner.decide(state, feasible, reward, elapsed, rng);
        const auto step = smdp.step(state, action, rng);
        state = step.next_state;
        reward = step.reward;
        elapsed = step.dt;
        if (k >= tail_from) {
            ++tail;
            for (int s = 0; s < ns; ++s)
                for (int a = 0; a < ToySmdp::kActions; ++a) {
                    double& cell = rep.q_avg[s * ToySmdp::kActions + a];
                    cell += (learner.q(s, a) - cell) / static_cast<double>(tail);
                }
        }
    }
    // The reference pair is the first visited (state, action): the empty
    // all-cool state with the only feasible action, 0.
    rep.rho_hat = rep.q_avg[start * ToySmdp::kActions + 0];

    const auto optimal = greedy_actions(smdp, rvi);
    const auto reachable = reachable_states(smdp);
    for (int s = 0; s < ns; ++s) {
        if (!reachable[s]) continue;
        const auto feasible = smdp.feasible_actions(s);
        if (feasible.size() < 2) continue;
        ++rep.decision_states;
        int g = feasible.front();
        for (int a : feasible)
            if (rep.q_avg[s * ToySmdp::kActions + a] >
                rep.q_avg[s * ToySmdp::kActions + g])
                g = a;
        for (int a : optimal[s])
            if (a == g) {
                ++rep.agreeing_states;
                break;
            }
    }
    return rep;
}

std::vector<uint8_t> reachable_states(const ToySmdp& smdp) {
    std::vector<uint8_t> seen(smdp.state_count(), 0);
    ToyState start{};
    std::deque<int> frontier{smdp.encode(start)};
    seen[smdp.encode(start)] = 1;
    std::vector<ToySmdp::Outcome> out;
    while (!frontier.empty()) {
        const int s = frontier.front();
        frontier.pop_front();
        for (int a : smdp.feasible_actions(s)) {
            smdp.dynamics(s, a, nullptr, nullptr, &out);
            for (const auto& o : out) {
                if (!seen[o.state]) {
                    seen[o.state] = 1;
                    frontier.push_back(o.state);
                }
            }
        }
    }
    return seen;
}

}  // namespace nocsched
