#include "nocsched/simcore.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace nocsched {

namespace {

bool event_after(const Event& a, const Event& b) {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
}

Rng make_stream(uint64_t seed, uint32_t tag) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                      tag, 0x9e3779b9u};
    return Rng(seq);
}

}  // namespace

int SystemState::busy_count() const {
    return static_cast<int>(std::count(busy.begin(), busy.end(), uint8_t{1}));
}

void SimConfig::set_lambda(double lambda) {
    if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
    const double scale = lambda / table.aggregate_rate();
    std::vector<TaskType> entries = table.entries();
    for (auto& e : entries) e.arrival_rate *= scale;
    table = TaskTypeTable(std::move(entries));
}

double SimConfig::default_xi() const { return 1.0 / table.mean_base_time(); }

Simulator::Simulator(SimConfig cfg, Scheduler& scheduler)
    : cfg_(std::move(cfg)),
      sched_(&scheduler),
      mesh_(cfg_.rows, cfg_.cols),
      field_(mesh_, cfg_.thermal),
      rng_arrival_(make_stream(cfg_.seed, 1)),
      rng_pairing_(make_stream(cfg_.seed, 2)),
      rng_sched_(make_stream(cfg_.seed, 3)),
      rng_thermal_(make_stream(cfg_.seed, 4)),
      events_(event_after) {
    cfg_.thermal.validate();
    if (cfg_.fixed_level < 0 || cfg_.fixed_level >= static_cast<int>(cfg_.levels.size()))
        throw std::invalid_argument("fixed_level out of range");
    const int m = mesh_.tile_count();
    cores_.resize(m);
    injection_.assign(m, 0.0);
    power_w_.assign(m, 0.0);
    dyn_w_.assign(m, 0.0);
    core_dyn_w_.assign(m, 0.0);
    tile_dyn_energy_.assign(m, 0.0);
    tile_core_dyn_energy_.assign(m, 0.0);
    refresh_power();
    peak_now_ = peak_temperature(field_.temps());
    margin_now_ = temperature_margin(field_.temps(), cfg_.t_threshold_k);
}

void Simulator::enable_heatmap(const std::string& path, double every_s) {
    heatmap_path_ = path;
    heatmap_every_s_ = every_s;
    next_heatmap_t_ = 0.0;
    std::ofstream truncate(path);
}

void Simulator::schedule(double time, EventKind kind, int64_t task_id) {
    events_.push(Event{time, event_seq_++, kind, task_id});
}

void Simulator::schedule_next_arrival() {
    const ArrivalSample s = next_arrival(cfg_.table, rng_arrival_);
    TaskInstance t;
    t.id = static_cast<int64_t>(tasks_.size());
    t.type_index = s.type_index;
    t.arrival_s = clock_ + s.interarrival_s;
    tasks_.push_back(t);
    schedule(t.arrival_s, EventKind::TaskArrival, t.id);
}

void Simulator::refresh_power() {
    for (int i = 0; i < mesh_.tile_count(); ++i) {
        const CoreSlot& slot = cores_[i];
        const int level = slot.busy ? tasks_[slot.task_id].level : -1;
        // overlapping pairings add and remove route injection in arbitrary
        // order, which can leave a tiny negative float residue
        const double inj = std::max(injection_[i], 0.0);
        const TilePower p = tile_power(cfg_.power, slot.busy, level, cfg_.levels, inj);
        power_w_[i] = p.total_w;
        dyn_w_[i] = p.dynamic_w;
        core_dyn_w_[i] = p.core_dynamic_w;
    }
}

void Simulator::advance_thermal_to(double t) {
    const double dt = cfg_.thermal.dt;
    while (thermal_time_ + dt <= t + dt * 0.5) {
        const double t0 = thermal_time_;
        const double peak_before = peak_now_;
        const double margin_before = margin_now_;
        field_.substep(power_w_, rng_thermal_);
        thermal_time_ = t0 + dt;
        peak_now_ = peak_temperature(field_.temps());
        margin_now_ = std::max(cfg_.t_threshold_k - peak_now_, 0.0);
        if (!cfg_.point_reward)
            acc_reward_ += dt * 0.5 * (margin_before + margin_now_);
        if (t0 >= warmup_end_) {
            peak_integral_ += dt * 0.5 * (peak_before + peak_now_);
            for (size_t i = 0; i < dyn_w_.size(); ++i) {
                tile_dyn_energy_[i] += dyn_w_[i] * dt;
                tile_core_dyn_energy_[i] += core_dyn_w_[i] * dt;
            }
        }
        if (heatmap_every_s_ > 0.0 && thermal_time_ >= next_heatmap_t_) {
            std::ofstream out(heatmap_path_, std::ios::app);
            for (int r = 0; r < mesh_.rows(); ++r) {
                for (int c = 0; c < mesh_.cols(); ++c)
                    out << (c ? " " : "") << field_.temps()[mesh_.tile_at(c, r)];
                out << '\n';
            }
            out << '\n';
            next_heatmap_t_ += heatmap_every_s_;
        }
    }
}

void Simulator::add_queue_time(double t0, double t1, int qlen) {
    if (t1 <= t0 || qlen == 0) return;
    // post-warm-up mean
    const double a = std::max(t0, warmup_end_);
    if (t1 > a) queue_integral_ += (t1 - a) * qlen;
    // whole-horizon quarters
    const double quarter = cfg_.horizon_s / 4.0;
    for (int qi = 0; qi < 4; ++qi) {
        const double lo = std::max(t0, qi * quarter);
        const double hi = std::min(t1, (qi + 1) * quarter);
        if (hi > lo) queue_quarter_integral_[qi] += (hi - lo) * qlen;
    }
}

bool Simulator::any_idle() const {
    return std::any_of(cores_.begin(), cores_.end(),
                       [](const CoreSlot& c) { return !c.busy; });
}

SystemState Simulator::snapshot_state() const {
    SystemState s;
    s.temps = field_.temps();
    s.busy.resize(cores_.size());
    for (size_t i = 0; i < cores_.size(); ++i) s.busy[i] = cores_[i].busy ? 1 : 0;
    s.task_count = task_count_;
    return s;
}

std::vector<PairCandidate> Simulator::unpaired_running_sorted() const {
    std::vector<PairCandidate> out;
    for (const auto& slot : cores_) {
        if (!slot.busy) continue;
        const TaskInstance& t = tasks_[slot.task_id];
        const bool paired = (t.pairing && t.pairing_active) || t.paired_passive;
        if (!paired) out.push_back({t.id, t.core});
    }
    std::sort(out.begin(), out.end(),
              [](const PairCandidate& a, const PairCandidate& b) {
                  return a.task_id < b.task_id;
              });
    return out;
}

void Simulator::make_decision(EventKind trigger) {
    if (queue_.empty()) throw std::logic_error("decision with empty queue");

    const double elapsed = clock_ - last_decision_t_;
    const double reward =
        cfg_.point_reward ? margin_now_ * elapsed : acc_reward_;

    std::vector<uint8_t> busy(cores_.size());
    std::vector<double> util(cores_.size());
    const double denom = std::max(clock_, 1e-12);
    std::vector<int> idle;
    for (size_t i = 0; i < cores_.size(); ++i) {
        busy[i] = cores_[i].busy ? 1 : 0;
        double bt = cores_[i].busy_accum;
        if (cores_[i].busy) bt += clock_ - cores_[i].busy_since;
        util[i] = bt / denom;
        if (!cores_[i].busy) idle.push_back(static_cast<int>(i));
    }
    if (idle.empty()) throw std::logic_error("decision with no idle core");

    const auto candidates = unpaired_running_sorted();

    DecisionContext ctx;
    ctx.now = clock_;
    ctx.temps = &field_.temps();
    ctx.busy = &busy;
    ctx.task_count = task_count_;
    ctx.unpaired_running = &candidates;
    ctx.utilization = &util;
    ctx.reward_ks = reward;
    ctx.elapsed_s = elapsed;

    std::vector<Action> feasible;
    const int level_count = static_cast<int>(cfg_.levels.size());
    const bool dvfs = sched_->name() == "dvfs";
    for (int core : idle) {
        if (dvfs)
            for (int l = 0; l < level_count; ++l) feasible.push_back({core, l});
        else
            feasible.push_back({core, cfg_.fixed_level});
    }

    const Action action = sched_->decide(ctx, feasible, rng_sched_);
    if (action.core < 0 || action.core >= static_cast<int>(cores_.size()) ||
        cores_[action.core].busy)
        throw std::logic_error("scheduler chose a busy or invalid core");
    if (action.level < 0 || action.level >= level_count)
        throw std::logic_error("scheduler chose an invalid V-F level");

    // head-of-line task leaves the queue for service; kappa is unchanged
    add_queue_time(last_queue_change_t_, clock_, static_cast<int>(queue_.size()));
    last_queue_change_t_ = clock_;
    const int64_t tid = queue_.front();
    queue_.pop_front();

    TaskInstance& task = tasks_[tid];
    task.core = action.core;
    task.level = action.level;
    task.assign_s = clock_;
    task.exec_s =
        cfg_.table.exec_time(task.type_index, cfg_.levels[action.level], cfg_.levels);
    const double xi = cfg_.comm_rate_xi > 0 ? cfg_.comm_rate_xi : cfg_.default_xi();
    task.pairing = try_pair(action.core, candidates, mesh_, rng_pairing_,
                            cfg_.p_pair, xi);
    const double service = total_service_time(task.exec_s, task.pairing);
    if (task.pairing) {
        task.pairing_active = true;
        tasks_[task.pairing->partner].paired_passive = true;
        for (int tile : task.pairing->route)
            injection_[tile] += task.pairing->injection_rate;
        schedule(clock_ + task.pairing->duration_s, EventKind::PairingEnd, tid);
    }
    CoreSlot& slot = cores_[action.core];
    slot.busy = true;
    slot.task_id = tid;
    slot.busy_since = clock_;
    schedule(clock_ + service, EventKind::TaskDeparture, tid);
    refresh_power();

    if (cfg_.keep_trace)
        trace_.push_back({decision_k_, clock_, trigger, action.core, action.level,
                          reward, elapsed, peak_now_,
                          static_cast<int>(queue_.size())});
    ++decision_k_;
    acc_reward_ = 0.0;
    last_decision_t_ = clock_;
}

void Simulator::handle_arrival(const Event& ev) {
    ++arrived_;
    ++task_count_;
    add_queue_time(last_queue_change_t_, clock_, static_cast<int>(queue_.size()));
    last_queue_change_t_ = clock_;
    queue_.push_back(ev.task_id);
    schedule_next_arrival();
    if (!cfg_.quota_mode && any_idle()) make_decision(EventKind::TaskArrival);
}

void Simulator::handle_departure(const Event& ev) {
    TaskInstance& task = tasks_[ev.task_id];
    CoreSlot& slot = cores_[task.core];
    slot.busy = false;
    slot.busy_accum += clock_ - slot.busy_since;
    slot.task_id = -1;
    task.depart_s = clock_;
    task.paired_passive = false;
    --task_count_;
    ++completed_;
    if (clock_ >= warmup_end_ && cfg_.keep_service_samples)
        service_samples_.push_back(clock_ - task.arrival_s);
    refresh_power();
    if (!cfg_.quota_mode && !queue_.empty()) make_decision(EventKind::TaskDeparture);
}

void Simulator::handle_quota_tick(const Event&) {
    schedule(clock_ + cfg_.quota_s, EventKind::QuotaTick, -1);
    while (!queue_.empty() && any_idle()) make_decision(EventKind::QuotaTick);
}

void Simulator::handle_pairing_end(const Event& ev) {
    TaskInstance& task = tasks_[ev.task_id];
    if (!task.pairing || !task.pairing_active) return;
    for (int tile : task.pairing->route)
        injection_[tile] -= task.pairing->injection_rate;
    task.pairing_active = false;
    TaskInstance& partner = tasks_[task.pairing->partner];
    if (partner.depart_s < 0) partner.paired_passive = false;
    refresh_power();
}

RunResult Simulator::run() {
    warmup_end_ = cfg_.warmup_frac * cfg_.horizon_s;
    schedule_next_arrival();
    if (cfg_.quota_mode) schedule(cfg_.quota_s, EventKind::QuotaTick, -1);

    while (!events_.empty() && events_.top().time <= cfg_.horizon_s) {
        const Event ev = events_.top();
        events_.pop();
        if (ev.time < clock_) throw std::logic_error("event before current clock");
        advance_thermal_to(ev.time);
        clock_ = ev.time;
        switch (ev.kind) {
            case EventKind::TaskArrival: handle_arrival(ev); break;
            case EventKind::TaskDeparture: handle_departure(ev); break;
            case EventKind::QuotaTick: handle_quota_tick(ev); break;
            case EventKind::PairingEnd: handle_pairing_end(ev); break;
        }
    }
    advance_thermal_to(cfg_.horizon_s);
    add_queue_time(last_queue_change_t_, cfg_.horizon_s,
                   static_cast<int>(queue_.size()));
    clock_ = cfg_.horizon_s;

    RunResult res;
    RunSummary& s = res.summary;
    s.scheduler = sched_->name();
    s.rows = cfg_.rows;
    s.cols = cfg_.cols;
    s.lambda = cfg_.lambda();
    s.seed = cfg_.seed;
    const double window = cfg_.horizon_s - warmup_end_;
    s.measure_window_s = window;
    s.avg_peak_k = peak_integral_ / window;
    s.has_service = !service_samples_.empty();
    if (s.has_service)
        s.avg_service_s =
            std::accumulate(service_samples_.begin(), service_samples_.end(), 0.0) /
            static_cast<double>(service_samples_.size());
    s.tile_dyn_energy_j = tile_dyn_energy_;
    s.tile_core_dyn_energy_j = tile_core_dyn_energy_;
    s.total_dyn_energy_j =
        std::accumulate(tile_dyn_energy_.begin(), tile_dyn_energy_.end(), 0.0);
    s.mean_queue_len = queue_integral_ / window;
    const double quarter = cfg_.horizon_s / 4.0;
    for (int qi = 0; qi < 4; ++qi)
        s.queue_quarter_avg[qi] = queue_quarter_integral_[qi] / quarter;
    s.decisions = decision_k_;
    s.completed = completed_;
    res.trace = std::move(trace_);
    res.service_samples_s = std::move(service_samples_);
    res.final_temps_k = field_.temps();
    return res;
}

}  // namespace nocsched
