#include "nocsched/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace nocsched {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error("config error at '" + path + "': " + what);
}

void expect_keys(const json& j, const std::string& path,
                 std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) fail(path + "." + it.key(), "unknown field");
    }
}

template <typename T>
void get_to(const json& j, const std::string& path, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        j.at(key).get_to(out);
    } catch (const json::exception& e) {
        fail(path + "." + key, e.what());
    }
}

void parse_thermal(const json& j, const std::string& path, ThermalParams& p) {
    expect_keys(j, path, {"r_lat", "r_vert", "capacitance", "dt", "sigma_rho",
                          "t_ambient"});
    get_to(j, path, "r_lat", p.r_lateral);
    get_to(j, path, "r_vert", p.r_vertical);
    get_to(j, path, "capacitance", p.capacity);
    get_to(j, path, "dt", p.dt);
    get_to(j, path, "sigma_rho", p.sigma_rho);
    get_to(j, path, "t_ambient", p.t_ambient_k);
}

void parse_power(const json& j, const std::string& path, PowerParams& p) {
    expect_keys(j, path,
                {"core_static_w", "core_dyn_max_w", "router_static_w",
                 "router_dyn_max_w"});
    get_to(j, path, "core_static_w", p.core_static_w);
    get_to(j, path, "core_dyn_max_w", p.core_dyn_max_w);
    get_to(j, path, "router_static_w", p.router_static_w);
    get_to(j, path, "router_dyn_max_w", p.router_dyn_w);
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig c;
    expect_keys(j, "$",
                {"mesh", "scheduler", "lambda", "bank_x", "ir_x", "lr_a", "lr_b",
                 "eps_floor", "eps_halflife", "seeds", "out_dir", "task_table",
                 "trials", "heatmap_every_s", "sweep", "sweep_cap", "thermal",
                 "power", "t_threshold_k", "horizon_s", "warmup_frac", "quota_s",
                 "p_pair", "comm_rate_xi", "fixed_level", "point_reward"});
    if (j.contains("mesh")) {
        const json& m = j.at("mesh");
        expect_keys(m, "$.mesh", {"rows", "cols"});
        if (!m.contains("rows")) fail("$.mesh.rows", "missing required field");
        if (!m.contains("cols")) fail("$.mesh.cols", "missing required field");
        get_to(m, "$.mesh", "rows", c.sim.rows);
        get_to(m, "$.mesh", "cols", c.sim.cols);
        if (c.sim.rows < 2 || c.sim.cols < 2)
            fail("$.mesh", "mesh must be at least 2x2");
    }
    get_to(j, "$", "scheduler", c.scheduler);
    sched_mode_from_string(c.scheduler);  // validates
    get_to(j, "$", "lambda", c.lambda);
    if (c.lambda < 0) fail("$.lambda", "must be positive");
    get_to(j, "$", "bank_x", c.bank_x);
    get_to(j, "$", "ir_x", c.ir_x);
    get_to(j, "$", "lr_a", c.lr_a);
    get_to(j, "$", "lr_b", c.lr_b);
    get_to(j, "$", "eps_floor", c.eps_floor);
    get_to(j, "$", "eps_halflife", c.eps_halflife);
    get_to(j, "$", "seeds", c.seeds);
    if (c.seeds.empty()) fail("$.seeds", "must be nonempty");
    get_to(j, "$", "out_dir", c.out_dir);
    get_to(j, "$", "task_table", c.task_table_path);
    get_to(j, "$", "trials", c.trials);
    if (c.trials < 1) fail("$.trials", "must be >= 1");
    get_to(j, "$", "heatmap_every_s", c.heatmap_every_s);
    get_to(j, "$", "sweep_cap", c.sweep_cap);
    get_to(j, "$", "t_threshold_k", c.sim.t_threshold_k);
    get_to(j, "$", "horizon_s", c.sim.horizon_s);
    get_to(j, "$", "warmup_frac", c.sim.warmup_frac);
    if (c.sim.warmup_frac < 0 || c.sim.warmup_frac >= 1)
        fail("$.warmup_frac", "must lie in [0, 1)");
    get_to(j, "$", "quota_s", c.sim.quota_s);
    get_to(j, "$", "p_pair", c.sim.p_pair);
    if (c.sim.p_pair < 0 || c.sim.p_pair > 1)
        fail("$.p_pair", "must lie in [0, 1]");
    get_to(j, "$", "comm_rate_xi", c.sim.comm_rate_xi);
    get_to(j, "$", "fixed_level", c.sim.fixed_level);
    get_to(j, "$", "point_reward", c.sim.point_reward);
    if (j.contains("thermal")) parse_thermal(j.at("thermal"), "$.thermal", c.sim.thermal);
    if (j.contains("power")) parse_power(j.at("power"), "$.power", c.sim.power);
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        expect_keys(s, "$.sweep", {"lambdas", "meshes", "schedulers", "centers"});
        get_to(s, "$.sweep", "lambdas", c.grid.lambdas);
        get_to(s, "$.sweep", "meshes", c.grid.meshes);
        get_to(s, "$.sweep", "schedulers", c.grid.schedulers);
        for (const auto& name : c.grid.schedulers) sched_mode_from_string(name);
        get_to(s, "$.sweep", "centers", c.grid.centers);
    }
    try {
        c.sim.thermal.validate();
        RbfBank::standard(c.bank_x).validate();
        for (int x : c.ir_x) RbfBank::standard(x).validate();
        for (int x : c.grid.centers) RbfBank::standard(x).validate();
    } catch (const std::exception& e) {
        fail("$", e.what());
    }
    if (!c.task_table_path.empty()) c.sim.table = TaskTypeTable::load(c.task_table_path);
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

SimConfig ExperimentConfig::resolved_sim(const std::string& sched_name,
                                         uint64_t seed) const {
    SimConfig sc = sim;
    if (lambda > 0) sc.set_lambda(lambda);
    sc.quota_mode = sched_mode_from_string(sched_name) == SchedMode::Ldt;
    sc.seed = seed;
    return sc;
}

LearnerConfig ExperimentConfig::learner(const std::string& sched_name) const {
    LearnerConfig lc;
    lc.mode = sched_mode_from_string(sched_name);
    lc.lr_a = lr_a;
    lc.lr_b = lr_b;
    lc.eps_floor = eps_floor;
    lc.eps_halflife = eps_halflife;
    lc.fixed_level = sim.fixed_level;
    lc.bank = RbfBank::standard(bank_x);
    for (int i = 0; i < 4; ++i) lc.ir_banks[i] = RbfBank::standard(ir_x[i]);
    return lc;
}

std::vector<std::string> ExperimentConfig::resolved_lines() const {
    std::ostringstream os;
    os.precision(10);
    std::vector<std::string> out;
    auto push = [&](auto&&... parts) {
        os.str("");
        (os << ... << parts);
        out.push_back(os.str());
    };
    push("mesh=", sim.rows, "x", sim.cols, " scheduler=", scheduler,
         " lambda=", lambda > 0 ? lambda : sim.lambda());
    push("bank_x=", bank_x, " ir_x=", ir_x[0], ",", ir_x[1], ",", ir_x[2], ",",
         ir_x[3], " lr_a=", lr_a, " lr_b=", lr_b, " eps_floor=", eps_floor,
         " eps_halflife=", eps_halflife);
    push("t_threshold_k=", sim.t_threshold_k, " horizon_s=", sim.horizon_s,
         " warmup_frac=", sim.warmup_frac, " quota_s=", sim.quota_s,
         " p_pair=", sim.p_pair, " comm_rate_xi=",
         sim.comm_rate_xi > 0 ? sim.comm_rate_xi : sim.default_xi(),
         " fixed_level=", sim.fixed_level, " trials=", trials);
    push("thermal: r_lat=", sim.thermal.r_lateral, " r_vert=", sim.thermal.r_vertical,
         " capacitance=", sim.thermal.capacity, " dt=", sim.thermal.dt,
         " sigma_rho=", sim.thermal.sigma_rho,
         " t_ambient=", sim.thermal.t_ambient_k);
    push("power: core_static_w=", sim.power.core_static_w,
         " core_dyn_max_w=", sim.power.core_dyn_max_w,
         " router_static_w=", sim.power.router_static_w,
         " router_dyn_max_w=", sim.power.router_dyn_w);
    return out;
}

}  // namespace nocsched
