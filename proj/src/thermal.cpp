#include "nocsched/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nocsched {

void ThermalParams::validate(int max_neighbors) const {
    if (t_ambient_k <= 0 || r_vertical <= 0 || r_lateral <= 0 || capacity <= 0 ||
        dt <= 0 || sigma_rho < 0)
        throw std::invalid_argument("thermal parameters must be positive");
    if (dt >= capacity * r_vertical / 2.0)
        throw std::invalid_argument("thermal substep too large for vertical RC");
    // explicit Euler contraction including lateral coupling
    const double rate = 1.0 / r_vertical + max_neighbors / r_lateral;
    if (dt * rate / capacity >= 1.0)
        throw std::invalid_argument("thermal substep violates Euler stability");
}

double vf_dynamic_factor(const VfLevel& level, const std::vector<VfLevel>& levels) {
    double vmax = 0.0, fmax = 0.0;
    for (const auto& l : levels) {
        vmax = std::max(vmax, l.volts);
        fmax = std::max(fmax, l.ghz);
    }
    return (level.volts * level.volts * level.ghz) / (vmax * vmax * fmax);
}

TilePower tile_power(const PowerParams& pp, bool busy, int level_index,
                     const std::vector<VfLevel>& levels, double injection_sum) {
    if (injection_sum < 0)
        throw std::invalid_argument("tile_power: negative injection sum");
    TilePower p;
    double core_dyn = 0.0;
    if (busy) {
        if (level_index < 0 || level_index >= static_cast<int>(levels.size()))
            throw std::invalid_argument("tile_power: unknown V-F level");
        core_dyn = pp.core_dyn_max_w * vf_dynamic_factor(levels[level_index], levels);
    }
    const double rtr_dyn = pp.router_dyn_w * std::min(injection_sum, 1.0);
    p.core_dynamic_w = core_dyn;
    p.dynamic_w = core_dyn + rtr_dyn;
    p.total_w = pp.core_static_w + pp.router_static_w + p.dynamic_w;
    return p;
}

ThermalField::ThermalField(const Mesh& mesh, const ThermalParams& params)
    : mesh_(&mesh), params_(params) {
    params_.validate();
    temps_.assign(mesh.tile_count(), params_.t_ambient_k);
    scratch_.resize(temps_.size());
}

void ThermalField::substep(const std::vector<double>& powers_w, Rng& rng) {
    const double dt = params_.dt;
    const double inv_c = 1.0 / params_.capacity;
    const double noise_std = params_.sigma_rho * std::sqrt(dt);
    std::normal_distribution<double> noise(0.0, 1.0);
    const int m = mesh_->tile_count();
    for (int t = 0; t < m; ++t) {
        double flow = powers_w[t] - (temps_[t] - params_.t_ambient_k) / params_.r_vertical;
        for (int n : mesh_->neighbors(t))
            flow -= (temps_[t] - temps_[n]) / params_.r_lateral;
        double next = temps_[t] + dt * inv_c * flow;
        if (noise_std > 0.0) next += noise_std * noise(rng);
        scratch_[t] = next;
    }
    temps_.swap(scratch_);
}

void ThermalField::step(const std::vector<double>& powers_w, double dt, Rng& rng) {
    const long n = std::lround(dt / params_.dt);
    for (long i = 0; i < n; ++i) substep(powers_w, rng);
}

double peak_temperature(const std::vector<double>& temps) {
    if (temps.empty()) throw std::invalid_argument("peak_temperature: empty field");
    return *std::max_element(temps.begin(), temps.end());
}

double temperature_margin(const std::vector<double>& temps, double t_threshold) {
    if (t_threshold <= 0) throw std::invalid_argument("temperature threshold must be positive");
    return std::max(t_threshold - peak_temperature(temps), 0.0);
}

}  // namespace nocsched
