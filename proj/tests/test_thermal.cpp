#include <cmath>

#include "doctest.h"
#include "nocsched/thermal.hpp"

using namespace nocsched;

TEST_CASE("dynamic scaling factor is V^2 f relative to the maximum level") {
    const auto levels = default_vf_levels();
    CHECK(vf_dynamic_factor(levels[3], levels) == doctest::Approx(1.0));
    // (0.9^2 * 2.7) / (1.2^2 * 3.6)
    CHECK(vf_dynamic_factor(levels[0], levels) == doctest::Approx(0.421875));
    CHECK(vf_dynamic_factor(levels[2], levels) ==
          doctest::Approx(1.1 * 1.1 * 3.3 / (1.2 * 1.2 * 3.6)));
}

TEST_CASE("tile power splits static, core-dynamic and router-dynamic parts") {
    PowerParams pp;
    const auto levels = default_vf_levels();
    const TilePower idle = tile_power(pp, false, 3, levels, 0.0);
    CHECK(idle.total_w == doctest::Approx(pp.core_static_w + pp.router_static_w));
    CHECK(idle.dynamic_w == doctest::Approx(0.0));
    CHECK(idle.core_dynamic_w == doctest::Approx(0.0));

    const TilePower busy = tile_power(pp, true, 3, levels, 0.0);
    CHECK(busy.core_dynamic_w == doctest::Approx(pp.core_dyn_max_w));
    CHECK(busy.dynamic_w == doctest::Approx(pp.core_dyn_max_w));
    CHECK(busy.total_w == doctest::Approx(2.0 + 14.0 + 0.5));

    // router traffic adds dynamic power proportional to the injection sum
    const TilePower traffic = tile_power(pp, true, 3, levels, 0.5);
    CHECK(traffic.dynamic_w ==
          doctest::Approx(pp.core_dyn_max_w + 0.5 * pp.router_dyn_w));
    CHECK(traffic.core_dynamic_w == doctest::Approx(pp.core_dyn_max_w));

    // slowest level scales the core dynamic part only
    const TilePower slow = tile_power(pp, true, 0, levels, 0.0);
    CHECK(slow.core_dynamic_w == doctest::Approx(pp.core_dyn_max_w * 0.421875));
}

TEST_CASE("deterministic steady state matches the resistive balance") {
    Mesh m(2, 2);
    ThermalParams tp;
    tp.sigma_rho = 0.0;
    ThermalField field(m, tp);
    Rng rng(1);
    const std::vector<double> p = {3.0, 7.0, 11.0, 1.0};
    field.step(p, 400.0, rng);
    // At stationarity each node's power equals its vertical loss plus the net
    // lateral flow to its neighbors.
    const auto& t = field.temps();
    for (int i = 0; i < 4; ++i) {
        double out = (t[i] - tp.t_ambient_k) / tp.r_vertical;
        for (int n : m.neighbors(i)) out += (t[i] - t[n]) / tp.r_lateral;
        CHECK(out == doctest::Approx(p[i]).epsilon(1e-4));
    }
}

TEST_CASE("temperatures stay inside the physical envelope") {
    Mesh m(4, 4);
    ThermalParams tp;
    tp.sigma_rho = 0.0;
    ThermalField field(m, tp);
    Rng rng(3), rng_p(11);
    std::uniform_real_distribution<double> up(0.0, 20.0);
    for (int step = 0; step < 200; ++step) {
        std::vector<double> p(16);
        for (auto& v : p) v = up(rng_p);
        field.step(p, 0.5, rng);
        for (double t : field.temps()) {
            CHECK(t >= tp.t_ambient_k - 1e-9);
            CHECK(t <= tp.t_ambient_k + 20.0 * tp.r_vertical + 1e-9);
        }
    }
}

TEST_CASE("thermal noise is seed-reproducible and seed-sensitive") {
    Mesh m(2, 2);
    ThermalParams tp;  // default sigma_rho > 0
    const std::vector<double> p = {5, 5, 5, 5};
    auto run = [&](uint64_t seed) {
        ThermalField f(m, tp);
        Rng rng(seed);
        f.step(p, 5.0, rng);
        return f.temps();
    };
    CHECK(run(1) == run(1));
    CHECK(run(1) != run(2));
}

TEST_CASE("peak and margin helpers") {
    const std::vector<double> temps = {340.0, 355.5, 351.0, 339.9};
    CHECK(peak_temperature(temps) == doctest::Approx(355.5));
    CHECK(temperature_margin(temps, 358.0) == doctest::Approx(2.5));
    CHECK(temperature_margin(temps, 350.0) == doctest::Approx(0.0));
}

TEST_CASE("parameter validation rejects nonsense") {
    ThermalParams tp;
    tp.capacity = -1.0;
    CHECK_THROWS(tp.validate());
    ThermalParams tp2;
    tp2.dt = 0.0;
    CHECK_THROWS(tp2.validate());
}
