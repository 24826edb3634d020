#include "doctest.h"
#include "nocsched/config.hpp"

using namespace nocsched;

TEST_CASE("config defaults: 4x4 mesh, aggregate rate 8.41, x = 2 centers") {
    const ExperimentConfig cfg = ExperimentConfig::parse("{}");
    CHECK(cfg.sim.rows == 4);
    CHECK(cfg.sim.cols == 4);
    CHECK(cfg.scheduler == "dvfs");
    CHECK(cfg.bank_x == 2);
    CHECK(cfg.lr_a == doctest::Approx(50.0));
    CHECK(cfg.lr_b == doctest::Approx(1000.0));
    const SimConfig sc = cfg.resolved_sim("rand", 1);
    CHECK(sc.lambda() == doctest::Approx(8.41));
    CHECK(sc.t_threshold_k == doctest::Approx(358.0));
}

TEST_CASE("config overrides flow into the resolved run") {
    const ExperimentConfig cfg = ExperimentConfig::parse(
        R"({"lambda": 5.0, "mesh": {"rows": 5, "cols": 5}, "scheduler": "ir",
            "lr_a": 500, "lr_b": 5000, "seeds": [2, 3]})");
    CHECK(cfg.lambda == doctest::Approx(5.0));
    CHECK(cfg.seeds == std::vector<uint64_t>{2, 3});
    const SimConfig sc = cfg.resolved_sim(cfg.scheduler, 2);
    CHECK(sc.rows == 5);
    CHECK(sc.lambda() == doctest::Approx(5.0));
    CHECK(sc.seed == 2);
    const LearnerConfig lc = cfg.learner("ir");
    CHECK(lc.mode == SchedMode::Ir);
    CHECK(lc.lr_a == doctest::Approx(500.0));
}

TEST_CASE("unknown keys and type mismatches are rejected by name") {
    CHECK_THROWS(ExperimentConfig::parse(R"({"lambdaa": 5.0})"));
    CHECK_THROWS(ExperimentConfig::parse(R"({"lambda": "fast"})"));
    CHECK_THROWS(ExperimentConfig::parse("not json"));
}

TEST_CASE("quota scheduling is implied by the quota-based mode") {
    const ExperimentConfig cfg = ExperimentConfig::parse("{}");
    CHECK(cfg.resolved_sim("ldt", 1).quota_mode);
    CHECK(!cfg.resolved_sim("lct", 1).quota_mode);
}
