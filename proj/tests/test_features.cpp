#include <cmath>
#include <numeric>

#include "doctest.h"
#include "nocsched/features.hpp"

using namespace nocsched;

TEST_CASE("temperature normalization maps [330, 360] K to [0, 1] clamped") {
    CHECK(normalize_temperature(330.0) == doctest::Approx(0.0));
    CHECK(normalize_temperature(360.0) == doctest::Approx(1.0));
    CHECK(normalize_temperature(345.0) == doctest::Approx(0.5));
    CHECK(normalize_temperature(300.0) == doctest::Approx(0.0));
    CHECK(normalize_temperature(400.0) == doctest::Approx(1.0));
}

TEST_CASE("gaussian kernel value against the closed form") {
    const double v = 0.4, w = 0.33, sigma = 0.09;
    const double want = std::exp(-(0.07 * 0.07) / (2 * sigma * sigma)) /
                        std::sqrt(2 * M_PI * sigma * sigma);
    CHECK(rbf(&v, &w, 1, sigma) == doctest::Approx(want));
    // at the center the kernel equals its normalization constant
    CHECK(rbf(&v, &v, 1, sigma) ==
          doctest::Approx(1.0 / std::sqrt(2 * M_PI * sigma * sigma)));
    // mean-square scaling divides the distance by the dimension
    const double a[2] = {0.0, 0.0}, b[2] = {0.3, 0.3};
    const double plain = rbf(a, b, 2, sigma);
    const double scaled = rbf(a, b, 2, sigma, true);
    CHECK(scaled > plain);
    CHECK_THROWS(rbf(&v, &w, 1, 0.0));
}

TEST_CASE("standard center banks") {
    const RbfBank b2 = RbfBank::standard(2);
    CHECK(b2.centers == std::vector<double>{0.33, 0.66});
    CHECK(b2.sigma == doctest::Approx(0.09));
    CHECK(RbfBank::standard(3).size() == 3);
    CHECK(RbfBank::standard(5).size() == 5);
    CHECK_THROWS(RbfBank::standard(4));
}

TEST_CASE("sparse feature vector dot and axpy respect the offset") {
    FeatureVector fv;
    fv.dim = 6;
    fv.offset = 2;
    fv.block = {0.5, 0.25};
    std::vector<double> theta = {9, 9, 4.0, 8.0, 9, 9};
    CHECK(fv.dot(theta) == doctest::Approx(0.5 * 4 + 0.25 * 8));
    fv.axpy(2.0, theta);
    CHECK(theta[2] == doctest::Approx(5.0));
    CHECK(theta[3] == doctest::Approx(8.5));
    CHECK(theta[0] == doctest::Approx(9.0));
    std::vector<double> wrong(5, 0.0);
    CHECK_THROWS(fv.dot(wrong));
}

TEST_CASE("grid features: x^9 kernels, unit sum, last dimension fastest") {
    const RbfBank bank = RbfBank::standard(2);
    std::array<double, 9> state{};
    state.fill(0.33);
    state[8] = 0.66;  // matches center pattern (0,0,...,0,1) -> flat index 1
    const auto f = grid_state_features(state, bank);
    REQUIRE(f.size() == 512);
    CHECK(std::accumulate(f.begin(), f.end(), 0.0) == doctest::Approx(1.0));
    const auto it = std::max_element(f.begin(), f.end());
    CHECK(it - f.begin() == 1);
    CHECK(grid_feature_count(RbfBank::standard(3)) == 19683);
}

TEST_CASE("per-action feature placement") {
    const RbfBank bank = RbfBank::standard(2);
    std::array<double, 9> state{};
    state.fill(0.5);
    const FeatureVector fv = dvfs_features(state, 3, 64, bank);
    CHECK(fv.dim == 512 * 64);
    CHECK(fv.offset == 512 * 3);
    CHECK(fv.block.size() == 512);
}

TEST_CASE("hotspot tile is the argmax with lowest-index ties") {
    CHECK(hotspot_tile({340, 350, 350, 341}) == 1);
    CHECK(hotspot_tile({355, 350, 350, 341}) == 0);
}

TEST_CASE("pairing ratio counts routes crossing the hotspot") {
    Mesh m(4, 4);
    // candidate 0 -> core 3 routes along the top row through tile 1;
    // candidate 0 -> core 12 routes down the first column missing tile 1.
    const std::vector<PairCandidate> both = {{10, 3}, {11, 12}};
    CHECK(pairing_ratio(m, 0, /*hotspot=*/1, both) == doctest::Approx(0.5));
    CHECK(pairing_ratio(m, 0, /*hotspot=*/4, both) == doctest::Approx(0.5));
    CHECK(pairing_ratio(m, 0, /*hotspot=*/0, both) == doctest::Approx(1.0));
    CHECK(pairing_ratio(m, 0, /*hotspot=*/6, both) == doctest::Approx(0.0));
    CHECK(pairing_ratio(m, 0, 1, {}) == doctest::Approx(0.0));
}

TEST_CASE("quadruple features: tensor product of the four banks, unit sum") {
    IrQuadruple q{0.4, 0.2, 0.9, 0.0};
    const std::array<RbfBank, 4> banks = {RbfBank::standard(2), RbfBank::standard(2),
                                          RbfBank::standard(2), RbfBank::standard(2)};
    const FeatureVector fv = ir_features(q, banks);
    CHECK(fv.dim == 16);
    CHECK(fv.offset == 0);
    CHECK(std::accumulate(fv.block.begin(), fv.block.end(), 0.0) ==
          doctest::Approx(1.0));
}

TEST_CASE("quadruple construction normalizes against the mesh diagonal") {
    Mesh m(4, 4);
    std::vector<double> temps(16, 340.0);
    temps[10] = 356.0;  // hotspot
    const auto q = make_ir_quadruple(m, temps, 0, {});
    CHECK(q.core_temp == doctest::Approx(normalize_temperature(340.0)));
    CHECK(q.dist_center == doctest::Approx(std::sqrt(4.5) / m.diagonal()));
    CHECK(q.dist_hotspot == doctest::Approx(std::sqrt(8.0) / m.diagonal()));
    CHECK(q.pairing_ratio == doctest::Approx(0.0));
}
