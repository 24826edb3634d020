#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nocsched/mesh.hpp"
#include "nocsched/workload.hpp"

namespace nocsched {

/// Temperatures are normalized so [330 K, 360 K] maps to [0, 1], clamped.
double normalize_temperature(double kelvin);

/// Gaussian kernel of Eq-style form (1/sqrt(2 pi s^2)) exp(-||v-w||^2 / 2 s^2).
/// With mean_square_norm the squared distance is divided by the dimension.
double rbf(const double* v, const double* w, int dim, double sigma,
           bool mean_square_norm = false);

/// One set of RBF centers with a shared width.
struct RbfBank {
    std::vector<double> centers;  // ascending, in [0, 1]
    double sigma = 0.09;
    bool mean_square_norm = false;

    /// Standard center sets: x = 2 -> {0.33, 0.66}, sigma 0.09;
    /// x = 3 -> {0.25, 0.5, 0.75}, sigma 0.07; x = 5 -> {0,...,1}, sigma 0.05.
    static RbfBank standard(int x);

    int size() const { return static_cast<int>(centers.size()); }

    /// 1-D activations against every center.
    std::vector<double> activations(double v) const;

    void validate() const;
};

/// Sparse feature vector: a dense block at an offset inside a larger space.
struct FeatureVector {
    int64_t dim = 0;
    int64_t offset = 0;
    std::vector<double> block;

    double dot(const std::vector<double>& theta) const;
    /// theta += scale * phi
    void axpy(double scale, std::vector<double>& theta) const;
};

/// All x^9 multivariate kernels over the 9 interpolated temperatures, with
/// center vectors ranging over the bank's center grid (last dimension fastest).
/// The block is scaled to unit sum (normalized RBF readout) so downstream
/// learning-rate schedules stay inside the stability region.
std::vector<double> grid_state_features(const std::array<double, 9>& state9,
                                        const RbfBank& bank);

/// g = x^9 features per action.
int64_t grid_feature_count(const RbfBank& bank);

/// Places the state features in the block of the given action.
FeatureVector dvfs_features(const std::array<double, 9>& state9, int action_index,
                            int action_count, const RbfBank& bank);

/// The IR state-action quadruple, already normalized to [0, 1].
struct IrQuadruple {
    double core_temp;
    double dist_center;
    double dist_hotspot;
    double pairing_ratio;
};

IrQuadruple make_ir_quadruple(const Mesh& mesh, const std::vector<double>& temps,
                              int candidate_core,
                              const std::vector<PairCandidate>& unpaired_running);

/// Ratio of xy routes from the candidate core to each unpaired running task's
/// core that pass through the hotspot tile; 0 when there are no candidates.
double pairing_ratio(const Mesh& mesh, int candidate_core, int hotspot_tile,
                     const std::vector<PairCandidate>& unpaired_running);

/// Flattened tensor product of the four 1-D activation vectors, scaled to
/// unit sum like the temperature-grid features.
FeatureVector ir_features(const IrQuadruple& q, const std::array<RbfBank, 4>& banks);

/// Hotspot tile: argmax temperature, ties broken by lowest index.
int hotspot_tile(const std::vector<double>& temps);

}  // namespace nocsched
