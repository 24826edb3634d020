#include "nocsched/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nocsched {

namespace {
constexpr double kTempLow = 330.0;
constexpr double kTempHigh = 360.0;
constexpr double kTwoPi = 6.283185307179586;
}  // namespace

double normalize_temperature(double kelvin) {
    return std::clamp((kelvin - kTempLow) / (kTempHigh - kTempLow), 0.0, 1.0);
}

double rbf(const double* v, const double* w, int dim, double sigma,
           bool mean_square_norm) {
    if (sigma <= 0) throw std::invalid_argument("rbf: width must be positive");
    double sq = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double d = v[i] - w[i];
        sq += d * d;
    }
    if (mean_square_norm) sq /= dim;
    return std::exp(-sq / (2.0 * sigma * sigma)) / std::sqrt(kTwoPi * sigma * sigma);
}

RbfBank RbfBank::standard(int x) {
    RbfBank b;
    switch (x) {
        case 2: b.centers = {0.33, 0.66}; b.sigma = 0.09; break;
        case 3: b.centers = {0.25, 0.5, 0.75}; b.sigma = 0.07; break;
        case 5: b.centers = {0.0, 0.25, 0.5, 0.75, 1.0}; b.sigma = 0.05; break;
        default:
            throw std::invalid_argument("standard banks exist for x in {2, 3, 5}");
    }
    return b;
}

void RbfBank::validate() const {
    if (centers.empty()) throw std::invalid_argument("rbf bank has no centers");
    if (sigma <= 0) throw std::invalid_argument("rbf width must be positive");
    if (!std::is_sorted(centers.begin(), centers.end()))
        throw std::invalid_argument("rbf centers must be ascending");
}

std::vector<double> RbfBank::activations(double v) const {
    std::vector<double> out(centers.size());
    for (size_t i = 0; i < centers.size(); ++i)
        out[i] = rbf(&v, &centers[i], 1, sigma, mean_square_norm);
    return out;
}

double FeatureVector::dot(const std::vector<double>& theta) const {
    if (static_cast<int64_t>(theta.size()) != dim)
        throw std::invalid_argument("feature/weight dimension mismatch");
    double s = 0.0;
    for (size_t i = 0; i < block.size(); ++i) s += theta[offset + i] * block[i];
    return s;
}

void FeatureVector::axpy(double scale, std::vector<double>& theta) const {
    if (static_cast<int64_t>(theta.size()) != dim)
        throw std::invalid_argument("feature/weight dimension mismatch");
    for (size_t i = 0; i < block.size(); ++i) theta[offset + i] += scale * block[i];
}

namespace {

// Scales a composite activation block to unit sum. Raw multivariate kernels
// carry the (2 pi sigma^2)^(-d/2) prefactor, so their norms grow huge as the
// dimension rises; unnormalized blocks make alpha * ||phi||^2 exceed the
// stability bound of the semi-gradient update and the weights diverge.
void normalize_block(std::vector<double>& block) {
    double sum = 0.0;
    for (double v : block) sum += v;
    if (sum > 0.0)
        for (double& v : block) v /= sum;
}

}  // namespace

int64_t grid_feature_count(const RbfBank& bank) {
    int64_t g = 1;
    for (int d = 0; d < 9; ++d) g *= bank.size();
    return g;
}

std::vector<double> grid_state_features(const std::array<double, 9>& state9,
                                        const RbfBank& bank) {
    bank.validate();
    const int x = bank.size();
    // squared distance to each center, per dimension
    double sq[9][8];
    if (x > 8) throw std::invalid_argument("grid_state_features: too many centers");
    for (int d = 0; d < 9; ++d)
        for (int j = 0; j < x; ++j) {
            const double diff = state9[d] - bank.centers[j];
            sq[d][j] = diff * diff;
        }
    const int64_t g = grid_feature_count(bank);
    const double inv2s2 = 1.0 / (2.0 * bank.sigma * bank.sigma);
    const double norm = 1.0 / std::sqrt(kTwoPi * bank.sigma * bank.sigma);
    const double dim_scale = bank.mean_square_norm ? 1.0 / 9.0 : 1.0;
    std::vector<double> out(g);
    std::array<int, 9> idx{};
    for (int64_t i = 0; i < g; ++i) {
        double s = 0.0;
        for (int d = 0; d < 9; ++d) s += sq[d][idx[d]];
        out[i] = norm * std::exp(-s * dim_scale * inv2s2);
        // advance the multi-index, last dimension fastest
        for (int d = 8; d >= 0; --d) {
            if (++idx[d] < x) break;
            idx[d] = 0;
        }
    }
    normalize_block(out);
    return out;
}

FeatureVector dvfs_features(const std::array<double, 9>& state9, int action_index,
                            int action_count, const RbfBank& bank) {
    FeatureVector fv;
    fv.block = grid_state_features(state9, bank);
    const int64_t g = static_cast<int64_t>(fv.block.size());
    fv.dim = g * action_count;
    fv.offset = g * action_index;
    return fv;
}

int hotspot_tile(const std::vector<double>& temps) {
    return static_cast<int>(std::max_element(temps.begin(), temps.end()) -
                            temps.begin());
}

double pairing_ratio(const Mesh& mesh, int candidate_core, int hotspot_tile,
                     const std::vector<PairCandidate>& unpaired_running) {
    if (unpaired_running.empty()) return 0.0;
    int crossing = 0;
    for (const auto& cand : unpaired_running) {
        const Route r = xy_route(mesh, candidate_core, cand.core);
        if (std::find(r.begin(), r.end(), hotspot_tile) != r.end()) ++crossing;
    }
    return static_cast<double>(crossing) /
           static_cast<double>(unpaired_running.size());
}

IrQuadruple make_ir_quadruple(const Mesh& mesh, const std::vector<double>& temps,
                              int candidate_core,
                              const std::vector<PairCandidate>& unpaired_running) {
    const int hot = hotspot_tile(temps);
    const double diag = mesh.diagonal();
    IrQuadruple q;
    q.core_temp = normalize_temperature(temps[candidate_core]);
    q.dist_center = dist_from_point(mesh, candidate_core, mesh.center()) / diag;
    q.dist_hotspot = dist_from_point(mesh, candidate_core, mesh.position(hot)) / diag;
    q.pairing_ratio = pairing_ratio(mesh, candidate_core, hot, unpaired_running);
    return q;
}

FeatureVector ir_features(const IrQuadruple& q, const std::array<RbfBank, 4>& banks) {
    for (const auto& b : banks) b.validate();
    const std::array<std::vector<double>, 4> act = {
        banks[0].activations(q.core_temp), banks[1].activations(q.dist_center),
        banks[2].activations(q.dist_hotspot), banks[3].activations(q.pairing_ratio)};
    FeatureVector fv;
    fv.dim = 1;
    for (const auto& a : act) fv.dim *= static_cast<int64_t>(a.size());
    fv.offset = 0;
    fv.block.resize(fv.dim);
    int64_t i = 0;
    for (double a0 : act[0])
        for (double a1 : act[1])
            for (double a2 : act[2])
                for (double a3 : act[3]) fv.block[i++] = a0 * a1 * a2 * a3;
    normalize_block(fv.block);
    return fv;
}

}  // namespace nocsched
