#include "nocsched/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nocsched {

Mesh::Mesh(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 2 || cols < 2)
        throw std::invalid_argument("mesh dimensions must be at least 2x2");
    neighbors_.resize(static_cast<size_t>(rows) * cols);
    for (int t = 0; t < tile_count(); ++t) {
        const int r = row_of(t), c = col_of(t);
        if (c > 0) neighbors_[t].push_back(tile_at(c - 1, r));
        if (c < cols_ - 1) neighbors_[t].push_back(tile_at(c + 1, r));
        if (r > 0) neighbors_[t].push_back(tile_at(c, r - 1));
        if (r < rows_ - 1) neighbors_[t].push_back(tile_at(c, r + 1));
    }
}

Point Mesh::position(int tile) const {
    return {static_cast<double>(col_of(tile)), static_cast<double>(row_of(tile))};
}

Point Mesh::center() const {
    return {(cols_ - 1) / 2.0, (rows_ - 1) / 2.0};
}

double Mesh::diagonal() const {
    return std::hypot(cols_ - 1.0, rows_ - 1.0);
}

Mesh build_mesh(int rows, int cols) { return Mesh(rows, cols); }

Route xy_route(const Mesh& mesh, int src, int dst) {
    if (!mesh.valid_tile(src) || !mesh.valid_tile(dst))
        throw std::out_of_range("xy_route: tile index out of range");
    Route route;
    int c = mesh.col_of(src);
    int r = mesh.row_of(src);
    const int dc = mesh.col_of(dst);
    const int dr = mesh.row_of(dst);
    route.push_back(mesh.tile_at(c, r));
    while (c != dc) {
        c += (dc > c) ? 1 : -1;
        route.push_back(mesh.tile_at(c, r));
    }
    while (r != dr) {
        r += (dr > r) ? 1 : -1;
        route.push_back(mesh.tile_at(c, r));
    }
    return route;
}

double dist_from_point(const Mesh& mesh, int tile, Point p) {
    if (!mesh.valid_tile(tile))
        throw std::out_of_range("dist_from_point: tile index out of range");
    const Point q = mesh.position(tile);
    return std::hypot(q.x - p.x, q.y - p.y);
}

std::array<double, 9> interpolate_grid(const Mesh& mesh,
                                       const std::vector<double>& core_temps) {
    if (core_temps.size() != static_cast<size_t>(mesh.tile_count()))
        throw std::invalid_argument("interpolate_grid: one temperature per core required");
    std::array<double, 9> out{};
    static constexpr double kGrid[3] = {0.0, 0.5, 1.0};
    int idx = 0;
    for (double gy : kGrid) {
        for (double gx : kGrid) {
            const double x = gx * (mesh.cols() - 1);
            const double y = gy * (mesh.rows() - 1);
            int ix = std::min(static_cast<int>(x), mesh.cols() - 2);
            int iy = std::min(static_cast<int>(y), mesh.rows() - 2);
            const double fx = x - ix;
            const double fy = y - iy;
            const double t00 = core_temps[mesh.tile_at(ix, iy)];
            const double t10 = core_temps[mesh.tile_at(ix + 1, iy)];
            const double t01 = core_temps[mesh.tile_at(ix, iy + 1)];
            const double t11 = core_temps[mesh.tile_at(ix + 1, iy + 1)];
            out[idx++] = t00 * (1 - fx) * (1 - fy) + t10 * fx * (1 - fy) +
                         t01 * (1 - fx) * fy + t11 * fx * fy;
        }
    }
    return out;
}

}  // namespace nocsched
