#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace nocsched {

/// 2-D coordinate in tile widths. x runs along columns, y along rows.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Ordered list of router indices from source to destination tile.
using Route = std::vector<int>;

/// Rectangular NoC mesh. Tiles are numbered row-major starting at the
/// top-left corner; tile spacing is one unit in both dimensions.
class Mesh {
  public:
    Mesh(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int tile_count() const { return rows_ * cols_; }

    int row_of(int tile) const { return tile / cols_; }
    int col_of(int tile) const { return tile % cols_; }
    int tile_at(int col, int row) const { return row * cols_ + col; }

    Point position(int tile) const;
    Point center() const;

    /// Lateral neighbors (2 to 4 per tile).
    const std::vector<int>& neighbors(int tile) const { return neighbors_[tile]; }

    double diagonal() const;

    bool valid_tile(int tile) const { return tile >= 0 && tile < tile_count(); }

  private:
    int rows_;
    int cols_;
    std::vector<std::vector<int>> neighbors_;
};

Mesh build_mesh(int rows, int cols);

/// Deterministic xy route: column segment first, then row segment.
Route xy_route(const Mesh& mesh, int src, int dst);

/// Euclidean distance from a tile to an arbitrary point, in tile widths.
double dist_from_point(const Mesh& mesh, int tile, Point p);

/// Samples the per-core temperature field at the 3x3 grid of normalized
/// chip coordinates {0, 1/2, 1}^2, bilinearly interpolated and returned
/// row-major.
std::array<double, 9> interpolate_grid(const Mesh& mesh,
                                       const std::vector<double>& core_temps);

}  // namespace nocsched
