#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "homog/errors.hpp"
#include "homog/weights.hpp"

namespace homog {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
};

/// Uniform tensor grid on a box in R^N, N in {1,2}, with homogeneous
/// Dirichlet boundary: only interior nodes carry unknowns.
class Grid {
 public:
  Grid() = default;

  int dimension() const { return dim_; }
  const Interval& extent(int axis) const { return ext_[axis]; }
  int nodes(int axis) const { return n_[axis]; }
  int cells(int axis) const { return n_[axis] - 1; }
  double h(int axis) const { return h_[axis]; }

  int interior(int axis) const { return n_[axis] - 2; }

  int interior_count() const {
    int c = interior(0);
    if (dim_ == 2) c *= interior(1);
    return c;
  }

  int cell_count() const {
    int c = cells(0);
    if (dim_ == 2) c *= cells(1);
    return c;
  }

  double cell_measure() const {
    double m = h_[0];
    if (dim_ == 2) m *= h_[1];
    return m;
  }

  double node_coord(int axis, int i) const { return ext_[axis].lo + i * h_[axis]; }

  /// Interior node (ix[,iy]) -> flat index, ix,iy counted from 1.
  int interior_index(int ix, int iy = 1) const {
    if (dim_ == 1) return ix - 1;
    return (iy - 1) * interior(0) + (ix - 1);
  }

  /// Flat cell index; cells counted from 0, axis 0 fastest.
  int cell_index(int cx, int cy = 0) const {
    if (dim_ == 1) return cx;
    return cy * cells(0) + cx;
  }

  Point cell_center(int cx, int cy = 0) const {
    Point p{ext_[0].lo + (cx + 0.5) * h_[0], 0.0};
    if (dim_ == 2) p[1] = ext_[1].lo + (cy + 0.5) * h_[1];
    return p;
  }

  bool operator==(const Grid& o) const {
    if (dim_ != o.dim_) return false;
    for (int i = 0; i < dim_; ++i) {
      if (ext_[i].lo != o.ext_[i].lo || ext_[i].hi != o.ext_[i].hi ||
          n_[i] != o.n_[i])
        return false;
    }
    return true;
  }

  friend Grid build_grid(int dim, const std::vector<Interval>& extents,
                         const std::vector<int>& nodes_per_axis);

 private:
  int dim_ = 1;
  std::array<Interval, 2> ext_{};
  std::array<int, 2> n_ = {3, 3};
  std::array<double, 2> h_ = {0.5, 0.5};
};

inline Grid build_grid(int dim, const std::vector<Interval>& extents,
                       const std::vector<int>& nodes_per_axis) {
  require(dim == 1 || dim == 2, ErrorCode::unsupported_dimension,
          "grids support N in {1,2}");
  require(static_cast<int>(extents.size()) == dim &&
              static_cast<int>(nodes_per_axis.size()) == dim,
          ErrorCode::dimension_mismatch, "extents/nodes must match dimension");
  Grid g;
  g.dim_ = dim;
  for (int i = 0; i < dim; ++i) {
    require(extents[i].hi > extents[i].lo, ErrorCode::degenerate_extents,
            "box extent must have positive length");
    require(nodes_per_axis[i] >= 3, ErrorCode::config_invalid,
            "need at least 3 nodes per axis (one interior node)");
    g.ext_[i] = extents[i];
    g.n_[i] = nodes_per_axis[i];
    g.h_[i] = extents[i].length() / (nodes_per_axis[i] - 1);
  }
  return g;
}

inline Grid unit_interval_grid(int nodes) {
  return build_grid(1, {Interval{0.0, 1.0}}, {nodes});
}

inline Grid unit_square_grid(int nodes_per_axis) {
  return build_grid(2, {Interval{0.0, 1.0}, Interval{0.0, 1.0}},
                    {nodes_per_axis, nodes_per_axis});
}

/// Nodal values on the interior of a grid; the trace on the boundary is
/// implicitly zero.
class DiscreteFunction {
 public:
  DiscreteFunction() = default;

  explicit DiscreteFunction(Grid g)
      : grid_(std::move(g)),
        values_(static_cast<std::size_t>(grid_.interior_count()), 0.0) {}

  DiscreteFunction(Grid g, std::vector<double> interior_values)
      : grid_(std::move(g)), values_(std::move(interior_values)) {
    require(static_cast<int>(values_.size()) == grid_.interior_count(),
            ErrorCode::dimension_mismatch,
            "interior value count does not match the grid");
  }

  const Grid& grid() const { return grid_; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  /// Value at a full node index (boundary nodes return 0).
  double node_value(int ix, int iy = 0) const {
    if (grid_.dimension() == 1) {
      if (ix <= 0 || ix >= grid_.nodes(0) - 1) return 0.0;
      return values_[static_cast<std::size_t>(ix - 1)];
    }
    if (ix <= 0 || ix >= grid_.nodes(0) - 1 || iy <= 0 ||
        iy >= grid_.nodes(1) - 1)
      return 0.0;
    return values_[static_cast<std::size_t>(grid_.interior_index(ix, iy))];
  }

  /// Point evaluation of the piecewise-linear interpolant. 1-D cells are
  /// linear; 2-D cells are split into two right triangles along the SW-NE
  /// diagonal, matching the gradient reconstruction used by the energies.
  double operator()(Point x) const {
    const int dim = grid_.dimension();
    int cx = locate(0, x[0]);
    double tx = (x[0] - grid_.node_coord(0, cx)) / grid_.h(0);
    if (dim == 1) {
      double u0 = node_value(cx);
      double u1 = node_value(cx + 1);
      return u0 + tx * (u1 - u0);
    }
    int cy = locate(1, x[1]);
    double ty = (x[1] - grid_.node_coord(1, cy)) / grid_.h(1);
    double usw = node_value(cx, cy);
    double use = node_value(cx + 1, cy);
    double unw = node_value(cx, cy + 1);
    double une = node_value(cx + 1, cy + 1);
    if (tx >= ty)  // lower triangle (SW, SE, NE)
      return usw * (1.0 - tx) + use * (tx - ty) + une * ty;
    return usw * (1.0 - ty) + unw * (ty - tx) + une * tx;  // upper triangle
  }

  /// Interpolate a callable at the interior nodes.
  template <typename F>
  static DiscreteFunction interpolate(Grid g, F&& f) {
    DiscreteFunction v(std::move(g));
    const Grid& gr = v.grid();
    if (gr.dimension() == 1) {
      for (int i = 1; i <= gr.interior(0); ++i)
        v.values_[static_cast<std::size_t>(i - 1)] = f(Point{gr.node_coord(0, i), 0.0});
    } else {
      for (int j = 1; j <= gr.interior(1); ++j)
        for (int i = 1; i <= gr.interior(0); ++i)
          v.values_[static_cast<std::size_t>(gr.interior_index(i, j))] =
              f(Point{gr.node_coord(0, i), gr.node_coord(1, j)});
    }
    return v;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int locate(int axis, double x) const {
    int c = static_cast<int>((x - grid_.extent(axis).lo) / grid_.h(axis));
    return std::clamp(c, 0, grid_.cells(axis) - 1);
  }

  Grid grid_;
  std::vector<double> values_;
};

}  // namespace homog
