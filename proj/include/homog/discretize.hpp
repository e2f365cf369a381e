#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "homog/cholesky.hpp"
#include "homog/coefficient.hpp"
#include "homog/grid.hpp"
#include "homog/quadrature.hpp"
#include "homog/sparse.hpp"
#include "homog/weights.hpp"

namespace homog {

namespace detail {

/// Split [a,b] at the discontinuity points of rho(x/eps) for a piecewise
/// weight with m cells per period (x = eps*j/m). Other weight kinds return
/// just {a,b}.
inline std::vector<double> weight_breakpoints(const PeriodicWeight& w,
                                              double eps, double a, double b) {
  std::vector<double> pts{a, b};
  if (w.kind() != PeriodicWeight::Kind::piecewise) return pts;
  double step = eps / w.piecewise_cells();
  require((b - a) / step < 4.0e6, ErrorCode::projection_unresolvable,
          "piecewise weight period too small for exact cell integration");
  double first = std::ceil(a / step) * step;
  for (double x = first; x < b; x += step)
    if (x > a && x < b) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

/// Integrate f over [a,b] resolving the eps-oscillation of a weight:
/// segments split at piecewise breakpoints, then Gauss panels no longer
/// than scale.
template <typename F>
double integrate_resolving(F&& f, const PeriodicWeight& w, double eps,
                           double a, double b, double scale) {
  auto pts = weight_breakpoints(w, eps, a, b);
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    double lo = pts[s], hi = pts[s + 1];
    total += gl8_integrate(f, lo, hi, panels_for(hi - lo, scale));
  }
  return total;
}

}  // namespace detail

/// Per-cell averages of rho(x/eps) over the grid cells. Piecewise-constant
/// weights are integrated exactly (segment decomposition at their
/// discontinuities); trigonometric weights use Gauss panels no longer than
/// eps/4 per axis. Throws if the oscillation cannot be resolved within the
/// quadrature budget.
inline std::vector<double> project_weight(const PeriodicWeight& w, double eps,
                                          const Grid& g) {
  require(eps > 0.0, ErrorCode::nonpositive_eps, "eps must be positive");
  require(w.dimension() == g.dimension(), ErrorCode::dimension_mismatch,
          "weight and grid dimension differ");
  std::vector<double> field(static_cast<std::size_t>(g.cell_count()), 0.0);
  const double scale = eps / 4.0;

  if (g.dimension() == 1) {
    for (int cx = 0; cx < g.cells(0); ++cx) {
      double a = g.node_coord(0, cx), b = g.node_coord(0, cx + 1);
      double integral = detail::integrate_resolving(
          [&](double x) { return w.eval_scaled(eps, {x, 0.0}); }, w, eps, a, b,
          scale);
      field[static_cast<std::size_t>(cx)] = integral / (b - a);
    }
    return field;
  }

  for (int cy = 0; cy < g.cells(1); ++cy) {
    double ay = g.node_coord(1, cy), by = g.node_coord(1, cy + 1);
    for (int cx = 0; cx < g.cells(0); ++cx) {
      double ax = g.node_coord(0, cx), bx = g.node_coord(0, cx + 1);
      double integral = detail::integrate_resolving(
          [&](double y) {
            return detail::integrate_resolving(
                [&](double x) { return w.eval_scaled(eps, {x, y}); }, w, eps,
                ax, bx, scale);
          },
          w, eps, ay, by, scale);
      field[static_cast<std::size_t>(g.cell_index(cx, cy))] =
          integral / ((bx - ax) * (by - ay));
    }
  }
  return field;
}

/// Energy integral of the potential: E(v) = sum over cells of
/// |cell| * Phi(x_c, grad v). In 1-D the gradient is the forward difference
/// per cell; in 2-D each cell is split into two right triangles along the
/// SW-NE diagonal and the constant P1 gradient of each triangle is used
/// (half the cell measure each), with Phi and A(x) sampled at cell centers.
/// At p=2 this reproduces the 5-point stencil exactly.
inline double phi_energy(const CoefficientField& c, const DiscreteFunction& v) {
  const Grid& g = v.grid();
  require(c.dimension() == g.dimension(), ErrorCode::dimension_mismatch,
          "coefficient and grid dimension differ");
  double total = 0.0;
  if (g.dimension() == 1) {
    const double h = g.h(0);
    for (int cx = 0; cx < g.cells(0); ++cx) {
      double gx = (v.node_value(cx + 1) - v.node_value(cx)) / h;
      total += h * c.potential(g.cell_center(cx), {gx, 0.0});
    }
    return total;
  }
  const double hx = g.h(0), hy = g.h(1);
  const double half = 0.5 * hx * hy;
  for (int cy = 0; cy < g.cells(1); ++cy) {
    for (int cx = 0; cx < g.cells(0); ++cx) {
      double usw = v.node_value(cx, cy), use = v.node_value(cx + 1, cy);
      double unw = v.node_value(cx, cy + 1), une = v.node_value(cx + 1, cy + 1);
      Point xc = g.cell_center(cx, cy);
      Vec2 g1{(use - usw) / hx, (une - use) / hy};
      Vec2 g2{(une - unw) / hx, (unw - usw) / hy};
      total += half * (c.potential(xc, g1) + c.potential(xc, g2));
    }
  }
  return total;
}

/// Gradient of phi_energy with respect to the interior nodal values,
/// assembled from the cellwise flux (grad_xi Phi = p a).
inline std::vector<double> phi_energy_gradient(const CoefficientField& c,
                                               const DiscreteFunction& v) {
  const Grid& g = v.grid();
  std::vector<double> grad(static_cast<std::size_t>(g.interior_count()), 0.0);
  const double p = c.p();
  if (g.dimension() == 1) {
    const double h = g.h(0);
    for (int cx = 0; cx < g.cells(0); ++cx) {
      double gx = (v.node_value(cx + 1) - v.node_value(cx)) / h;
      double a = p * c.flux(g.cell_center(cx), {gx, 0.0})[0];
      // d(gx)/du_{cx} = -1/h, d(gx)/du_{cx+1} = +1/h, cell measure h.
      if (cx >= 1) grad[static_cast<std::size_t>(cx - 1)] -= a;
      if (cx + 1 <= g.interior(0)) grad[static_cast<std::size_t>(cx)] += a;
    }
    return grad;
  }
  const double hx = g.h(0), hy = g.h(1);
  const double half = 0.5 * hx * hy;
  auto add = [&](int ix, int iy, double val) {
    if (ix >= 1 && ix <= g.interior(0) && iy >= 1 && iy <= g.interior(1))
      grad[static_cast<std::size_t>(g.interior_index(ix, iy))] += val;
  };
  for (int cy = 0; cy < g.cells(1); ++cy) {
    for (int cx = 0; cx < g.cells(0); ++cx) {
      double usw = v.node_value(cx, cy), use = v.node_value(cx + 1, cy);
      double unw = v.node_value(cx, cy + 1), une = v.node_value(cx + 1, cy + 1);
      Point xc = g.cell_center(cx, cy);
      {  // lower triangle (SW,SE,NE): grads (-1/hx,0),(1/hx,-1/hy),(0,1/hy)
        Vec2 gv{(use - usw) / hx, (une - use) / hy};
        Vec2 a = c.flux(xc, gv);
        a[0] *= p * half;
        a[1] *= p * half;
        add(cx, cy, -a[0] / hx);
        add(cx + 1, cy, a[0] / hx - a[1] / hy);
        add(cx + 1, cy + 1, a[1] / hy);
      }
      {  // upper triangle (SW,NE,NW): grads (0,-1/hy),(1/hx,0),(-1/hx,1/hy)
        Vec2 gv{(une - unw) / hx, (unw - usw) / hy};
        Vec2 a = c.flux(xc, gv);
        a[0] *= p * half;
        a[1] *= p * half;
        add(cx, cy, -a[1] / hy);
        add(cx + 1, cy + 1, a[0] / hx);
        add(cx, cy + 1, -a[0] / hx + a[1] / hy);
      }
    }
  }
  return grad;
}

/// Weighted p-mass: sum over cells of field_c * |v(center)|^p * |cell|,
/// with the midpoint value taken as the corner average. The sign may be
/// negative for indefinite fields.
inline double weighted_p_mass(const std::vector<double>& field,
                              const DiscreteFunction& v, double p) {
  const Grid& g = v.grid();
  require(static_cast<int>(field.size()) == g.cell_count(),
          ErrorCode::dimension_mismatch, "field and grid cell count differ");
  const double measure = g.cell_measure();
  double total = 0.0;
  if (g.dimension() == 1) {
    for (int cx = 0; cx < g.cells(0); ++cx) {
      double mid = 0.5 * (v.node_value(cx) + v.node_value(cx + 1));
      total += field[static_cast<std::size_t>(cx)] *
               std::pow(std::abs(mid), p) * measure;
    }
    return total;
  }
  for (int cy = 0; cy < g.cells(1); ++cy) {
    for (int cx = 0; cx < g.cells(0); ++cx) {
      double mid = 0.25 * (v.node_value(cx, cy) + v.node_value(cx + 1, cy) +
                           v.node_value(cx, cy + 1) +
                           v.node_value(cx + 1, cy + 1));
      total += field[static_cast<std::size_t>(g.cell_index(cx, cy))] *
               std::pow(std::abs(mid), p) * measure;
    }
  }
  return total;
}

/// Lumped weighted p-mass: sum over cells of
/// field_c * |cell|/2^N * sum over corners |u_corner|^p. At p = 2 this is
/// exactly the quadratic form of assemble_weighted_mass, which keeps the
/// direct minimizer and the pencil solver on the same discrete functional.
inline double lumped_p_mass(const std::vector<double>& field,
                            const DiscreteFunction& v, double p) {
  const Grid& g = v.grid();
  require(static_cast<int>(field.size()) == g.cell_count(),
          ErrorCode::dimension_mismatch, "field and grid cell count differ");
  const double share = g.cell_measure() / (g.dimension() == 1 ? 2.0 : 4.0);
  double total = 0.0;
  if (g.dimension() == 1) {
    for (int cx = 0; cx < g.cells(0); ++cx) {
      double f = field[static_cast<std::size_t>(cx)] * share;
      total += f * (std::pow(std::abs(v.node_value(cx)), p) +
                    std::pow(std::abs(v.node_value(cx + 1)), p));
    }
    return total;
  }
  for (int cy = 0; cy < g.cells(1); ++cy) {
    for (int cx = 0; cx < g.cells(0); ++cx) {
      double f = field[static_cast<std::size_t>(g.cell_index(cx, cy))] * share;
      total += f * (std::pow(std::abs(v.node_value(cx, cy)), p) +
                    std::pow(std::abs(v.node_value(cx + 1, cy)), p) +
                    std::pow(std::abs(v.node_value(cx, cy + 1)), p) +
                    std::pow(std::abs(v.node_value(cx + 1, cy + 1)), p));
    }
  }
  return total;
}

/// Gradient of lumped_p_mass: diagonal in the nodal values.
inline std::vector<double> lumped_p_mass_gradient(
    const std::vector<double>& field, const DiscreteFunction& v, double p) {
  const Grid& g = v.grid();
  std::vector<double> grad(static_cast<std::size_t>(g.interior_count()), 0.0);
  const double share = g.cell_measure() / (g.dimension() == 1 ? 2.0 : 4.0);
  auto add = [&](int flat, double f, double val) {
    if (val != 0.0)
      grad[static_cast<std::size_t>(flat)] +=
          f * p * std::copysign(std::pow(std::abs(val), p - 1.0), val);
  };
  if (g.dimension() == 1) {
    for (int cx = 0; cx < g.cells(0); ++cx) {
      double f = field[static_cast<std::size_t>(cx)] * share;
      for (int node : {cx, cx + 1})
        if (node >= 1 && node <= g.interior(0))
          add(node - 1, f, v.node_value(node));
    }
    return grad;
  }
  for (int cy = 0; cy < g.cells(1); ++cy) {
    for (int cx = 0; cx < g.cells(0); ++cx) {
      double f = field[static_cast<std::size_t>(g.cell_index(cx, cy))] * share;
      for (int iy : {cy, cy + 1})
        for (int ix : {cx, cx + 1})
          if (ix >= 1 && ix <= g.interior(0) && iy >= 1 && iy <= g.interior(1))
            add(g.interior_index(ix, iy), f, v.node_value(ix, iy));
    }
  }
  return grad;
}

/// Stiffness matrix for the p=2 operator -div(A(x) grad u), assembled with
/// A frozen at cell centers. 1-D: tridiagonal with diag 2 A/h, off-diagonal
/// -A/h; 2-D: the 5-point stencil (plus diagonal coupling when A has
/// off-diagonal entries), exactly the Gram matrix of phi_energy at p=2.
inline SparseSymmetric assemble_stiffness(const CoefficientField& c,
                                          const Grid& g) {
  require(c.p() == 2.0, ErrorCode::config_invalid,
          "stiffness assembly requires p = 2");
  require(c.dimension() == g.dimension(), ErrorCode::dimension_mismatch,
          "coefficient and grid dimension differ");
  std::vector<Triplet> ts;
  const int n = g.interior_count();
  if (g.dimension() == 1) {
    const double h = g.h(0);
    for (int cx = 0; cx < g.cells(0); ++cx) {
      double a = c.matrix_at(g.cell_center(cx))[0][0] / h;
      int left = cx;       // node index cx (interior iff >=1)
      int right = cx + 1;  // node index cx+1 (interior iff <= n)
      bool li = left >= 1 && left <= g.interior(0);
      bool ri = right >= 1 && right <= g.interior(0);
      if (li) ts.push_back({left - 1, left - 1, a});
      if (ri) ts.push_back({right - 1, right - 1, a});
      if (li && ri) ts.push_back({left - 1, right - 1, -a});
    }
    return SparseSymmetric::from_triplets(n, ts);
  }
  const double hx = g.h(0), hy = g.h(1);
  const double half = 0.5 * hx * hy;
  auto idx = [&](int ix, int iy) -> int {
    if (ix < 1 || ix > g.interior(0) || iy < 1 || iy > g.interior(1)) return -1;
    return g.interior_index(ix, iy);
  };
  for (int cy = 0; cy < g.cells(1); ++cy) {
    for (int cx = 0; cx < g.cells(0); ++cx) {
      Mat2 A = c.matrix_at(g.cell_center(cx, cy));
      // basis gradients per triangle, vertices listed with node ids
      struct V {
        int ix, iy;
        Vec2 grad;
      };
      std::array<std::array<V, 3>, 2> tris = {{
          {{{cx, cy, {-1.0 / hx, 0.0}},
            {cx + 1, cy, {1.0 / hx, -1.0 / hy}},
            {cx + 1, cy + 1, {0.0, 1.0 / hy}}}},
          {{{cx, cy, {0.0, -1.0 / hy}},
            {cx + 1, cy + 1, {1.0 / hx, 0.0}},
            {cx, cy + 1, {-1.0 / hx, 1.0 / hy}}}},
      }};
      for (const auto& tri : tris) {
        for (int a = 0; a < 3; ++a) {
          int ia = idx(tri[a].ix, tri[a].iy);
          if (ia < 0) continue;
          Vec2 Aga{A[0][0] * tri[a].grad[0] + A[0][1] * tri[a].grad[1],
                   A[1][0] * tri[a].grad[0] + A[1][1] * tri[a].grad[1]};
          for (int b = a; b < 3; ++b) {
            int ib = idx(tri[b].ix, tri[b].iy);
            if (ib < 0) continue;
            double k = half * (Aga[0] * tri[b].grad[0] + Aga[1] * tri[b].grad[1]);
            if (a == b)
              ts.push_back({ia, ia, k});
            else
              ts.push_back({ia, ib, k});
          }
        }
      }
    }
  }
  return SparseSymmetric::from_triplets(n, ts);
}

/// Lumped (diagonal) weighted mass: the entry of node i is the sum over
/// adjacent cells of (cell weight) * |cell| / 2^N. Indefinite when the
/// projected weight changes sign.
inline SparseSymmetric assemble_weighted_mass(const std::vector<double>& field,
                                              const Grid& g) {
  require(static_cast<int>(field.size()) == g.cell_count(),
          ErrorCode::dimension_mismatch, "field and grid cell count differ");
  std::vector<double> diag(static_cast<std::size_t>(g.interior_count()), 0.0);
  const double share = g.cell_measure() / (g.dimension() == 1 ? 2.0 : 4.0);
  if (g.dimension() == 1) {
    for (int cx = 0; cx < g.cells(0); ++cx) {
      double val = field[static_cast<std::size_t>(cx)] * share;
      for (int node : {cx, cx + 1})
        if (node >= 1 && node <= g.interior(0))
          diag[static_cast<std::size_t>(node - 1)] += val;
    }
  } else {
    for (int cy = 0; cy < g.cells(1); ++cy) {
      for (int cx = 0; cx < g.cells(0); ++cx) {
        double val = field[static_cast<std::size_t>(g.cell_index(cx, cy))] * share;
        for (int iy : {cy, cy + 1})
          for (int ix : {cx, cx + 1})
            if (ix >= 1 && ix <= g.interior(0) && iy >= 1 && iy <= g.interior(1))
              diag[static_cast<std::size_t>(g.interior_index(ix, iy))] += val;
      }
    }
  }
  return SparseSymmetric::diagonal(diag);
}

/// L^p norm of v and of its reconstructed gradient, using the same
/// per-cell (1-D) / per-triangle (2-D) reconstruction as the energies.
inline double grad_p_norm(const DiscreteFunction& v, double p) {
  const Grid& g = v.grid();
  double total = 0.0;
  if (g.dimension() == 1) {
    const double h = g.h(0);
    for (int cx = 0; cx < g.cells(0); ++cx) {
      double gx = (v.node_value(cx + 1) - v.node_value(cx)) / h;
      total += h * std::pow(std::abs(gx), p);
    }
  } else {
    const double hx = g.h(0), hy = g.h(1);
    const double half = 0.5 * hx * hy;
    for (int cy = 0; cy < g.cells(1); ++cy) {
      for (int cx = 0; cx < g.cells(0); ++cx) {
        double usw = v.node_value(cx, cy), use = v.node_value(cx + 1, cy);
        double unw = v.node_value(cx, cy + 1),
               une = v.node_value(cx + 1, cy + 1);
        Vec2 g1{(use - usw) / hx, (une - use) / hy};
        Vec2 g2{(une - unw) / hx, (unw - usw) / hy};
        total += half * (std::pow(std::hypot(g1[0], g1[1]), p) +
                         std::pow(std::hypot(g2[0], g2[1]), p));
      }
    }
  }
  return std::pow(total, 1.0 / p);
}

}  // namespace homog
