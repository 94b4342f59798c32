//! Rectangular parameter grids, node fields and finite-difference stencils.
//!
//! Nodes are stored row-major: index `j * n_u + i` for the node at
//! `(u_i, v_j)`. A periodic direction does not duplicate its closing node.
//! Stencils are central second order in the interior and one-sided second
//! order at non-periodic boundaries.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use serde::{Deserialize, Serialize};

/// Values that finite-difference stencils can act on.
pub trait FieldValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
}

impl<T> FieldValue for T where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>
{
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub n_u: usize,
    pub n_v: usize,
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    pub periodic_u: bool,
    pub periodic_v: bool,
}

/// Parameter direction on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    U,
    V,
}

impl Grid {
    pub fn new(n_u: usize, n_v: usize, u_range: (f64, f64), v_range: (f64, f64)) -> Self {
        Grid {
            n_u,
            n_v,
            u_range,
            v_range,
            periodic_u: false,
            periodic_v: false,
        }
    }

    pub fn with_periodic(mut self, periodic_u: bool, periodic_v: bool) -> Self {
        self.periodic_u = periodic_u;
        self.periodic_v = periodic_v;
        self
    }

    pub fn len(&self) -> usize {
        self.n_u * self.n_v
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic_u || self.periodic_v
    }

    pub fn h_u(&self) -> f64 {
        let span = self.u_range.1 - self.u_range.0;
        if self.periodic_u {
            span / self.n_u as f64
        } else {
            span / (self.n_u - 1) as f64
        }
    }

    pub fn h_v(&self) -> f64 {
        let span = self.v_range.1 - self.v_range.0;
        if self.periodic_v {
            span / self.n_v as f64
        } else {
            span / (self.n_v - 1) as f64
        }
    }

    pub fn u(&self, i: usize) -> f64 {
        self.u_range.0 + i as f64 * self.h_u()
    }

    pub fn v(&self, j: usize) -> f64 {
        self.v_range.0 + j as f64 * self.h_v()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n_u + i
    }

    #[inline]
    pub fn ij(&self, node: usize) -> (usize, usize) {
        (node % self.n_u, node / self.n_u)
    }

    pub fn coords(&self, node: usize) -> (f64, f64) {
        let (i, j) = self.ij(node);
        (self.u(i), self.v(j))
    }

    /// True when the node is at least `margin` nodes away from every
    /// non-periodic boundary. `margin = 0` accepts every node.
    pub fn is_interior(&self, node: usize, margin: usize) -> bool {
        let (i, j) = self.ij(node);
        let ok_u = self.periodic_u || (i >= margin && i + margin < self.n_u);
        let ok_v = self.periodic_v || (j >= margin && j + margin < self.n_v);
        ok_u && ok_v
    }

    pub fn interior_nodes(&self, margin: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&n| self.is_interior(n, margin))
    }

    /// 4-neighbourhood without wrap-around, in the fixed order
    /// (-u, +u, -v, +v).
    pub fn neighbors_open(&self, node: usize) -> impl Iterator<Item = usize> {
        let (i, j) = self.ij(node);
        let (n_u, n_v) = (self.n_u, self.n_v);
        let mut out = [usize::MAX; 4];
        if i > 0 {
            out[0] = node - 1;
        }
        if i + 1 < n_u {
            out[1] = node + 1;
        }
        if j > 0 {
            out[2] = node - n_u;
        }
        if j + 1 < n_v {
            out[3] = node + n_u;
        }
        out.into_iter().filter(|&n| n != usize::MAX)
    }

    /// Number of cells along each direction (periodic directions wrap).
    pub fn cells(&self) -> (usize, usize) {
        let cu = if self.periodic_u { self.n_u } else { self.n_u - 1 };
        let cv = if self.periodic_v { self.n_v } else { self.n_v - 1 };
        (cu, cv)
    }

    /// Corner nodes of cell `(ci, cj)`: `[(i,j), (i+1,j), (i+1,j+1), (i,j+1)]`
    /// together with seam crossing flags for the `+1` steps.
    pub fn cell_corners(&self, ci: usize, cj: usize) -> ([usize; 4], bool, bool) {
        let i1 = (ci + 1) % self.n_u;
        let j1 = (cj + 1) % self.n_v;
        let wrap_u = ci + 1 == self.n_u;
        let wrap_v = cj + 1 == self.n_v;
        (
            [
                self.index(ci, cj),
                self.index(i1, cj),
                self.index(i1, j1),
                self.index(ci, j1),
            ],
            wrap_u,
            wrap_v,
        )
    }

    /// Same grid at a different resolution.
    pub fn with_resolution(&self, n_u: usize, n_v: usize) -> Self {
        Grid { n_u, n_v, ..*self }
    }
}

/// Per-node values on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    pub grid: Grid,
    pub data: Vec<T>,
}

pub type ScalarField = Field<f64>;

impl<T> Field<T> {
    pub fn from_vec(grid: Grid, data: Vec<T>) -> Self {
        assert_eq!(grid.len(), data.len(), "field size does not match grid");
        Field { grid, data }
    }

    pub fn from_fn(grid: Grid, mut f: impl FnMut(usize) -> T) -> Self {
        let data = (0..grid.len()).map(&mut f).collect();
        Field { grid, data }
    }

    pub fn map<S>(&self, f: impl Fn(&T) -> S) -> Field<S> {
        Field {
            grid: self.grid,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn zip_map<S, R>(&self, other: &Field<S>, f: impl Fn(&T, &S) -> R) -> Field<R> {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        Field {
            grid: self.grid,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[self.grid.index(i, j)]
    }
}

impl<T> Index<usize> for Field<T> {
    type Output = T;
    fn index(&self, node: usize) -> &T {
        &self.data[node]
    }
}

impl<T> IndexMut<usize> for Field<T> {
    fn index_mut(&mut self, node: usize) -> &mut T {
        &mut self.data[node]
    }
}

impl<T: FieldValue> Field<T> {
    /// First partial derivative along `axis`. Values picked up across a
    /// periodic seam are multiplied by `seam` (use `-1` for antiperiodic
    /// spinor components, `1` otherwise).
    pub fn partial(&self, axis: Axis, seam: f64) -> Field<T> {
        let g = self.grid;
        let (n, h, periodic) = match axis {
            Axis::U => (g.n_u, g.h_u(), g.periodic_u),
            Axis::V => (g.n_v, g.h_v(), g.periodic_v),
        };
        let at = |node: usize, k: usize| -> T {
            let (i, j) = g.ij(node);
            match axis {
                Axis::U => self.data[g.index(k, j)],
                Axis::V => self.data[g.index(i, k)],
            }
        };
        let pos = |node: usize| -> usize {
            let (i, j) = g.ij(node);
            match axis {
                Axis::U => i,
                Axis::V => j,
            }
        };
        let inv2h = 0.5 / h;
        Field::from_fn(g, |node| {
            let k = pos(node);
            if periodic {
                let (kp, sp) = if k + 1 == n { (0, seam) } else { (k + 1, 1.0) };
                let (km, sm) = if k == 0 { (n - 1, seam) } else { (k - 1, 1.0) };
                (at(node, kp) * sp - at(node, km) * sm) * inv2h
            } else if k == 0 {
                (at(node, 1) * 4.0 - at(node, 0) * 3.0 - at(node, 2)) * inv2h
            } else if k + 1 == n {
                (at(node, n - 1) * 3.0 - at(node, n - 2) * 4.0 + at(node, n - 3)) * inv2h
            } else {
                (at(node, k + 1) - at(node, k - 1)) * inv2h
            }
        })
    }

    /// Second partial derivative along a single axis.
    pub fn second_partial(&self, axis: Axis, seam: f64) -> Field<T> {
        let g = self.grid;
        let (n, h, periodic) = match axis {
            Axis::U => (g.n_u, g.h_u(), g.periodic_u),
            Axis::V => (g.n_v, g.h_v(), g.periodic_v),
        };
        let at = |node: usize, k: usize| -> T {
            let (i, j) = g.ij(node);
            match axis {
                Axis::U => self.data[g.index(k, j)],
                Axis::V => self.data[g.index(i, k)],
            }
        };
        let pos = |node: usize| -> usize {
            let (i, j) = g.ij(node);
            match axis {
                Axis::U => i,
                Axis::V => j,
            }
        };
        let inv_h2 = 1.0 / (h * h);
        Field::from_fn(g, |node| {
            let k = pos(node);
            if periodic {
                let (kp, sp) = if k + 1 == n { (0, seam) } else { (k + 1, 1.0) };
                let (km, sm) = if k == 0 { (n - 1, seam) } else { (k - 1, 1.0) };
                (at(node, kp) * sp + at(node, km) * sm - at(node, k) * 2.0) * inv_h2
            } else if k == 0 {
                (at(node, 0) * 2.0 - at(node, 1) * 5.0 + at(node, 2) * 4.0 - at(node, 3)) * inv_h2
            } else if k + 1 == n {
                (at(node, n - 1) * 2.0 - at(node, n - 2) * 5.0 + at(node, n - 3) * 4.0
                    - at(node, n - 4))
                    * inv_h2
            } else {
                (at(node, k + 1) + at(node, k - 1) - at(node, k) * 2.0) * inv_h2
            }
        })
    }

    /// `(f_u, f_v)` in one call.
    pub fn gradient(&self, seam: [f64; 2]) -> (Field<T>, Field<T>) {
        (self.partial(Axis::U, seam[0]), self.partial(Axis::V, seam[1]))
    }

    /// `(f_uu, f_uv, f_vv)`; the mixed derivative composes the two first
    /// derivative stencils.
    pub fn hessian_coords(&self, seam: [f64; 2]) -> (Field<T>, Field<T>, Field<T>) {
        let fuu = self.second_partial(Axis::U, seam[0]);
        let fvv = self.second_partial(Axis::V, seam[1]);
        let fuv = self.partial(Axis::U, seam[0]).partial(Axis::V, seam[1]);
        (fuu, fuv, fvv)
    }
}

/// Supremum of `f` over nodes with the given boundary margin.
pub fn sup_over<T>(field: &Field<T>, margin: usize, f: impl Fn(&T) -> f64) -> f64 {
    field
        .grid
        .interior_nodes(margin)
        .map(|n| f(&field.data[n]))
        .fold(0.0, f64::max)
}

/// Parameter-space inset of `margin` node spacings from the non-periodic
/// edges of `grid`.
pub fn inset(grid: &Grid, margin: usize) -> [f64; 2] {
    [
        if grid.periodic_u { 0.0 } else { margin as f64 * grid.h_u() },
        if grid.periodic_v { 0.0 } else { margin as f64 * grid.h_v() },
    ]
}

/// Supremum over the nodes lying at least `inset` (parameter units) away
/// from the non-periodic edges. Sweeps pass the inset of their coarsest
/// grid so every resolution is measured on the same region.
pub fn sup_within<T>(field: &Field<T>, inset: [f64; 2], f: impl Fn(&T) -> f64) -> f64 {
    let g = &field.grid;
    let slack = 1e-9 * (g.h_u().min(g.h_v()));
    (0..g.len())
        .filter(|&n| {
            let (u, v) = g.coords(n);
            let ok_u = g.periodic_u || (u - g.u_range.0 >= inset[0] - slack && g.u_range.1 - u >= inset[0] - slack);
            let ok_v = g.periodic_v || (v - g.v_range.0 >= inset[1] - slack && g.v_range.1 - v >= inset[1] - slack);
            ok_u && ok_v
        })
        .map(|n| f(&field.data[n]))
        .fold(0.0, f64::max)
}

/// Base-2 convergence order between two residuals measured on grids whose
/// spacings differ by the factor `h_coarse / h_fine`.
pub fn convergence_order(coarse: f64, fine: f64, spacing_ratio: f64) -> f64 {
    (coarse / fine).ln() / spacing_ratio.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn open_grid(n: usize) -> Grid {
        Grid::new(n, n, (0.0, 1.0), (-1.0, 2.0))
    }

    #[test]
    fn node_layout_is_row_major() {
        let g = Grid::new(5, 3, (0.0, 4.0), (0.0, 2.0));
        assert_eq!(g.index(2, 1), 7);
        assert_eq!(g.ij(7), (2, 1));
        assert_eq!(g.coords(7), (2.0, 1.0));
    }

    #[test]
    fn periodic_spacing_excludes_closing_node() {
        let g = Grid::new(8, 8, (0.0, 8.0), (0.0, 7.0)).with_periodic(true, false);
        assert_eq!(g.h_u(), 1.0);
        assert_eq!(g.h_v(), 1.0);
        assert_eq!(g.cells(), (8, 7));
    }

    #[test]
    fn quadratics_are_differentiated_exactly() {
        let g = open_grid(9);
        let f = Field::from_fn(g, |n| {
            let (u, v) = g.coords(n);
            3.0 * u * u - 2.0 * u * v + v * v + u
        });
        let (fu, fv) = f.gradient([1.0, 1.0]);
        let (fuu, fuv, fvv) = f.hessian_coords([1.0, 1.0]);
        for n in 0..g.len() {
            let (u, v) = g.coords(n);
            assert!((fu[n] - (6.0 * u - 2.0 * v + 1.0)).abs() < 1e-11);
            assert!((fv[n] - (-2.0 * u + 2.0 * v)).abs() < 1e-11);
            assert!((fuu[n] - 6.0).abs() < 1e-9);
            assert!((fuv[n] + 2.0).abs() < 1e-9);
            assert!((fvv[n] - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn antiperiodic_seam_factor() {
        // cos(u/2) is antiperiodic on [0, 2pi); with seam = -1 the stencil
        // sees a smooth function.
        let g = Grid::new(64, 8, (0.0, std::f64::consts::TAU), (0.0, 1.0)).with_periodic(true, false);
        let f = Field::from_fn(g, |n| (0.5 * g.coords(n).0).cos());
        let fu = f.partial(Axis::U, -1.0);
        let err = (0..g.len())
            .map(|n| (fu[n] + 0.5 * (0.5 * g.coords(n).0).sin()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-3, "err = {err}");
    }

    #[test]
    fn central_difference_is_second_order() {
        let errs: Vec<f64> = [16usize, 32, 64]
            .iter()
            .map(|&n| {
                let g = open_grid(n);
                let f = Field::from_fn(g, |k| g.coords(k).0.sin());
                let fu = f.partial(Axis::U, 1.0);
                (0..g.len())
                    .map(|k| (fu[k] - g.coords(k).0.cos()).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        for w in errs.windows(2) {
            assert!((w[0] / w[1]).log2() > 1.8, "{errs:?}");
        }
    }

    #[test]
    fn interior_margin() {
        let g = Grid::new(8, 8, (0.0, 1.0), (0.0, 1.0)).with_periodic(true, false);
        assert_eq!(g.interior_nodes(1).count(), 8 * 6);
        assert_eq!(g.interior_nodes(2).count(), 8 * 4);
    }
}
