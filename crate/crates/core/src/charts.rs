//! Parametrized surface charts and their classical geometry.
//!
//! Conventions used everywhere downstream:
//!
//! * `N = (x_u x x_v) / |x_u x x_v|`, frame `e_1 = x_u / |x_u|`, `e_2` by
//!   Gram–Schmidt, so `(e_1, e_2, N)` is right-handed;
//! * `II(X) = dN(X)`, `H = tr(II) / 2`, `G = det(II)`; the unit sphere with
//!   outward normal has `H = G = 1`;
//! * `omega_12(X) = <d_X e_1, e_2>`, the spin connection enters as
//!   `1/2 omega_12(X) e_1 e_2`;
//! * the Laplacian is the positive one, `Delta f = -div grad f`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Axis, Field, FieldValue, Grid, ScalarField};

pub type Vec3 = Vector3<f64>;

/// Smallest accepted `|x_u x x_v|` relative to `|x_u| |x_v|`.
const DEGENERACY_TOLERANCE: f64 = 1e-10;

/// Position and first/second partial derivatives of an immersion at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub x: Vec3,
    pub xu: Vec3,
    pub xv: Vec3,
    pub xuu: Vec3,
    pub xuv: Vec3,
    pub xvv: Vec3,
}

/// A closed-form map `(u, v) -> R^3`.
pub trait SurfaceMap: Send + Sync {
    fn point(&self, u: f64, v: f64) -> Vec3;

    /// Analytic derivatives, when the map provides them.
    fn jet(&self, _u: f64, _v: f64) -> Option<Jet2> {
        None
    }
}

/// Applies `x -> R x + t` to another map.
pub struct RigidMotion<M> {
    pub inner: M,
    pub rotation: Matrix3<f64>,
    pub translation: Vec3,
}

impl<M: SurfaceMap> SurfaceMap for RigidMotion<M> {
    fn point(&self, u: f64, v: f64) -> Vec3 {
        self.rotation * self.inner.point(u, v) + self.translation
    }

    fn jet(&self, u: f64, v: f64) -> Option<Jet2> {
        let j = self.inner.jet(u, v)?;
        let r = &self.rotation;
        Some(Jet2 {
            x: r * j.x + self.translation,
            xu: r * j.xu,
            xv: r * j.xv,
            xuu: r * j.xuu,
            xuv: r * j.xuv,
            xvv: r * j.xvv,
        })
    }
}

#[derive(Clone)]
pub enum Immersion {
    Map(Arc<dyn SurfaceMap>),
    /// Node positions only (row-major, one per grid node).
    Sampled(Arc<Vec<Vec3>>),
}

impl fmt::Debug for Immersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Immersion::Map(_) => f.write_str("Immersion::Map(..)"),
            Immersion::Sampled(p) => write!(f, "Immersion::Sampled({} nodes)", p.len()),
        }
    }
}

/// Quadrature weights used along `v`; `u` always uses the (periodic)
/// trapezoid rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    Trapezoid,
    /// `v` is a polar angle sampled at the Fejér nodes `(j + 1/2) pi / n_v`;
    /// weights integrate `F(v) sin v` spectrally.
    PolarFejer,
}

#[derive(Debug, Clone)]
pub struct ChartSpec {
    pub name: String,
    pub grid: Grid,
    pub immersion: Immersion,
    pub quadrature: QuadratureRule,
}

impl ChartSpec {
    pub fn new(name: impl Into<String>, grid: Grid, immersion: Immersion) -> Result<Self> {
        let name = name.into();
        if grid.n_u < 8 || grid.n_v < 8 {
            return Err(Error::InvalidChart(format!(
                "`{name}`: resolution {}x{} below the minimum 8x8",
                grid.n_u, grid.n_v
            )));
        }
        let (u0, u1) = grid.u_range;
        let (v0, v1) = grid.v_range;
        if !(u1 > u0 && v1 > v0) || ![u0, u1, v0, v1].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidChart(format!("`{name}`: empty or non-finite domain")));
        }
        if let Immersion::Sampled(p) = &immersion {
            if p.len() != grid.len() {
                return Err(Error::InvalidChart(format!(
                    "`{name}`: {} sampled points for {} nodes",
                    p.len(),
                    grid.len()
                )));
            }
        }
        Ok(ChartSpec {
            name,
            grid,
            immersion,
            quadrature: QuadratureRule::Trapezoid,
        })
    }

    pub fn with_quadrature(mut self, rule: QuadratureRule) -> Self {
        self.quadrature = rule;
        self
    }

    pub fn from_map(name: impl Into<String>, grid: Grid, map: impl SurfaceMap + 'static) -> Result<Self> {
        Self::new(name, grid, Immersion::Map(Arc::new(map)))
    }

    pub fn positions(&self) -> Vec<Vec3> {
        match &self.immersion {
            Immersion::Map(m) => (0..self.grid.len())
                .map(|n| {
                    let (u, v) = self.grid.coords(n);
                    m.point(u, v)
                })
                .collect(),
            Immersion::Sampled(p) => p.as_ref().clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeMode {
    #[default]
    Analytic,
    /// Central differences with the given step (defaults to the grid
    /// spacing per direction). Sampled charts always use node stencils.
    FiniteDifference { step: Option<f64> },
}

/// Intrinsic data at a node: everything the spin connection, the Laplacian
/// and exterior calculus need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntrinsicNode {
    /// `(g_uu, g_uv, g_vv)`.
    pub metric: [f64; 3],
    /// `frame[j] = (a, b)` with `e_j = a d_u + b d_v`.
    pub frame: [[f64; 2]; 2],
    /// `coframe[k][j] = g(d_k, e_j)`.
    pub coframe: [[f64; 2]; 2],
    /// `christoffel[k][i][j] = Gamma^k_ij`.
    pub christoffel: [[[f64; 2]; 2]; 2],
    /// `omega_12(e_1), omega_12(e_2)`.
    pub omega: [f64; 2],
    /// `sqrt(det g)`.
    pub area: f64,
}

impl IntrinsicNode {
    pub fn inverse_metric(&self) -> [f64; 3] {
        let [a, b, c] = self.metric;
        let det = a * c - b * b;
        [c / det, -b / det, a / det]
    }

    /// Orthonormal frame and connection for a metric, given the first kind
    /// Christoffel symbols `gamma1[m][i][j] = g(nabla_i d_j, d_m)`.
    fn from_metric(metric: [f64; 3], gamma1: [[[f64; 2]; 2]; 2]) -> Self {
        let [g11, g12, g22] = metric;
        let det = g11 * g22 - g12 * g12;
        let r1 = g11.sqrt();
        let s = (det / g11).sqrt();
        let frame = [[1.0 / r1, 0.0], [-g12 / (g11 * s), 1.0 / s]];
        let coframe = [[r1, 0.0], [g12 / r1, s]];
        let inv = [[g22 / det, -g12 / det], [-g12 / det, g11 / det]];
        let mut christoffel = [[[0.0; 2]; 2]; 2];
        for (k, ck) in christoffel.iter_mut().enumerate() {
            for (i, row) in ck.iter_mut().enumerate() {
                for (j, c) in row.iter_mut().enumerate() {
                    *c = (0..2).map(|m| inv[k][m] * gamma1[m][i][j]).sum();
                }
            }
        }
        // omega(d_k) = g(nabla_k d_u, e_2) / |d_u|
        let e2 = frame[1];
        let omega_coord: [f64; 2] = std::array::from_fn(|k| {
            (0..2).map(|m| gamma1[m][k][0] * e2[m]).sum::<f64>() / r1
        });
        let omega = std::array::from_fn(|j| frame[j][0] * omega_coord[0] + frame[j][1] * omega_coord[1]);
        IntrinsicNode {
            metric,
            frame,
            coframe,
            christoffel,
            omega,
            area: det.sqrt(),
        }
    }

    /// Converts frame values `(w(e_1), w(e_2))` of a 1-form into coordinate
    /// components `(w(d_u), w(d_v))`.
    pub fn to_coords<T: FieldValue>(&self, w: [T; 2]) -> [T; 2] {
        std::array::from_fn(|k| w[0] * self.coframe[k][0] + w[1] * self.coframe[k][1])
    }

    /// Frame components of a coordinate gradient `(f_u, f_v)`: `e_j(f)`.
    pub fn frame_derivative<T: FieldValue>(&self, d: [T; 2]) -> [T; 2] {
        std::array::from_fn(|j| d[0] * self.frame[j][0] + d[1] * self.frame[j][1])
    }
}

/// Anything that carries an intrinsic metric on a grid.
pub trait Intrinsic {
    fn grid(&self) -> Grid;
    fn intrinsic(&self, node: usize) -> &IntrinsicNode;
}

/// Full classical geometry at a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceNode {
    pub x: Vec3,
    pub xu: Vec3,
    pub xv: Vec3,
    pub normal: Vec3,
    pub e1: Vec3,
    pub e2: Vec3,
    /// `II` in the frame: `ii[j][k] = <dN(e_j), e_k>`.
    pub ii: [[f64; 2]; 2],
    pub mean: f64,
    pub gauss: f64,
    pub intr: IntrinsicNode,
}

impl SurfaceNode {
    fn from_jet(jet: &Jet2) -> Option<Self> {
        let Jet2 { x, xu, xv, xuu, xuv, xvv } = *jet;
        let cross = xu.cross(&xv);
        let cn = cross.norm();
        if !(cn > DEGENERACY_TOLERANCE * xu.norm() * xv.norm()) || !cn.is_finite() {
            return None;
        }
        let normal = cross / cn;
        let e1 = xu.normalize();
        let e2 = normal.cross(&e1);
        let metric = [xu.dot(&xu), xu.dot(&xv), xv.dot(&xv)];
        let tangents = [xu, xv];
        let second = [[xuu, xuv], [xuv, xvv]];
        let gamma1 = std::array::from_fn(|m| {
            std::array::from_fn(|i| std::array::from_fn(|j| second[i][j].dot(&tangents[m])))
        });
        let intr = IntrinsicNode::from_metric(metric, gamma1);
        let l = [[xuu.dot(&normal), xuv.dot(&normal)], [xuv.dot(&normal), xvv.dot(&normal)]];
        let c = intr.frame;
        let ii: [[f64; 2]; 2] = std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                let mut s = 0.0;
                for a in 0..2 {
                    for b in 0..2 {
                        s -= c[j][a] * c[k][b] * l[a][b];
                    }
                }
                s
            })
        });
        let mean = 0.5 * (ii[0][0] + ii[1][1]);
        let gauss = ii[0][0] * ii[1][1] - ii[0][1] * ii[1][0];
        Some(SurfaceNode {
            x,
            xu,
            xv,
            normal,
            e1,
            e2,
            ii,
            mean,
            gauss,
            intr,
        })
    }

    /// Rotation taking the standard basis to `(e_1, e_2, N)`.
    pub fn frame_rotation(&self) -> Matrix3<f64> {
        Matrix3::from_columns(&[self.e1, self.e2, self.normal])
    }
}

#[derive(Debug, Clone)]
pub struct GeometryField {
    pub name: String,
    pub grid: Grid,
    pub mode: DerivativeMode,
    pub quadrature: QuadratureRule,
    pub nodes: Vec<SurfaceNode>,
}

impl Intrinsic for GeometryField {
    fn grid(&self) -> Grid {
        self.grid
    }

    fn intrinsic(&self, node: usize) -> &IntrinsicNode {
        &self.nodes[node].intr
    }
}

impl GeometryField {
    pub fn scalar(&self, f: impl Fn(&SurfaceNode) -> f64) -> ScalarField {
        Field::from_fn(self.grid, |n| f(&self.nodes[n]))
    }

    pub fn mean_curvature(&self) -> ScalarField {
        self.scalar(|n| n.mean)
    }

    pub fn gauss_curvature(&self) -> ScalarField {
        self.scalar(|n| n.gauss)
    }

    pub fn positions(&self) -> Vec<Vec3> {
        self.nodes.iter().map(|n| n.x).collect()
    }

    pub fn frame_rotations(&self) -> Field<Matrix3<f64>> {
        Field::from_fn(self.grid, |n| self.nodes[n].frame_rotation())
    }

    /// Spin connection as a 1-form field (values on `e_1, e_2`).
    pub fn connection_form(&self) -> Field<[f64; 2]> {
        Field::from_fn(self.grid, |n| self.nodes[n].intr.omega)
    }

    /// Max deviation of `(e_1, e_2, N)` from an oriented orthonormal frame.
    pub fn frame_defect(&self) -> f64 {
        self.nodes
            .iter()
            .map(|n| {
                let r = n.frame_rotation();
                let o = (r.transpose() * r - Matrix3::identity()).abs().max();
                o.max((r.determinant() - 1.0).abs())
            })
            .fold(0.0, f64::max)
    }
}

fn jets_finite_difference(chart: &ChartSpec, map: &dyn SurfaceMap, step: Option<f64>) -> Vec<Jet2> {
    let g = chart.grid;
    let hu = step.unwrap_or_else(|| g.h_u());
    let hv = step.unwrap_or_else(|| g.h_v());
    (0..g.len())
        .map(|n| {
            let (u, v) = g.coords(n);
            let p = |du: f64, dv: f64| map.point(u + du * hu, v + dv * hv);
            let x = p(0.0, 0.0);
            let (up, um, vp, vm) = (p(1.0, 0.0), p(-1.0, 0.0), p(0.0, 1.0), p(0.0, -1.0));
            Jet2 {
                x,
                xu: (up - um) / (2.0 * hu),
                xv: (vp - vm) / (2.0 * hv),
                xuu: (up - 2.0 * x + um) / (hu * hu),
                xvv: (vp - 2.0 * x + vm) / (hv * hv),
                xuv: (p(1.0, 1.0) - p(1.0, -1.0) - p(-1.0, 1.0) + p(-1.0, -1.0)) / (4.0 * hu * hv),
            }
        })
        .collect()
}

fn jets_from_samples(grid: Grid, points: &[Vec3]) -> Vec<Jet2> {
    let x = Field::from_vec(grid, points.to_vec());
    let (xu, xv) = x.gradient([1.0, 1.0]);
    let (xuu, xuv, xvv) = x.hessian_coords([1.0, 1.0]);
    (0..grid.len())
        .map(|n| Jet2 {
            x: x[n],
            xu: xu[n],
            xv: xv[n],
            xuu: xuu[n],
            xuv: xuv[n],
            xvv: xvv[n],
        })
        .collect()
}

/// Evaluates the full classical geometry of a chart at every node.
pub fn compute_geometry(chart: &ChartSpec, mode: DerivativeMode) -> Result<GeometryField> {
    let g = chart.grid;
    let jets: Vec<Jet2> = match (&chart.immersion, mode) {
        (Immersion::Map(map), DerivativeMode::Analytic) => (0..g.len())
            .map(|n| {
                let (u, v) = g.coords(n);
                map.jet(u, v).ok_or_else(|| Error::NoAnalyticDerivatives(chart.name.clone()))
            })
            .collect::<Result<_>>()?,
        (Immersion::Map(map), DerivativeMode::FiniteDifference { step }) => {
            jets_finite_difference(chart, map.as_ref(), step)
        }
        (Immersion::Sampled(points), _) => jets_from_samples(g, points),
    };
    let nodes = jets
        .iter()
        .enumerate()
        .map(|(n, jet)| {
            SurfaceNode::from_jet(jet).ok_or_else(|| {
                let (u, v) = g.coords(n);
                Error::DegenerateImmersion {
                    node: n,
                    u,
                    v,
                    cross: jet.xu.cross(&jet.xv).norm(),
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GeometryField {
        name: chart.name.clone(),
        grid: g,
        mode,
        quadrature: chart.quadrature,
        nodes,
    })
}

/// Metric-only geometry (no immersion), e.g. a conformal rescaling.
#[derive(Debug, Clone)]
pub struct IntrinsicGeometry {
    pub grid: Grid,
    pub nodes: Vec<IntrinsicNode>,
}

impl Intrinsic for IntrinsicGeometry {
    fn grid(&self) -> Grid {
        self.grid
    }

    fn intrinsic(&self, node: usize) -> &IntrinsicNode {
        &self.nodes[node]
    }
}

impl IntrinsicGeometry {
    /// Frame, Christoffel symbols and spin connection of a metric field,
    /// with metric derivatives taken by finite differences (Koszul formula).
    pub fn from_metric(metric: &Field<[f64; 3]>) -> Self {
        let grid = metric.grid;
        let comp = |c: usize| metric.map(|m| m[c]);
        let d: Vec<(ScalarField, ScalarField)> = (0..3).map(|c| comp(c).gradient([1.0, 1.0])).collect();
        let nodes = (0..grid.len())
            .map(|n| {
                // dg[k][i][j] = d_k g_ij
                let gij = |c: usize, k: usize| if k == 0 { d[c].0[n] } else { d[c].1[n] };
                let idx = |i: usize, j: usize| match (i, j) {
                    (0, 0) => 0,
                    (1, 1) => 2,
                    _ => 1,
                };
                let dg = |k: usize, i: usize, j: usize| gij(idx(i, j), k);
                let gamma1 = std::array::from_fn(|m| {
                    std::array::from_fn(|i| {
                        std::array::from_fn(|j| 0.5 * (dg(i, j, m) + dg(j, i, m) - dg(m, i, j)))
                    })
                });
                IntrinsicNode::from_metric(metric[n], gamma1)
            })
            .collect();
        IntrinsicGeometry { grid, nodes }
    }

    pub fn of(geom: &impl Intrinsic) -> Self {
        let grid = geom.grid();
        Self::from_metric(&Field::from_fn(grid, |n| geom.intrinsic(n).metric))
    }
}

/// Frame derivatives `(e_1(f), e_2(f))` of a field.
pub fn frame_gradient<T: FieldValue>(f: &Field<T>, geom: &impl Intrinsic, seam: [f64; 2]) -> Field<[T; 2]> {
    let (fu, fv) = f.gradient(seam);
    Field::from_fn(f.grid, |n| geom.intrinsic(n).frame_derivative([fu[n], fv[n]]))
}

/// Positive Laplace–Beltrami operator `-g^ij (f_ij - Gamma^k_ij f_k)`.
///
/// Second-order stencils; boundary nodes use one-sided stencils and are
/// excluded from residual norms by callers (margin 1).
pub fn laplace_beltrami<T: FieldValue>(f: &Field<T>, geom: &impl Intrinsic) -> Field<T> {
    let seam = [1.0, 1.0];
    let (fu, fv) = f.gradient(seam);
    let (fuu, fuv, fvv) = f.hessian_coords(seam);
    Field::from_fn(f.grid, |n| {
        let node = geom.intrinsic(n);
        let [a, b, c] = node.inverse_metric();
        let gam = &node.christoffel;
        let d = [fu[n], fv[n]];
        let corr = |i: usize, j: usize| d[0] * gam[0][i][j] + d[1] * gam[1][i][j];
        let t_uu = fuu[n] - corr(0, 0);
        let t_uv = fuv[n] - corr(0, 1);
        let t_vv = fvv[n] - corr(1, 1);
        (t_uu * a + t_uv * (2.0 * b) + t_vv * c) * -1.0
    })
}

/// Values on grid cells, index `cj * cells_u + ci`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellField {
    pub grid: Grid,
    pub data: Vec<f64>,
}

impl CellField {
    pub fn cells(&self) -> (usize, usize) {
        self.grid.cells()
    }

    pub fn sup(&self) -> f64 {
        self.data.iter().fold(0.0, |a, b| a.max(b.abs()))
    }

    /// `sup |.|` over cells whose centres lie at least `inset` from the
    /// non-periodic edges.
    pub fn sup_within(&self, inset: [f64; 2]) -> f64 {
        let g = &self.grid;
        let (cu, cv) = g.cells();
        let slack = 1e-9 * g.h_u().min(g.h_v());
        let inside = |c: f64, (lo, hi): (f64, f64), d: f64| c - lo >= d - slack && hi - c >= d - slack;
        let mut m: f64 = 0.0;
        for cj in 0..cv {
            for ci in 0..cu {
                let uc = g.u(ci) + 0.5 * g.h_u();
                let vc = g.v(cj) + 0.5 * g.h_v();
                if (g.periodic_u || inside(uc, g.u_range, inset[0])) && (g.periodic_v || inside(vc, g.v_range, inset[1])) {
                    m = m.max(self.data[cj * cu + ci].abs());
                }
            }
        }
        m
    }

    /// Node values by averaging adjacent cells; boundary nodes see fewer
    /// cells and are first-order.
    pub fn to_nodes(&self) -> ScalarField {
        let g = self.grid;
        let (cu, cv) = g.cells();
        let mut sum = vec![0.0; g.len()];
        let mut count = vec![0u32; g.len()];
        for cj in 0..cv {
            for ci in 0..cu {
                let (corners, _, _) = g.cell_corners(ci, cj);
                for c in corners {
                    sum[c] += self.data[cj * cu + ci];
                    count[c] += 1;
                }
            }
        }
        Field::from_vec(g, sum.iter().zip(&count).map(|(s, &c)| s / c as f64).collect())
    }
}

/// Average of a node field over the four corners of every cell.
pub fn cell_average(f: &ScalarField) -> CellField {
    let g = f.grid;
    let (cu, cv) = g.cells();
    let mut data = Vec::with_capacity(cu * cv);
    for cj in 0..cv {
        for ci in 0..cu {
            let (c, _, _) = g.cell_corners(ci, cj);
            data.push(0.25 * (f[c[0]] + f[c[1]] + f[c[2]] + f[c[3]]));
        }
    }
    CellField { grid: g, data }
}

/// Exterior derivative of a real 1-form (frame values) as a density against
/// `dA`, one value per cell: circulation around the cell boundary (edge
/// values by the trapezoid rule) divided by the cell area.
pub fn exterior_d_cells(w: &Field<[f64; 2]>, geom: &impl Intrinsic) -> CellField {
    let g = w.grid;
    let coords: Vec<[f64; 2]> = (0..g.len()).map(|n| geom.intrinsic(n).to_coords(w[n])).collect();
    let (hu, hv) = (g.h_u(), g.h_v());
    let (cu, cv) = g.cells();
    let mut data = Vec::with_capacity(cu * cv);
    for cj in 0..cv {
        for ci in 0..cu {
            let ([a, b, c, d], _, _) = g.cell_corners(ci, cj);
            let bottom = 0.5 * (coords[a][0] + coords[b][0]) * hu;
            let right = 0.5 * (coords[b][1] + coords[c][1]) * hv;
            let top = 0.5 * (coords[d][0] + coords[c][0]) * hu;
            let left = 0.5 * (coords[a][1] + coords[d][1]) * hv;
            let circulation = bottom + right - top - left;
            let area = 0.25
                * (geom.intrinsic(a).area + geom.intrinsic(b).area + geom.intrinsic(c).area + geom.intrinsic(d).area);
            data.push(circulation / (hu * hv * area));
        }
    }
    CellField { grid: g, data }
}

/// Exterior derivative resampled to nodes.
pub fn exterior_d(w: &Field<[f64; 2]>, geom: &impl Intrinsic) -> ScalarField {
    exterior_d_cells(w, geom).to_nodes()
}

/// Fejér (first kind) weights for `int_{-1}^{1} g(x) dx` at
/// `x_k = cos((2k + 1) pi / (2n))`.
pub fn fejer_weights(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let theta = (2 * k + 1) as f64 * PI / (2 * n) as f64;
            let s: f64 = (1..=n / 2)
                .map(|j| (2.0 * j as f64 * theta).cos() / (4.0 * (j * j) as f64 - 1.0))
                .sum();
            2.0 / n as f64 * (1.0 - 2.0 * s)
        })
        .collect()
}

fn trapezoid_weights(n: usize, h: f64, periodic: bool) -> Vec<f64> {
    let mut w = vec![h; n];
    if !periodic {
        w[0] *= 0.5;
        w[n - 1] *= 0.5;
    }
    w
}

/// `int rho dA` for a density `rho` against the area element.
pub fn quadrature(rho: &ScalarField, geom: &GeometryField) -> f64 {
    let g = geom.grid;
    let wu = trapezoid_weights(g.n_u, g.h_u(), g.periodic_u);
    let wv: Vec<f64> = match geom.quadrature {
        QuadratureRule::Trapezoid => trapezoid_weights(g.n_v, g.h_v(), g.periodic_v),
        QuadratureRule::PolarFejer => fejer_weights(g.n_v)
            .into_iter()
            .enumerate()
            // The area element already carries sin v.
            .map(|(j, w)| w / g.v(j).sin())
            .collect(),
    };
    let mut total = 0.0;
    for j in 0..g.n_v {
        let mut row = 0.0;
        for i in 0..g.n_u {
            let n = g.index(i, j);
            row += rho[n] * geom.nodes[n].intr.area * wu[i];
        }
        total += row * wv[j];
    }
    total
}

/// Converts coordinate partials into the frame and back for scalar fields;
/// convenience for callers needing `grad f` in the frame.
pub fn scalar_frame_gradient(f: &ScalarField, geom: &impl Intrinsic) -> Field<[f64; 2]> {
    frame_gradient(f, geom, [1.0, 1.0])
}

/// Node field of a coordinate function along one axis; used by tests and
/// examples.
pub fn coordinate_field(grid: Grid, axis: Axis) -> ScalarField {
    Field::from_fn(grid, |n| {
        let (u, v) = grid.coords(n);
        match axis {
            Axis::U => u,
            Axis::V => v,
        }
    })
}
