//! Weierstrass representation `f = Re int (1 - g^2, i(1 + g^2), 2g) mu`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::charts::{compute_geometry, ChartSpec, DerivativeMode, Immersion, Vec3};
use crate::error::{Error, Result};
use crate::grid::{sup_over, Grid};

pub type HoloFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Sub-intervals per grid interval for the Simpson sweep (must be even).
const REFINEMENT: usize = 4;

#[derive(Clone)]
pub struct HoloData {
    pub name: String,
    pub g: HoloFn,
    /// Coefficient of `mu = mu(z) dz`.
    pub mu: HoloFn,
    /// `(Re z range, Im z range)`.
    pub domain: ((f64, f64), (f64, f64)),
    /// Excluded points (poles of `g` or `mu`).
    pub singularities: Vec<Complex64>,
}

impl fmt::Debug for HoloData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HoloData")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("singularities", &self.singularities)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeierstrassPreset {
    Enneper,
    Catenoid,
    Helicoid,
    Plane,
}

impl HoloData {
    pub fn new(
        name: impl Into<String>,
        g: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        mu: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        domain: ((f64, f64), (f64, f64)),
    ) -> Self {
        HoloData {
            name: name.into(),
            g: Arc::new(g),
            mu: Arc::new(mu),
            domain,
            singularities: Vec::new(),
        }
    }

    pub fn preset(p: WeierstrassPreset) -> Self {
        let i = Complex64::i();
        match p {
            WeierstrassPreset::Enneper => {
                HoloData::new("enneper", |z| z, |_| Complex64::new(1.0, 0.0), ((-1.0, 1.0), (-1.0, 1.0)))
            }
            // rotated by pi about the z-axis relative to (cosh v cos u, cosh v sin u, v)
            WeierstrassPreset::Catenoid => HoloData::new(
                "catenoid",
                move |z| -(i * z).exp(),
                move |z| 0.5 * i * (-i * z).exp(),
                ((-1.5, 1.5), (-1.0, 1.0)),
            ),
            // (-sin u sinh v, cos u sinh v, u)
            WeierstrassPreset::Helicoid => HoloData::new(
                "helicoid",
                move |z| -(i * z).exp(),
                move |z| -0.5 * (-i * z).exp(),
                ((-1.5, 1.5), (-1.0, 1.0)),
            ),
            WeierstrassPreset::Plane => HoloData::new(
                "plane",
                |_| Complex64::new(0.0, 0.0),
                |_| Complex64::new(1.0, 0.0),
                ((-1.0, 1.0), (-1.0, 1.0)),
            ),
        }
    }

    pub fn with_singularities(mut self, points: Vec<Complex64>) -> Self {
        self.singularities = points;
        self
    }

    /// The vector-valued integrand `(1 - g^2, i(1 + g^2), 2g) mu`.
    pub fn integrand(&self, z: Complex64) -> [Complex64; 3] {
        let g = (self.g)(z);
        let mu = (self.mu)(z);
        let i = Complex64::i();
        [(1.0 - g * g) * mu, i * (1.0 + g * g) * mu, 2.0 * g * mu]
    }

    fn contains(&self, z: Complex64) -> bool {
        let ((x0, x1), (y0, y1)) = self.domain;
        (x0..=x1).contains(&z.re) && (y0..=y1).contains(&z.im)
    }
}

type C3 = [Complex64; 3];

fn add(a: C3, b: C3) -> C3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: C3, s: Complex64) -> C3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

const ZERO3: C3 = [Complex64 { re: 0.0, im: 0.0 }; 3];

/// Composite Simpson for `int_a^b F(z) dz` on the straight segment.
fn simpson(data: &HoloData, a: Complex64, b: Complex64, m: usize) -> C3 {
    let h = (b - a) / m as f64;
    let mut acc = add(data.integrand(a), data.integrand(b));
    for k in 1..m {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc = add(acc, scale(data.integrand(a + h * k as f64), Complex64::from(w)));
    }
    scale(acc, h / 3.0)
}

/// Integrals from `start` to each of the ascending `points` along a line
/// `t -> at(t)`, accumulated outward from `start`.
fn cumulative(data: &HoloData, points: &[f64], start: f64, at: impl Fn(f64) -> Complex64) -> Vec<C3> {
    let mut out = vec![ZERO3; points.len()];
    let split = points.partition_point(|&p| p < start);
    let mut acc = ZERO3;
    let mut prev = start;
    for k in split..points.len() {
        acc = add(acc, simpson(data, at(prev), at(points[k]), REFINEMENT));
        out[k] = acc;
        prev = points[k];
    }
    acc = ZERO3;
    prev = start;
    for k in (0..split).rev() {
        acc = add(acc, simpson(data, at(prev), at(points[k]), REFINEMENT));
        out[k] = acc;
        prev = points[k];
    }
    out
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    let t = if len2 == 0.0 { 0.0 } else { ((p - a) * d.conj()).re / len2 };
    (p - (a + d * t.clamp(0.0, 1.0))).norm()
}

fn check_paths(data: &HoloData, grid: &Grid, z0: Complex64) -> Result<()> {
    let tol = 0.5 * grid.h_u().min(grid.h_v());
    let (x0, x1) = grid.u_range;
    let (y0, y1) = grid.v_range;
    for &p in &data.singularities {
        let horizontal = segment_distance(p, Complex64::new(x0, z0.im), Complex64::new(x1, z0.im));
        // vertical legs run along node columns
        let vertical = (0..grid.n_u)
            .map(|i| segment_distance(p, Complex64::new(grid.u(i), y0), Complex64::new(grid.u(i), y1)))
            .fold(f64::INFINITY, f64::min);
        let d = horizontal.min(vertical);
        if d < tol {
            return Err(Error::SingularPath {
                point: format!("{}{:+}i", p.re, p.im),
                distance: d,
            });
        }
    }
    Ok(())
}

/// Node positions `f(z) = Re int_{z0}^{z}` along L-paths (horizontal at
/// `Im z0`, then vertical).
pub fn weierstrass_positions(data: &HoloData, grid: &Grid, z0: Complex64) -> Result<Vec<Vec3>> {
    if !data.contains(z0) {
        return Err(Error::InvalidChart(format!("basepoint {z0} outside the domain of `{}`", data.name)));
    }
    check_paths(data, grid, z0)?;
    let xs: Vec<f64> = (0..grid.n_u).map(|i| grid.u(i)).collect();
    let ys: Vec<f64> = (0..grid.n_v).map(|j| grid.v(j)).collect();
    let row = cumulative(data, &xs, z0.re, |t| Complex64::new(t, z0.im));
    let mut out = vec![Vec3::zeros(); grid.len()];
    for (i, &x) in xs.iter().enumerate() {
        let col = cumulative(data, &ys, z0.im, |t| Complex64::new(x, t));
        for j in 0..grid.n_v {
            let s = add(row[i], col[j]);
            out[grid.index(i, j)] = Vec3::new(s[0].re, s[1].re, s[2].re);
        }
    }
    Ok(out)
}

/// The immersed patch as a sampled chart over the data's domain.
pub fn weierstrass_immersion(data: &HoloData, n_u: usize, n_v: usize, z0: Complex64) -> Result<ChartSpec> {
    let ((x0, x1), (y0, y1)) = data.domain;
    let grid = Grid::new(n_u, n_v, (x0, x1), (y0, y1));
    if n_u < 8 || n_v < 8 {
        return ChartSpec::new(data.name.clone(), grid, Immersion::Sampled(Arc::new(Vec::new())));
    }
    let points = weierstrass_positions(data, &grid, z0)?;
    ChartSpec::new(format!("weierstrass_{}", data.name), grid, Immersion::Sampled(Arc::new(points)))
}

/// `f(z)` at a single point, Simpson-refined along the L-path.
pub fn weierstrass_point(data: &HoloData, z0: Complex64, z: Complex64, intervals: usize) -> [f64; 3] {
    let m = intervals.max(2) & !1;
    let corner = Complex64::new(z.re, z0.im);
    let s = add(simpson(data, z0, corner, m), simpson(data, corner, z, m));
    [s[0].re, s[1].re, s[2].re]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolomorphyReport {
    /// `max |g_x + i g_y|` over interior nodes.
    pub cr_g: f64,
    pub cr_mu: f64,
    /// `max |loop integral| / cell area` of the integrand.
    pub loop_density: f64,
}

fn cr_residual(f: &HoloFn, grid: &Grid) -> f64 {
    let (hx, hy) = (grid.h_u(), grid.h_v());
    grid.interior_nodes(1)
        .map(|n| {
            let (x, y) = grid.coords(n);
            let fx = (f(Complex64::new(x + hx, y)) - f(Complex64::new(x - hx, y))) / (2.0 * hx);
            let fy = (f(Complex64::new(x, y + hy)) - f(Complex64::new(x, y - hy))) / (2.0 * hy);
            (fx + Complex64::i() * fy).norm()
        })
        .fold(0.0, f64::max)
}

pub fn holomorphy_check(data: &HoloData, grid: &Grid) -> HolomorphyReport {
    let (cu, cv) = (grid.n_u - 1, grid.n_v - 1);
    let mut loop_density: f64 = 0.0;
    for cj in 0..cv {
        for ci in 0..cu {
            let a = Complex64::new(grid.u(ci), grid.v(cj));
            let b = Complex64::new(grid.u(ci + 1), grid.v(cj));
            let c = Complex64::new(grid.u(ci + 1), grid.v(cj + 1));
            let d = Complex64::new(grid.u(ci), grid.v(cj + 1));
            let mut s = ZERO3;
            for (p, q) in [(a, b), (b, c), (c, d), (d, a)] {
                s = add(s, simpson(data, p, q, 2));
            }
            let area = grid.h_u() * grid.h_v();
            loop_density = loop_density.max(s.iter().map(|z| z.norm()).fold(0.0, f64::max) / area);
        }
    }
    HolomorphyReport {
        cr_g: cr_residual(&data.g, grid),
        cr_mu: cr_residual(&data.mu, grid),
        loop_density,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimalityReport {
    pub max_mean_curvature: f64,
    /// `max (|<f_u,f_u> - <f_v,f_v>| + |<f_u,f_v>|) / max <f_u,f_u>`.
    pub conformality: f64,
}

pub fn minimality_check(patch: &ChartSpec) -> Result<MinimalityReport> {
    let geom = compute_geometry(patch, DerivativeMode::FiniteDifference { step: None })?;
    let max_mean_curvature = sup_over(&geom.mean_curvature(), 1, |h| h.abs());
    let scale = geom.nodes.iter().map(|n| n.intr.metric[0]).fold(0.0, f64::max);
    let conf = geom.scalar(|n| {
        let [e, f, g] = n.intr.metric;
        (e - g).abs() + f.abs()
    });
    Ok(MinimalityReport {
        max_mean_curvature,
        conformality: sup_over(&conf, 1, |x| *x) / scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periods::rigid_align_points;
    use crate::charts::SurfaceMap;
    use crate::presets;

    #[test]
    fn enneper_value_at_one() {
        let data = HoloData::preset(WeierstrassPreset::Enneper);
        let f = weierstrass_point(&data, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), 8);
        assert!((f[0] - 2.0 / 3.0).abs() < 1e-12 && f[1].abs() < 1e-12 && (f[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn enneper_grid_matches_closed_form() {
        let data = HoloData::preset(WeierstrassPreset::Enneper);
        let chart = weierstrass_immersion(&data, 17, 17, Complex64::new(0.0, 0.0)).unwrap();
        // closed form Re(z - z^3/3, i(z + z^3/3), z^2)
        for n in 0..chart.grid.len() {
            let (x, y) = chart.grid.coords(n);
            let z = Complex64::new(x, y);
            let i = Complex64::i();
            let want = Vec3::new((z - z * z * z / 3.0).re, (i * (z + z * z * z / 3.0)).re, (z * z).re);
            assert!((chart.positions()[n] - want).norm() < 1e-5);
        }
        let at_one = chart.positions()[chart.grid.index(16, 8)];
        assert!((at_one - Vec3::new(2.0 / 3.0, 0.0, 1.0)).norm() < 1e-10);
    }

    #[test]
    fn basepoint_is_origin() {
        let data = HoloData::preset(WeierstrassPreset::Catenoid);
        let grid = Grid::new(9, 9, data.domain.0, data.domain.1);
        let z0 = Complex64::new(grid.u(3), grid.v(5));
        let p = weierstrass_positions(&data, &grid, z0).unwrap();
        assert_eq!(p[grid.index(3, 5)], Vec3::zeros());
    }

    #[test]
    fn basepoint_change_is_translation() {
        let data = HoloData::preset(WeierstrassPreset::Enneper);
        let grid = Grid::new(16, 16, data.domain.0, data.domain.1);
        let z1 = Complex64::new(grid.u(4), grid.v(11));
        let a = weierstrass_positions(&data, &grid, Complex64::new(0.1, -0.2)).unwrap();
        let b = weierstrass_positions(&data, &grid, z1).unwrap();
        let shift = a[grid.index(4, 11)];
        for (p, q) in a.iter().zip(&b) {
            assert!((p - shift - q).norm() < 1e-9);
        }
    }

    #[test]
    fn catenoid_matches_closed_form() {
        let data = HoloData::preset(WeierstrassPreset::Catenoid);
        let chart = weierstrass_immersion(&data, 64, 64, Complex64::new(0.0, 0.0)).unwrap();
        let closed: Vec<Vec3> = (0..chart.grid.len())
            .map(|n| {
                let (u, v) = chart.grid.coords(n);
                presets::Catenoid.point(u, v)
            })
            .collect();
        let fit = rigid_align_points(&chart.positions(), &closed);
        assert!(fit.rms < 1e-6, "{}", fit.rms);
        assert!((fit.rotation.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn helicoid_closed_form() {
        let data = HoloData::preset(WeierstrassPreset::Helicoid);
        let z = Complex64::new(0.7, -0.4);
        let f = weierstrass_point(&data, Complex64::new(0.0, 0.0), z, 64);
        let (u, v) = (z.re, z.im);
        let want = [-u.sin() * v.sinh(), u.cos() * v.sinh(), u];
        for k in 0..3 {
            assert!((f[k] - want[k]).abs() < 1e-9, "{f:?} {want:?}");
        }
    }

    #[test]
    fn cauchy_riemann_detects_conjugation() {
        let grid = Grid::new(16, 16, (-1.0, 1.0), (-1.0, 1.0));
        let data = HoloData::preset(WeierstrassPreset::Enneper);
        let rep = holomorphy_check(&data, &grid);
        assert!(rep.cr_g < 1e-12 && rep.cr_mu < 1e-12);
        let bad = HoloData::new("conj", |z: Complex64| z.conj(), |_| Complex64::new(1.0, 0.0), data.domain);
        assert!((holomorphy_check(&bad, &grid).cr_g - 2.0).abs() < 1e-12);
    }

    #[test]
    fn loop_integrals_vanish_under_refinement() {
        let data = HoloData::preset(WeierstrassPreset::Catenoid);
        let r: Vec<f64> = [16, 32, 64]
            .iter()
            .map(|&n| holomorphy_check(&data, &Grid::new(n, n, data.domain.0, data.domain.1)).loop_density)
            .collect();
        assert!(r[0] > r[1] && r[1] > r[2] && r[2] < 1e-6, "{r:?}");
    }

    #[test]
    fn plane_data_is_flat() {
        let data = HoloData::preset(WeierstrassPreset::Plane);
        let chart = weierstrass_immersion(&data, 16, 16, Complex64::new(0.0, 0.0)).unwrap();
        let rep = minimality_check(&chart).unwrap();
        assert!(rep.max_mean_curvature < 1e-12 && rep.conformality < 1e-12);
    }

    #[test]
    fn minimal_and_conformal() {
        for p in [WeierstrassPreset::Enneper, WeierstrassPreset::Catenoid, WeierstrassPreset::Helicoid] {
            let data = HoloData::preset(p);
            let errs: Vec<f64> = [32, 64, 128]
                .iter()
                .map(|&n| {
                    let chart = weierstrass_immersion(&data, n, n, Complex64::new(0.0, 0.0)).unwrap();
                    minimality_check(&chart).unwrap().max_mean_curvature
                })
                .collect();
            assert!(errs[2] < 1e-3, "{p:?} {errs:?}");
            assert!(errs[2] < 1e-10 || (errs[1] / errs[2]).log2() > 1.8, "{p:?} {errs:?}");
        }
    }

    #[test]
    fn singular_path_is_rejected() {
        let data = HoloData::new(
            "pole",
            |z: Complex64| 1.0 / (z - Complex64::new(0.5, 0.0)),
            |_| Complex64::new(1.0, 0.0),
            ((-1.0, 1.0), (-1.0, 1.0)),
        )
        .with_singularities(vec![Complex64::new(0.5, 0.0)]);
        assert!(matches!(
            weierstrass_immersion(&data, 16, 16, Complex64::new(0.0, 0.0)),
            Err(Error::SingularPath { .. })
        ));
    }
}
