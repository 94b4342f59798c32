//! Closed-form surfaces with analytic jets.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::charts::{ChartSpec, Jet2, QuadratureRule, SurfaceMap, Vec3};
use crate::error::Result;
use crate::grid::Grid;

pub struct Plane;

impl SurfaceMap for Plane {
    fn point(&self, u: f64, v: f64) -> Vec3 {
        Vec3::new(u, v, 0.0)
    }

    fn jet(&self, u: f64, v: f64) -> Option<Jet2> {
        Some(Jet2 {
            x: self.point(u, v),
            xu: Vec3::x(),
            xv: Vec3::y(),
            xuu: Vec3::zeros(),
            xuv: Vec3::zeros(),
            xvv: Vec3::zeros(),
        })
    }
}

/// `r (sin v cos u, sin v sin u, -cos v)`; `v` is the polar angle from the
/// south pole, so the normal `x_u x x_v` points outward.
pub struct Sphere {
    pub radius: f64,
}

impl SurfaceMap for Sphere {
    fn point(&self, u: f64, v: f64) -> Vec3 {
        self.radius * Vec3::new(v.sin() * u.cos(), v.sin() * u.sin(), -v.cos())
    }

    fn jet(&self, u: f64, v: f64) -> Option<Jet2> {
        let r = self.radius;
        let (su, cu) = u.sin_cos();
        let (sv, cv) = v.sin_cos();
        Some(Jet2 {
            x: r * Vec3::new(sv * cu, sv * su, -cv),
            xu: r * Vec3::new(-sv * su, sv * cu, 0.0),
            xv: r * Vec3::new(cv * cu, cv * su, sv),
            xuu: r * Vec3::new(-sv * cu, -sv * su, 0.0),
            xuv: r * Vec3::new(-cv * su, cv * cu, 0.0),
            xvv: r * Vec3::new(-sv * cu, -sv * su, cv),
        })
    }
}

/// `(cosh v cos u, cosh v sin u, v)`.
pub struct Catenoid;

impl SurfaceMap for Catenoid {
    fn point(&self, u: f64, v: f64) -> Vec3 {
        Vec3::new(v.cosh() * u.cos(), v.cosh() * u.sin(), v)
    }

    fn jet(&self, u: f64, v: f64) -> Option<Jet2> {
        let (su, cu) = u.sin_cos();
        let (ch, sh) = (v.cosh(), v.sinh());
        Some(Jet2 {
            x: self.point(u, v),
            xu: Vec3::new(-ch * su, ch * cu, 0.0),
            xv: Vec3::new(sh * cu, sh * su, 1.0),
            xuu: Vec3::new(-ch * cu, -ch * su, 0.0),
            xuv: Vec3::new(-sh * su, sh * cu, 0.0),
            xvv: Vec3::new(ch * cu, ch * su, 0.0),
        })
    }
}

/// `(v cos u, v sin u, c u)`.
pub struct Helicoid {
    pub pitch: f64,
}

impl SurfaceMap for Helicoid {
    fn point(&self, u: f64, v: f64) -> Vec3 {
        Vec3::new(v * u.cos(), v * u.sin(), self.pitch * u)
    }

    fn jet(&self, u: f64, v: f64) -> Option<Jet2> {
        let (su, cu) = u.sin_cos();
        Some(Jet2 {
            x: self.point(u, v),
            xu: Vec3::new(-v * su, v * cu, self.pitch),
            xv: Vec3::new(cu, su, 0.0),
            xuu: Vec3::new(-v * cu, -v * su, 0.0),
            xuv: Vec3::new(-su, cu, 0.0),
            xvv: Vec3::zeros(),
        })
    }
}

/// `(u - u^3/3 + u v^2, -v - u^2 v + v^3/3, u^2 - v^2)`.
pub struct Enneper;

impl SurfaceMap for Enneper {
    fn point(&self, u: f64, v: f64) -> Vec3 {
        Vec3::new(
            u - u.powi(3) / 3.0 + u * v * v,
            -v - u * u * v + v.powi(3) / 3.0,
            u * u - v * v,
        )
    }

    fn jet(&self, u: f64, v: f64) -> Option<Jet2> {
        Some(Jet2 {
            x: self.point(u, v),
            xu: Vec3::new(1.0 - u * u + v * v, -2.0 * u * v, 2.0 * u),
            xv: Vec3::new(2.0 * u * v, -1.0 - u * u + v * v, -2.0 * v),
            xuu: Vec3::new(-2.0 * u, -2.0 * v, 2.0),
            xuv: Vec3::new(2.0 * v, -2.0 * u, 0.0),
            xvv: Vec3::new(2.0 * u, 2.0 * v, -2.0),
        })
    }
}

/// Graph `z = a sin u cos v + b u v`: non-constant `H`, no symmetry.
pub struct Graph {
    pub a: f64,
    pub b: f64,
}

impl SurfaceMap for Graph {
    fn point(&self, u: f64, v: f64) -> Vec3 {
        Vec3::new(u, v, self.a * u.sin() * v.cos() + self.b * u * v)
    }

    fn jet(&self, u: f64, v: f64) -> Option<Jet2> {
        let (su, cu) = u.sin_cos();
        let (sv, cv) = v.sin_cos();
        let (a, b) = (self.a, self.b);
        Some(Jet2 {
            x: self.point(u, v),
            xu: Vec3::new(1.0, 0.0, a * cu * cv + b * v),
            xv: Vec3::new(0.0, 1.0, -a * su * sv + b * u),
            xuu: Vec3::new(0.0, 0.0, -a * su * cv),
            xuv: Vec3::new(0.0, 0.0, -a * cu * sv + b),
            xvv: Vec3::new(0.0, 0.0, -a * su * cv),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SphereKind {
    /// Periodic in `u`, polar caps of angular radius `cap` removed.
    Capped { cap: f64 },
    /// `[0, pi] x [pi/4, 3pi/4]`, no seams.
    Patch,
    /// Whole sphere: `v` at the Fejér nodes, so no node sits on a pole.
    Full,
}

pub fn plane(n_u: usize, n_v: usize) -> Result<ChartSpec> {
    ChartSpec::from_map("plane", Grid::new(n_u, n_v, (-1.0, 1.0), (-1.0, 1.0)), Plane)
}

/// `R^2 / 2 pi Z^2`, embedded flat in the plane with both directions periodic.
pub fn flat_torus(n_u: usize, n_v: usize) -> Result<ChartSpec> {
    let grid = Grid::new(n_u, n_v, (0.0, 2.0 * PI), (0.0, 2.0 * PI)).with_periodic(true, true);
    ChartSpec::from_map("flat_torus", grid, Plane)
}

pub fn sphere(radius: f64, kind: SphereKind, n_u: usize, n_v: usize) -> Result<ChartSpec> {
    let map = Sphere { radius };
    match kind {
        SphereKind::Capped { cap } => {
            let grid = Grid::new(n_u, n_v, (0.0, 2.0 * PI), (cap, PI - cap)).with_periodic(true, false);
            ChartSpec::from_map("sphere", grid, map)
        }
        SphereKind::Patch => ChartSpec::from_map(
            "sphere_patch",
            Grid::new(n_u, n_v, (0.0, PI), (0.25 * PI, 0.75 * PI)),
            map,
        ),
        SphereKind::Full => {
            let half = 0.5 * PI / n_v as f64;
            let grid = Grid::new(n_u, n_v, (0.0, 2.0 * PI), (half, PI - half)).with_periodic(true, false);
            Ok(ChartSpec::from_map("sphere_full", grid, map)?.with_quadrature(QuadratureRule::PolarFejer))
        }
    }
}

/// Catenoid neck with `v in [-height, height]`, periodic in `u`.
pub fn catenoid(height: f64, n_u: usize, n_v: usize) -> Result<ChartSpec> {
    let grid = Grid::new(n_u, n_v, (0.0, 2.0 * PI), (-height, height)).with_periodic(true, false);
    ChartSpec::from_map("catenoid", grid, Catenoid)
}

pub fn helicoid(pitch: f64, n_u: usize, n_v: usize) -> Result<ChartSpec> {
    ChartSpec::from_map("helicoid", Grid::new(n_u, n_v, (-1.5, 1.5), (-1.0, 1.0)), Helicoid { pitch })
}

pub fn enneper(extent: f64, n_u: usize, n_v: usize) -> Result<ChartSpec> {
    ChartSpec::from_map(
        "enneper",
        Grid::new(n_u, n_v, (-extent, extent), (-extent, extent)),
        Enneper,
    )
}

pub fn graph(a: f64, b: f64, n_u: usize, n_v: usize) -> Result<ChartSpec> {
    ChartSpec::from_map("graph", Grid::new(n_u, n_v, (-1.0, 1.0), (-1.0, 1.0)), Graph { a, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn jet_fd_error(map: &dyn SurfaceMap, u: f64, v: f64) -> f64 {
        let h = 1e-5;
        let j = map.jet(u, v).unwrap();
        let du = (map.point(u + h, v) - map.point(u - h, v)) / (2.0 * h);
        let dv = (map.point(u, v + h) - map.point(u, v - h)) / (2.0 * h);
        let jdu = map.jet(u + h, v).unwrap();
        let jdm = map.jet(u - h, v).unwrap();
        let jdv = map.jet(u, v + h).unwrap();
        let jdvm = map.jet(u, v - h).unwrap();
        [
            (j.x - map.point(u, v)).norm(),
            (j.xu - du).norm(),
            (j.xv - dv).norm(),
            (j.xuu - (jdu.xu - jdm.xu) / (2.0 * h)).norm(),
            (j.xuv - (jdv.xu - jdvm.xu) / (2.0 * h)).norm(),
            (j.xvv - (jdv.xv - jdvm.xv) / (2.0 * h)).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    proptest! {
        #[test]
        fn analytic_jets_match_difference_quotients(u in -1.0f64..1.0, v in 0.2f64..1.0) {
            let maps: [Box<dyn SurfaceMap>; 6] = [
                Box::new(Plane),
                Box::new(Sphere { radius: 1.7 }),
                Box::new(Catenoid),
                Box::new(Helicoid { pitch: 0.8 }),
                Box::new(Enneper),
                Box::new(Graph { a: 0.3, b: 0.2 }),
            ];
            for m in &maps {
                prop_assert!(jet_fd_error(m.as_ref(), u, v) < 1e-6);
            }
        }
    }
}
