//! Period forms of spinor fields, reconstruction of the immersion, and the
//! identities built on them.
//!
//! For `phi` in frame gauge the forms are evaluated on `(e_1, e_2)`:
//! `xi(X) = 2(X phi+, phi-)`, `xi+-(X) = (X phi+-, alpha phi+-)`,
//! `w = Re xi`, `mu = Im xi`, `Omega = xi+ - xi-`. Integrating `(w, Omega)`
//! gives a map into `R + C = R^3`, stored as `(f, Re g, Im g)`.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{alpha, basis_mul, split_frame, Spinor};
use crate::charts::{
    cell_average, compute_geometry, exterior_d_cells, frame_gradient, CellField, ChartSpec, DerivativeMode,
    GeometryField, Immersion, Intrinsic, IntrinsicGeometry, Vec3,
};
use crate::error::{Error, Result};
use crate::grid::{Field, FieldValue, Grid, ScalarField};
use crate::spinor::{dirac, EndoField, SpinorFieldGrid};

type C = Complex64;

#[derive(Debug, Clone)]
pub struct PeriodForms {
    pub grid: Grid,
    pub xi: Field<[C; 2]>,
    pub xi_plus: Field<[C; 2]>,
    pub xi_minus: Field<[C; 2]>,
    pub w: Field<[f64; 2]>,
    pub mu: Field<[f64; 2]>,
    pub omega: Field<[C; 2]>,
}

pub fn period_forms(phi: &SpinorFieldGrid) -> PeriodForms {
    let v = &phi.values;
    let xi = v.map(|p| {
        let (pp, pm) = split_frame(p);
        std::array::from_fn(|j| basis_mul(j, &pp).inner(&pm) * 2.0)
    });
    let half = |plus: bool| {
        v.map(move |p| {
            let (pp, pm) = split_frame(p);
            let s = if plus { pp } else { pm };
            let a = alpha(&s);
            std::array::from_fn(|j| basis_mul(j, &s).inner(&a))
        })
    };
    let xi_plus: Field<[C; 2]> = half(true);
    let xi_minus: Field<[C; 2]> = half(false);
    let omega = xi_plus.zip_map(&xi_minus, |a, b| [a[0] - b[0], a[1] - b[1]]);
    PeriodForms {
        grid: v.grid,
        w: xi.map(|x| [x[0].re, x[1].re]),
        mu: xi.map(|x| [x[0].im, x[1].im]),
        xi,
        xi_plus,
        xi_minus,
        omega,
    }
}

/// `(star x)(e_1) = -x(e_2)`, `(star x)(e_2) = x(e_1)`.
pub fn hodge(x: [C; 2]) -> [C; 2] {
    [-x[1], x[0]]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HodgeReport {
    /// `sup |star xi + i xi|`.
    pub xi: f64,
    /// `sup |star xi+ + i xi+|`.
    pub xi_plus: f64,
    /// `sup |star xi- - i xi-|`.
    pub xi_minus: f64,
    /// `sup |w + i mu - xi|`.
    pub split: f64,
}

pub fn hodge_report(p: &PeriodForms) -> HodgeReport {
    let i = C::i();
    let sup = |f: &Field<[C; 2]>, c: C| {
        f.data
            .iter()
            .map(|x| {
                let s = hodge(*x);
                (s[0] - c * x[0]).norm().max((s[1] - c * x[1]).norm())
            })
            .fold(0.0, f64::max)
    };
    let split = (0..p.grid.len())
        .map(|n| {
            (0..2)
                .map(|j| (C::new(p.w[n][j], p.mu[n][j]) - p.xi[n][j]).norm())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    HodgeReport {
        xi: sup(&p.xi, -i),
        xi_plus: sup(&p.xi_plus, -i),
        xi_minus: sup(&p.xi_minus, i),
        split,
    }
}

#[derive(Debug, Clone)]
pub struct ClosednessReport {
    pub dw: CellField,
    /// Larger of the real and imaginary parts.
    pub domega: CellField,
    /// `d mu - 2H(|phi-|^2 - |phi+|^2) dA`.
    pub dmu: CellField,
}

pub fn closedness_report(p: &PeriodForms, phi: &SpinorFieldGrid, geom: &GeometryField) -> ClosednessReport {
    let dw = exterior_d_cells(&p.w, geom);
    let re = exterior_d_cells(&p.omega.map(|x| [x[0].re, x[1].re]), geom);
    let im = exterior_d_cells(&p.omega.map(|x| [x[0].im, x[1].im]), geom);
    let domega = CellField {
        grid: re.grid,
        data: re.data.iter().zip(&im.data).map(|(a, b)| a.abs().max(b.abs())).collect(),
    };
    let (lp, lm) = phi.lengths();
    let source = Field::from_fn(p.grid, |n| 2.0 * geom.nodes[n].mean * (lm[n] - lp[n]));
    let dmu_raw = exterior_d_cells(&p.mu, geom);
    let src = cell_average(&source);
    let dmu = CellField {
        grid: dmu_raw.grid,
        data: dmu_raw.data.iter().zip(&src.data).map(|(a, b)| a - b).collect(),
    };
    ClosednessReport { dw, domega, dmu }
}

/// Point of `R + C` per node.
#[derive(Debug, Clone, PartialEq)]
pub struct ImmersionGrid {
    pub grid: Grid,
    pub f: Vec<f64>,
    pub g: Vec<C>,
    pub base: usize,
}

impl ImmersionGrid {
    pub fn points(&self) -> Vec<Vec3> {
        self.f
            .iter()
            .zip(&self.g)
            .map(|(f, g)| Vec3::new(*f, g.re, g.im))
            .collect()
    }

    pub fn as_chart(&self, name: &str) -> Result<ChartSpec> {
        ChartSpec::new(name, self.grid, Immersion::Sampled(std::sync::Arc::new(self.points())))
    }
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub immersion: ImmersionGrid,
    /// `sup |F_A - F_B|` between the two L-path orders.
    pub loop_residual: f64,
    /// Fourth-order vs trapezoid difference along the primary path order.
    pub estimate: f64,
}

#[derive(Clone, Copy)]
enum Rule {
    Fourth,
    Trapezoid,
}

/// Integral over `[x_k, x_{k+1}]` from node samples.
fn interval<V: FieldValue>(y: &[V], k: usize, h: f64, rule: Rule) -> V {
    let n = y.len();
    match rule {
        Rule::Trapezoid => (y[k] + y[k + 1]) * (0.5 * h),
        Rule::Fourth => {
            let c = h / 24.0;
            if k == 0 {
                (y[0] * 9.0 + y[1] * 19.0 - y[2] * 5.0 + y[3]) * c
            } else if k == n - 2 {
                (y[n - 1] * 9.0 + y[n - 2] * 19.0 - y[n - 3] * 5.0 + y[n - 4]) * c
            } else {
                ((y[k] + y[k + 1]) * 13.0 - y[k - 1] - y[k + 2]) * c
            }
        }
    }
}

/// Integral from node `s` to every node of a line of samples.
fn cumulative<V: FieldValue>(y: &[V], s: usize, h: f64, rule: Rule) -> Vec<V> {
    let zero = y[0] * 0.0;
    let mut out = vec![zero; y.len()];
    for k in s + 1..y.len() {
        out[k] = out[k - 1] + interval(y, k - 1, h, rule);
    }
    for k in (0..s).rev() {
        out[k] = out[k + 1] - interval(y, k, h, rule);
    }
    out
}

/// L-path integration of a 1-form with coordinate components `(cu, cv)`.
/// `u_first`: along the base row, then up the columns; otherwise the
/// transposed order.
fn integrate<V: FieldValue>(cu: &Field<V>, cv: &Field<V>, base: usize, u_first: bool, rule: Rule) -> Vec<V> {
    let g = cu.grid;
    let (ib, jb) = g.ij(base);
    let (hu, hv) = (g.h_u(), g.h_v());
    let row = |j: usize, f: &Field<V>| (0..g.n_u).map(|i| f[g.index(i, j)]).collect::<Vec<_>>();
    let col = |i: usize, f: &Field<V>| (0..g.n_v).map(|j| f[g.index(i, j)]).collect::<Vec<_>>();
    let mut out = vec![cu[0] * 0.0; g.len()];
    if u_first {
        let first = cumulative(&row(jb, cu), ib, hu, rule);
        for i in 0..g.n_u {
            let up = cumulative(&col(i, cv), jb, hv, rule);
            for j in 0..g.n_v {
                out[g.index(i, j)] = first[i] + up[j];
            }
        }
    } else {
        let first = cumulative(&col(ib, cv), jb, hv, rule);
        for j in 0..g.n_v {
            let across = cumulative(&row(j, cu), ib, hu, rule);
            for i in 0..g.n_u {
                out[g.index(i, j)] = first[j] + across[i];
            }
        }
    }
    out
}

/// Integrates `(w, Omega)` from `base`.
pub fn reconstruct(p: &PeriodForms, geom: &impl Intrinsic, base: usize) -> Result<Reconstruction> {
    let g = p.grid;
    let values = Field::from_fn(g, |n| {
        Vector3::new(p.w[n], [p.omega[n][0].re, p.omega[n][1].re], [p.omega[n][0].im, p.omega[n][1].im])
    });
    let coords = Field::from_fn(g, |n| {
        let node = geom.intrinsic(n);
        let v = values[n];
        let c: [[f64; 2]; 3] = [node.to_coords(v.x), node.to_coords(v.y), node.to_coords(v.z)];
        (Vec3::new(c[0][0], c[1][0], c[2][0]), Vec3::new(c[0][1], c[1][1], c[2][1]))
    });
    let cu = coords.map(|c| c.0);
    let cv = coords.map(|c| c.1);
    let scale = cu.data.iter().chain(&cv.data).map(|x| x.norm()).fold(0.0, f64::max)
        * (g.u_range.1 - g.u_range.0).max(g.v_range.1 - g.v_range.0);
    if g.is_periodic() {
        // period of the form around the closed direction through the base
        let (ib, jb) = g.ij(base);
        let period = if g.periodic_u {
            (0..g.n_u).map(|i| cu[g.index(i, jb)] * g.h_u()).fold(Vec3::zeros(), |a, b| a + b)
        } else {
            (0..g.n_v).map(|j| cv[g.index(ib, j)] * g.h_v()).fold(Vec3::zeros(), |a, b| a + b)
        };
        return Err(Error::NotExact {
            loop_residual: period.norm(),
            estimate: 1e-12 * scale,
            periodic: true,
        });
    }
    let a = integrate(&cu, &cv, base, true, Rule::Fourth);
    let b = integrate(&cu, &cv, base, false, Rule::Fourth);
    let t = integrate(&cu, &cv, base, true, Rule::Trapezoid);
    let sup = |x: &[Vec3], y: &[Vec3]| x.iter().zip(y).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
    let loop_residual = sup(&a, &b);
    let estimate = sup(&a, &t).max(1e-12 * scale);
    if loop_residual > 10.0 * estimate {
        return Err(Error::NotExact {
            loop_residual,
            estimate,
            periodic: false,
        });
    }
    Ok(Reconstruction {
        immersion: ImmersionGrid {
            grid: g,
            f: a.iter().map(|x| x.x).collect(),
            g: a.iter().map(|x| C::new(x.y, x.z)).collect(),
            base,
        },
        loop_residual,
        estimate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alignment {
    pub rotation: Matrix3<f64>,
    pub translation: Vec3,
    pub rms: f64,
}

/// Proper rigid motion `x -> R x + t` taking `a` closest to `b` in the
/// least-squares sense.
pub fn rigid_align_points(a: &[Vec3], b: &[Vec3]) -> Alignment {
    assert_eq!(a.len(), b.len(), "point sets differ in size");
    let n = a.len() as f64;
    let ca = a.iter().sum::<Vec3>() / n;
    let cb = b.iter().sum::<Vec3>() / n;
    let h: Matrix3<f64> = a.iter().zip(b).map(|(p, q)| (p - ca) * (q - cb).transpose()).sum();
    let svd = h.svd(true, true);
    let (u, vt) = (svd.u.expect("u requested"), svd.v_t.expect("v requested"));
    let d = (vt.transpose() * u.transpose()).determinant().signum();
    let rotation = vt.transpose() * Matrix3::from_diagonal(&Vec3::new(1.0, 1.0, d)) * u.transpose();
    let translation = cb - rotation * ca;
    let rms = (a
        .iter()
        .zip(b)
        .map(|(p, q)| (rotation * p + translation - q).norm_squared())
        .sum::<f64>()
        / n)
        .sqrt();
    Alignment {
        rotation,
        translation,
        rms,
    }
}

pub fn rigid_align(a: &ImmersionGrid, b: &ChartSpec) -> Alignment {
    rigid_align_points(&a.points(), &b.positions())
}

pub fn diameter(points: &[Vec3]) -> f64 {
    let lo = points.iter().fold(Vec3::repeat(f64::INFINITY), |a, b| a.inf(b));
    let hi = points.iter().fold(Vec3::repeat(f64::NEG_INFINITY), |a, b| a.sup(b));
    (hi - lo).norm()
}

/// Per-node `max |g_rec - g| / max g` over metric components, with the
/// reconstructed metric from node finite differences.
pub fn metric_defect(rec: &ImmersionGrid, geom: &GeometryField) -> Result<ScalarField> {
    let chart = rec.as_chart("reconstruction")?;
    let other = compute_geometry(&chart, DerivativeMode::FiniteDifference { step: None })?;
    let scale = geom.nodes.iter().map(|n| n.intr.metric[0].max(n.intr.metric[2])).fold(0.0, f64::max);
    Ok(Field::from_fn(geom.grid, |n| {
        let (a, b) = (geom.nodes[n].intr.metric, other.nodes[n].intr.metric);
        (0..3).map(|k| (a[k] - b[k]).abs()).fold(0.0, f64::max) / scale
    }))
}

/// Covariant Hessian in the frame, symmetrized:
/// `Hess h(e_j, e_k) = e_j(e_k h) - (nabla_{e_j} e_k) h`.
pub fn covariant_hessian<T: FieldValue>(h: &Field<T>, geom: &impl Intrinsic) -> Field<[[T; 2]; 2]> {
    let seam = [1.0, 1.0];
    let dh = frame_gradient(h, geom, seam);
    let d1 = frame_gradient(&dh.map(|x| x[0]), geom, seam);
    let d2 = frame_gradient(&dh.map(|x| x[1]), geom, seam);
    Field::from_fn(h.grid, |n| {
        let [w1, w2] = geom.intrinsic(n).omega;
        let w = [w1, w2];
        let (e1h, e2h) = (dh[n][0], dh[n][1]);
        let raw = |j: usize, k: usize| {
            if k == 0 {
                d1[n][j] - e2h * w[j]
            } else {
                d2[n][j] + e1h * w[j]
            }
        };
        let off = (raw(0, 1) + raw(1, 0)) * 0.5;
        [[raw(0, 0), off], [off, raw(1, 1)]]
    })
}

#[derive(Debug, Clone)]
pub struct HessianReport {
    /// `|Hess f - 2(|phi+|^2 - |phi-|^2) E|`.
    pub a: ScalarField,
    /// `||grad f|^2 - 4|phi+|^2 |phi-|^2|`.
    pub b: ScalarField,
    /// `|Hess g + 4(phi-, alpha phi+) E|`.
    pub c: ScalarField,
    /// `||grad g|^2 - (|phi+|^2 - |phi-|^2)^2|`, hermitian norm.
    pub d: ScalarField,
    /// `||grad g|^2 - 2(|phi+|^4 + |phi-|^4)|`.
    pub d_hermitian: ScalarField,
    /// `|det Hess f - (|phi+|^2 - |phi-|^2)^2 G|`.
    pub det: ScalarField,
}

pub fn hessian_report(phi: &SpinorFieldGrid, geom: &GeometryField, e: &EndoField, rec: &ImmersionGrid) -> HessianReport {
    let grid = geom.grid;
    let f = Field::from_vec(grid, rec.f.clone());
    let g = Field::from_vec(grid, rec.g.clone());
    let hf = covariant_hessian(&f, geom);
    let hg = covariant_hessian(&g, geom);
    let df = frame_gradient(&f, geom, [1.0, 1.0]);
    let dg = frame_gradient(&g, geom, [1.0, 1.0]);
    let (lp, lm) = phi.lengths();
    let entry_max = |m: &dyn Fn(usize, usize) -> f64| {
        let mut r: f64 = 0.0;
        for j in 0..2 {
            for k in 0..2 {
                r = r.max(m(j, k));
            }
        }
        r
    };
    let a = Field::from_fn(grid, |n| {
        let s = 2.0 * (lp[n] - lm[n]);
        entry_max(&|j, k| (hf[n][j][k] - s * e[n][j][k]).abs())
    });
    let c = Field::from_fn(grid, |n| {
        let (pp, pm) = split_frame(&phi.values[n]);
        let s = pm.inner(&alpha(&pp)) * -4.0;
        entry_max(&|j, k| (hg[n][j][k] - s * e[n][j][k]).norm())
    });
    let b = Field::from_fn(grid, |n| (df[n][0].powi(2) + df[n][1].powi(2) - 4.0 * lp[n] * lm[n]).abs());
    let grad_g = |n: usize| dg[n][0].norm_sqr() + dg[n][1].norm_sqr();
    let d = Field::from_fn(grid, |n| (grad_g(n) - (lp[n] - lm[n]).powi(2)).abs());
    let d_hermitian = Field::from_fn(grid, |n| (grad_g(n) - 2.0 * (lp[n].powi(2) + lm[n].powi(2))).abs());
    let det = Field::from_fn(grid, |n| {
        let h = hf[n];
        (h[0][0] * h[1][1] - h[0][1] * h[1][0] - (lp[n] - lm[n]).powi(2) * geom.nodes[n].gauss).abs()
    });
    HessianReport {
        a,
        b,
        c,
        d,
        d_hermitian,
        det,
    }
}

/// `f(m) = -Im(m Phi, Phi)` straight from the immersion.
pub fn height_function(geom: &GeometryField, phi: &Spinor) -> ScalarField {
    geom.scalar(|n| -crate::algebra::clifford_mul(&n.x, phi).inner(phi).im)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxPrincipleReport {
    pub argmax: usize,
    pub grad_norm: f64,
    pub det_hessian: f64,
    pub max_gauss: f64,
}

/// At the grid maximum of the height function: `|grad f|`, `det Hess f`,
/// and the largest Gauss curvature on the chart.
pub fn max_principle(geom: &GeometryField, phi: &Spinor) -> MaxPrincipleReport {
    let f = height_function(geom, phi);
    let argmax = (0..f.len()).fold(0, |best, n| if f[n] > f[best] { n } else { best });
    let df = frame_gradient(&f, geom, [1.0, 1.0]);
    let h = covariant_hessian(&f, geom)[argmax];
    MaxPrincipleReport {
        argmax,
        grad_norm: df[argmax][0].hypot(df[argmax][1]),
        det_hessian: h[0][0] * h[1][1] - h[0][1] * h[1][0],
        max_gauss: geom.nodes.iter().map(|n| n.gauss).fold(f64::NEG_INFINITY, f64::max),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralReport {
    pub area: f64,
    pub total_curvature: f64,
    /// `int G - 3 int <N, a_3>^2 G`.
    pub a3_defect: f64,
    /// `int (|phi|^4 - 6 |phi+|^2 |phi-|^2) G`.
    pub six_defect: f64,
    pub min_plus: f64,
    pub min_minus: f64,
}

/// Integral identities for `phi* ` built from the ambient spinor `phi0`.
pub fn integral_identities(geom: &GeometryField, phi0: &Spinor) -> Result<IntegralReport> {
    use crate::charts::quadrature;
    use crate::spinor::ambient_normal_component;
    let star = SpinorFieldGrid::restrict_parallel(geom, *phi0, 0)?.star();
    let (lp, lm) = star.lengths();
    let gauss = geom.gauss_curvature();
    let one = Field::from_fn(geom.grid, |_| 1.0);
    let n2 = phi0.norm_sqr();
    let a3 = geom.scalar(|n| (ambient_normal_component(n, phi0) / n2).powi(2));
    let six = Field::from_fn(geom.grid, |n| {
        ((lp[n] + lm[n]).powi(2) - 6.0 * lp[n] * lm[n]) * gauss[n]
    });
    let total_curvature = quadrature(&gauss, geom);
    Ok(IntegralReport {
        area: quadrature(&one, geom),
        total_curvature,
        a3_defect: total_curvature - 3.0 * quadrature(&a3.zip_map(&gauss, |a, g| a * g), geom),
        six_defect: quadrature(&six, geom),
        min_plus: lp.data.iter().fold(f64::INFINITY, |a, b| a.min(b.sqrt())),
        min_minus: lm.data.iter().fold(f64::INFINITY, |a, b| a.min(b.sqrt())),
    })
}

fn check_factor(sigma: &ScalarField) -> Result<()> {
    for (node, &value) in sigma.data.iter().enumerate() {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositiveFactor { node, value });
        }
    }
    Ok(())
}

/// Geometry of `sigma g`; its frame is `sigma^{-1/2} e_j`, so spinor
/// components carry over unchanged.
pub fn rescaled(geom: &impl Intrinsic, sigma: &ScalarField) -> Result<IntrinsicGeometry> {
    check_factor(sigma)?;
    let metric = Field::from_fn(geom.grid(), |n| geom.intrinsic(n).metric.map(|m| m * sigma[n]));
    Ok(IntrinsicGeometry::from_metric(&metric))
}

/// Per-node `|D~ phi - sigma^{-3/4} D(sigma^{1/4} phi)|`. Both Dirac
/// operators use metric-derived connections so that `sigma = 1` cancels
/// exactly.
pub fn conformal_covariance(phi: &SpinorFieldGrid, sigma: &ScalarField, geom: &impl Intrinsic) -> Result<ScalarField> {
    let tilde = rescaled(geom, sigma)?;
    let base = IntrinsicGeometry::of(geom);
    let lhs = dirac(phi, &tilde);
    let scaled = phi.with_values(Field::from_fn(phi.grid(), |n| phi.values[n] * sigma[n].powf(0.25)));
    let rhs = dirac(&scaled, &base);
    Ok(Field::from_fn(phi.grid(), |n| {
        (lhs.values[n] - rhs.values[n] * sigma[n].powf(-0.75)).norm()
    }))
}

/// For `D phi = lambda phi`: per-node `|D~ phi* - lambda/|phi|^2 phi*|` with
/// `phi* = phi/|phi|` and the metric `|phi|^4 g`.
pub fn conformal_eigen_residual(phi: &SpinorFieldGrid, lambda: f64, geom: &impl Intrinsic) -> Result<ScalarField> {
    let len = phi.values.map(|p| p.norm());
    let sigma = len.map(|l| l.powi(4));
    let tilde = rescaled(geom, &sigma)?;
    let star = phi.with_values(Field::from_fn(phi.grid(), |n| phi.values[n] * (1.0 / len[n])));
    let d = dirac(&star, &tilde);
    Ok(Field::from_fn(phi.grid(), |n| {
        (d.values[n] - star.values[n] * (lambda / len[n].powi(2))).norm()
    }))
}

/// `e^{iu}(1,1)/sqrt2 + e^{iv}(1,i)/sqrt2` on the flat torus `[0,2pi)^2`:
/// `D phi = phi`, with `2 - sqrt2 <= |phi|^2 <= 2 + sqrt2`.
pub fn torus_eigenspinor(grid: Grid) -> SpinorFieldGrid {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    SpinorFieldGrid::manufactured(
        Field::from_fn(grid, |n| {
            let (u, v) = grid.coords(n);
            let a = C::from_polar(s, u);
            let b = C::from_polar(s, v);
            Spinor::new(a + b, a + C::i() * b)
        }),
        [1.0, 1.0],
    )
}
