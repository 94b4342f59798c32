//! Spinor fields on charts, in the gauge of the chart's spin frame.
//!
//! A field is stored by its components with respect to the spin lift of
//! `(e_1, e_2, N)`, so tangent vectors act by `E_1, E_2`, the normal by
//! `E_3`, and `phi = phi+ + phi-` is the split into first and second
//! component. Derivatives are component-wise plus the connection term
//! `1/2 omega_12(X) E_3`.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::algebra::{self, basis_mul, split_frame, star_frame, su2_lift_grid, tangent_mul, Spinor};
use crate::charts::{frame_gradient, GeometryField, Intrinsic, SurfaceNode};
use crate::error::{Error, Result};
use crate::grid::{Field, ScalarField};

/// Symmetric endomorphism (or bilinear form) per node in the frame:
/// `m[j][k]` is the `e_k` component of `E(e_j)`.
pub type EndoField = Field<[[f64; 2]; 2]>;

/// Relative floor for `|phi|` below which `E` is not extracted.
pub const ZERO_LENGTH_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Restricted,
    Star,
    Alpha,
    Manufactured,
}

#[derive(Debug, Clone)]
pub struct SpinorFieldGrid {
    pub values: Field<Spinor>,
    /// Sign of the gauge across each periodic seam.
    pub seam: [f64; 2],
    pub provenance: Provenance,
}

impl SpinorFieldGrid {
    pub fn manufactured(values: Field<Spinor>, seam: [f64; 2]) -> Self {
        SpinorFieldGrid {
            values,
            seam,
            provenance: Provenance::Manufactured,
        }
    }

    /// Restriction of an ambient spinor field `Phi(x)` given in the
    /// standard frame of `R^3`.
    pub fn restrict(
        geom: &GeometryField,
        base: usize,
        ambient: impl Fn(&SurfaceNode) -> Spinor,
    ) -> Result<Self> {
        let lift = su2_lift_grid(&geom.frame_rotations(), base)?;
        let values = Field::from_fn(geom.grid, |n| lift.lifts[n].adjoint() * ambient(&geom.nodes[n]));
        Ok(SpinorFieldGrid {
            values,
            seam: lift.seam,
            provenance: Provenance::Restricted,
        })
    }

    /// `phi = Phi|M` for a constant (parallel) ambient spinor.
    pub fn restrict_parallel(geom: &GeometryField, phi: Spinor, base: usize) -> Result<Self> {
        if !(phi.norm() > 0.0) {
            return Err(Error::ZeroLength {
                min: phi.norm(),
                max: phi.norm(),
            });
        }
        Self::restrict(geom, base, |_| phi)
    }

    pub fn grid(&self) -> crate::grid::Grid {
        self.values.grid
    }

    pub fn star(&self) -> Self {
        SpinorFieldGrid {
            values: self.values.map(star_frame),
            seam: self.seam,
            provenance: Provenance::Star,
        }
    }

    pub fn alpha(&self) -> Self {
        SpinorFieldGrid {
            values: self.values.map(algebra::alpha),
            seam: self.seam,
            provenance: Provenance::Alpha,
        }
    }

    pub fn split(&self) -> (Field<Spinor>, Field<Spinor>) {
        (self.values.map(|p| split_frame(p).0), self.values.map(|p| split_frame(p).1))
    }

    /// `(|phi+|^2, |phi-|^2)`.
    pub fn lengths(&self) -> (ScalarField, ScalarField) {
        (self.values.map(|p| p.c1.norm_sqr()), self.values.map(|p| p.c2.norm_sqr()))
    }

    pub fn with_values(&self, values: Field<Spinor>) -> Self {
        SpinorFieldGrid {
            values,
            seam: self.seam,
            provenance: Provenance::Manufactured,
        }
    }
}

/// `(nabla_{e_1} phi, nabla_{e_2} phi)` per node.
pub fn covariant_derivative(phi: &SpinorFieldGrid, geom: &impl Intrinsic) -> Field<[Spinor; 2]> {
    let d = frame_gradient(&phi.values, geom, phi.seam);
    Field::from_fn(phi.grid(), |n| {
        let w = geom.intrinsic(n).omega;
        let e3phi = basis_mul(2, &phi.values[n]);
        [d[n][0] + e3phi * (0.5 * w[0]), d[n][1] + e3phi * (0.5 * w[1])]
    })
}

fn dirac_from(nabla: &Field<[Spinor; 2]>) -> Field<Spinor> {
    nabla.map(|d| basis_mul(0, &d[0]) + basis_mul(1, &d[1]))
}

/// `D phi = e_1 nabla_{e_1} phi + e_2 nabla_{e_2} phi`.
pub fn dirac(phi: &SpinorFieldGrid, geom: &impl Intrinsic) -> SpinorFieldGrid {
    phi.with_values(dirac_from(&covariant_derivative(phi, geom)))
}

/// Spinor (rough) Laplacian `-(nabla_1 nabla_1 + nabla_2 nabla_2
/// - nabla_{nabla_{e_1} e_1} - nabla_{nabla_{e_2} e_2})`.
pub fn spinor_laplacian(phi: &SpinorFieldGrid, geom: &impl Intrinsic) -> Field<Spinor> {
    let d = covariant_derivative(phi, geom);
    let d1 = covariant_derivative(&phi.with_values(d.map(|x| x[0])), geom);
    let d2 = covariant_derivative(&phi.with_values(d.map(|x| x[1])), geom);
    Field::from_fn(phi.grid(), |n| {
        let w = geom.intrinsic(n).omega;
        -(d1[n][0] + d2[n][1] - d[n][1] * w[0] + d[n][0] * w[1])
    })
}

/// Per-node `|D(D phi) - Delta phi - G/2 phi|`.
pub fn dirac_square_residual(phi: &SpinorFieldGrid, geom: &GeometryField) -> ScalarField {
    let dd = dirac(&dirac(phi, geom), geom);
    let lap = spinor_laplacian(phi, geom);
    Field::from_fn(phi.grid(), |n| {
        let r = dd.values[n] - lap[n] - phi.values[n] * (0.5 * geom.nodes[n].gauss);
        r.norm()
    })
}

/// `II(e_j)` as frame components.
fn ii_row(node: &SurfaceNode, j: usize) -> [f64; 2] {
    node.ii[j]
}

/// Per-node `max_j |nabla_{e_j} phi - 1/2 II(e_j) N phi|`, the defect of the
/// restriction formula for a parallel ambient spinor.
pub fn restriction_residual(phi: &SpinorFieldGrid, geom: &GeometryField) -> ScalarField {
    let d = covariant_derivative(phi, geom);
    Field::from_fn(phi.grid(), |n| {
        let node = &geom.nodes[n];
        let nphi = basis_mul(2, &phi.values[n]);
        (0..2)
            .map(|j| (d[n][j] - tangent_mul(ii_row(node, j), &nphi) * 0.5).norm())
            .fold(0.0, f64::max)
    })
}

#[derive(Debug, Clone)]
pub struct EndoReport {
    pub e: EndoField,
    pub asymmetry: ScalarField,
    /// `|Tr E + H|`.
    pub trace: ScalarField,
    /// `|det E - G/4|`.
    pub det: ScalarField,
    /// `max_j |nabla_{e_j} phi - E(e_j) phi|`.
    pub twistor: ScalarField,
}

fn check_length(phi: &SpinorFieldGrid) -> Result<()> {
    let (min, max) = phi
        .values
        .data
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), p| (lo.min(p.norm()), hi.max(p.norm())));
    if !(min >= ZERO_LENGTH_TOLERANCE * max) || max == 0.0 {
        return Err(Error::ZeroLength { min, max });
    }
    Ok(())
}

/// `E_jk = Re(nabla_{e_j} phi, e_k phi) / |phi|^2`, with its residuals.
pub fn extract_e(phi: &SpinorFieldGrid, geom: &GeometryField) -> Result<EndoReport> {
    check_length(phi)?;
    let d = covariant_derivative(phi, geom);
    let grid = phi.grid();
    let e: EndoField = Field::from_fn(grid, |n| {
        let p = phi.values[n];
        let l = p.norm_sqr();
        std::array::from_fn(|j| std::array::from_fn(|k| d[n][j].re_inner(&basis_mul(k, &p)) / l))
    });
    let asymmetry = e.map(|m| (m[0][1] - m[1][0]).abs());
    let trace = Field::from_fn(grid, |n| (e[n][0][0] + e[n][1][1] + geom.nodes[n].mean).abs());
    let det = Field::from_fn(grid, |n| {
        let m = e[n];
        (m[0][0] * m[1][1] - m[0][1] * m[1][0] - 0.25 * geom.nodes[n].gauss).abs()
    });
    let twistor = twistor_residual(phi, &e, geom);
    Ok(EndoReport {
        e,
        asymmetry,
        trace,
        det,
        twistor,
    })
}

/// `max_j |nabla_{e_j} phi - E(e_j) phi|` for a given `E`.
pub fn twistor_residual(phi: &SpinorFieldGrid, e: &EndoField, geom: &impl Intrinsic) -> ScalarField {
    let d = covariant_derivative(phi, geom);
    Field::from_fn(phi.grid(), |n| {
        (0..2)
            .map(|j| (d[n][j] - tangent_mul(e[n][j], &phi.values[n])).norm())
            .fold(0.0, f64::max)
    })
}

/// Per-node `|2E + II|` (largest entry); zero when `2E = -II`.
pub fn second_fundamental_form_residual(e: &EndoField, geom: &GeometryField, sign: f64) -> ScalarField {
    Field::from_fn(e.grid, |n| {
        let ii = geom.nodes[n].ii;
        let mut r: f64 = 0.0;
        for j in 0..2 {
            for k in 0..2 {
                r = r.max((2.0 * e[n][j][k] - sign * ii[j][k]).abs());
            }
        }
        r
    })
}

#[derive(Debug, Clone)]
pub struct FormsReport {
    pub f_plus: EndoField,
    pub f_minus: EndoField,
    /// `max(|F+_12 - F+_21|, |F-_12 - F-_21|)`.
    pub asymmetry: ScalarField,
    /// `max(|Tr F+ + H |phi-|^2|, |Tr F- + H |phi+|^2|)`.
    pub trace: ScalarField,
    /// Largest entry of `|phi+|^2 F+ - |phi-|^2 F-`.
    pub relation: ScalarField,
}

/// `F+(X, Y) = Re(nabla_X phi+, Y phi-)`, `F-(X, Y) = Re(nabla_X phi-, Y phi+)`.
pub fn forms_f(phi: &SpinorFieldGrid, geom: &GeometryField) -> FormsReport {
    let d = covariant_derivative(phi, geom);
    let grid = phi.grid();
    let form = |n: usize, plus: bool| -> [[f64; 2]; 2] {
        let (p, m) = split_frame(&phi.values[n]);
        let (own, other) = if plus { (0, m) } else { (1, p) };
        std::array::from_fn(|j| {
            let dj = split_frame(&d[n][j]);
            let dj = if own == 0 { dj.0 } else { dj.1 };
            std::array::from_fn(|k| dj.re_inner(&basis_mul(k, &other)))
        })
    };
    let f_plus: EndoField = Field::from_fn(grid, |n| form(n, true));
    let f_minus: EndoField = Field::from_fn(grid, |n| form(n, false));
    let (lp, lm) = phi.lengths();
    let asymmetry = Field::from_fn(grid, |n| {
        let (a, b) = (f_plus[n], f_minus[n]);
        (a[0][1] - a[1][0]).abs().max((b[0][1] - b[1][0]).abs())
    });
    let trace = Field::from_fn(grid, |n| {
        let h = geom.nodes[n].mean;
        let (a, b) = (f_plus[n], f_minus[n]);
        (a[0][0] + a[1][1] + h * lm[n]).abs().max((b[0][0] + b[1][1] + h * lp[n]).abs())
    });
    let relation = Field::from_fn(grid, |n| {
        let mut r: f64 = 0.0;
        for j in 0..2 {
            for k in 0..2 {
                r = r.max((lp[n] * f_plus[n][j][k] - lm[n] * f_minus[n][j][k]).abs());
            }
        }
        r
    });
    FormsReport {
        f_plus,
        f_minus,
        asymmetry,
        trace,
        relation,
    }
}

/// Norm of `A(e_1, e_2) = nabla_{e_1}(E e_2) - nabla_{e_2}(E e_1) - E[e_1, e_2]`.
pub fn codazzi_residual(e: &EndoField, geom: &impl Intrinsic) -> ScalarField {
    let grid = e.grid;
    let comp = |j: usize, k: usize| frame_gradient(&e.map(|m| m[j][k]), geom, [1.0, 1.0]);
    let (d11, d12, d21, d22) = (comp(0, 0), comp(0, 1), comp(1, 0), comp(1, 1));
    Field::from_fn(grid, |n| {
        let m = e[n];
        let [w1, w2] = geom.intrinsic(n).omega;
        let a1 = (d21[n][0] - m[1][1] * w1) - (d11[n][1] - m[0][1] * w2) + w1 * m[0][0] + w2 * m[1][0];
        let a2 = (d22[n][0] + m[1][0] * w1) - (d12[n][1] + m[0][0] * w2) + w1 * m[0][1] + w2 * m[1][1];
        a1.hypot(a2)
    })
}

#[derive(Debug, Clone)]
pub struct LaplacianReport {
    /// `|Delta L+ - 2(H^2 - G/2)(L+ - L-) - 2 Re(grad H phi-, phi+)|`, and
    /// the same with the roles swapped; the larger of the two.
    pub l_pm: ScalarField,
    /// `|Delta u - 4(H^2 - G/2) u|` with `u = L+ - L-` (constant `H` only).
    pub u: ScalarField,
}

pub fn laplacian_identities(phi: &SpinorFieldGrid, geom: &GeometryField) -> LaplacianReport {
    use crate::charts::laplace_beltrami;
    let grid = phi.grid();
    let (lp, lm) = phi.lengths();
    let u = lp.zip_map(&lm, |a, b| a - b);
    let (dlp, dlm, du) = (
        laplace_beltrami(&lp, geom),
        laplace_beltrami(&lm, geom),
        laplace_beltrami(&u, geom),
    );
    let grad_h = frame_gradient(&geom.mean_curvature(), geom, [1.0, 1.0]);
    let coeff = |n: usize| {
        let node = &geom.nodes[n];
        2.0 * (node.mean * node.mean - 0.5 * node.gauss)
    };
    let l_pm = Field::from_fn(grid, |n| {
        let (p, m) = split_frame(&phi.values[n]);
        let c = coeff(n);
        let rp = dlp[n] - c * (lp[n] - lm[n]) - 2.0 * tangent_mul(grad_h[n], &m).re_inner(&p);
        let rm = dlm[n] - c * (lm[n] - lp[n]) - 2.0 * tangent_mul(grad_h[n], &p).re_inner(&m);
        rp.abs().max(rm.abs())
    });
    let u = Field::from_fn(grid, |n| (du[n] - 2.0 * coeff(n) * u[n]).abs());
    LaplacianReport { l_pm, u }
}

/// `<N, a_3(Phi)> |Phi|^2 = Re(i N Phi, Phi)` in the ambient frame.
pub fn ambient_normal_component(node: &SurfaceNode, phi: &Spinor) -> f64 {
    algebra::clifford_mul(&node.normal, phi)
        .scale(num_complex::Complex64::i())
        .re_inner(phi)
}

/// `phi -> phi*` at a node as a complex 2x2 matrix acting on `Phi`.
pub fn star_restriction_matrix(rotation: &Matrix3<f64>) -> algebra::SpinMatrix {
    use num_complex::Complex64;
    let u = algebra::su2_from_rotation(rotation);
    let s = algebra::SpinMatrix::new(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, -1.0),
    );
    s * u.adjoint()
}
