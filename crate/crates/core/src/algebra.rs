//! Spin algebra of Euclidean 3-space.
//!
//! The spin representation is fixed once and for all: the unit vectors act
//! by `E_j = -i sigma_j` with the Pauli matrices `sigma_j`. In this
//! representation
//!
//! * `E_j E_k + E_k E_j = -2 delta_jk` and `E_1 E_2 = E_3`,
//! * `i E_3 = sigma_3`, so for the normal `N = e_3` the eigenspaces of
//!   `i N·` are the two coordinate axes of `C^2`,
//! * the quaternionic structure `alpha(c1, c2) = (-conj c2, conj c1)`
//!   commutes with every `E_j` and with every element of `SU(2)`.
//!
//! The hermitian product `(a, b) = a1 conj(b1) + a2 conj(b2)` is complex
//! linear in its first slot.

use std::collections::VecDeque;
use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{Matrix2, Matrix3, Rotation3, UnitQuaternion, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Field;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Accepted deviation of `|N|` from one.
pub const UNIT_TOLERANCE: f64 = 1e-9;

/// Largest rotation angle between neighbouring frames accepted by the lift.
pub const LIFT_ANGLE_LIMIT: f64 = FRAC_PI_2;

/// 2x2 complex matrix; used for Clifford generators and spin lifts.
pub type SpinMatrix = Matrix2<Complex64>;

/// An element of the fiber `C^2` of the spinor bundle.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Spinor {
    pub c1: Complex64,
    pub c2: Complex64,
}

impl Spinor {
    pub const ZERO: Spinor = Spinor { c1: ZERO, c2: ZERO };

    pub const fn new(c1: Complex64, c2: Complex64) -> Self {
        Spinor { c1, c2 }
    }

    pub fn from_parts(re1: f64, im1: f64, re2: f64, im2: f64) -> Self {
        Spinor::new(Complex64::new(re1, im1), Complex64::new(re2, im2))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian product `(self, other)`, linear in `self`.
    pub fn inner(&self, other: &Spinor) -> Complex64 {
        self.c1 * other.c1.conj() + self.c2 * other.c2.conj()
    }

    /// Euclidean scalar product `Re (self, other)`.
    pub fn re_inner(&self, other: &Spinor) -> f64 {
        self.inner(other).re
    }

    pub fn scale(&self, z: Complex64) -> Spinor {
        Spinor::new(self.c1 * z, self.c2 * z)
    }

    pub fn max_abs_diff(&self, other: &Spinor) -> f64 {
        (self.c1 - other.c1).norm().max((self.c2 - other.c2).norm())
    }

    pub fn is_finite(&self) -> bool {
        self.c1.is_finite() && self.c2.is_finite()
    }
}

impl Add for Spinor {
    type Output = Spinor;
    fn add(self, rhs: Spinor) -> Spinor {
        Spinor::new(self.c1 + rhs.c1, self.c2 + rhs.c2)
    }
}

impl AddAssign for Spinor {
    fn add_assign(&mut self, rhs: Spinor) {
        self.c1 += rhs.c1;
        self.c2 += rhs.c2;
    }
}

impl Sub for Spinor {
    type Output = Spinor;
    fn sub(self, rhs: Spinor) -> Spinor {
        Spinor::new(self.c1 - rhs.c1, self.c2 - rhs.c2)
    }
}

impl Neg for Spinor {
    type Output = Spinor;
    fn neg(self) -> Spinor {
        Spinor::new(-self.c1, -self.c2)
    }
}

impl Mul<f64> for Spinor {
    type Output = Spinor;
    fn mul(self, rhs: f64) -> Spinor {
        Spinor::new(self.c1 * rhs, self.c2 * rhs)
    }
}

impl Mul<Complex64> for Spinor {
    type Output = Spinor;
    fn mul(self, rhs: Complex64) -> Spinor {
        self.scale(rhs)
    }
}

impl Mul<Spinor> for SpinMatrix {
    type Output = Spinor;
    fn mul(self, s: Spinor) -> Spinor {
        Spinor::new(
            self[(0, 0)] * s.c1 + self[(0, 1)] * s.c2,
            self[(1, 0)] * s.c1 + self[(1, 1)] * s.c2,
        )
    }
}

/// The three Clifford generators `E_1, E_2, E_3` of the fixed representation.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordRep {
    pub e: [SpinMatrix; 3],
}

impl CliffordRep {
    pub fn standard() -> Self {
        CliffordRep {
            e: [
                SpinMatrix::new(ZERO, -I, -I, ZERO),
                SpinMatrix::new(ZERO, -ONE, ONE, ZERO),
                SpinMatrix::new(-I, ZERO, ZERO, I),
            ],
        }
    }

    /// `v_1 E_1 + v_2 E_2 + v_3 E_3`.
    pub fn vector(&self, v: &Vector3<f64>) -> SpinMatrix {
        self.e[0] * Complex64::from(v.x) + self.e[1] * Complex64::from(v.y) + self.e[2] * Complex64::from(v.z)
    }
}

impl Default for CliffordRep {
    fn default() -> Self {
        Self::standard()
    }
}

/// `e_j · phi` for a basis vector (`j` in `0..3`).
#[inline]
pub fn basis_mul(j: usize, phi: &Spinor) -> Spinor {
    let (a, b) = (phi.c1, phi.c2);
    match j {
        0 => Spinor::new(-I * b, -I * a),
        1 => Spinor::new(-b, a),
        2 => Spinor::new(-I * a, I * b),
        _ => panic!("basis index {j} out of range"),
    }
}

/// Clifford multiplication `v · phi`.
pub fn clifford_mul(v: &Vector3<f64>, phi: &Spinor) -> Spinor {
    let (a, b) = (phi.c1, phi.c2);
    Spinor::new(
        -I * v.z * a + (-I * v.x - v.y) * b,
        (-I * v.x + v.y) * a + I * v.z * b,
    )
}

/// Clifford multiplication by a tangent vector given by its components on
/// the surface frame `(e_1, e_2)`, in frame gauge.
#[inline]
pub fn tangent_mul(x: [f64; 2], phi: &Spinor) -> Spinor {
    clifford_mul(&Vector3::new(x[0], x[1], 0.0), phi)
}

/// Quaternionic structure: conjugate linear, `alpha^2 = -1`.
pub fn alpha(phi: &Spinor) -> Spinor {
    Spinor::new(-phi.c2.conj(), phi.c1.conj())
}

fn check_unit(n: &Vector3<f64>) -> Result<()> {
    let len = n.norm();
    if (len - 1.0).abs() > UNIT_TOLERANCE || !len.is_finite() {
        return Err(Error::NonUnitNormal(len));
    }
    Ok(())
}

/// Splits `phi` into the `+1` and `-1` eigenparts of `i N·`.
pub fn split_pm(phi: &Spinor, n: &Vector3<f64>) -> Result<(Spinor, Spinor)> {
    check_unit(n)?;
    let inphi = clifford_mul(n, phi).scale(I);
    Ok(((*phi + inphi) * 0.5, (*phi - inphi) * 0.5))
}

/// Split along the frame normal `e_3` (frame gauge); no validation needed.
#[inline]
pub fn split_frame(phi: &Spinor) -> (Spinor, Spinor) {
    (Spinor::new(phi.c1, ZERO), Spinor::new(ZERO, phi.c2))
}

/// `phi* = phi+ - i phi-`.
pub fn star_spinor(phi: &Spinor, n: &Vector3<f64>) -> Result<Spinor> {
    let (p, m) = split_pm(phi, n)?;
    Ok(p - m.scale(I))
}

/// Star construction in frame gauge (normal `e_3`).
#[inline]
pub fn star_frame(phi: &Spinor) -> Spinor {
    Spinor::new(phi.c1, -I * phi.c2)
}

/// Unit quaternion `q` mapped to `q_w + q_x E_1 + q_y E_2 + q_z E_3`.
pub fn su2_from_quaternion(q: &UnitQuaternion<f64>) -> SpinMatrix {
    let rep = CliffordRep::standard();
    SpinMatrix::identity() * Complex64::from(q.w)
        + rep.e[0] * Complex64::from(q.i)
        + rep.e[1] * Complex64::from(q.j)
        + rep.e[2] * Complex64::from(q.k)
}

/// One of the two spin lifts of a rotation: `U E_j U* = sum_k R_kj E_k`.
pub fn su2_from_rotation(r: &Matrix3<f64>) -> SpinMatrix {
    let rot = Rotation3::from_matrix_unchecked(*r);
    su2_from_quaternion(&UnitQuaternion::from_rotation_matrix(&rot))
}

/// Rotation angle of `a^T b`.
pub fn relative_angle(a: &Matrix3<f64>, b: &Matrix3<f64>) -> f64 {
    let c = ((a.transpose() * b).trace() - 1.0) * 0.5;
    c.clamp(-1.0, 1.0).acos()
}

/// Largest deviation of `U E_j U*` from `sum_k R_kj E_k` over `j`.
pub fn conjugation_residual(u: &SpinMatrix, r: &Matrix3<f64>) -> f64 {
    let rep = CliffordRep::standard();
    (0..3)
        .map(|j| {
            let lhs = u * rep.e[j] * u.adjoint();
            let rhs = rep.vector(&r.column(j).into_owned());
            (lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Continuous spin lift of a rotation field.
#[derive(Debug, Clone)]
pub struct SpinLift {
    pub lifts: Field<SpinMatrix>,
    /// Sign picked up by the lift across each periodic seam (`-1` when the
    /// frame turns once around the closed direction).
    pub seam: [f64; 2],
}

fn align_sign(reference: &SpinMatrix, u: SpinMatrix) -> SpinMatrix {
    if (reference.adjoint() * u).trace().re < 0.0 {
        -u
    } else {
        u
    }
}

/// Lifts a rotation field to `SU(2)` with signs fixed by breadth-first
/// propagation from `base` over the open (non-wrapping) 4-neighbourhood,
/// neighbours visited in the order `-u, +u, -v, +v`.
pub fn su2_lift_grid(rotations: &Field<Matrix3<f64>>, base: usize) -> Result<SpinLift> {
    let grid = rotations.grid;
    assert!(base < grid.len(), "base node out of range");
    let mut lifts: Vec<Option<SpinMatrix>> = vec![None; grid.len()];
    let mut u0 = su2_from_rotation(&rotations[base]);
    if u0.trace().re < 0.0 {
        u0 = -u0;
    }
    lifts[base] = Some(u0);
    let mut queue = VecDeque::from([base]);
    while let Some(node) = queue.pop_front() {
        let parent = lifts[node].expect("queued nodes are lifted");
        for nb in grid.neighbors_open(node) {
            let angle = relative_angle(&rotations[node], &rotations[nb]);
            if angle >= LIFT_ANGLE_LIMIT {
                return Err(Error::LiftAmbiguity {
                    from: node,
                    to: nb,
                    angle,
                    limit: LIFT_ANGLE_LIMIT,
                });
            }
            if lifts[nb].is_none() {
                lifts[nb] = Some(align_sign(&parent, su2_from_rotation(&rotations[nb])));
                queue.push_back(nb);
            }
        }
    }
    let lifts = Field::from_vec(grid, lifts.into_iter().map(|u| u.expect("grid is connected")).collect());

    let mut seam = [1.0, 1.0];
    let seam_edges: [(bool, Box<dyn Fn(usize) -> (usize, usize)>, usize); 2] = [
        (
            grid.periodic_u,
            Box::new(|j| (grid.index(grid.n_u - 1, j), grid.index(0, j))),
            grid.n_v,
        ),
        (
            grid.periodic_v,
            Box::new(|i| (grid.index(i, grid.n_v - 1), grid.index(i, 0))),
            grid.n_u,
        ),
    ];
    for (axis, (periodic, edge, count)) in seam_edges.iter().enumerate() {
        if !periodic {
            continue;
        }
        let mut sign = None;
        for k in 0..*count {
            let (last, first) = edge(k);
            let angle = relative_angle(&rotations[last], &rotations[first]);
            if angle >= LIFT_ANGLE_LIMIT {
                return Err(Error::LiftAmbiguity {
                    from: last,
                    to: first,
                    angle,
                    limit: LIFT_ANGLE_LIMIT,
                });
            }
            let s = if (lifts[last].adjoint() * lifts[first]).trace().re < 0.0 {
                -1.0
            } else {
                1.0
            };
            match sign {
                None => sign = Some(s),
                Some(prev) if prev != s => {
                    return Err(Error::LiftAmbiguity {
                        from: last,
                        to: first,
                        angle,
                        limit: LIFT_ANGLE_LIMIT,
                    })
                }
                _ => {}
            }
        }
        seam[axis] = sign.unwrap_or(1.0);
    }
    Ok(SpinLift { lifts, seam })
}
