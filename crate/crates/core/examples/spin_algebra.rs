//! The fixed spin representation: Clifford relations, the quaternionic
//! structure and the spin lift of a rotation.

use nalgebra::{Rotation3, Vector3};
use num_complex::Complex64;
use spinorsurf::algebra::{alpha, clifford_mul, conjugation_residual, split_pm, star_spinor, su2_from_rotation, CliffordRep, SpinMatrix, Spinor};

fn main() -> spinorsurf::Result<()> {
    let rep = CliffordRep::standard();
    let id = SpinMatrix::identity();
    for j in 0..3 {
        for k in 0..3 {
            let anti = rep.e[j] * rep.e[k] + rep.e[k] * rep.e[j];
            let want = if j == k { -id * Complex64::from(2.0) } else { SpinMatrix::zeros() };
            assert!((anti - want).norm() < 1e-15);
        }
    }
    println!("E1 E2 - E3 = {:.1e}", (rep.e[0] * rep.e[1] - rep.e[2]).norm());

    let phi = Spinor::from_parts(0.3, -0.4, 0.5, 0.7);
    let v = Vector3::new(0.2, -1.0, 0.4);
    let drift = (alpha(&clifford_mul(&v, &phi)) - clifford_mul(&v, &alpha(&phi))).norm();
    println!("alpha(v phi) - v alpha(phi) = {drift:.1e}");
    println!("alpha^2 phi + phi = {:.1e}", (alpha(&alpha(&phi)) + phi).norm());

    let n = Vector3::new(1.0, 2.0, 2.0) / 3.0;
    let (plus, minus) = split_pm(&phi, &n)?;
    println!("|phi+|^2 = {:.4}, |phi-|^2 = {:.4}, (phi+, phi-) = {:.1e}", plus.norm_sqr(), minus.norm_sqr(), plus.inner(&minus).norm());
    let star = star_spinor(&phi, &n)?;
    println!("|phi*| = {:.4} = |phi| = {:.4}", star.norm(), phi.norm());

    let r = Rotation3::from_axis_angle(&Vector3::z_axis(), 0.9) * Rotation3::from_axis_angle(&Vector3::x_axis(), -0.4);
    let u = su2_from_rotation(r.matrix());
    println!("U E_j U* - R E_j = {:.1e}", conjugation_residual(&u, r.matrix()));
    let ru = clifford_mul(&(r * v), &(u * phi)) - u * clifford_mul(&v, &phi);
    println!("(R v)(U phi) - U(v phi) = {:.1e}", ru.norm());
    Ok(())
}
