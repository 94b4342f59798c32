//! Integral identities over the whole round sphere, and the height function
//! at its maximum.

use spinorsurf::algebra::Spinor;
use spinorsurf::charts::{compute_geometry, DerivativeMode};
use spinorsurf::periods::{integral_identities, max_principle};
use spinorsurf::presets::{self, SphereKind};

fn main() -> spinorsurf::Result<()> {
    let phi0 = Spinor::from_parts(0.6, 0.0, 0.0, 0.8);
    let geom = compute_geometry(&presets::sphere(1.0, SphereKind::Full, 256, 128)?, DerivativeMode::Analytic)?;
    let r = integral_identities(&geom, &phi0)?;
    println!("area {:.8} (4 pi = {:.8})", r.area, 4.0 * std::f64::consts::PI);
    println!("total curvature {:.8}", r.total_curvature);
    println!("normal component defect {:.2e}", r.a3_defect);
    println!("six defect {:.2e}", r.six_defect);
    println!("min |phi+|^2 {:.2e}, min |phi-|^2 {:.2e}", r.min_plus, r.min_minus);

    let capped = compute_geometry(&presets::sphere(1.0, SphereKind::Capped { cap: 0.1 }, 64, 64)?, DerivativeMode::Analytic)?;
    let m = max_principle(&capped, &phi0);
    println!("at the maximum: |grad f| {:.2e}, det Hess f {:.4}, max G {:.4}", m.grad_norm, m.det_hessian, m.max_gauss);
    Ok(())
}
