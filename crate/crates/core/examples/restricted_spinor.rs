//! Restricting a parallel spinor of R^3 to a surface, and the Dirac
//! equations it satisfies there.

use num_complex::Complex64;
use spinorsurf::algebra::{basis_mul, Spinor};
use spinorsurf::charts::{compute_geometry, DerivativeMode};
use spinorsurf::grid::{sup_over, Field};
use spinorsurf::presets::{self, SphereKind};
use spinorsurf::spinor::{dirac, dirac_square_residual, restriction_residual, SpinorFieldGrid};

fn main() -> spinorsurf::Result<()> {
    let ambient = Spinor::from_parts(0.6, 0.0, 0.0, 0.8);
    for (label, chart) in [
        ("sphere", presets::sphere(1.0, SphereKind::Capped { cap: 0.1 }, 64, 64)?),
        ("enneper", presets::enneper(1.0, 64, 64)?),
        ("graph", presets::graph(0.3, 0.2, 64, 64)?),
    ] {
        let geom = compute_geometry(&chart, DerivativeMode::Analytic)?;
        let phi = SpinorFieldGrid::restrict_parallel(&geom, ambient, 0)?;
        let h = geom.mean_curvature();

        // D phi = -H E3 phi and D phi* = H phi*
        let d = dirac(&phi, &geom);
        let want = Field::from_fn(phi.grid(), |n| -(basis_mul(2, &phi.values[n]) * h[n]));
        let r1 = d.values.zip_map(&want, |a, b| (*a - *b).norm());
        let star = phi.star();
        let ds = dirac(&star, &geom);
        let r2 = Field::from_fn(phi.grid(), |n| (ds.values[n] - star.values[n] * Complex64::from(h[n])).norm());

        println!(
            "{label:<8} restriction {:.1e}  D phi {:.1e}  D phi* {:.1e}  D^2 {:.1e}",
            sup_over(&restriction_residual(&phi, &geom), 0, |x| *x),
            sup_over(&r1, 2, |x| *x),
            sup_over(&r2, 2, |x| *x),
            sup_over(&dirac_square_residual(&phi, &geom), 2, |x| *x),
        );
    }
    Ok(())
}
