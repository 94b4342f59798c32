//! Conformal behaviour of the Dirac operator on the flat torus: a random
//! rescaling, and the eigenspinor turned into a solution of `D phi = H phi`.

use spinorsurf::charts::{compute_geometry, DerivativeMode};
use spinorsurf::grid::sup_over;
use spinorsurf::periods::{conformal_covariance, conformal_eigen_residual, torus_eigenspinor};
use spinorsurf::presets;
use spinorsurf::verify::random_factor;

fn main() -> spinorsurf::Result<()> {
    for n in [32, 64, 128] {
        let geom = compute_geometry(&presets::flat_torus(n, n)?, DerivativeMode::Analytic)?;
        let phi = torus_eigenspinor(geom.grid);
        let sigma = random_factor(7, geom.grid);
        let cov = conformal_covariance(&phi, &sigma, &geom)?;
        let eig = conformal_eigen_residual(&phi, 1.0, &geom)?;
        println!(
            "{n:>4}x{n:<4} covariance {:.2e}  eigen {:.2e}",
            sup_over(&cov, 0, |x| *x),
            sup_over(&eig, 0, |x| *x)
        );
    }
    Ok(())
}
