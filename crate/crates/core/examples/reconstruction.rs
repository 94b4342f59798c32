//! From `phi*` back to the surface: period forms, their Hodge
//! types and closedness, path integration and rigid alignment.

use spinorsurf::algebra::Spinor;
use spinorsurf::charts::{compute_geometry, DerivativeMode};
use spinorsurf::periods::{closedness_report, diameter, hodge_report, metric_defect, period_forms, reconstruct, rigid_align};
use spinorsurf::grid::sup_over;
use spinorsurf::presets::{self, SphereKind};
use spinorsurf::spinor::SpinorFieldGrid;

fn main() -> spinorsurf::Result<()> {
    for (label, chart) in [
        ("enneper", presets::enneper(1.0, 65, 65)?),
        ("sphere_patch", presets::sphere(1.0, SphereKind::Patch, 65, 65)?),
        ("graph", presets::graph(0.3, 0.2, 65, 65)?),
    ] {
        let geom = compute_geometry(&chart, DerivativeMode::Analytic)?;
        let phi = SpinorFieldGrid::restrict_parallel(&geom, Spinor::from_parts(1.0, 0.0, 0.0, 0.0), 0)?.star();
        let forms = period_forms(&phi);
        let hodge = hodge_report(&forms);
        let closed = closedness_report(&forms, &phi, &geom);
        println!(
            "{label}: star xi + i xi {:.1e}, dw {:.1e}, d omega {:.1e}, d mu source {:.1e}",
            hodge.xi,
            closed.dw.sup(),
            closed.domega.sup(),
            closed.dmu.sup()
        );

        let rec = reconstruct(&forms, &geom, chart.grid.len() / 2)?;
        let fit = rigid_align(&rec.immersion, &chart);
        let metric = metric_defect(&rec.immersion, &geom)?;
        println!(
            "  rebuilt: RMS {:.2e} of diameter {:.3}, loop {:.1e}, metric {:.1e}",
            fit.rms,
            diameter(&chart.positions()),
            rec.loop_residual,
            sup_over(&metric, 2, |x| *x)
        );
    }
    Ok(())
}
